use etalab_core::{AccuracyTarget, BallComplex};

fn main() {
    let a = BallComplex::parse("0.4", "17", 8192).unwrap();
    for (order, digits) in [(58usize, 30u32), (98, 40), (98, 200), (98, 600)] {
        let t0 = std::time::Instant::now();
        let v = etalab_core::etaeval::eta_derivs(&a, order, &AccuracyTarget::new(digits)).unwrap();
        eprintln!(
            "K={order} digits={digits}: {:?}, |top| ~1e{:.0}, acc {:.1} digits",
            t0.elapsed(),
            v.values[order].abs_up().log2_approx() / 3.3219,
            v.values[order].accuracy_digits()
        );
    }
}
