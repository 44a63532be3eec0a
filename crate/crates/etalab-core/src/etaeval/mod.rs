//! Derivatives of eta and zeta at a point: an Euler-Maclaurin production
//! path, an independent accelerated direct path used as a cross-validation
//! oracle, conversion through the functional relation, and a two-layer
//! (memory + disk) cache.

mod cache;
mod direct;
mod euler_maclaurin;
pub(crate) mod series;

pub use cache::{CacheKey, DiskCache, CACHE_DIR_ENV};

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::ball::{adaptive_generic, AccuracyTarget, BallComplex, RBall, Real};
use crate::error::{Error, Result};

/// Largest supported derivative order.
pub const ORDER_CAP: usize = 256;

/// Arguments closer to 1 than this are routed to the direct path (the
/// Euler-Maclaurin series divides by a + x - 1).
const POLE_SWITCH_LOG2: f64 = -10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Eta,
    Zeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    EulerMaclaurin,
    DirectAccelerated,
    ViaRelation,
}

/// Derivatives f^(0..=K)(a) certified to a stated decimal accuracy.
#[derive(Clone, Debug)]
pub struct DerivVector {
    pub point: BallComplex,
    pub values: Vec<BallComplex>,
    pub function: FunctionKind,
    pub method: EvalMethod,
    pub digits: u32,
}

impl DerivVector {
    /// Rejects construction unless every value certifies `digits` of
    /// relative accuracy.
    pub fn new(
        point: BallComplex,
        values: Vec<BallComplex>,
        function: FunctionKind,
        method: EvalMethod,
        digits: u32,
    ) -> Result<DerivVector> {
        if let Some(bad) = values.iter().position(|v| !v.certifies(digits)) {
            return Err(Error::AccuracyUnreachable {
                best: Some(Box::new(values[bad].clone())),
            });
        }
        Ok(DerivVector { point, values, function, method, digits })
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, k: usize) -> Result<&BallComplex> {
        self.values
            .get(k)
            .ok_or(Error::MissingDerivative(k, self.order()))
    }
}

/// Taylor series of f(center + x), coefficients c_k (so f^(k) = k! c_k).
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    pub center: BallComplex,
    pub coeffs: Vec<BallComplex>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// k-th derivative value k! * c_k.
    pub fn derivative(&self, k: usize) -> Result<BallComplex> {
        let c = self
            .coeffs
            .get(k)
            .ok_or(Error::MissingDerivative(k, self.order()))?;
        Ok(c.mul_rball(&RBall::exact(Real::from_bigint(factorial(k)))))
    }
}

fn factorial(k: usize) -> num_bigint::BigInt {
    let mut f = num_bigint::BigInt::from(1);
    for i in 2..=k {
        f *= i as i64;
    }
    f
}

fn check_order(order: usize) -> Result<()> {
    if order > ORDER_CAP {
        return Err(Error::OrderCapExceeded(order, ORDER_CAP));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Taylor series of zeta at `a` to the given order, certified to the target.
pub fn zeta_series_em(
    a: &BallComplex,
    order: usize,
    target: &AccuracyTarget,
) -> Result<TruncatedSeries> {
    check_order(order)?;
    let coeffs = adaptive_generic(
        |prec| euler_maclaurin::zeta_series_at(&a.with_prec(prec), order, prec),
        |coeffs: &Vec<BallComplex>| coeffs.iter().all(|c| c.certifies(target.digits)),
        target,
    )?;
    Ok(TruncatedSeries { center: a.clone(), coeffs })
}

/// Eta derivative values at `a` by the production path: Euler-Maclaurin zeta
/// series times the closed-form series of 1 - 2^(1-s), Leibniz product. Near
/// the (removable) point a = 1 the direct path takes over.
pub fn eta_derivs(a: &BallComplex, order: usize, target: &AccuracyTarget) -> Result<DerivVector> {
    check_order(order)?;
    if prefers_direct(a) {
        return eta_derivs_direct(a, order, target);
    }
    let values = adaptive_generic(
        |prec| eta_values_em_at(&a.with_prec(prec), order, prec),
        |vals: &Vec<BallComplex>| vals.iter().all(|v| v.certifies(target.digits)),
        target,
    )?;
    DerivVector::new(
        a.clone(),
        values,
        FunctionKind::Eta,
        EvalMethod::EulerMaclaurin,
        target.digits,
    )
}

/// Eta derivatives by the accelerated alternating series (Re(a) > 0 only);
/// the independent oracle.
pub fn eta_derivs_direct(
    a: &BallComplex,
    order: usize,
    target: &AccuracyTarget,
) -> Result<DerivVector> {
    check_order(order)?;
    let values = adaptive_generic(
        |prec| direct::eta_derivs_direct_at(&a.with_prec(prec), order, prec),
        |vals: &Vec<BallComplex>| vals.iter().all(|v| v.certifies(target.digits)),
        target,
    )?;
    DerivVector::new(
        a.clone(),
        values,
        FunctionKind::Eta,
        EvalMethod::DirectAccelerated,
        target.digits,
    )
}

fn prefers_direct(a: &BallComplex) -> bool {
    a.sub(&BallComplex::one(a.prec())).abs_up().log2_approx() < POLE_SWITCH_LOG2
}

/// The factor f(a) = 1 - 2^(1-a) and its derivative ladder
/// f^(j)(a) = -2^(1-a) (-ln 2)^j for j >= 1.
fn relation_factor(a: &BallComplex, order: usize, wp: u32) -> Result<Vec<BallComplex>> {
    let ln2 = crate::ball::kernels::ln_real(&Real::from_i64(2), wp)?;
    let one = BallComplex::one(wp);
    let phi = one.sub(a).mul_rball(&ln2).exp()?; // 2^(1-a)
    let mut out = Vec::with_capacity(order + 1) as Vec<BallComplex>;
    out.push(one.sub(&phi));
    let mut w = phi.neg();
    for _ in 1..=order {
        w = w.mul_rball(&ln2.neg());
        out.push(w.clone());
    }
    Ok(out)
}

fn eta_values_em_at(a: &BallComplex, order: usize, wp: u32) -> Result<Vec<BallComplex>> {
    let zeta = euler_maclaurin::zeta_series_at(a, order, wp)?;
    // Series of f(a + x): f^(k)/k!.
    let f_derivs = relation_factor(a, order, wp)?;
    let mut f_series = Vec::with_capacity(order + 1);
    let mut fact = num_bigint::BigInt::from(1);
    for (k, fd) in f_derivs.iter().enumerate() {
        if k > 1 {
            fact *= k as i64;
        }
        let inv = RBall::from_i64(1)
            .div(&RBall::exact(Real::from_bigint(fact.clone())), wp)
            .expect("factorial nonzero");
        f_series.push(fd.mul_rball(&inv));
    }
    let eta_series = series::mul_trunc(&f_series, &zeta, wp);
    let mut out = Vec::with_capacity(order + 1);
    let mut fact = num_bigint::BigInt::from(1);
    for (k, c) in eta_series.into_iter().enumerate() {
        if k > 1 {
            fact *= k as i64;
        }
        out.push(c.mul_rball(&RBall::exact(Real::from_bigint(fact.clone()))));
    }
    Ok(out)
}

/// Zeta derivatives from eta derivatives by Leibniz inversion through
/// eta = (1 - 2^(1-s)) zeta.
pub fn zeta_from_eta(v: &DerivVector) -> Result<DerivVector> {
    if v.function != FunctionKind::Eta {
        return Err(Error::UsageError("zeta_from_eta needs an eta vector".into()));
    }
    let order = v.order();
    let wp = v.values.iter().map(|b| b.prec()).max().unwrap_or(64) + 16;
    let a = v.point.with_prec(wp);
    let f = relation_factor(&a, order, wp)?;
    if f[0].contains_zero() {
        return Err(Error::FactorVanishes);
    }
    let mut zeta: Vec<BallComplex> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        // Binomial row C(k, j).
        let mut num = v.values[k].clone();
        let mut binom = num_bigint::BigInt::from(1);
        for j in 1..=k {
            binom = &binom * ((k - j + 1) as i64) / (j as i64);
            let term = f[j]
                .mul(&zeta[k - j])
                .mul_rball(&RBall::exact(Real::from_bigint(binom.clone())));
            num = num.sub(&term);
        }
        zeta.push(num.div(&f[0])?);
    }
    let worst = zeta
        .iter()
        .map(|b| b.accuracy_digits())
        .fold(f64::INFINITY, f64::min);
    let digits = worst.floor().min(v.digits as f64);
    if digits < 1.0 {
        return Err(Error::AccuracyUnreachable { best: Some(Box::new(zeta[0].clone())) });
    }
    DerivVector::new(
        v.point.clone(),
        zeta,
        FunctionKind::Zeta,
        EvalMethod::ViaRelation,
        digits as u32,
    )
}

// ---------------------------------------------------------------------------
// caching evaluator
// ---------------------------------------------------------------------------

/// Shared derivative provider: memory layer in front of an optional disk
/// cache. Reads never block other reads for long; distinct points evaluate
/// independently.
pub struct EtaEvaluator {
    disk: Option<DiskCache>,
    mem: Mutex<HashMap<CacheKey, Arc<DerivVector>>>,
}

impl EtaEvaluator {
    pub fn new(disk: Option<DiskCache>) -> EtaEvaluator {
        EtaEvaluator { disk, mem: Mutex::new(HashMap::new()) }
    }

    pub fn in_memory() -> EtaEvaluator {
        EtaEvaluator::new(None)
    }

    pub fn with_env_disk() -> Result<EtaEvaluator> {
        Ok(EtaEvaluator::new(Some(DiskCache::new(DiskCache::resolve_dir())?)))
    }

    pub fn disk(&self) -> Option<&DiskCache> {
        self.disk.as_ref()
    }

    fn lookup(&self, key: &CacheKey, a: &BallComplex) -> Option<Arc<DerivVector>> {
        if let Some(hit) = self.mem.lock().unwrap().get(key) {
            if hit.point.contains(a) {
                return Some(hit.clone());
            }
        }
        if let Some(disk) = &self.disk {
            if let Ok(Some(v)) = disk.get(key) {
                if v.point.contains(a) {
                    let v = Arc::new(v);
                    self.mem.lock().unwrap().insert(key.clone(), v.clone());
                    return Some(v);
                }
            }
        }
        None
    }

    fn store(&self, key: CacheKey, v: DerivVector) -> Arc<DerivVector> {
        if let Some(disk) = &self.disk {
            let _ = disk.put(&key, &v);
        }
        let v = Arc::new(v);
        self.mem.lock().unwrap().insert(key, v.clone());
        v
    }

    fn cached(
        &self,
        a: &BallComplex,
        order: usize,
        digits: u32,
        function: FunctionKind,
        method: EvalMethod,
        compute: impl FnOnce() -> Result<DerivVector>,
    ) -> Result<Arc<DerivVector>> {
        let key = CacheKey {
            point: a.midpoint_key(),
            function,
            method,
            order,
            digits,
        };
        if let Some(hit) = self.lookup(&key, a) {
            return Ok(hit);
        }
        Ok(self.store(key, compute()?))
    }

    /// Production-path eta derivatives, cached.
    pub fn eta(&self, a: &BallComplex, order: usize, digits: u32) -> Result<Arc<DerivVector>> {
        let target = AccuracyTarget::new(digits);
        let method = if prefers_direct(a) {
            EvalMethod::DirectAccelerated
        } else {
            EvalMethod::EulerMaclaurin
        };
        self.cached(a, order, digits, FunctionKind::Eta, method, || {
            eta_derivs(a, order, &target)
        })
    }

    /// Oracle-path eta derivatives, cached.
    pub fn eta_direct(
        &self,
        a: &BallComplex,
        order: usize,
        digits: u32,
    ) -> Result<Arc<DerivVector>> {
        let target = AccuracyTarget::new(digits);
        self.cached(
            a,
            order,
            digits,
            FunctionKind::Eta,
            EvalMethod::DirectAccelerated,
            || eta_derivs_direct(a, order, &target),
        )
    }

    /// Zeta derivatives through the functional relation, cached.
    pub fn zeta(&self, a: &BallComplex, order: usize, digits: u32) -> Result<Arc<DerivVector>> {
        self.cached(
            a,
            order,
            digits,
            FunctionKind::Zeta,
            EvalMethod::ViaRelation,
            || {
                // Ask the eta layer for extra headroom; the relation divides
                // by f(a) which can shed a few digits.
                let eta = self.eta(a, order, digits + 8)?;
                let z = zeta_from_eta(&eta)?;
                if z.digits < digits {
                    return Err(Error::AccuracyUnreachable {
                        best: Some(Box::new(z.values[0].clone())),
                    });
                }
                DerivVector::new(z.point, z.values, z.function, z.method, digits)
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::ball_from_decimal;

    const GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";

    fn target(d: u32) -> AccuracyTarget {
        AccuracyTarget::new(d)
    }

    #[test]
    fn zeta_series_classic_values() {
        // zeta(2) = pi^2/6
        let a = BallComplex::from_i64(2, 0, 64);
        let s = zeta_series_em(&a, 0, &target(40)).unwrap();
        let pi = BallComplex::pi(256);
        let want = pi.mul(&pi).div_i64(6);
        assert!(s.coeffs[0].intersects(&want));
        assert!(s.coeffs[0].certifies(40));

        // zeta(-1) = -1/12
        let a = BallComplex::from_i64(-1, 0, 64);
        let s = zeta_series_em(&a, 0, &target(30)).unwrap();
        let want = crate::ball::ball_from_ratio(-1, 12, 256);
        assert!(s.coeffs[0].intersects(&want));
    }

    #[test]
    fn zeta_series_rejects_pole() {
        let a = BallComplex::one(64);
        match zeta_series_em(&a, 0, &target(10)) {
            Err(Error::PoleProximity) => {}
            other => panic!("expected PoleProximity, got {other:?}"),
        }
    }

    #[test]
    fn eta_classic_values() {
        // eta(0) = 1/2 (Euler-Maclaurin path, Re <= 0)
        let a = BallComplex::zero(64);
        let v = eta_derivs(&a, 0, &target(30)).unwrap();
        assert_eq!(v.method, EvalMethod::EulerMaclaurin);
        assert!(v.values[0].intersects(&crate::ball::ball_from_ratio(1, 2, 128)));

        // eta(1) = ln 2 via the near-pole switch to the direct path
        let a = BallComplex::one(64);
        let v = eta_derivs(&a, 1, &target(30)).unwrap();
        assert_eq!(v.method, EvalMethod::DirectAccelerated);
        assert!(v.values[0].intersects(&BallComplex::ln2(160)));

        // eta'(1) = gamma ln2 - ln^2(2)/2
        let gamma = ball_from_decimal(GAMMA_50, "0", 192);
        let ln2 = BallComplex::ln2(192);
        let want = gamma.mul(&ln2).sub(&ln2.mul(&ln2).mul_2exp(-1));
        assert!(
            v.values[1].intersects(&want),
            "eta'(1) = {} vs {}",
            v.values[1].to_display(),
            want.to_display()
        );
    }

    #[test]
    fn em_and_direct_paths_agree_at_complex_point() {
        let a = ball_from_decimal("0.5", "7", 128);
        let em = eta_derivs(&a, 11, &target(30)).unwrap();
        let direct = eta_derivs_direct(&a, 11, &target(30)).unwrap();
        for k in 0..=11 {
            assert!(
                em.values[k].intersects(&direct.values[k]),
                "order {k}: {} vs {}",
                em.values[k].to_display(),
                direct.values[k].to_display()
            );
        }
    }

    #[test]
    fn relation_round_trip_and_zeta_value() {
        // zeta(2) through eta and the relation
        let a = BallComplex::from_i64(2, 0, 64);
        let v = eta_derivs(&a, 0, &target(30)).unwrap();
        let z = zeta_from_eta(&v).unwrap();
        let pi = BallComplex::pi(256);
        let want = pi.mul(&pi).div_i64(6);
        assert!(z.values[0].intersects(&want));

        // and at a complex point against the zeta series directly
        let a = ball_from_decimal("0.4", "17", 160);
        let v = eta_derivs(&a, 10, &target(30)).unwrap();
        let z = zeta_from_eta(&v).unwrap();
        let s = zeta_series_em(&a, 10, &target(30)).unwrap();
        for k in 0..=10 {
            assert!(z.values[k].intersects(&s.derivative(k).unwrap()), "order {k}");
        }
    }

    #[test]
    fn factor_vanishes_at_forced_zero() {
        // a = 1 + 2 pi i / ln 2 makes 1 - 2^(1-a) vanish; a point ball wide
        // enough to cover that zero must be refused. (Eta itself vanishes
        // there, so the vector is hand-built for the error path.)
        let prec = 192;
        let two_pi = BallComplex::pi(prec).mul_2exp(1);
        let t = two_pi.div(&BallComplex::ln2(prec)).unwrap();
        let i = BallComplex::from_i64(0, 1, prec);
        let a = BallComplex::one(prec)
            .add(&t.mul(&i))
            .add_rad(crate::ball::Mag::pow2(-60));
        let tiny = BallComplex::from_i64(1, 0, prec).mul_2exp(-100);
        let v = DerivVector::new(
            a,
            vec![tiny],
            FunctionKind::Eta,
            EvalMethod::DirectAccelerated,
            10,
        )
        .unwrap();
        match zeta_from_eta(&v) {
            Err(Error::FactorVanishes) => {}
            other => panic!("expected FactorVanishes, got {other:?}"),
        }
    }

    #[test]
    fn direct_path_rejects_left_half_plane() {
        let a = BallComplex::from_i64(-1, 3, 64);
        match eta_derivs_direct(&a, 0, &target(10)) {
            Err(Error::DomainError(_)) => {}
            other => panic!("expected DomainError, got {other:?}"),
        }
    }

    #[test]
    fn evaluator_caches_on_disk() {
        let dir = std::env::temp_dir().join(format!("etalab-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let ev = EtaEvaluator::new(Some(DiskCache::new(dir.clone()).unwrap()));
        let a = ball_from_decimal("2", "1", 96);
        let v1 = ev.eta(&a, 3, 20).unwrap();
        let (count, _) = ev.disk().unwrap().info().unwrap();
        assert_eq!(count, 1);
        // Fresh evaluator, same dir: must hit the disk entry.
        let ev2 = EtaEvaluator::new(Some(DiskCache::new(dir.clone()).unwrap()));
        let v2 = ev2.eta(&a, 3, 20).unwrap();
        for k in 0..=3 {
            assert!(v1.values[k].intersects(&v2.values[k]));
        }
        // Corrupt the file: next read quarantines and recomputes.
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.extension().and_then(|e| e.to_str()) == Some("json") {
                let mut data = std::fs::read_to_string(&p).unwrap();
                data.truncate(data.len() / 2);
                std::fs::write(&p, data).unwrap();
            }
        }
        let ev3 = EtaEvaluator::new(Some(DiskCache::new(dir.clone()).unwrap()));
        let v3 = ev3.eta(&a, 3, 20).unwrap();
        assert!(v3.values[0].intersects(&v1.values[0]));
        let quarantined = std::fs::read_dir(&dir)
            .unwrap()
            .filter(|e| {
                e.as_ref().unwrap().path().extension().and_then(|x| x.to_str())
                    == Some("corrupt")
            })
            .count();
        assert_eq!(quarantined, 1);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn order_cap_enforced() {
        let a = BallComplex::from_i64(2, 0, 64);
        match eta_derivs(&a, ORDER_CAP + 1, &target(10)) {
            Err(Error::OrderCapExceeded(_, _)) => {}
            other => panic!("expected OrderCapExceeded, got {other:?}"),
        }
    }
}
