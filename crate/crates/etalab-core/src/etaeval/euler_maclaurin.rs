//! Euler-Maclaurin evaluation of the zeta Taylor series at a point, carried
//! out in truncated power-series arithmetic: partial Dirichlet sum, pole and
//! half terms, Bernoulli correction terms, and a rigorous coefficient-wise
//! remainder bound folded into the radii.

use crate::ball::{BallComplex, Mag, RBall, Real};
use crate::error::{Error, Result};

use super::series;

/// Smallest-prime-factor powers: per-integer scalar n^(-a) and ln n, built
/// multiplicatively so only primes pay for exp/ln kernels.
struct PowTable {
    lns: Vec<RBall>,
    pows: Vec<BallComplex>,
}

impl PowTable {
    fn build(a: &BallComplex, m_cut: u64, wp: u32) -> Result<PowTable> {
        let m = m_cut as usize;
        let mut spf = vec![0usize; m.max(2)];
        for i in 2..m {
            if spf[i] == 0 {
                let mut j = i;
                while j < m {
                    if spf[j] == 0 {
                        spf[j] = i;
                    }
                    j += i;
                }
            }
        }
        let neg_a = a.neg();
        let mut lns: Vec<RBall> = vec![RBall::zero(); m.max(2)];
        let mut pows: Vec<BallComplex> = vec![BallComplex::one(wp); m.max(2)];
        for n in 2..m {
            let p = spf[n];
            if p == n {
                let ln = crate::ball::kernels::ln_real(&Real::from_i64(n as i64), wp)?;
                let z = neg_a.mul_rball(&ln).exp()?;
                lns[n] = ln;
                pows[n] = z;
            } else {
                let q = n / p;
                lns[n] = lns[p].add(&lns[q], wp);
                pows[n] = pows[p].mul(&pows[q]);
            }
        }
        Ok(PowTable { lns, pows })
    }
}

/// ln n as a ball for a single integer.
pub(crate) fn ln_int(n: u64, wp: u32) -> Result<RBall> {
    crate::ball::kernels::ln_real(&Real::from_i64(n as i64), wp)
}

/// Series of n^(-a-x): scalar * sum_k (-ln n)^k / k! x^k, truncated.
fn pow_series(scalar: &BallComplex, ln_n: &RBall, order: usize) -> Vec<BallComplex> {
    let mut out = Vec::with_capacity(order + 1);
    let mut w = scalar.clone();
    out.push(w.clone());
    let neg_ln = ln_n.neg();
    for k in 1..=order {
        w = w.mul_rball(&neg_ln).div_i64(k as i64);
        out.push(w.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// parameter planning (f64 log-domain; the rigorous bound comes later)
// ---------------------------------------------------------------------------

fn lg_factorial(n: usize) -> f64 {
    // Stirling is fine at planning accuracy.
    if n < 2 {
        return 0.0;
    }
    let x = n as f64;
    (x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()) / std::f64::consts::LN_2
}

fn lg_binomial(n: usize, k: usize) -> f64 {
    lg_factorial(n) - lg_factorial(k) - lg_factorial(n - k)
}

fn plan_bound_lg(m: f64, b: usize, k: usize, sigma: f64, s_abs: f64) -> f64 {
    let two_b1 = 2 * b + 1;
    let u = sigma + 2.0 * b as f64;
    if u <= 1.0 {
        return f64::INFINITY;
    }
    let lg_m = m.log2();
    let lg_ln_m = m.ln().max(1.0).log2();
    let lg_i = |c: usize| -> f64 { -u * lg_m + c as f64 * lg_ln_m - lg_factorial(c) - u.log2() };
    let lg_e0: f64 = (0..two_b1).map(|i| (s_abs + i as f64).log2()).sum();
    let jm = k.min(two_b1);
    let lg_ejm = lg_binomial(two_b1, jm) + (two_b1 - jm) as f64 * (s_abs + 2.0 * b as f64).log2();
    let t1 = lg_e0 + lg_i(k);
    let t2 = lg_ejm + lg_i(k - jm);
    2.0 - two_b1 as f64 * (2.0 * std::f64::consts::PI).log2()
        + t1.max(t2)
        + ((k + 2) as f64).log2()
}

/// Choose the Dirichlet cutoff M and Bernoulli term count B for a target of
/// roughly 2^-(wp+12) absolute remainder per coefficient.
fn plan_em(sigma_low: f64, s_abs: f64, order: usize, wp: u32) -> (u64, usize) {
    let target = -((wp + 12) as f64);
    let mut best: Option<(u64, usize, f64)> = None;
    let mut b = 4usize;
    while b <= (wp as usize + 64) * 2 {
        if sigma_low + 2.0 * b as f64 > 2.0 {
            // Binary search the minimal M for this B.
            let check = |m: f64| -> bool {
                let worst = [0, order / 2, order]
                    .iter()
                    .map(|&k| plan_bound_lg(m, b, k, sigma_low, s_abs))
                    .fold(f64::NEG_INFINITY, f64::max);
                worst <= target
            };
            let m_lo = (order as f64 + 2.0).max(16.0);
            let mut hi = m_lo.max(s_abs / 4.0 + 16.0);
            let mut found = None;
            for _ in 0..40 {
                if check(hi) {
                    found = Some(hi);
                    break;
                }
                hi *= 2.0;
                if hi > 1e9 {
                    break;
                }
            }
            if let Some(mut hi) = found {
                let mut lo = m_lo;
                for _ in 0..40 {
                    let mid = (lo + hi) / 2.0;
                    if check(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let m = (hi * 1.05) as u64 + 8;
                // Bernoulli terms are not free: the exact-rational ladder costs
                // roughly quadratic work in B.
                let cost = m as f64 * (order as f64 + 30.0)
                    + 3.0 * b as f64 * order as f64
                    + 0.1 * (b * b) as f64;
                if best.is_none() || cost < best.unwrap().2 {
                    best = Some((m, b, cost));
                }
            }
        }
        b = (b * 4 / 3).max(b + 2);
    }
    let (m, b, _) = best.expect("no feasible Euler-Maclaurin parameters");
    (m, b)
}

// ---------------------------------------------------------------------------
// rigorous remainder
// ---------------------------------------------------------------------------

fn mag_pow2_f64_up(lg: f64) -> Mag {
    Mag::pow2(lg.ceil() as i64 + 1)
}

/// Coefficient-wise remainder bounds R_k for the Euler-Maclaurin tail after
/// B Bernoulli terms at cutoff M, for the series at s = a + x:
///
///   |R_k| <= 4 (2pi)^-(2B+1) * sum_j E_j * I_{k-j}
///
/// where E_j majorizes the coefficients of the rising factorial
/// (s+x)(s+x+1)...(s+x+2B) and I_c = integral_M^inf (ln t)^c/c! t^(-u-1) dt
/// with u = Re(s) + 2B, evaluated by its exact finite closed form.
fn remainder_bounds(a: &BallComplex, m_cut: u64, n_bern: usize, order: usize) -> Vec<Mag> {
    let two_b1 = 2 * n_bern + 1;
    let s_abs = a.abs_up();
    let jmax = order.min(two_b1);

    let mut e = vec![Mag::ZERO; jmax + 1];
    e[0] = Mag::from_u64(1);
    for i in 0..two_b1 {
        let c = s_abs.add_up(&Mag::from_u64(i as u64));
        for j in (0..=jmax).rev() {
            let lower = if j > 0 { e[j - 1] } else { Mag::ZERO };
            e[j] = e[j].mul_up(&c).add_up(&lower);
        }
    }

    let sigma_low = a.re().to_f64_approx() - a.rad().to_f64_up() - 1e-9;
    let u = sigma_low + 2.0 * n_bern as f64;
    assert!(u > 1.0, "Bernoulli term count too small for this argument");
    let inv_u = Mag::from_f64_up(1.0 / u * (1.0 + 1e-12));
    let ln_m = Mag::from_f64_up((m_cut as f64).ln() * (1.0 + 1e-12));

    // W_c = (W_{c-1} + (ln M)^c / c!) / u, W_0 = 1/u; I_c = M^-u W_c.
    let mut w = Vec::with_capacity(order + 1);
    w.push(inv_u);
    let mut lnm_pow = Mag::from_u64(1); // (ln M)^c / c!
    for c in 1..=order {
        let c_low = Mag::from_parts(c as f64 * (1.0 - 1e-12), 0);
        lnm_pow = lnm_pow.mul_up(&ln_m).div_up(&c_low);
        let prev = w[c - 1];
        w.push(prev.add_up(&lnm_pow).mul_up(&inv_u));
    }
    let m_pow = mag_pow2_f64_up(-u * (m_cut as f64).log2());
    let pref = mag_pow2_f64_up(2.0 - two_b1 as f64 * (2.0 * std::f64::consts::PI).log2());

    (0..=order)
        .map(|k| {
            let mut acc = Mag::ZERO;
            for j in 0..=k.min(jmax) {
                acc = acc.add_up(&e[j].mul_up(&w[k - j]));
            }
            pref.mul_up(&acc).mul_up(&m_pow)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// the evaluator
// ---------------------------------------------------------------------------

/// Taylor coefficients of zeta(a + x) to the given order at working
/// precision `wp`. The ball of `a` must exclude 1.
pub(crate) fn zeta_series_at(a: &BallComplex, order: usize, wp: u32) -> Result<Vec<BallComplex>> {
    let alpha = a.sub(&BallComplex::one(wp)); // a - 1
    if alpha.contains_zero() {
        return Err(Error::PoleProximity);
    }
    let sigma_low = a.re().to_f64_approx() - a.rad().to_f64_up() - 1e-9;
    let s_abs = a.abs_up().to_f64_up().min(1e12);
    let (m_cut, n_bern) = plan_em(sigma_low, s_abs, order, wp);

    let a = &a.with_prec(wp);
    let table = PowTable::build(a, m_cut, wp)?;

    // Partial sum over n < M.
    let mut coeffs = series::zero_series(order, wp);
    coeffs[0] = BallComplex::one(wp);
    for n in 2..m_cut as usize {
        let term = pow_series(&table.pows[n], &table.lns[n], order);
        series::add_assign(&mut coeffs, &term);
    }

    // M^(-a-x) as a series; the pole, half, and Bernoulli terms all hang off it.
    let ln_m = ln_int(m_cut, wp)?;
    let m_pow_scalar = a.neg().mul_rball(&ln_m).exp()?;
    let m_series = pow_series(&m_pow_scalar, &ln_m, order);

    // Pole term M^(1-a-x) / (a + x - 1): scale by M, divide by (alpha + x).
    let m_big = BallComplex::from_real(Real::from_i64(m_cut as i64), wp);
    let pole_num = series::scale(&m_series, &m_big);
    let pole = series::div_linear(&pole_num, &alpha)?;
    series::add_assign(&mut coeffs, &pole);

    // Half term M^(-a-x) / 2.
    let half: Vec<BallComplex> = m_series.iter().map(|c| c.mul_2exp(-1)).collect();
    series::add_assign(&mut coeffs, &half);

    // Bernoulli terms: sum_r B_{2r}/(2r)! M^(1-2r) * (a+x)_(2r-1) * M^(-a-x).
    let mut rising = series::zero_series(order, wp); // (a+x)_(2r-1), truncated
    rising[0] = a.clone();
    if order >= 1 {
        rising[1] = BallComplex::one(wp);
    }
    let m_sq = (m_cut * m_cut) as i64;
    // Running value of M^(1-2r) / (2r)!.
    let mut inv_fact_m = RBall::from_i64(m_cut as i64);
    let mut acc = series::zero_series(order, wp);
    for r in 1..=n_bern {
        inv_fact_m = inv_fact_m
            .div_i64((2 * r - 1) as i64, wp)
            .div_i64((2 * r) as i64, wp)
            .div_i64(m_sq, wp);
        let bern = crate::ball::bernoulli_internal(2 * r, wp);
        let coeff = bern.mul(&inv_fact_m, wp);
        let term = scale_rball(&rising, &coeff);
        series::add_assign(&mut acc, &term);
        if r < n_bern {
            let c1 = a.add(&BallComplex::from_i64((2 * r - 1) as i64, 0, wp));
            let c2 = a.add(&BallComplex::from_i64((2 * r) as i64, 0, wp));
            rising = series::mul_linear(&rising, &c1);
            rising = series::mul_linear(&rising, &c2);
        }
    }
    let bern_total = series::mul_trunc(&acc, &m_series, wp);
    series::add_assign(&mut coeffs, &bern_total);

    // Rigorous tail.
    let tails = remainder_bounds(a, m_cut, n_bern, order);
    let out = coeffs
        .into_iter()
        .zip(tails)
        .map(|(c, t)| c.add_rad(t))
        .collect();
    Ok(out)
}

fn scale_rball(s: &[BallComplex], r: &RBall) -> Vec<BallComplex> {
    s.iter().map(|c| c.mul_rball(r)).collect()
}
