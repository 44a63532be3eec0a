//! Polynomials with ball coefficients, and determinant polynomials recovered
//! by evaluation at scaled roots of unity plus an inverse discrete Fourier
//! sum in ball arithmetic.

use rayon::prelude::*;

use crate::ball::{BallComplex, Mag};
use crate::error::{Error, Result};
use crate::pointsets::unit_root;

use super::matrix::det_in_place;
use super::perm::Permutation;
use super::{MatrixHP, Symbol};

#[derive(Clone, Debug)]
pub struct PolyHP {
    coeffs: Vec<BallComplex>, // ascending degree
}

impl PolyHP {
    pub fn new(coeffs: Vec<BallComplex>) -> PolyHP {
        assert!(!coeffs.is_empty());
        PolyHP { coeffs }
    }

    pub fn coeffs(&self) -> &[BallComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&BallComplex> {
        self.coeffs.get(k)
    }

    pub fn len_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(64)
    }

    /// Degree with a certified nonzero leading coefficient. Exactly-zero
    /// leading coefficients are stripped; a leading ball that merely
    /// contains zero is DegreeUncertain.
    pub fn certified_degree(&self) -> Result<usize> {
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d].is_exact_zero() {
            d -= 1;
        }
        if d == 0 {
            return Ok(0);
        }
        if self.coeffs[d].contains_zero() {
            return Err(Error::DegreeUncertain);
        }
        Ok(d)
    }

    pub fn eval(&self, x: &BallComplex) -> BallComplex {
        let mut acc = BallComplex::zero(x.prec());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> PolyHP {
        if self.coeffs.len() <= 1 {
            return PolyHP::new(vec![BallComplex::zero(self.prec())]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_i64(k as i64))
            .collect();
        PolyHP::new(coeffs)
    }

    pub fn sub(&self, o: &PolyHP) -> PolyHP {
        let n = self.coeffs.len().max(o.coeffs.len());
        let prec = self.prec().max(o.prec());
        let zero = BallComplex::zero(prec);
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = o.coeffs.get(k).unwrap_or(&zero);
                a.sub(b)
            })
            .collect();
        PolyHP::new(coeffs)
    }
}

/// Count of cells carrying the symbol: the degree bound for the determinant
/// polynomial.
fn symbol_cell_count(m: &MatrixHP) -> usize {
    (0..m.n() * m.n())
        .filter(|&i| !m.symbol_cells()[i].is_exact_zero())
        .count()
}

/// Determinant of a matrix affine in one symbol, as a polynomial in that
/// symbol: evaluate at d+1 nodes rho*omega^t on a circle and recover the
/// coefficients by the inverse Fourier sum.
pub fn det_poly(m: &MatrixHP, scale_hint: Option<Mag>) -> Result<PolyHP> {
    if m.symbol() == Symbol::None {
        return Err(Error::UsageError("det_poly needs a symbolic matrix".into()));
    }
    let d = symbol_cell_count(m);
    let prec = m.prec();
    if d == 0 {
        let numeric = MatrixHP::numeric(m.n(), m.constant_cells().to_vec())?;
        return Ok(PolyHP::new(vec![super::matrix::det(&numeric)?]));
    }
    // Node circle radius: a power of two near the hint (or the constant
    // part's row-sum scale) keeps rho^j exact.
    let rho_log2 = match &scale_hint {
        Some(h) if !h.is_zero() => h.log2_approx().round() as i64,
        _ => {
            let mut worst = f64::NEG_INFINITY;
            for j in 0..m.n() {
                let mut row = Mag::ZERO;
                for k in 0..m.n() {
                    row = row.add_up(&m.constant_cells()[j * m.n() + k].abs_up());
                }
                if !row.is_zero() {
                    worst = worst.max(row.log2_approx());
                }
            }
            if worst.is_finite() {
                worst.round() as i64
            } else {
                0
            }
        }
    };
    let nodes = d + 1;
    let evals: Vec<Result<BallComplex>> = (0..nodes)
        .into_par_iter()
        .map(|t| {
            let w = unit_root(t as i64, nodes as i64, prec)?;
            let y = w.mul_2exp(rho_log2);
            let mut cells = m.substituted_cells(&y);
            det_in_place(&mut cells, m.n(), prec)
        })
        .collect();
    let mut q = Vec::with_capacity(nodes);
    for e in evals {
        q.push(e?);
    }
    // c_j = rho^-j / nodes * sum_t q_t omega^(-jt)
    let roots: Vec<BallComplex> = (0..nodes)
        .map(|t| unit_root(t as i64, nodes as i64, prec))
        .collect::<Result<_>>()?;
    let mut coeffs = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let mut acc = BallComplex::zero(prec);
        for (t, qt) in q.iter().enumerate() {
            let idx = (nodes - (j * t) % nodes) % nodes;
            acc = acc.add(&qt.mul(&roots[idx]));
        }
        coeffs.push(acc.div_i64(nodes as i64).mul_2exp(-rho_log2 * j as i64));
    }
    Ok(PolyHP::new(coeffs))
}

/// Characteristic polynomial det(X - lambda P_G) where P_G carries ones at
/// (g_k, k). The input must be numeric; lambda is attached internally.
pub fn charpoly(m: &MatrixHP, g: &Permutation) -> Result<PolyHP> {
    if m.symbol() != Symbol::None {
        return Err(Error::UsageError("charpoly needs a numeric matrix".into()));
    }
    if g.len() != m.n() {
        return Err(Error::UsageError("permutation size mismatch".into()));
    }
    let lam = m.with_lambda(g);
    det_poly(&lam, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detkit::MatrixHP;

    fn numeric(n: usize, vals: &[(i64, i64)], prec: u32) -> MatrixHP {
        let cells: Vec<BallComplex> = vals
            .iter()
            .map(|&(re, im)| BallComplex::from_i64(re, im, prec))
            .collect();
        MatrixHP::numeric(n, cells).unwrap()
    }

    #[test]
    fn two_by_two_charpoly() {
        // [[a, b], [c, d]] -> lambda^2 - (a+d) lambda + (ad - bc)
        let m = numeric(2, &[(1, 0), (2, 0), (3, 0), (4, 0)], 128);
        let p = charpoly(&m, &Permutation::identity(2)).unwrap();
        assert_eq!(p.len_degree(), 2);
        assert!(p.coeff(0).unwrap().intersects(&BallComplex::from_i64(-2, 0, 128)));
        assert!(p.coeff(1).unwrap().intersects(&BallComplex::from_i64(-5, 0, 128)));
        assert!(p.coeff(2).unwrap().intersects(&BallComplex::from_i64(1, 0, 128)));
    }

    #[test]
    fn constant_term_is_det_also_under_permutation() {
        let m = numeric(3, &[(2, 1), (0, 3), (1, 0), (4, 0), (5, 2), (1, 1), (0, 1), (2, 2), (7, 0)], 160);
        let d = super::super::matrix::det(&m).unwrap();
        for g in [
            Permutation::identity(3),
            Permutation::from_images(vec![1, 0, 2]).unwrap(),
            Permutation::from_images(vec![2, 0, 1]).unwrap(),
        ] {
            let p = charpoly(&m, &g).unwrap();
            assert!(
                p.coeff(0).unwrap().intersects(&d),
                "lambda -> 0 must recover det for sign {}",
                g.sign()
            );
            // Leading coefficient: det(-P_G) = (-1)^N sign(G).
            let lead = BallComplex::from_i64(-(g.sign() as i64), 0, 160);
            assert!(p.coeff(3).unwrap().intersects(&lead));
        }
    }

    #[test]
    fn det_poly_matches_direct_substitution() {
        // Matrix affine in y on two cells.
        let base = numeric(3, &[(2, 1), (0, 3), (1, 0), (4, 0), (5, 2), (1, 1), (0, 1), (2, 2), (7, 0)], 160);
        let mut m = base.clone();
        m.attach_symbol(Symbol::Y, &[(0, 1), (2, 0)]);
        let p = det_poly(&m, None).unwrap();
        assert_eq!(p.len_degree(), 2);
        for v in [(0i64, 0i64), (1, 0), (-3, 2), (5, -7), (11, 13), (2, 2), (-8, 1)] {
            let y = BallComplex::from_i64(v.0, v.1, 160);
            let mut cells = m.substituted_cells(&y);
            let direct = det_in_place(&mut cells, 3, 160).unwrap();
            assert!(p.eval(&y).intersects(&direct), "y = {v:?}");
        }
    }

    #[test]
    fn degree_certification() {
        let prec = 96;
        let p = PolyHP::new(vec![
            BallComplex::one(prec),
            BallComplex::from_i64(2, 0, prec),
            BallComplex::zero(prec),
        ]);
        assert_eq!(p.certified_degree().unwrap(), 1);
        let q = PolyHP::new(vec![
            BallComplex::one(prec),
            BallComplex::one(prec).add_rad(crate::ball::Mag::pow2(3)),
        ]);
        match q.certified_degree() {
            Err(Error::DegreeUncertain) => {}
            other => panic!("expected DegreeUncertain, got {other:?}"),
        }
    }
}
