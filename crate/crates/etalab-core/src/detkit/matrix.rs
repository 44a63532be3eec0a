//! Certified determinants by LU elimination with partial pivoting on
//! midpoint magnitude, power-of-two balancing, and the single-cell cofactor
//! solve.

use crate::ball::{BallComplex, Mag};
use crate::error::{Error, Result};

use super::{MatrixHP, Symbol};

/// Determinant of a fully numeric matrix.
pub fn det(m: &MatrixHP) -> Result<BallComplex> {
    if m.symbol() != Symbol::None {
        return Err(Error::UsageError("det needs a numeric matrix".into()));
    }
    let n = m.n();
    let prec = m.prec();
    if n == 0 {
        return Ok(BallComplex::one(prec));
    }
    let mut cells: Vec<BallComplex> = m.constant_cells().to_vec();
    det_in_place(&mut cells, n, prec)
}

pub(crate) fn det_in_place(
    cells: &mut [BallComplex],
    n: usize,
    prec: u32,
) -> Result<BallComplex> {
    // Exact power-of-two balancing of rows then columns.
    let mut shift_total: i64 = 0;
    for j in 0..n {
        let mut emax: Option<i64> = None;
        for k in 0..n {
            let u = cells[j * n + k].abs_up();
            if !u.is_zero() {
                let e = u.log2_approx().ceil() as i64;
                emax = Some(emax.map_or(e, |m: i64| m.max(e)));
            }
        }
        match emax {
            None => return Ok(BallComplex::zero(prec)), // exact zero row
            Some(e) => {
                if e != 0 {
                    for k in 0..n {
                        cells[j * n + k] = cells[j * n + k].mul_2exp(-e);
                    }
                    shift_total += e;
                }
            }
        }
    }
    for k in 0..n {
        let mut emax: Option<i64> = None;
        for j in 0..n {
            let u = cells[j * n + k].abs_up();
            if !u.is_zero() {
                let e = u.log2_approx().ceil() as i64;
                emax = Some(emax.map_or(e, |m: i64| m.max(e)));
            }
        }
        match emax {
            None => return Ok(BallComplex::zero(prec)),
            Some(e) => {
                if e != 0 {
                    for j in 0..n {
                        cells[j * n + k] = cells[j * n + k].mul_2exp(-e);
                    }
                    shift_total += e;
                }
            }
        }
    }

    let mut sign = 1i64;
    let mut diag: Vec<BallComplex> = Vec::with_capacity(n);
    for col in 0..n {
        // Pivot: the candidate with the largest certified lower bound.
        let mut best: Option<(usize, Mag)> = None;
        let mut all_exact_zero = true;
        for row in col..n {
            let cell = &cells[row * n + col];
            if !cell.is_exact_zero() {
                all_exact_zero = false;
            }
            let low = cell.abs_down();
            if !low.is_zero() {
                let better = match &best {
                    None => true,
                    Some((_, b)) => low.cmp(b) == std::cmp::Ordering::Greater,
                };
                if better {
                    best = Some((row, low));
                }
            }
        }
        let (prow, _) = match best {
            Some(b) => b,
            None if all_exact_zero => return Ok(BallComplex::zero(prec)),
            None => return Err(Error::SingularUncertain),
        };
        if prow != col {
            for k in 0..n {
                cells.swap(col * n + k, prow * n + k);
            }
            sign = -sign;
        }
        let pivot = cells[col * n + col].clone();
        for row in (col + 1)..n {
            let lead = cells[row * n + col].clone();
            if lead.is_exact_zero() {
                continue;
            }
            let factor = lead.div(&pivot)?;
            for k in (col + 1)..n {
                let t = factor.mul(&cells[col * n + k]);
                cells[row * n + k] = cells[row * n + k].sub(&t);
            }
            cells[row * n + col] = BallComplex::zero(prec);
        }
        diag.push(pivot);
    }
    let mut acc = BallComplex::from_i64(sign, 0, prec);
    for d in diag {
        acc = acc.mul(&d);
    }
    Ok(acc.mul_2exp(shift_total))
}

/// Solve det(M with cell (row, col) replaced by y) = rhs for y, as the ratio
/// of two determinants: the numerator substitutes 0 at the cell, the
/// denominator substitutes -1 there and zeroes the rest of its row and
/// column.
pub fn cofactor_solve(
    m: &MatrixHP,
    row: usize,
    col: usize,
    rhs: &BallComplex,
) -> Result<BallComplex> {
    if m.symbol() != Symbol::None {
        return Err(Error::UsageError("cofactor_solve needs a numeric matrix".into()));
    }
    let n = m.n();
    let prec = m.prec();
    let mut num_cells = m.constant_cells().to_vec();
    num_cells[row * n + col] = BallComplex::zero(prec);
    let num = det_in_place(&mut num_cells, n, prec)?;

    let mut den_cells = m.constant_cells().to_vec();
    for k in 0..n {
        den_cells[row * n + k] = BallComplex::zero(prec);
        den_cells[k * n + col] = BallComplex::zero(prec);
    }
    den_cells[row * n + col] = BallComplex::from_i64(-1, 0, prec);
    let den = match det_in_place(&mut den_cells, n, prec) {
        Ok(d) => d,
        Err(Error::SingularUncertain) => return Err(Error::CofactorVanishes),
        Err(e) => return Err(e),
    };
    if den.contains_zero() {
        return Err(Error::CofactorVanishes);
    }
    num.sub(rhs).div(&den)
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
    fn one_by_one_and_two_by_two() {
        let m = numeric(1, &[(7, 1)], 96);
        assert!(det(&m).unwrap().contains(&BallComplex::from_i64(7, 1, 96)));
        // [[a, b], [c, d]] -> ad - bc = 1*4 - 2*3 = -2
        let m = numeric(2, &[(1, 0), (2, 0), (3, 0), (4, 0)], 96);
        assert!(det(&m).unwrap().contains(&BallComplex::from_i64(-2, 0, 96)));
    }

    #[test]
    fn exact_zero_row_gives_exact_zero() {
        let m = numeric(2, &[(0, 0), (0, 0), (3, 0), (4, 0)], 96);
        let d = det(&m).unwrap();
        assert!(d.is_exact_zero());
    }

    /// Independent oracle: naive cofactor expansion.
    fn det_cofactor(cells: &[BallComplex], n: usize, prec: u32) -> BallComplex {
        if n == 0 {
            return BallComplex::one(prec);
        }
        if n == 1 {
            return cells[0].clone();
        }
        let mut acc = BallComplex::zero(prec);
        for k in 0..n {
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for j in 1..n {
                for kk in 0..n {
                    if kk != k {
                        minor.push(cells[j * n + kk].clone());
                    }
                }
            }
            let mut term = cells[k].mul(&det_cofactor(&minor, n - 1, prec));
            if k % 2 == 1 {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        acc
    }

    #[test]
    fn lu_matches_cofactor_expansion_up_to_five() {
        // Deterministic pseudo-random integer matrices.
        let mut state = 0x12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64 % 19) - 9
        };
        for n in 1..=5usize {
            for _ in 0..6 {
                let cells: Vec<BallComplex> = (0..n * n)
                    .map(|_| BallComplex::from_i64(next(), next(), 128))
                    .collect();
                let m = MatrixHP::numeric(n, cells.clone()).unwrap();
                let lu = match det(&m) {
                    Ok(d) => d,
                    Err(Error::SingularUncertain) => continue,
                    Err(e) => panic!("{e}"),
                };
                let oracle = det_cofactor(&cells, n, 128);
                assert!(lu.intersects(&oracle), "n={n}");
            }
        }
    }

    #[test]
    fn column_scaling_multiplies_det() {
        let cells: Vec<BallComplex> = (0..9)
            .map(|i| BallComplex::from_i64((i * i + 1) as i64, (i % 3) as i64, 128))
            .collect();
        let m = MatrixHP::numeric(3, cells.clone()).unwrap();
        let base = det(&m).unwrap();
        // Scale columns by 2, 3, 5.
        let scales = [2i64, 3, 5];
        let scaled: Vec<BallComplex> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_i64(scales[i % 3]))
            .collect();
        let ms = MatrixHP::numeric(3, scaled).unwrap();
        let got = det(&ms).unwrap();
        assert!(got.intersects(&base.mul_i64(30)));
    }

    #[test]
    fn cofactor_solve_small_cases() {
        // 1x1 [[5]]: det(y) = y = 0 -> y = 0.
        let m = numeric(1, &[(5, 0)], 96);
        let y = cofactor_solve(&m, 0, 0, &BallComplex::zero(96)).unwrap();
        assert!(y.contains_zero());
        // [[y, 2], [3, 4]] = 0 -> 4y - 6 = 0 -> y = 3/2.
        let m = numeric(2, &[(9, 9), (2, 0), (3, 0), (4, 0)], 96);
        let y = cofactor_solve(&m, 0, 0, &BallComplex::zero(96)).unwrap();
        assert!(y.intersects(&crate::ball::ball_from_ratio(3, 2, 96)));
    }

    #[test]
    fn cofactor_back_substitution_consistency() {
        let m = numeric(3, &[(2, 1), (0, 3), (1, 0), (4, 0), (5, 2), (1, 1), (0, 1), (2, 2), (7, 0)], 160);
        let rhs = BallComplex::from_i64(3, -2, 160);
        let y = cofactor_solve(&m, 1, 2, &rhs).unwrap();
        let mut cells = m.constant_cells().to_vec();
        cells[1 * 3 + 2] = y;
        let back = det_in_place(&mut cells, 3, 160).unwrap();
        assert!(back.intersects(&rhs));
    }
}
