//! Finite sample sets of complex points: grids, discrete circles, arithmetic
//! progressions, reproducible random boxes, and explicit lists. Generator
//! metadata is kept as decimal strings so a set can be re-materialized at any
//! working precision.

use crate::ball::{kernels, BallComplex, Real};
use crate::error::{Error, Result};
use crate::literal::{parse_complex, split_complex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Grid { a: String, d1: String, d2: String, n1: u32, n2: u32 },
    Circle { c: String, r: String, n: u32 },
    Progression { a: String, eps: String, n: u32 },
    Random { seed: u64, re_lo: String, re_hi: String, im_lo: String, im_hi: String, n: u32 },
    Explicit,
}

#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<BallComplex>,
    generator: Generator,
    prec: u32,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[BallComplex] {
        &self.points
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Re-materialize from the generator at a (usually higher) precision.
    /// Explicit sets cannot be sharpened; they return a clone.
    pub fn regenerate(&self, prec: u32) -> Result<PointSet> {
        match &self.generator {
            Generator::Explicit => Ok(self.clone()),
            g => from_generator(g.clone(), prec),
        }
    }

    pub fn explicit(points: Vec<BallComplex>) -> Result<PointSet> {
        let prec = points.iter().map(|p| p.prec()).max().unwrap_or(64);
        let set = PointSet { points, generator: Generator::Explicit, prec };
        set.check_distinct()?;
        Ok(set)
    }

    fn check_distinct(&self) -> Result<()> {
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                if self.points[i].diff_abs_down(&self.points[j]).is_zero() {
                    return Err(Error::DegenerateSet(format!(
                        "points {i} and {j} are not certifiably distinct"
                    )));
                }
            }
        }
        Ok(())
    }

    /// "kind:params" descriptor round-trippable through `parse_descriptor`.
    pub fn descriptor(&self) -> String {
        match &self.generator {
            Generator::Grid { a, d1, d2, n1, n2 } => format!("grid:{a};{d1};{d2};{n1};{n2}"),
            Generator::Circle { c, r, n } => format!("circle:{c};{r};{n}"),
            Generator::Progression { a, eps, n } => format!("prog:{a};{eps};{n}"),
            Generator::Random { seed, re_lo, re_hi, im_lo, im_hi, n } => {
                format!("random:{seed};{re_lo},{re_hi},{im_lo},{im_hi};{n}")
            }
            Generator::Explicit => "explicit".to_string(),
        }
    }
}

pub fn grid(a: &str, d1: &str, d2: &str, n1: u32, n2: u32, prec: u32) -> Result<PointSet> {
    from_generator(
        Generator::Grid {
            a: a.into(),
            d1: d1.into(),
            d2: d2.into(),
            n1,
            n2,
        },
        prec,
    )
}

pub fn circle(c: &str, r: &str, n: u32, prec: u32) -> Result<PointSet> {
    from_generator(Generator::Circle { c: c.into(), r: r.into(), n }, prec)
}

pub fn progression(a: &str, eps: &str, n: u32, prec: u32) -> Result<PointSet> {
    from_generator(Generator::Progression { a: a.into(), eps: eps.into(), n }, prec)
}

pub fn random_set(
    seed: u64,
    re_lo: &str,
    re_hi: &str,
    im_lo: &str,
    im_hi: &str,
    n: u32,
    prec: u32,
) -> Result<PointSet> {
    from_generator(
        Generator::Random {
            seed,
            re_lo: re_lo.into(),
            re_hi: re_hi.into(),
            im_lo: im_lo.into(),
            im_hi: im_hi.into(),
            n,
        },
        prec,
    )
}

fn from_generator(g: Generator, prec: u32) -> Result<PointSet> {
    let points = match &g {
        Generator::Grid { a, d1, d2, n1, n2 } => {
            let a = parse_complex(a, prec)?;
            let d1 = parse_complex(d1, prec)?;
            let d2 = parse_complex(d2, prec)?;
            if d1.is_exact_zero() && d2.is_exact_zero() && (*n1 > 0 || *n2 > 0) {
                return Err(Error::DegenerateSet("both grid steps are zero".into()));
            }
            let mut pts = Vec::with_capacity(((n1 + 1) * (n2 + 1)) as usize);
            for k in 0..=*n1 {
                for l in 0..=*n2 {
                    pts.push(a.add(&d1.mul_i64(k as i64)).add(&d2.mul_i64(l as i64)));
                }
            }
            pts
        }
        Generator::Circle { c, r, n } => {
            if *n < 1 {
                return Err(Error::DegenerateSet("circle needs N >= 1".into()));
            }
            let c = parse_complex(c, prec)?;
            let r = parse_complex(r, prec)?;
            if r.contains_zero() {
                return Err(Error::DegenerateSet("circle radius ball contains zero".into()));
            }
            let mut pts = Vec::with_capacity(*n as usize);
            for k in 0..*n {
                pts.push(c.add(&unit_root(k as i64, *n as i64, prec)?.mul(&r)));
            }
            pts
        }
        Generator::Progression { a, eps, n } => {
            if *n < 1 {
                return Err(Error::DegenerateSet("progression needs N >= 1".into()));
            }
            let a = parse_complex(a, prec)?;
            let eps = parse_complex(eps, prec)?;
            if eps.is_exact_zero() && *n > 1 {
                return Err(Error::DegenerateSet("progression step is zero".into()));
            }
            (0..*n as i64).map(|j| a.add(&eps.mul_i64(j))).collect()
        }
        Generator::Random { seed, re_lo, re_hi, im_lo, im_hi, n } => {
            random_points(*seed, re_lo, re_hi, im_lo, im_hi, *n, prec)?
        }
        Generator::Explicit => unreachable!("explicit sets are built from points"),
    };
    let set = PointSet { points, generator: g, prec };
    set.check_distinct()?;
    Ok(set)
}

/// e^(2 pi i k / n) as a ball.
pub fn unit_root(k: i64, n: i64, prec: u32) -> Result<BallComplex> {
    let wp = prec + 16;
    let pi = kernels::pi_ball(wp);
    let theta = pi.mul_i64(2 * k.rem_euclid(n), wp).div_i64(n, wp);
    let (theta_mid, theta_err) = (theta.mid.clone(), theta.rad);
    let (c, s) = kernels::sincos_real(&theta_mid, wp)?;
    // Propagate the angle radius: |d e^(i t)/dt| = 1.
    Ok(BallComplex::from_rballs(c, s, prec).add_rad(theta_err))
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_points(
    seed: u64,
    re_lo: &str,
    re_hi: &str,
    im_lo: &str,
    im_hi: &str,
    n: u32,
    prec: u32,
) -> Result<Vec<BallComplex>> {
    if n < 1 {
        return Err(Error::DegenerateSet("random set needs N >= 1".into()));
    }
    let (rlo, e1) = Real::parse_decimal(re_lo, prec)?;
    let (rhi, e2) = Real::parse_decimal(re_hi, prec)?;
    let (ilo, e3) = Real::parse_decimal(im_lo, prec)?;
    let (ihi, e4) = Real::parse_decimal(im_hi, prec)?;
    let parse_rad = e1.add_up(&e2).add_up(&e3).add_up(&e4);
    let rspan = rhi.sub_exact(&rlo);
    let ispan = ihi.sub_exact(&ilo);
    if rspan.sign() <= 0 || ispan.sign() <= 0 {
        return Err(Error::DegenerateSet("random box is degenerate".into()));
    }
    let mut state = seed;
    let mut pts: Vec<BallComplex> = Vec::with_capacity(n as usize);
    let mut extra_draws = 0;
    while pts.len() < n as usize {
        let fr = splitmix64(&mut state);
        let fi = splitmix64(&mut state);
        // lo + span * draw / 2^64, exactly in dyadic arithmetic.
        let scale = |lo: &Real, span: &Real, draw: u64| -> Real {
            let t = Real::from_bigint(num_bigint::BigInt::from(draw)).mul_2exp(-64);
            lo.add_exact(&span.mul_exact(&t))
        };
        let cand = BallComplex::from_parts(
            scale(&rlo, &rspan, fr),
            scale(&ilo, &ispan, fi),
            parse_rad,
            prec,
        );
        let clash = pts.iter().any(|p| p.diff_abs_down(&cand).is_zero());
        if clash {
            extra_draws += 1;
            if extra_draws > 100 {
                return Err(Error::DegenerateSet(
                    "random generator failed to produce distinct points".into(),
                ));
            }
            continue;
        }
        pts.push(cand);
    }
    Ok(pts)
}

/// Parse "grid:a;d1;d2;N1;N2", "circle:c;r;N", "prog:a;eps;N",
/// "random:seed;re_lo,re_hi,im_lo,im_hi;N".
pub fn parse_descriptor(s: &str, prec: u32) -> Result<PointSet> {
    let bad = |msg: &str| Error::UsageError(format!("bad set descriptor {s:?}: {msg}"));
    let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
    let fields: Vec<&str> = rest.split(';').collect();
    match kind {
        "grid" => {
            if fields.len() != 5 {
                return Err(bad("grid needs a;d1;d2;N1;N2"));
            }
            let n1 = fields[3].parse().map_err(|_| bad("N1 not an integer"))?;
            let n2 = fields[4].parse().map_err(|_| bad("N2 not an integer"))?;
            for f in &fields[..3] {
                split_complex(f)?;
            }
            grid(fields[0], fields[1], fields[2], n1, n2, prec)
        }
        "circle" => {
            if fields.len() != 3 {
                return Err(bad("circle needs c;r;N"));
            }
            let n = fields[2].parse().map_err(|_| bad("N not an integer"))?;
            split_complex(fields[0])?;
            split_complex(fields[1])?;
            circle(fields[0], fields[1], n, prec)
        }
        "prog" => {
            if fields.len() != 3 {
                return Err(bad("prog needs a;eps;N"));
            }
            let n = fields[2].parse().map_err(|_| bad("N not an integer"))?;
            split_complex(fields[0])?;
            split_complex(fields[1])?;
            progression(fields[0], fields[1], n, prec)
        }
        "random" => {
            if fields.len() != 3 {
                return Err(bad("random needs seed;box;N"));
            }
            let seed = fields[0].parse().map_err(|_| bad("seed not an integer"))?;
            let n = fields[2].parse().map_err(|_| bad("N not an integer"))?;
            let parts: Vec<&str> = fields[1].split(',').collect();
            if parts.len() != 4 {
                return Err(bad("box needs re_lo,re_hi,im_lo,im_hi"));
            }
            random_set(seed, parts[0], parts[1], parts[2], parts[3], n, prec)
        }
        _ => Err(bad("unknown kind")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_grid_first_and_last_points() {
        let g = grid("-2.5+5i", "2+1i", "1+2i", 2, 3, 128).unwrap();
        assert_eq!(g.len(), 12);
        let first = parse_complex("-2.5+5i", 128).unwrap();
        let last = parse_complex("4.5+13i", 128).unwrap();
        assert!(g.points()[0].intersects(&first));
        assert!(g.points()[11].intersects(&last));
    }

    #[test]
    fn single_point_grid() {
        let g = grid("2+1i", "1", "0+1i", 0, 0, 96).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn degenerate_grid_detected() {
        match grid("0", "1", "1", 1, 1, 96) {
            Err(Error::DegenerateSet(_)) => {}
            other => panic!("expected DegenerateSet, got {other:?}"),
        }
    }

    #[test]
    fn paper_circle_point_zero() {
        let c = circle("0.5+7i", "3+2i", 12, 128).unwrap();
        assert_eq!(c.len(), 12);
        let want = parse_complex("3.5+9i", 128).unwrap();
        assert!(c.points()[0].intersects(&want));
    }

    #[test]
    fn circle_of_one_and_fourth_roots() {
        let c = circle("1+1i", "2", 1, 96).unwrap();
        assert!(c.points()[0].intersects(&parse_complex("3+1i", 96).unwrap()));
        let c4 = circle("0", "1", 4, 96).unwrap();
        for (k, want) in ["1", "0+1i", "-1", "0-1i"].iter().enumerate() {
            assert!(c4.points()[k].intersects(&parse_complex(want, 96).unwrap()), "k={k}");
        }
    }

    #[test]
    fn circle_points_sit_on_the_circle() {
        let c = circle("0.5+7i", "3+2i", 7, 160).unwrap();
        let center = parse_complex("0.5+7i", 160).unwrap();
        let r = parse_complex("3+2i", 160).unwrap();
        for p in c.points() {
            let d = p.sub(&center);
            let got = d.mul(&d.conj());
            let want = r.mul(&r.conj());
            assert!(got.intersects(&want));
        }
    }

    #[test]
    fn progression_basics() {
        let p = progression("0", "1", 3, 96).unwrap();
        for (j, want) in ["0", "1", "2"].iter().enumerate() {
            assert!(p.points()[j].intersects(&parse_complex(want, 96).unwrap()));
        }
        let single = progression("0.4+17i", "0.001", 1, 96).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn random_is_deterministic_and_in_box() {
        let a = random_set(7, "0", "1", "-2", "-1", 5, 96).unwrap();
        let b = random_set(7, "0", "1", "-2", "-1", 5, 96).unwrap();
        for (x, y) in a.points().iter().zip(b.points()) {
            assert_eq!(x.midpoint_key(), y.midpoint_key());
        }
        for p in a.points() {
            let re = p.re().to_f64_approx();
            let im = p.im().to_f64_approx();
            assert!((0.0..=1.0).contains(&re));
            assert!((-2.0..=-1.0).contains(&im));
        }
    }

    #[test]
    fn golden_random_set_seed_one() {
        // Frozen output of splitmix64 with seed 1 on the unit box, computed
        // independently from the reference splitmix64 recurrence.
        let s = random_set(1, "0", "1", "0", "1", 3, 96).unwrap();
        let want = [
            (0.566561575172281, 0.7457817572627012),
            (0.9710027535867963, 0.4443592170557721),
            (0.4442647008263581, 0.762894391911761),
        ];
        for (p, (re, im)) in s.points().iter().zip(want) {
            assert!((p.re().to_f64_approx() - re).abs() < 1e-12);
            assert!((p.im().to_f64_approx() - im).abs() < 1e-12);
        }
    }

    #[test]
    fn descriptor_round_trip() {
        for d in [
            "grid:-2.5+5i;2+1i;1+2i;2;3",
            "circle:0.5+7i;3+2i;12",
            "prog:0.4+17i;0.001;12",
            "random:9;0,1,-1,1;4",
        ] {
            let s = parse_descriptor(d, 96).unwrap();
            assert_eq!(s.descriptor(), d);
            let again = parse_descriptor(&s.descriptor(), 96).unwrap();
            for (x, y) in s.points().iter().zip(again.points()) {
                assert_eq!(x.midpoint_key(), y.midpoint_key());
            }
        }
        assert!(parse_descriptor("grid:bad", 96).is_err());
    }

    #[test]
    fn regeneration_refines_circle_points() {
        let lo = circle("0.5+7i", "3+2i", 6, 96).unwrap();
        let hi = lo.regenerate(256).unwrap();
        for (a, b) in lo.points().iter().zip(hi.points()) {
            assert!(a.contains(b) || a.intersects(b));
            assert!(b.rad().cmp(&a.rad()) != std::cmp::Ordering::Greater);
        }
    }
}
