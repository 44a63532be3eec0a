//! Permutations of {0..N-1} with parity, and the residue-class family used
//! by the generalized characteristic polynomials.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
    sign: i32,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect(), sign: 1 }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &g in &images {
            if g >= n || seen[g] {
                return Err(Error::UsageError("not a permutation".into()));
            }
            seen[g] = true;
        }
        let sign = sign_by_cycles(&images);
        Ok(Permutation { images, sign })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &g)| i == g)
    }
}

fn sign_by_cycles(images: &[usize]) -> i32 {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i];
        }
    }
    if (n - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The permutation sorting k = 0..N-1 by the key (k*r mod q, k). With q = 1
/// every key ties and the identity comes back. The congruence g_k = k r
/// (mod q) does not in general admit a bijection on {0..N-1}, so this sort
/// order is the fixed convention.
pub fn perm_qr(q: u64, r: u64, n: usize) -> Result<Permutation> {
    if q < 1 || r < 1 {
        return Err(Error::UsageError("q and r must be positive".into()));
    }
    if gcd(q, r) != 1 {
        return Err(Error::NotCoprime);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| ((k as u64 * r) % q, k));
    Permutation::from_images(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_by_inversions(images: &[usize]) -> i32 {
        let mut inv = 0;
        for i in 0..images.len() {
            for j in (i + 1)..images.len() {
                if images[i] > images[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn q_one_is_identity() {
        let p = perm_qr(1, 1, 6).unwrap();
        assert!(p.is_identity());
        assert_eq!(p.sign(), 1);
    }

    #[test]
    fn evens_before_odds() {
        let p = perm_qr(2, 1, 4).unwrap();
        assert_eq!(p.images(), &[0, 2, 1, 3]);
    }

    #[test]
    fn coprimality_enforced() {
        match perm_qr(4, 2, 5) {
            Err(Error::NotCoprime) => {}
            other => panic!("expected NotCoprime, got {other:?}"),
        }
    }

    #[test]
    fn parity_matches_brute_force_inversions() {
        // Every (q, r) pair up to N = 8, plus explicit permutations.
        for n in 1..=8usize {
            for q in 1..=9u64 {
                for r in 1..=9u64 {
                    if gcd(q, r) != 1 {
                        continue;
                    }
                    let p = perm_qr(q, r, n).unwrap();
                    assert_eq!(p.sign(), sign_by_inversions(p.images()), "q={q} r={r} n={n}");
                }
            }
        }
        let p = Permutation::from_images(vec![2, 0, 1]).unwrap();
        assert_eq!(p.sign(), sign_by_inversions(p.images()));
        let p = Permutation::from_images(vec![1, 0]).unwrap();
        assert_eq!(p.sign(), -1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3]).is_err());
    }
}
