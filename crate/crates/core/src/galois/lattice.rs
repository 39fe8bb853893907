//! Multiplicative relation lattices: {m ∈ ℤⁿ : ∏ vᵢ^{mᵢ} = 1} for nonzero
//! rationals, via the integer kernel of the prime-exponent matrix refined by
//! the sign-parity condition.

use crate::algebra::{int_kernel, lattice_contains, lattice_hnf, rat_pow, IntMatrix, Rat};
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("value at position {0} is zero")]
    ZeroValue(usize),
    #[error("value {0} has a prime factor above the factoring guard")]
    FactorGuard(String),
}

/// Sign and prime factorization of a nonzero rational (negative exponents
/// for denominator primes).
pub fn factor_rational(r: &Rat) -> Result<(bool, BTreeMap<u64, i64>), LatticeError> {
    let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
    let mut side = |n: &BigInt, sign: i64| -> Result<(), LatticeError> {
        let mut n = n.abs();
        let mut p = 2u64;
        while n > BigInt::one() {
            if BigInt::from(p) * BigInt::from(p) > n {
                // Remaining cofactor is prime.
                let big: u64 = (&n)
                    .try_into()
                    .map_err(|_| LatticeError::FactorGuard(n.to_string()))?;
                *exps.entry(big).or_insert(0) += sign;
                break;
            }
            while (&n % p).is_zero() {
                n /= p;
                *exps.entry(p).or_insert(0) += sign;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        Ok(())
    };
    side(r.numer(), 1)?;
    side(r.denom(), -1)?;
    exps.retain(|_, e| *e != 0);
    Ok((r.is_negative(), exps))
}

/// The lattice of multiplicative relations among the values, with a
/// canonical Hermite-normal-form basis. Every basis vector is re-verified
/// against the defining identity at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterLattice {
    pub ambient_rank: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl CharacterLattice {
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient_rank);
        lattice_contains(&self.basis, v)
    }
}

/// Compute {m : ∏ vᵢ^{mᵢ} = 1}: kernel of the prime-exponent matrix over ℤ,
/// intersected with the even-parity sublattice for the sign row (an index
/// ≤ 2 refinement), returned as an HNF basis.
pub fn multiplicative_lattice(values: &[Rat]) -> Result<CharacterLattice, LatticeError> {
    let n = values.len();
    let mut signs = Vec::with_capacity(n);
    let mut factorizations = Vec::with_capacity(n);
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            return Err(LatticeError::ZeroValue(i));
        }
        let (neg, exps) = factor_rational(v)?;
        signs.push(neg);
        factorizations.push(exps);
    }
    let mut primes: Vec<u64> = factorizations.iter().flat_map(|m| m.keys().copied()).collect();
    primes.sort_unstable();
    primes.dedup();
    let exponent_matrix = IntMatrix::new(
        primes.len(),
        n,
        primes
            .iter()
            .flat_map(|p| {
                factorizations
                    .iter()
                    .map(move |m| BigInt::from(m.get(p).copied().unwrap_or(0)))
            })
            .collect(),
    );
    let kernel = int_kernel(&exponent_matrix).columns();
    // Refine by sign parity: Σ_{i : v_i < 0} m_i must be even.
    let parity = |v: &Vec<BigInt>| -> bool {
        let sum: BigInt = v.iter().zip(&signs).filter(|(_, &s)| s).map(|(x, _)| x.clone()).sum();
        (sum % BigInt::from(2)).is_zero()
    };
    let basis = if kernel.iter().all(parity) {
        lattice_hnf(&kernel)
    } else {
        let pivot = kernel.iter().position(|v| !parity(v)).unwrap();
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        gens.push(kernel[pivot].iter().map(|x| x * 2).collect());
        for (j, v) in kernel.iter().enumerate() {
            if j == pivot {
                continue;
            }
            if parity(v) {
                gens.push(v.clone());
            } else {
                gens.push(v.iter().zip(&kernel[pivot]).map(|(a, b)| a + b).collect());
            }
        }
        lattice_hnf(&gens)
    };
    for vec in &basis {
        let mut prod = Rat::one();
        for (v, m) in values.iter().zip(vec) {
            let e: i64 = m.try_into().expect("desk-scale exponent");
            prod *= rat_pow(v, e);
        }
        assert!(prod.is_one(), "lattice basis vector fails the defining relation");
    }
    Ok(CharacterLattice { ambient_rank: n, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat_frac, rat_of};

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn factoring() {
        let (neg, f) = factor_rational(&rat_frac(-12, 35)).unwrap();
        assert!(neg);
        let expect: BTreeMap<u64, i64> =
            [(2, 2), (3, 1), (5, -1), (7, -1)].into_iter().collect();
        assert_eq!(f, expect);
    }

    #[test]
    fn four_has_no_relation() {
        let l = multiplicative_lattice(&[rat_of(4)]).unwrap();
        assert!(l.is_trivial());
    }

    #[test]
    fn minus_one_gives_mu_two() {
        let l = multiplicative_lattice(&[rat_of(-1)]).unwrap();
        assert_eq!(l.basis, vec![bv(&[2])]);
    }

    #[test]
    fn two_and_eight() {
        // 2^{-3} · 8 = 1; brute force over the |m| <= 5 box agrees.
        let l = multiplicative_lattice(&[rat_of(2), rat_of(8)]).unwrap();
        assert_eq!(l.basis, vec![bv(&[-3, 1])]);
        for m1 in -5i64..=5 {
            for m2 in -5i64..=5 {
                let holds = rat_pow(&rat_of(2), m1) * rat_pow(&rat_of(8), m2) == rat_of(1);
                assert_eq!(holds, l.contains(&bv(&[m1, m2])), "({m1},{m2})");
            }
        }
    }

    #[test]
    fn sign_refinement() {
        // (2, -2): relations m1 + m2 = 0 with m2 even.
        let l = multiplicative_lattice(&[rat_of(2), rat_of(-2)]).unwrap();
        for m1 in -4i64..=4 {
            for m2 in -4i64..=4 {
                let holds = rat_pow(&rat_of(2), m1) * rat_pow(&rat_of(-2), m2) == rat_of(1);
                assert_eq!(holds, l.contains(&bv(&[m1, m2])), "({m1},{m2})");
            }
        }
        assert_eq!(l.rank(), 1);
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(
            multiplicative_lattice(&[rat_of(2), rat_of(0)]),
            Err(LatticeError::ZeroValue(1))
        );
    }

    #[test]
    fn ones_give_full_lattice() {
        let l = multiplicative_lattice(&[rat_of(1), rat_of(1)]).unwrap();
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&bv(&[1, 0])));
        assert!(l.contains(&bv(&[0, 1])));
    }
}
