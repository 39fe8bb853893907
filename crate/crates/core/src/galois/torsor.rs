//! The definable family of groups H̃_e acting on the fibers of the
//! invariant map of the 2×2 bottom-row quadratic family
//! F(X) = (z²/Δ², zw/Δ², w²/Δ²) with z = X₂₁, w = X₂₂, Δ = det X.
//!
//! Membership of g in H̃_e is "∀x (F(x) = e ⟺ F(x·g⁻¹) = e)". On the fiber,
//! F(X·g⁻¹) reduces to an exact linear image M(g)·F(X), so membership is
//! the exact condition M(g)·e = e; randomized fiber sampling provides an
//! independent falsification channel.

use super::invariant::{verify_invariant, Invariant};
use super::LinearDifferenceSystem;
use crate::algebra::{rat_to_string, MatrixRF, Polynomial, Rat, RationalFunction};
use num::{BigInt, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, PartialEq, Eq)]
pub enum TorsorError {
    /// e is outside the image variety s² = r·t (or is the zero tuple).
    OffVariety(String),
    NotConstant(String),
    Singular,
    Unsupported(String),
    NoRationalFiberPoint(String),
}

impl fmt::Display for TorsorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsorError::OffVariety(msg) => write!(f, "e is outside the image variety: {msg}"),
            TorsorError::NotConstant(msg) => write!(f, "e must consist of constants: {msg}"),
            TorsorError::Singular => write!(f, "matrix must be invertible"),
            TorsorError::Unsupported(msg) => write!(f, "{msg}"),
            TorsorError::NoRationalFiberPoint(msg) => {
                write!(f, "no rational fiber point found: {msg}")
            }
        }
    }
}

impl std::error::Error for TorsorError {}

/// The quadratic torsor family of a 2×2 system for which the bottom-row
/// quadratics are invariants with determinant exponent 2.
pub struct TorsorFamily2x2 {
    sys: LinearDifferenceSystem,
}

impl TorsorFamily2x2 {
    pub fn new(sys: &LinearDifferenceSystem) -> Result<Self, TorsorError> {
        if sys.n != 2 {
            return Err(TorsorError::Unsupported(format!(
                "the quadratic torsor family is defined for 2x2 systems, got n = {}",
                sys.n
            )));
        }
        for inv in Self::invariants() {
            if !verify_invariant(sys, &inv) {
                return Err(TorsorError::Unsupported(format!(
                    "({})/det^2 is not an invariant of this system",
                    inv.p
                )));
            }
        }
        Ok(TorsorFamily2x2 { sys: sys.clone() })
    }

    /// The three generating invariants z², zw, w² at determinant exponent 2.
    pub fn invariants() -> Vec<Invariant> {
        let z = Polynomial::var("x21");
        let w = Polynomial::var("x22");
        vec![
            Invariant { p: z.pow(2), det_exponent: 2 },
            Invariant { p: z.mul(&w), det_exponent: 2 },
            Invariant { p: w.pow(2), det_exponent: 2 },
        ]
    }

    /// F(X) for a concrete invertible matrix.
    pub fn fiber_value(&self, x: &MatrixRF) -> Result<[RationalFunction; 3], TorsorError> {
        let det = x.det();
        if det.is_zero() {
            return Err(TorsorError::Singular);
        }
        let d2 = det.mul(&det);
        let z = x.at(1, 0);
        let w = x.at(1, 1);
        Ok([z.mul(z).div(&d2), z.mul(w).div(&d2), w.mul(w).div(&d2)])
    }

    /// Validate a target tuple: constants, not all zero, on the variety
    /// s² = r·t.
    pub fn check_e(&self, e: &[RationalFunction; 3]) -> Result<(), TorsorError> {
        for v in e {
            if !self.sys.field.is_constant(v) {
                return Err(TorsorError::NotConstant(v.to_string()));
            }
        }
        if e.iter().all(|v| v.is_zero()) {
            return Err(TorsorError::OffVariety("(0,0,0) is excluded".into()));
        }
        let (r, s, t) = (&e[0], &e[1], &e[2]);
        if s.mul(s) != r.mul(t) {
            return Err(TorsorError::OffVariety(format!(
                "s^2 != r*t for (r, s, t) = ({r}, {s}, {t})"
            )));
        }
        Ok(())
    }

    /// The exact 3×3 transition matrix M(g) with F(X·g⁻¹) = M(g)·F(X),
    /// obtained by symbolic substitution into the quadratic forms.
    pub fn transition_matrix(&self, g: &MatrixRF) -> Result<[[RationalFunction; 3]; 3], TorsorError> {
        let inv = g.inverse().ok_or(TorsorError::Singular)?;
        // Bottom row of X·g⁻¹ is (αz + βw, γz + δw) with the coefficients
        // taken from g⁻¹, and det(X·g⁻¹) = det X · det(g⁻¹).
        let alpha = inv.at(0, 0);
        let beta = inv.at(1, 0);
        let gamma = inv.at(0, 1);
        let delta = inv.at(1, 1);
        let detg = g.det();
        let d2 = detg.mul(&detg);
        let two = RationalFunction::from_int(2);
        Ok([
            [
                d2.mul(&alpha.mul(alpha)),
                d2.mul(&two).mul(&alpha.mul(beta)),
                d2.mul(&beta.mul(beta)),
            ],
            [
                d2.mul(&alpha.mul(gamma)),
                d2.mul(&alpha.mul(delta).add(&beta.mul(gamma))),
                d2.mul(&beta.mul(delta)),
            ],
            [
                d2.mul(&gamma.mul(gamma)),
                d2.mul(&two).mul(&gamma.mul(delta)),
                d2.mul(&delta.mul(delta)),
            ],
        ])
    }

    /// Membership of g in H̃_e: the reduced equations M(g)·e = e, decided
    /// exactly.
    pub fn membership(
        &self,
        e: &[RationalFunction; 3],
        g: &MatrixRF,
    ) -> Result<bool, TorsorError> {
        self.check_e(e)?;
        let m = self.transition_matrix(g)?;
        for i in 0..3 {
            let mut acc = RationalFunction::zero();
            for j in 0..3 {
                acc = acc.add(&m[i][j].mul(&e[j]));
            }
            if acc != e[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A rational point on the fiber F(X) = e, when one exists over ℚ
    /// (requires the appropriate coordinate of e to be a rational square).
    pub fn fiber_point(&self, e: &[RationalFunction; 3]) -> Result<MatrixRF, TorsorError> {
        self.check_e(e)?;
        let as_rat = |v: &RationalFunction| -> Result<Rat, TorsorError> {
            v.as_rat().ok_or_else(|| {
                TorsorError::NoRationalFiberPoint(format!("e entry {v} is not rational"))
            })
        };
        let d = as_rat(&e[0])?;
        let s = as_rat(&e[1])?;
        let f = as_rat(&e[2])?;
        let sqrt_rat = |r: &Rat| -> Option<Rat> {
            if r.is_negative() {
                return None;
            }
            let sn = r.numer().sqrt();
            let sd = r.denom().sqrt();
            if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
                Some(Rat::new(sn, sd))
            } else {
                None
            }
        };
        let rf = RationalFunction::from_rat;
        if !d.is_zero() {
            let z = sqrt_rat(&d).ok_or_else(|| {
                TorsorError::NoRationalFiberPoint(format!("{} is not a rational square", rat_to_string(&d)))
            })?;
            // Δ = 1, z = √d, w = s/z; top row chosen to make det = 1.
            let w = s / z.clone();
            let (x, y) = if w.is_zero() {
                (Rat::zero(), -z.clone().recip())
            } else {
                (w.clone().recip(), Rat::zero())
            };
            let m = MatrixRF::new(2, 2, vec![rf(x), rf(y), rf(z.clone()), rf(w)]);
            debug_assert_eq!(self.fiber_value(&m).unwrap(), *e);
            Ok(m)
        } else {
            // d = 0 forces z = 0 and s = 0; need w = √f.
            let w = sqrt_rat(&f).ok_or_else(|| {
                TorsorError::NoRationalFiberPoint(format!("{} is not a rational square", rat_to_string(&f)))
            })?;
            let m = MatrixRF::new(
                2,
                2,
                vec![rf(w.clone().recip()), rf(Rat::zero()), rf(Rat::zero()), rf(w)],
            );
            debug_assert_eq!(self.fiber_value(&m).unwrap(), *e);
            Ok(m)
        }
    }

    /// Sample points of the fiber through x0 as u·x0 for u in the
    /// stabilizer shape [[±1, *], [0, *]].
    pub fn sample_fiber(&self, x0: &MatrixRF, seed: u64, count: usize) -> Vec<MatrixRF> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let y = Rat::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=4)));
            let s = loop {
                let v = rng.gen_range(-9i64..=9);
                if v != 0 {
                    break Rat::from_integer(v.into());
                }
            };
            let u = MatrixRF::new(
                2,
                2,
                vec![
                    RationalFunction::from_int(sign),
                    RationalFunction::from_rat(y),
                    RationalFunction::zero(),
                    RationalFunction::from_rat(s),
                ],
            );
            out.push(u.mul(x0));
        }
        out
    }

    /// Falsification channel: direct evaluation of "F(x) = e ⟹
    /// F(x·g⁻¹) = e" on sampled fiber points.
    pub fn membership_sampled(
        &self,
        e: &[RationalFunction; 3],
        g: &MatrixRF,
        samples: &[MatrixRF],
    ) -> Result<bool, TorsorError> {
        self.check_e(e)?;
        let ginv = g.inverse().ok_or(TorsorError::Singular)?;
        for x in samples {
            debug_assert_eq!(self.fiber_value(x)?, *e, "sample off the fiber");
            let moved = self.fiber_value(&x.mul(&ginv))?;
            if moved != *e {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A panel of members of H̃_e obtained by conjugating stabilizer-shaped
    /// matrices through a fiber point.
    pub fn members_through(&self, x0: &MatrixRF, seed: u64, count: usize) -> Vec<MatrixRF> {
        let x0inv = x0.inverse().expect("fiber points are invertible");
        self.sample_fiber(&MatrixRF::identity(2), seed, count)
            .into_iter()
            .map(|u| x0inv.mul(&u).mul(x0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_matrix;
    use crate::sigma::{DifferenceFieldSpec, SigmaOperator};
    use num::One;

    fn family() -> TorsorFamily2x2 {
        let field = DifferenceFieldSpec::new(
            SigmaOperator::Shift(Rat::one()),
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let a = parse_matrix("[[-1, a],[0, b]]", &field.symbols()).unwrap();
        let sys = LinearDifferenceSystem::new(field, a).unwrap();
        TorsorFamily2x2::new(&sys).unwrap()
    }

    fn rfs(v: [i64; 3]) -> [RationalFunction; 3] {
        v.map(RationalFunction::from_int)
    }

    #[test]
    fn identity_is_a_member() {
        let fam = family();
        let e = rfs([1, 2, 4]); // 2² = 1·4
        assert_eq!(fam.membership(&e, &MatrixRF::identity(2)), Ok(true));
    }

    #[test]
    fn off_variety_rejected() {
        let fam = family();
        let e = rfs([1, 1, 2]);
        assert!(matches!(fam.membership(&e, &MatrixRF::identity(2)), Err(TorsorError::OffVariety(_))));
        let zero = rfs([0, 0, 0]);
        assert!(matches!(fam.check_e(&zero), Err(TorsorError::OffVariety(_))));
    }

    #[test]
    fn fiber_points_and_samples_stay_on_fiber() {
        let fam = family();
        let e = rfs([4, 6, 9]); // 6² = 4·9
        let x0 = fam.fiber_point(&e).unwrap();
        assert_eq!(fam.fiber_value(&x0).unwrap(), e);
        for x in fam.sample_fiber(&x0, 11, 10) {
            assert_eq!(fam.fiber_value(&x).unwrap(), e);
        }
        // d = 0 branch.
        let e0 = rfs([0, 0, 9]);
        let p0 = fam.fiber_point(&e0).unwrap();
        assert_eq!(fam.fiber_value(&p0).unwrap(), e0);
        // Non-square d has no rational point.
        assert!(matches!(
            fam.fiber_point(&rfs([2, 2, 2])),
            Err(TorsorError::NoRationalFiberPoint(_))
        ));
    }

    #[test]
    fn diag_1_minus_1_membership_matches_sampling() {
        let fam = family();
        let e = rfs([4, 6, 9]);
        let x0 = fam.fiber_point(&e).unwrap();
        let samples = fam.sample_fiber(&x0, 5, 20);
        let g = parse_matrix("[[1,0],[0,-1]]", &fam.sys.field.symbols()).unwrap();
        let exact = fam.membership(&e, &g).unwrap();
        let sampled = fam.membership_sampled(&e, &g, &samples).unwrap();
        assert_eq!(exact, sampled);
    }

    #[test]
    fn members_through_fiber_point_are_members() {
        let fam = family();
        let e = rfs([1, 3, 9]);
        let x0 = fam.fiber_point(&e).unwrap();
        for g in fam.members_through(&x0, 3, 8) {
            assert_eq!(fam.membership(&e, &g), Ok(true));
        }
    }

    #[test]
    fn distinct_generic_fibers_have_distinct_groups() {
        let fam = family();
        let e1 = rfs([1, 2, 4]);
        let e2 = rfs([4, 6, 9]);
        let x1 = fam.fiber_point(&e1).unwrap();
        let members = fam.members_through(&x1, 9, 12);
        let witness = members.iter().find(|g| {
            fam.membership(&e1, g) == Ok(true) && fam.membership(&e2, g) == Ok(false)
        });
        assert!(witness.is_some(), "H_e and H_e' should differ for distinct generic e");
    }
}
