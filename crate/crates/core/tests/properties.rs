//! Property tests for the algebra and difference-field layers.

use diffgal::algebra::{
    int_kernel, lattice_hnf, poly_gcd, rat_frac, IntMatrix, MatrixRF, Polynomial, Rat,
    RationalFunction,
};
use diffgal::sigma::DifferenceFieldSpec;
use num::{BigInt, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat_frac(n, d))
}

/// Polynomials in t with a few small terms.
fn small_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((small_rat(), 0u32..4), 1..4).prop_map(|terms| {
        let mut acc = Polynomial::zero();
        for (c, e) in terms {
            acc = acc.add(&Polynomial::from_terms(&[(c, vec![("t", e)])]));
        }
        acc
    })
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn small_rf() -> impl Strategy<Value = RationalFunction> {
    (small_poly(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d))
}

fn nonzero_rf() -> impl Strategy<Value = RationalFunction> {
    small_rf().prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Field axioms hold exactly on random rational-function triples.
    #[test]
    fn addition_is_associative(a in small_rf(), b in small_rf(), c in small_rf()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_distributes(a in small_rf(), b in small_rf(), c in small_rf()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn multiplicative_inverses(a in nonzero_rf()) {
        prop_assert_eq!(a.mul(&a.recip()), RationalFunction::one());
    }

    // Normalization is idempotent.
    #[test]
    fn normalization_idempotent(a in small_rf()) {
        let again = RationalFunction::new(a.num().clone(), a.den().clone());
        prop_assert_eq!(a, again);
    }

    // gcd divides both operands exactly.
    #[test]
    fn gcd_divides(a in nonzero_poly(), b in nonzero_poly()) {
        let g = poly_gcd(&a, &b);
        prop_assert!(a.divexact(&g).is_some());
        prop_assert!(b.divexact(&g).is_some());
    }

    // σ is a field homomorphism and composes with its inverse to identity.
    #[test]
    fn sigma_is_a_homomorphism(a in small_rf(), b in small_rf()) {
        let spec = DifferenceFieldSpec::shift1();
        prop_assert_eq!(spec.sigma_apply(&a.add(&b)), spec.sigma_apply(&a).add(&spec.sigma_apply(&b)));
        prop_assert_eq!(spec.sigma_apply(&a.mul(&b)), spec.sigma_apply(&a).mul(&spec.sigma_apply(&b)));
        prop_assert_eq!(spec.sigma_apply_inv(&spec.sigma_apply(&a)), a);
    }

    // Determinants are multiplicative on random 2×2 matrices.
    #[test]
    fn det_multiplicative_2x2(xs in proptest::collection::vec(small_rat(), 8)) {
        let a = MatrixRF::from_rats(&[xs[0..2].to_vec(), xs[2..4].to_vec()]);
        let b = MatrixRF::from_rats(&[xs[4..6].to_vec(), xs[6..8].to_vec()]);
        prop_assert_eq!(a.mul(&b).det(), a.det().mul(&b.det()));
    }

    #[test]
    fn det_multiplicative_3x3(xs in proptest::collection::vec(-6i64..=6, 18)) {
        let row = |s: &[i64]| s.iter().map(|&v| Rat::from_integer(v.into())).collect::<Vec<_>>();
        let a = MatrixRF::from_rats(&[row(&xs[0..3]), row(&xs[3..6]), row(&xs[6..9])]);
        let b = MatrixRF::from_rats(&[row(&xs[9..12]), row(&xs[12..15]), row(&xs[15..18])]);
        prop_assert_eq!(a.mul(&b).det(), a.det().mul(&b.det()));
    }

    // Every integer kernel basis vector satisfies m·v = 0, and the HNF
    // basis only depends on the lattice.
    #[test]
    fn int_kernel_annihilates(entries in proptest::collection::vec(-5i64..=5, 6)) {
        let m = IntMatrix::from_i64(&[entries[0..3].to_vec(), entries[3..6].to_vec()]);
        let k = int_kernel(&m);
        for v in k.columns() {
            prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn hnf_is_basis_invariant(entries in proptest::collection::vec(-4i64..=4, 6)) {
        let to_big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let g1 = to_big(&entries[0..3]);
        let g2 = to_big(&entries[3..6]);
        // Same lattice from different generating sets.
        let sum: Vec<BigInt> = g1.iter().zip(&g2).map(|(a, b)| a + b).collect();
        let h1 = lattice_hnf(&[g1.clone(), g2.clone()]);
        let h2 = lattice_hnf(&[g2, sum, g1]);
        prop_assert_eq!(h1, h2);
    }
}
