//! The Picard–Vessiot ring R = k[X, 1/det X] with σ(X) = A·X: push
//! elements through σ, and certify that ideals generated by invariant level
//! sets are difference ideals (σ(I) ⊆ I), with explicit failure witnesses
//! for non-invariant generators.
//!
//! Run with: cargo run --example pv_stability

use diffgal::algebra::{parse_matrix, Polynomial, Rat, RationalFunction};
use diffgal::galois::{
    det_x_poly, difference_ideal_stability, pv_sigma, pv_sigma_inv, unit_multiple_check,
    Invariant, LinearDifferenceSystem, PvElement,
};
use diffgal::sigma::{DifferenceFieldSpec, SigmaOperator};
use num::One;

fn main() {
    let field = DifferenceFieldSpec::new(
        SigmaOperator::Shift(Rat::one()),
        vec!["a".into(), "b".into(), "d".into(), "e".into(), "f".into()],
    )
    .unwrap();
    let a = parse_matrix("[[-1, a],[0, b]]", &field.symbols()).unwrap();
    let sys = LinearDifferenceSystem::new(field.clone(), a).unwrap();

    // σ(det X) = det(A)·det(X) = -b·det(X).
    let det = PvElement::from_poly(det_x_poly(2), 0);
    println!("sigma(det X) = {}", pv_sigma(&sys, &det));

    // σ is invertible on R.
    let el = PvElement::from_poly(
        Polynomial::var("x11").mul(&Polynomial::var("t")).add(&Polynomial::var("x22")),
        1,
    );
    let image = pv_sigma(&sys, &el);
    println!("sigma({el}) = {image}");
    println!("sigma^-1 recovers the input: {}", pv_sigma_inv(&sys, &image).eq_in_ring(&el, 2));

    // Level-set generators of the quadratic invariants map to unit
    // multiples of themselves: the ideal is a difference ideal.
    let z = Polynomial::var("x21");
    let w = Polynomial::var("x22");
    let invariants = vec![
        Invariant { p: z.pow(2), det_exponent: 2 },
        Invariant { p: z.mul(&w), det_exponent: 2 },
        Invariant { p: w.pow(2), det_exponent: 2 },
    ];
    let constants =
        vec![RationalFunction::var("d"), RationalFunction::var("e"), RationalFunction::var("f")];
    match difference_ideal_stability(&sys, &invariants, &constants).unwrap() {
        Ok(()) => println!("generators z^2 - d*det^2, zw - e*det^2, w^2 - f*det^2: sigma-stable"),
        Err(witness) => println!("unexpected failure: {witness}"),
    }

    // A non-invariant generator fails with a witness: for A = diag(4),
    // sigma(x11 - 1) = 4*x11 - 1 is no unit multiple of x11 - 1.
    let plain = DifferenceFieldSpec::shift1();
    let sys4 = LinearDifferenceSystem::new(
        plain.clone(),
        parse_matrix("[[4]]", &plain.symbols()).unwrap(),
    )
    .unwrap();
    let gen = Polynomial::var("x11").sub(&Polynomial::one());
    println!("{}", unit_multiple_check(&sys4, 0, &gen).unwrap_err());
}
