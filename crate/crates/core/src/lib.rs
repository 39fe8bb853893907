//! Exact symbolic toolkit for definable Galois groups of linear difference
//! equations, together with a finite-model engine for internality and
//! binding groups.
//!
//! The crate has four layers:
//!
//! - [`algebra`]: exact arithmetic — arbitrary-precision rationals,
//!   multivariate polynomials, rational functions, matrices, and integer
//!   lattice kernels in Hermite normal form.
//! - [`sigma`]: difference-field carriers (ℚ(t) with a shift or q-dilation
//!   operator, plus fixed parameter symbols) and the decision procedure for
//!   σ-quotients a^m = σ(r)/r with its order-1 group classification.
//! - [`internality`]: finite internality structures, the derived sets and
//!   composition maps, three independent first-order computations of the
//!   automorphism group, Δ-restricted subgroups, orbits, the opposite
//!   groupoid, and brute-force oracles.
//! - [`galois`]: the Galois group of σ(y) = Ay — σ-conjugation checks,
//!   multiplicative character lattices, invariant-function search, group
//!   equation emission, torsor families, and Picard–Vessiot σ-stability.
//!
//! The [`cli`] module exposes every computation as a subcommand with JSON
//! input and output; `src/bin/diffgal.rs` is a thin wrapper around
//! [`cli::run`]. The `examples/` directory has one runnable example per
//! capability.

pub mod algebra;
pub mod cli;
pub mod galois;
pub mod internality;
pub mod sigma;

pub use algebra::{IntMatrix, MatrixRF, Polynomial, Rat, RationalFunction};
pub use sigma::{DifferenceFieldSpec, SigmaOperator};
