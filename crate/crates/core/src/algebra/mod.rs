//! Exact arithmetic foundation: arbitrary-precision rationals, multivariate
//! polynomials over ℚ, reduced rational functions, matrices over the rational
//! function field, and integer-lattice kernels in Hermite normal form.

mod expr;
mod intlin;
mod matrix;
mod poly;
mod ratfun;

pub use expr::{parse_matrix, parse_rational_function, ParseError};
pub use intlin::{int_kernel, lattice_contains, lattice_hnf, q_kernel, IntMatrix};
pub use matrix::MatrixRF;
pub use poly::{poly_gcd, symbol_cmp, Monomial, Polynomial};
pub use ratfun::RationalFunction;

use num::BigRational;

/// Arbitrary-precision rational scalar. Always stored reduced with a
/// positive denominator.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_of(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Rational from a numerator/denominator pair.
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Raise a rational to a signed integer power. Zero base with a negative
/// exponent panics.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    use num::{One, Zero};
    if exp == 0 {
        return Rat::one();
    }
    let mut result = Rat::one();
    let mut b = if exp < 0 {
        assert!(!base.is_zero(), "zero base with negative exponent");
        base.recip()
    } else {
        base.clone()
    };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

/// Render a rational as `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    use num::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_pow_signed() {
        assert_eq!(rat_pow(&rat_of(2), 10), rat_of(1024));
        assert_eq!(rat_pow(&rat_of(2), -2), rat_frac(1, 4));
        assert_eq!(rat_pow(&rat_frac(-2, 3), 3), rat_frac(-8, 27));
        assert_eq!(rat_pow(&rat_of(7), 0), rat_of(1));
    }
}
