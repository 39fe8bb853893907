//! Reduced rational functions over ℚ in any set of symbols.

use super::poly::{poly_gcd, Polynomial};
use super::Rat;
use num::{One, Zero};
use std::fmt;

/// Quotient of two polynomials in canonical form: numerator and denominator
/// coprime, both of the shape (reduced rational scalar) × (integer-primitive
/// polynomial), with the scalar's denominator attached to the denominator so
/// that the denominator's leading coefficient is a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Build and normalize `num/den`. Panics if `den` is zero; use
    /// [`RationalFunction::checked_new`] for fallible construction.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        Self::checked_new(num, den).expect("zero denominator")
    }

    pub fn checked_new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RationalFunction { num: Polynomial::zero(), den: Polynomial::one() });
        }
        let g = poly_gcd(&num, &den);
        let num = num.divexact(&g).expect("gcd divides");
        let den = den.divexact(&g).expect("gcd divides");
        // Fold the rational contents into a single reduced fraction p/q and
        // distribute: numerator carries p, denominator carries q > 0.
        let cn = num.content();
        let cd = den.content();
        let scalar = cn / cd; // reduced, positive denominator
        let num = num.primitive().scale(&Rat::from_integer(scalar.numer().clone()));
        let den = den.primitive().scale(&Rat::from_integer(scalar.denom().clone()));
        Some(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: Polynomial::one(), den: Polynomial::one() }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::new(Polynomial::constant(r), Polynomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(super::rat_of(n))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Polynomial::var(name))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational function");
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut result = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        result
    }

    /// Substitute a polynomial for a variable in numerator and denominator.
    pub fn subst(&self, var: &str, value: &Polynomial) -> Self {
        Self::new(self.num.subst(var, value), self.den.subst(var, value))
    }

    /// Evaluate at rational values for all variables. `None` if the
    /// denominator vanishes at the point.
    pub fn eval(&self, assignment: &std::collections::BTreeMap<String, Rat>) -> Option<Rat> {
        let d = self.den.eval(assignment);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(assignment) / d)
    }

    /// All symbols appearing in the reduced form.
    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.num.vars().to_vec();
        for w in self.den.vars() {
            if !v.contains(w) {
                v.push(w.clone());
            }
        }
        v.sort_by(|a, b| super::poly::symbol_cmp(a, b));
        v
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Polynomial| -> String {
            let s = p.to_string();
            if p.num_terms() > 1 || s.contains('*') || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_constant() && self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}
