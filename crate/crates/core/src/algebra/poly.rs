//! Multivariate polynomials over ℚ with a graded-lexicographic monomial
//! order and a fixed global symbol ordering: `t` first, then parameter
//! symbols, then indexed matrix-entry symbols (`x11`, `g21`, ...) row-major.

use super::Rat;
use num::{BigInt, Integer, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

fn symbol_class(name: &str) -> u8 {
    if name == "t" {
        0
    } else if name.bytes().any(|b| b.is_ascii_digit()) {
        2
    } else {
        1
    }
}

/// Global symbol order: `t`, then digit-free parameter names, then indexed
/// entry names; within a class, lexicographic (row-major for `x11`-style
/// names with single-digit indices).
pub fn symbol_cmp(a: &str, b: &str) -> Ordering {
    (symbol_class(a), a).cmp(&(symbol_class(b), b))
}

/// Exponent vector relative to a polynomial's variable list, compared in
/// graded-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients. No zero
/// coefficients are stored and the variable list contains exactly the
/// symbols that occur, sorted by [`symbol_cmp`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Polynomial { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rat::one());
        Polynomial { vars: vec![name.to_string()], terms }
    }

    /// Build from (coefficient, [(var, exp)]) terms.
    pub fn from_terms(terms: &[(Rat, Vec<(&str, u32)>)]) -> Self {
        let mut acc = Polynomial::zero();
        for (c, m) in terms {
            let mut p = Polynomial::constant(c.clone());
            for (v, e) in m {
                p = p.mul(&Polynomial::var(v).pow(*e));
            }
            acc = acc.add(&p);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.vars.iter().position(|v| v == var) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
        }
    }

    /// Leading coefficient under the graded-lexicographic order.
    pub fn leading_coefficient(&self) -> Rat {
        self.terms.iter().next_back().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn leading_monomial(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    fn drop_unused_vars(mut self) -> Self {
        if self.vars.is_empty() {
            return self;
        }
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| used[i]).collect();
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c))
            .collect();
        Polynomial { vars, terms }
    }

    /// Re-express over a superset of the current variables (sorted).
    fn remap(&self, vars: &[String]) -> BTreeMap<Monomial, Rat> {
        let positions: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("remap: missing variable"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; vars.len()];
                for (i, &p) in positions.iter().enumerate() {
                    e[p] = m.0[i];
                }
                (Monomial(e), c.clone())
            })
            .collect()
    }

    fn merged_vars(&self, other: &Self) -> Vec<String> {
        let mut vars: Vec<String> = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort_by(|a, b| symbol_cmp(a, b));
        vars
    }

    pub fn add(&self, other: &Self) -> Self {
        let vars = self.merged_vars(other);
        let mut terms = self.remap(&vars);
        for (m, c) in other.remap(&vars) {
            let entry = terms.entry(m).or_insert_with(Rat::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { vars, terms }.drop_unused_vars()
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let vars = self.merged_vars(other);
        let a = self.remap(&vars);
        let b = other.remap(&vars);
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let entry = terms.entry(m).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { vars, terms }.drop_unused_vars()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Substitute a polynomial for a single variable.
    pub fn subst(&self, var: &str, value: &Polynomial) -> Polynomial {
        let Some(idx) = self.vars.iter().position(|v| v == var) else {
            return self.clone();
        };
        let mut acc = Polynomial::zero();
        // Cache powers of the replacement.
        let max_e = self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(Polynomial::one());
        for _ in 1..=max_e {
            powers.push(powers.last().unwrap().mul(value));
        }
        for (m, c) in &self.terms {
            let mut rest = vec![0u32; self.vars.len()];
            rest.clone_from_slice(&m.0);
            let e = rest[idx];
            rest[idx] = 0;
            let mut term = Polynomial {
                vars: self.vars.clone(),
                terms: [(Monomial(rest), c.clone())].into_iter().collect(),
            }
            .drop_unused_vars();
            term = term.mul(&powers[e as usize]);
            acc = acc.add(&term);
        }
        acc
    }

    /// Simultaneous substitution of polynomials for several variables.
    pub fn subst_many(&self, map: &BTreeMap<String, Polynomial>) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for (i, v) in self.vars.iter().enumerate() {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                let base = map.get(v).cloned().unwrap_or_else(|| Polynomial::var(v));
                term = term.mul(&base.pow(e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Evaluate with every variable assigned a rational value.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, v) in self.vars.iter().enumerate() {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                let val = assignment.get(v).unwrap_or_else(|| panic!("eval: unassigned variable {v}"));
                term *= super::rat_pow(val, e as i64);
            }
            acc += term;
        }
        acc
    }

    /// Rational content: the `c` with `self = c * P`, `P` integer-primitive
    /// with positive leading coefficient. Zero polynomial has content 0.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut c = Rat::new(num_gcd, den_lcm);
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        c
    }

    /// Integer-primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Coefficients of `self` viewed as univariate in `var`; index = exponent.
    pub fn coeffs_in(&self, var: &str) -> Vec<Polynomial> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Polynomial::zero(); d + 1];
        let idx = self.vars.iter().position(|v| v == var);
        for (m, c) in &self.terms {
            let (e, rest) = match idx {
                None => (0usize, m.0.clone()),
                Some(i) => {
                    let mut r = m.0.clone();
                    let e = r[i] as usize;
                    r[i] = 0;
                    (e, r)
                }
            };
            let part = Polynomial {
                vars: self.vars.clone(),
                terms: [(Monomial(rest), c.clone())].into_iter().collect(),
            }
            .drop_unused_vars();
            out[e] = out[e].add(&part);
        }
        out
    }

    /// Rebuild from univariate-in-`var` coefficients.
    pub fn from_coeffs_in(var: &str, coeffs: &[Polynomial]) -> Polynomial {
        let v = Polynomial::var(var);
        let mut acc = Polynomial::zero();
        for (e, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&v.pow(e as u32)));
        }
        acc
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn divexact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        // Work on raw term maps in one fixed variable space; the Polynomial
        // constructors would re-canonicalize variable lists between steps.
        let vars = self.merged_vars(divisor);
        let mut rem = self.remap(&vars);
        let div = divisor.remap(&vars);
        let (dm, dc) = {
            let (m, c) = div.iter().next_back().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot: BTreeMap<Monomial, Rat> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if rm.0.iter().zip(&dm.0).any(|(a, b)| a < b) {
                return None;
            }
            let qm = Monomial(rm.0.iter().zip(&dm.0).map(|(a, b)| a - b).collect());
            let qc = rc / &dc;
            for (m2, c2) in &div {
                let target = Monomial(qm.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect());
                let entry = rem.entry(target.clone()).or_insert_with(Rat::zero);
                *entry -= &qc * c2;
                if entry.is_zero() {
                    rem.remove(&target);
                }
            }
            quot.insert(qm, qc);
        }
        Some(Polynomial { vars, terms: quot }.drop_unused_vars())
    }
}

/// Pseudo-remainder of `f` by `g` with respect to `var`.
fn prem(f: &Polynomial, g: &Polynomial, var: &str) -> Polynomial {
    let dg = g.degree_in(var);
    debug_assert!(dg > 0);
    let gc = g.coeffs_in(var);
    let lg = gc[dg as usize].clone();
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < dg {
            break;
        }
        let rc = r.coeffs_in(var);
        let lr = rc[dr as usize].clone();
        let shift = Polynomial::var(var).pow(dr - dg);
        r = r.mul(&lg).sub(&lr.mul(&shift).mul(g));
    }
    r
}

fn content_in(p: &Polynomial, var: &str) -> Polynomial {
    let mut c = Polynomial::zero();
    for coeff in p.coeffs_in(var) {
        if !coeff.is_zero() {
            c = poly_gcd(&c, &coeff);
        }
    }
    c
}

/// Multivariate gcd over ℚ via content + primitive-part recursion
/// (primitive pseudo-remainder sequences). The result is integer-primitive
/// with a positive leading coefficient; for coprime inputs it is 1.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    // Main variable: most significant symbol occurring in either operand.
    let vars = a.merged_vars(b);
    let var = vars
        .iter()
        .find(|v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .expect("nonconstant polynomials must have a variable")
        .clone();
    let ca = content_in(a, &var);
    let cb = content_in(b, &var);
    let c = poly_gcd(&ca, &cb);
    let pa = a.divexact(&ca).expect("content divides");
    let pb = b.divexact(&cb).expect("content divides");
    if pa.degree_in(&var) == 0 || pb.degree_in(&var) == 0 {
        // One operand is free of the main variable after removing content.
        return c;
    }
    let (mut f, mut g) = if pa.degree_in(&var) >= pb.degree_in(&var) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&f, &g, &var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&var) == 0 {
            return c;
        }
        f = g;
        g = r.divexact(&content_in(&r, &var)).expect("content divides");
    }
    let pp = g.divexact(&content_in(&g, &var)).expect("content divides");
    c.mul(&pp).primitive()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                parts.push(super::rat_to_string(&mag));
            }
            for (i, v) in self.vars.iter().enumerate() {
                match m.0[i] {
                    0 => {}
                    1 => parts.push(v.clone()),
                    e => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat_frac, rat_of};
    use super::*;

    fn t() -> Polynomial {
        Polynomial::var("t")
    }

    #[test]
    fn arithmetic_examples() {
        // (t+1) + (t-1) = 2t
        let a = t().add(&Polynomial::one());
        let b = t().sub(&Polynomial::one());
        assert_eq!(a.add(&b), t().scale(&rat_of(2)));
        // t * t = t^2
        assert_eq!(t().mul(&t()), t().pow(2));
        // (t^2 - 1) - t^2 = -1, expanded by hand
        let c = t().pow(2).sub(&Polynomial::one());
        assert_eq!(c.sub(&t().pow(2)), Polynomial::constant(rat_of(-1)));
    }

    #[test]
    fn symbol_order_is_t_params_entries() {
        assert_eq!(symbol_cmp("t", "a"), Ordering::Less);
        assert_eq!(symbol_cmp("a", "x11"), Ordering::Less);
        assert_eq!(symbol_cmp("x11", "x12"), Ordering::Less);
        assert_eq!(symbol_cmp("x12", "x21"), Ordering::Less);
        let p = Polynomial::var("x11").mul(&Polynomial::var("a")).mul(&t());
        assert_eq!(p.vars(), &["t".to_string(), "a".to_string(), "x11".to_string()]);
    }

    #[test]
    fn content_and_primitive() {
        let p = t().scale(&rat_of(2)).add(&Polynomial::constant(rat_of(2)));
        assert_eq!(p.content(), rat_of(2));
        assert_eq!(p.primitive(), t().add(&Polynomial::one()));
        let q = t().scale(&rat_frac(-1, 2));
        assert_eq!(q.content(), rat_frac(-1, 2));
        assert_eq!(q.primitive(), t());
    }

    #[test]
    fn gcd_univariate() {
        // gcd(t^2-1, t-1) = t-1
        let a = t().pow(2).sub(&Polynomial::one());
        let b = t().sub(&Polynomial::one());
        assert_eq!(poly_gcd(&a, &b), b);
        // gcd(2t+2, 4) = 1 over the field
        let c = t().scale(&rat_of(2)).add(&Polynomial::constant(rat_of(2)));
        assert_eq!(poly_gcd(&c, &Polynomial::constant(rat_of(4))), Polynomial::one());
    }

    #[test]
    fn gcd_multivariate() {
        let x = Polynomial::var("x11");
        let a = t().add(&x.clone()); // t + x
        let b = t().sub(&x.clone()); // t - x
        let f = a.mul(&b); // t^2 - x^2
        let g = a.mul(&a); // (t+x)^2
        assert_eq!(poly_gcd(&f, &g), a);
    }

    #[test]
    fn divexact_detects_non_divisor() {
        let a = t().pow(2).sub(&Polynomial::one());
        let b = t().sub(&Polynomial::one());
        assert_eq!(a.divexact(&b).unwrap(), t().add(&Polynomial::one()));
        assert!(t().pow(2).add(&Polynomial::one()).divexact(&b).is_none());
    }

    #[test]
    fn substitution() {
        // t^2 with t -> t+1 gives t^2 + 2t + 1
        let p = t().pow(2);
        let shifted = p.subst("t", &t().add(&Polynomial::one()));
        let expected = t().pow(2).add(&t().scale(&rat_of(2))).add(&Polynomial::one());
        assert_eq!(shifted, expected);
    }

    #[test]
    fn display_is_descending_grlex() {
        let p = t().pow(2).sub(&t().scale(&rat_of(3))).add(&Polynomial::constant(rat_frac(1, 2)));
        assert_eq!(p.to_string(), "t^2 - 3*t + 1/2");
    }
}
