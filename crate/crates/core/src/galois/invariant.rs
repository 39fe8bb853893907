//! Invariant functions h = p/det(X)^k with h = h^σ∘A, found by exact linear
//! algebra on a bounded monomial basis, and the stabilizer check h(gX) = h(X).

use super::{
    clear_matrix, entry_names, subst_x_linear, x_components, Cleared, GaloisError,
    LinearDifferenceSystem,
};
use crate::algebra::{q_kernel, Polynomial, Rat};
use num::{One, Zero};
use std::collections::BTreeMap;

/// An invariant h(X) = p(X)/det(X)^k: p has coefficients in ℚ[t][parameters]
/// and satisfies p^σ(A·X) = det(A)^k · p(X) exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub p: Polynomial,
    pub det_exponent: u32,
}

/// Search bounds: X-entry degree, determinant exponent, t-degree and
/// parameter degree of the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub entry_degree: u32,
    pub det_exponent_max: u32,
    pub t_degree: u32,
    pub param_degree: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { entry_degree: 4, det_exponent_max: 2, t_degree: 4, param_degree: 2 }
    }
}

pub(crate) const BASIS_GUARD: usize = 20000;

/// Exponent vectors of total degree exactly `deg` in `n` slots.
fn exponents_of_degree(n: usize, deg: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=deg {
        for mut rest in exponents_of_degree(n - 1, deg - first) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn exponents_up_to_degree(n: usize, deg: u32) -> Vec<Vec<u32>> {
    (0..=deg).flat_map(|d| exponents_of_degree(n, d)).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of monomials in one (X-degree, k) slice, used to enforce the
/// basis guard before any expensive work starts.
fn basis_size(n: usize, x_degree: u32, bounds: &SearchBounds, n_params: usize) -> usize {
    let x_count = binomial(n * n + x_degree as usize - 1, x_degree as usize);
    let p_count: usize = if n_params == 0 {
        1
    } else {
        (0..=bounds.param_degree)
            .map(|d| binomial(n_params + d as usize - 1, d as usize))
            .sum()
    };
    x_count
        .saturating_mul(bounds.t_degree as usize + 1)
        .saturating_mul(p_count)
}

/// The monomial basis for one (X-degree, k) slice: X-monomials of the given
/// homogeneous degree times t-powers and parameter monomials within bounds.
fn monomial_basis(
    sys: &LinearDifferenceSystem,
    x_degree: u32,
    bounds: &SearchBounds,
) -> Result<Vec<Polynomial>, GaloisError> {
    let xvars = entry_names(sys.n);
    let params = &sys.field.parameters;
    let x_exps = exponents_of_degree(xvars.len(), x_degree);
    let p_exps = exponents_up_to_degree(params.len(), bounds.param_degree);
    let size = x_exps.len() * (bounds.t_degree as usize + 1) * p_exps.len();
    if size > BASIS_GUARD {
        return Err(GaloisError::BasisGuard { size, guard: BASIS_GUARD });
    }
    let mut out = Vec::with_capacity(size);
    for xe in &x_exps {
        for td in 0..=bounds.t_degree {
            for pe in &p_exps {
                let mut mono: Vec<(&str, u32)> = Vec::new();
                if td > 0 {
                    mono.push(("t", td));
                }
                for (p, &e) in params.iter().zip(pe) {
                    if e > 0 {
                        mono.push((p.as_str(), e));
                    }
                }
                for (v, &e) in xvars.iter().zip(xe) {
                    if e > 0 {
                        mono.push((v.as_str(), e));
                    }
                }
                out.push(Polynomial::from_terms(&[(Rat::one(), mono)]));
            }
        }
    }
    Ok(out)
}

/// The defect p^σ(A·X) − det(A)^k·p(X) of a homogeneous component, with all
/// denominators cleared: subst(p^σ)·den^{nk} − det_num^k·den^δ·p.
fn invariance_defect(
    sys: &LinearDifferenceSystem,
    cl: &Cleared,
    p: &Polynomial,
    x_degree: u32,
    k: u32,
) -> Polynomial {
    let sigma_p = sys.field.sigma_apply_poly(p);
    let lhs = subst_x_linear(&sigma_p, cl, sys.n).mul(&cl.den.pow(sys.n as u32 * k));
    let rhs = cl.det_num.pow(k).mul(&cl.den.pow(x_degree)).mul(p);
    lhs.sub(&rhs)
}

/// Exact check of p^σ(A·X) = det(A)^k·p(X), σ applied to coefficients only.
/// Splits into homogeneous X-components, which the condition preserves.
pub fn verify_invariant(sys: &LinearDifferenceSystem, inv: &Invariant) -> bool {
    let cl = clear_matrix(&sys.a);
    x_components(&inv.p, sys.n)
        .iter()
        .all(|(&deg, comp)| invariance_defect(sys, &cl, comp, deg, inv.det_exponent).is_zero())
}

/// Search the bounded coefficient space for invariants, one exact linear
/// solve per (determinant exponent, homogeneous degree) pair; results are
/// re-verified and ordered by (k, degree).
pub fn invariant_search(
    sys: &LinearDifferenceSystem,
    bounds: &SearchBounds,
) -> Result<Vec<Invariant>, GaloisError> {
    let cl = clear_matrix(&sys.a);
    // Guard every slice up front: no solve starts if any basis is too big.
    for x_degree in 0..=bounds.entry_degree {
        let size = basis_size(sys.n, x_degree, bounds, sys.field.parameters.len());
        if size > BASIS_GUARD {
            return Err(GaloisError::BasisGuard { size, guard: BASIS_GUARD });
        }
    }
    let mut out = Vec::new();
    for k in 0..=bounds.det_exponent_max {
        for x_degree in 0..=bounds.entry_degree {
            if k == 0 && x_degree == 0 {
                continue; // constants
            }
            let basis = monomial_basis(sys, x_degree, bounds)?;
            // Defects are linear in p: collect the matrix of their
            // coefficients over all monomials appearing anywhere. Rows are
            // keyed by the canonical (variable, exponent) form so that
            // polynomials with different variable lists share rows.
            let defects: Vec<Polynomial> = basis
                .iter()
                .map(|b| invariance_defect(sys, &cl, b, x_degree, k))
                .collect();
            let mut row_index: BTreeMap<Vec<(String, u32)>, usize> = BTreeMap::new();
            for d in &defects {
                for (m, _) in d.terms() {
                    let key = term_key(d, m);
                    let next = row_index.len();
                    row_index.entry(key).or_insert(next);
                }
            }
            if row_index.is_empty() {
                // Every basis monomial is invariant; only possible when the
                // basis is empty or the defect vanishes identically.
                for b in basis {
                    out.push(Invariant { p: b, det_exponent: k });
                }
                continue;
            }
            let mut rows = vec![vec![Rat::zero(); basis.len()]; row_index.len()];
            for (col, d) in defects.iter().enumerate() {
                for (m, c) in d.terms() {
                    rows[row_index[&term_key(d, m)]][col] = c.clone();
                }
            }
            for vec in q_kernel(&rows) {
                let mut p = Polynomial::zero();
                for (c, b) in vec.iter().zip(&basis) {
                    if !c.is_zero() {
                        p = p.add(&b.scale(c));
                    }
                }
                let inv = Invariant { p, det_exponent: k };
                assert!(verify_invariant(sys, &inv), "solver output must re-verify");
                out.push(inv);
            }
        }
    }
    Ok(out)
}

/// Canonical monomial key, independent of the polynomial's variable list.
pub(crate) fn term_key(p: &Polynomial, m: &crate::algebra::Monomial) -> Vec<(String, u32)> {
    p.vars()
        .iter()
        .zip(&m.0)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| (v.clone(), e))
        .collect()
}

/// Exact check that h(g·X) = h(X) for every listed invariant, as rational
/// function identities in the matrix indeterminates.
pub fn stabilizer_check(
    sys: &LinearDifferenceSystem,
    invariants: &[Invariant],
    g: &crate::algebra::MatrixRF,
) -> Result<bool, GaloisError> {
    if g.det().is_zero() {
        return Err(GaloisError::SingularInput);
    }
    let cl = clear_matrix(g);
    for inv in invariants {
        for (&deg, comp) in x_components(&inv.p, sys.n).iter() {
            // p(gX)·den^{nk} = det_num^k·den^δ·p, with no σ.
            let lhs =
                subst_x_linear(comp, &cl, sys.n).mul(&cl.den.pow(sys.n as u32 * inv.det_exponent));
            let rhs = cl.det_num.pow(inv.det_exponent).mul(&cl.den.pow(deg)).mul(comp);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_matrix, parse_rational_function, MatrixRF};
    use crate::sigma::{DifferenceFieldSpec, SigmaOperator};

    fn shift_ab() -> DifferenceFieldSpec {
        DifferenceFieldSpec::new(SigmaOperator::Shift(Rat::one()), vec!["a".into(), "b".into()])
            .unwrap()
    }

    fn example_2x2() -> LinearDifferenceSystem {
        let field = shift_ab();
        let a = parse_matrix("[[-1, a],[0, b]]", &field.symbols()).unwrap();
        LinearDifferenceSystem::new(field, a).unwrap()
    }

    fn sys_1d(a_text: &str) -> LinearDifferenceSystem {
        let field = DifferenceFieldSpec::shift1();
        let a = parse_matrix(&format!("[[{a_text}]]"), &field.symbols()).unwrap();
        LinearDifferenceSystem::new(field, a).unwrap()
    }

    fn poly(text: &str, syms: &[&str]) -> Polynomial {
        let names: Vec<String> = syms.iter().map(|s| s.to_string()).collect();
        let rf = parse_rational_function(text, &names).unwrap();
        assert!(rf.den().is_constant());
        rf.num().scale(&rf.den().as_constant().unwrap().recip())
    }

    #[test]
    fn det_is_invariant_with_k_one() {
        // For A = [[-1,a],[0,b]]: (det X)^σ(AX) = -b·det X, so (det, k=1).
        let sys = example_2x2();
        let det = super::super::det_x_poly(2);
        assert!(verify_invariant(&sys, &Invariant { p: det, det_exponent: 1 }));
    }

    #[test]
    fn constant_one_and_non_invariant() {
        let sys = sys_1d("4");
        assert!(verify_invariant(&sys, &Invariant { p: Polynomial::one(), det_exponent: 0 }));
        // p = x11 with A = diag(4): 4·x11 ≠ x11.
        assert!(!verify_invariant(&sys, &Invariant { p: Polynomial::var("x11"), det_exponent: 0 }));
    }

    #[test]
    fn search_finds_square_for_minus_one() {
        let sys = sys_1d("-1");
        let bounds = SearchBounds { entry_degree: 2, det_exponent_max: 0, t_degree: 0, param_degree: 0 };
        let found = invariant_search(&sys, &bounds).unwrap();
        assert!(found.iter().any(|i| i.det_exponent == 0 && i.p == Polynomial::var("x11").pow(2)));
    }

    #[test]
    fn search_finds_t_over_x_for_shift_example() {
        // A = (t+1)/t: h = t/x is invariant, i.e. p = t with k = 1.
        let sys = sys_1d("(t+1)/t");
        let bounds = SearchBounds { entry_degree: 1, det_exponent_max: 1, t_degree: 1, param_degree: 0 };
        let found = invariant_search(&sys, &bounds).unwrap();
        let t = Polynomial::var("t");
        assert!(found.iter().any(|i| i.det_exponent == 1 && i.p == t));
    }

    #[test]
    fn quadratic_bottom_row_invariants() {
        // Degree-2, k=2 space contains z², zw, w² (z = x21, w = x22).
        let sys = example_2x2();
        let bounds = SearchBounds { entry_degree: 2, det_exponent_max: 2, t_degree: 0, param_degree: 0 };
        let found = invariant_search(&sys, &bounds).unwrap();
        let at_k2: Vec<&Invariant> = found.iter().filter(|i| i.det_exponent == 2).collect();
        for text in ["x21^2", "x21*x22", "x22^2"] {
            let target = poly(text, &["x21", "x22"]);
            assert!(
                at_k2.iter().any(|i| i.p == target),
                "missing invariant {text}; found {:?}",
                at_k2.iter().map(|i| i.p.to_string()).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn additional_invariant_with_fixed_parameters() {
        // ((b+1)x - a z)² is invariant with k = 0 when σ fixes a, b.
        let sys = example_2x2();
        let target = poly("((b+1)*x11 - a*x21)^2", &["a", "b", "x11", "x21"]);
        assert!(verify_invariant(&sys, &Invariant { p: target, det_exponent: 0 }));
    }

    #[test]
    fn stabilizer_accepts_and_rejects() {
        let sys = example_2x2();
        let invariants: Vec<Invariant> = ["x21^2", "x21*x22", "x22^2"]
            .iter()
            .map(|s| Invariant { p: poly(s, &["x21", "x22"]), det_exponent: 2 })
            .collect();
        for inv in &invariants {
            assert!(verify_invariant(&sys, inv));
        }
        let id = MatrixRF::identity(2);
        assert_eq!(stabilizer_check(&sys, &invariants, &id), Ok(true));
        let good = parse_matrix("[[-1, 7],[0, 5]]", &sys.field.symbols()).unwrap();
        assert_eq!(stabilizer_check(&sys, &invariants, &good), Ok(true));
        let bad = parse_matrix("[[2, 0],[0, 1]]", &sys.field.symbols()).unwrap();
        assert_eq!(stabilizer_check(&sys, &invariants, &bad), Ok(false));
        let singular = parse_matrix("[[1, 1],[1, 1]]", &sys.field.symbols()).unwrap();
        assert!(stabilizer_check(&sys, &invariants, &singular).is_err());
    }

    #[test]
    fn basis_guard_trips() {
        let sys = example_2x2();
        let bounds = SearchBounds { entry_degree: 12, det_exponent_max: 0, t_degree: 12, param_degree: 6 };
        assert!(matches!(invariant_search(&sys, &bounds), Err(GaloisError::BasisGuard { .. })));
    }
}
