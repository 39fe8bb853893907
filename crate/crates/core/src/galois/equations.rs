//! Emission of the group presentation: the σ-conjugation equation and, for
//! each invariant, the coefficient-wise polynomial equations of
//! h(gX) = h(X) in the entries of g.

use super::invariant::{stabilizer_check, verify_invariant, Invariant};
use super::lattice::CharacterLattice;
use super::{
    entry_name, entry_names, eval_poly, group_entry_name, GaloisError, LinearDifferenceSystem,
};
use crate::algebra::{MatrixRF, Polynomial, RationalFunction};
use std::collections::BTreeMap;

/// A human- and machine-readable presentation of the group: σ-conjugation
/// equations per entry of g, plus polynomial equations in g11..gnn (and the
/// field symbols) that vanish exactly on the stabilizer of the invariants.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub sigma_equations: Vec<String>,
    pub equations: Vec<Polynomial>,
    pub invariants: Vec<Invariant>,
    /// Character lattice of the eigenvalues, in the diagonalizable
    /// constant-matrix case.
    pub lattice: Option<CharacterLattice>,
}

impl GroupPresentation {
    pub fn equation_strings(&self) -> Vec<String> {
        self.equations.iter().map(|e| format!("{e} = 0")).collect()
    }

    pub fn with_lattice(mut self, lattice: CharacterLattice) -> Self {
        self.lattice = Some(lattice);
        self
    }
}

/// Substitute X ↦ G·X with symbolic g-entries (no denominators arise).
fn subst_symbolic_g(p: &Polynomial, n: usize) -> Polynomial {
    let mut map: BTreeMap<String, Polynomial> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero();
            for k in 0..n {
                acc = acc.add(
                    &Polynomial::var(&group_entry_name(i, k))
                        .mul(&Polynomial::var(&entry_name(k, j))),
                );
            }
            map.insert(entry_name(i, j), acc);
        }
    }
    p.subst_many(&map)
}

fn det_g_poly(n: usize) -> Polynomial {
    let mat: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| (0..n).map(|j| Polynomial::var(&group_entry_name(i, j))).collect())
        .collect();
    super::poly_det(&mat)
}

/// Coefficients of a polynomial grouped by its monomial part in the given
/// variables; each value is the cofactor polynomial in the other symbols.
fn group_by_vars(p: &Polynomial, vars: &[String]) -> BTreeMap<Vec<u32>, Polynomial> {
    let mut out: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
    let positions: Vec<Option<usize>> =
        vars.iter().map(|v| p.vars().iter().position(|w| w == v)).collect();
    for (m, c) in p.terms() {
        let key: Vec<u32> = positions.iter().map(|o| o.map(|i| m.0[i]).unwrap_or(0)).collect();
        let mono: Vec<(&str, u32)> = p
            .vars()
            .iter()
            .zip(&m.0)
            .filter(|(v, &e)| e > 0 && !vars.contains(v))
            .map(|(v, &e)| (v.as_str(), e))
            .collect();
        let term = Polynomial::from_terms(&[(c.clone(), mono)]);
        let entry = out.entry(key).or_insert_with(Polynomial::zero);
        *entry = entry.add(&term);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Emit the presentation: every invariant must verify, and the emitted
/// equations characterize the stabilizer exactly (the round-trip with
/// [`stabilizer_check`] is a test invariant).
pub fn emit_group_equations(
    sys: &LinearDifferenceSystem,
    invariants: &[Invariant],
) -> Result<GroupPresentation, GaloisError> {
    for inv in invariants {
        if !verify_invariant(sys, inv) {
            return Err(GaloisError::Unsupported(format!(
                "h = ({})/det^{} is not invariant; only verified invariants can be emitted",
                inv.p, inv.det_exponent
            )));
        }
    }
    // σ(g) = A·g·A⁻¹ rendered entrywise.
    let n = sys.n;
    let g_sym = MatrixRF::from_fn(n, n, |i, j| RationalFunction::var(&group_entry_name(i, j)));
    let conj = sys.a.mul(&g_sym).mul(&sys.a.inverse().expect("system matrix is invertible"));
    let sigma_equations: Vec<String> = (0..n)
        .flat_map(|i| {
            let conj = conj.clone();
            (0..n).map(move |j| {
                format!("sigma({}) = {}", group_entry_name(i, j), conj.at(i, j))
            })
        })
        .collect();

    let xvars = entry_names(n);
    let detg = det_g_poly(n);
    let mut equations: Vec<Polynomial> = Vec::new();
    for inv in invariants {
        // p(GX) − det(G)^k · p(X), coefficients collected per X-monomial.
        let defect = subst_symbolic_g(&inv.p, n).sub(&detg.pow(inv.det_exponent).mul(&inv.p));
        for (_xmono, coeff) in group_by_vars(&defect, &xvars) {
            let eq = coeff.primitive();
            if !equations.contains(&eq) {
                equations.push(eq);
            }
        }
    }
    equations.sort();
    Ok(GroupPresentation { sigma_equations, equations, invariants: invariants.to_vec(), lattice: None })
}

/// Whether a concrete g satisfies every emitted polynomial equation.
pub fn satisfies_presentation(
    sys: &LinearDifferenceSystem,
    presentation: &GroupPresentation,
    g: &MatrixRF,
) -> bool {
    let n = sys.n;
    let mut map: BTreeMap<String, RationalFunction> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            map.insert(group_entry_name(i, j), g.at(i, j).clone());
        }
    }
    presentation.equations.iter().all(|eq| eval_poly(eq, &map).is_zero())
}

/// Convenience: the stabilizer agreement the presentation promises.
pub fn roundtrip_agrees(
    sys: &LinearDifferenceSystem,
    presentation: &GroupPresentation,
    g: &MatrixRF,
) -> Result<bool, GaloisError> {
    let direct = stabilizer_check(sys, &presentation.invariants, g)?;
    Ok(direct == satisfies_presentation(sys, presentation, g))
}
