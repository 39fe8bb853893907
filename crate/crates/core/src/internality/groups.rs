//! Three independent first-order computations of the automorphism group of
//! an internality structure, plus the exhaustive permutation-pair oracle.

use super::derived::DerivedStructure;
use super::structure::FiniteInternality;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A pair of permutations (τ_Q, τ_X) with f(τ_Q(q), τ_X(x)) = f(q, x).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AutPair {
    pub tau_q: Vec<usize>,
    pub tau_x: Vec<usize>,
}

/// A group element carried by F, with its actions on Q and on X.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupElement {
    pub f_index: usize,
    pub tau_q: Vec<usize>,
    pub tau_x: Vec<usize>,
}

/// The definable automorphism group, as a sorted list of elements closed
/// under composition and inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BindingGroup {
    pub elements: Vec<GroupElement>,
}

impl BindingGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn pair_set(&self) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
        self.elements.iter().map(|e| (e.tau_q.clone(), e.tau_x.clone())).collect()
    }

    /// Index of the element with the given Q-permutation.
    pub fn find_by_tau_q(&self, tau_q: &[usize]) -> Option<usize> {
        self.elements.iter().position(|e| e.tau_q == tau_q)
    }

    /// Composition g1·g2 ("apply g2 first"), as an element index.
    pub fn compose(&self, g1: usize, g2: usize) -> usize {
        let a = &self.elements[g1].tau_q;
        let b = &self.elements[g2].tau_q;
        let prod: Vec<usize> = (0..a.len()).map(|q| a[b[q]]).collect();
        self.find_by_tau_q(&prod).expect("group is closed under composition")
    }

    pub fn identity(&self) -> usize {
        let n = self.elements[0].tau_q.len();
        let id: Vec<usize> = (0..n).collect();
        self.find_by_tau_q(&id).expect("group contains the identity")
    }

    pub fn inverse(&self, g: usize) -> usize {
        let a = &self.elements[g].tau_q;
        let mut inv = vec![0; a.len()];
        for (q, &v) in a.iter().enumerate() {
            inv[v] = q;
        }
        self.find_by_tau_q(&inv).expect("group is closed under inverse")
    }
}

fn build_group(s: &FiniteInternality, d: &DerivedStructure, members: Vec<usize>) -> BindingGroup {
    let mut elements: Vec<GroupElement> = members
        .into_iter()
        .map(|u| {
            let tau_x: Vec<usize> = (0..s.n_x)
                .map(|z| d.nu_as_x(u, z).expect("group members act on X"))
                .collect();
            GroupElement { f_index: u, tau_q: d.f_perms[u].clone(), tau_x }
        })
        .collect();
    elements.sort_by(|a, b| (&a.tau_q, &a.tau_x).cmp(&(&b.tau_q, &b.tau_x)));
    let group = BindingGroup { elements };
    // Closure under composition and inverse, with identity, is asserted.
    let id = group.identity();
    for g1 in 0..group.order() {
        assert_eq!(group.compose(g1, group.inverse(g1)), id);
        for g2 in 0..group.order() {
            group.compose(g1, g2);
        }
    }
    group
}

/// The group as the subset of F where, for every pair in the Π-fiber of u,
/// composition with any compatible element of H preserves membership in X.
pub fn group_intdef1(s: &FiniteInternality, d: &DerivedStructure) -> BindingGroup {
    let members = (0..d.f_perms.len())
        .filter(|&u| {
            d.pi.iter().all(|(&(x, y), &v)| {
                if v != u {
                    return true;
                }
                (0..d.h_elems.len()).all(|h| {
                    if d.h_elems[h].dom != s.pi_x[x] {
                        return true;
                    }
                    d.mu_in_x(h, x) == d.mu_in_x(h, y)
                })
            })
        })
        .collect();
    build_group(s, d, members)
}

/// The group as the subset of F where ν(u, z) and ν(u⁻¹, z) stay inside X
/// for every z.
pub fn group_intdef2(s: &FiniteInternality, d: &DerivedStructure) -> BindingGroup {
    let members = (0..d.f_perms.len())
        .filter(|&u| {
            (0..s.n_x).all(|z| d.nu_as_x(u, z).is_some() && d.nu_as_x(d.f_inv[u], z).is_some())
        })
        .collect();
    build_group(s, d, members)
}

/// Result of the purely relational computation: the set of witnessing pairs
/// (z, w) of X×X together with the induced group.
#[derive(Clone, Debug)]
pub struct RelationalGroup {
    pub pairs: Vec<(usize, usize)>,
    /// Q-action of each pair, read off the existential formula.
    pub pair_tau_q: Vec<Vec<usize>>,
    /// X-action of each pair, read off the defining formula.
    pub pair_tau_x: Vec<Vec<usize>>,
    pub group: BindingGroup,
}

/// Membership of (z, w), consulting f only as a ternary relation
/// f(q, x, c): for every x there is y with
/// ∀q,c ( f(q,y,c) ⟺ ∃p,d ( f(q,w,d) ∧ f(p,z,d) ∧ f(p,x,c) ) ).
fn relational_phi(s: &FiniteInternality, x: usize, y: usize, z: usize, w: usize) -> bool {
    let f = |q: usize, xx: usize, c: usize| s.f[q][xx] == c;
    for q in 0..s.n_q {
        for c in 0..s.n_c {
            let lhs = f(q, y, c);
            let mut rhs = false;
            'outer: for p in 0..s.n_q {
                for dd in 0..s.n_c {
                    if f(q, w, dd) && f(p, z, dd) && f(p, x, c) {
                        rhs = true;
                        break 'outer;
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The group computed from the quantified relational formulas alone, with
/// its Q-action from ∃c ( f(q,w,c) ∧ f(p,z,c) ) and X-action from the
/// membership formula. The quotient by Π is returned as a [`BindingGroup`].
pub fn group_horrible(s: &FiniteInternality, d: &DerivedStructure) -> RelationalGroup {
    let f = |q: usize, xx: usize, c: usize| s.f[q][xx] == c;
    let mut pairs = Vec::new();
    let mut pair_tau_q = Vec::new();
    let mut pair_tau_x = Vec::new();
    for z in 0..s.n_x {
        for w in 0..s.n_x {
            let member = (0..s.n_x).all(|x| (0..s.n_x).any(|y| relational_phi(s, x, y, z, w)));
            if !member {
                continue;
            }
            // Q-action: (z, w)(p) = q iff ∃c ( f(q,w,c) ∧ f(p,z,c) ).
            let mut tau_q = vec![usize::MAX; s.n_q];
            for p in 0..s.n_q {
                let mut image = None;
                for q in 0..s.n_q {
                    for c in 0..s.n_c {
                        if f(q, w, c) && f(p, z, c) {
                            assert!(
                                image.is_none() || image == Some(q),
                                "Q-action of a member must be single-valued"
                            );
                            image = Some(q);
                        }
                    }
                }
                tau_q[p] = image.expect("Q-action of a member is total");
            }
            // X-action: (z, w)(x) = y iff phi(x, y, z, w).
            let mut tau_x = vec![usize::MAX; s.n_x];
            for x in 0..s.n_x {
                let mut image = None;
                for y in 0..s.n_x {
                    if relational_phi(s, x, y, z, w) {
                        assert!(
                            image.is_none(),
                            "X-action of a member must be single-valued"
                        );
                        image = Some(y);
                    }
                }
                tau_x[x] = image.expect("X-action of a member is total");
            }
            pairs.push((z, w));
            pair_tau_q.push(tau_q);
            pair_tau_x.push(tau_x);
        }
    }
    // Quotient by Π: pairs with the same induced permutation collapse.
    let mut by_perm: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, tq) in pair_tau_q.iter().enumerate() {
        by_perm.entry(tq.clone()).or_default().push(i);
    }
    let mut members = Vec::new();
    for (tq, idxs) in &by_perm {
        for &i in idxs {
            assert_eq!(
                pair_tau_x[i], pair_tau_x[idxs[0]],
                "pairs in one Π-fiber must induce one X-action"
            );
        }
        let u = *d.f_index.get(tq).expect("member permutations lie in F");
        members.push(u);
    }
    let group = build_group(s, d, members);
    // The formula actions agree with the ν-based actions.
    for (i, &(z, w)) in pairs.iter().enumerate() {
        let u = d.pi[&(z, w)];
        let elem = group.elements.iter().find(|e| e.f_index == u).unwrap();
        assert_eq!(elem.tau_q, pair_tau_q[i]);
        assert_eq!(elem.tau_x, pair_tau_x[i]);
    }
    RelationalGroup { pairs, pair_tau_q, pair_tau_x, group }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("size guard exceeded: nQ={n_q}, nX={n_x} with guard nQ,nX <= {guard}")]
pub struct SizeGuardError {
    pub n_q: usize,
    pub n_x: usize,
    pub guard: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Exhaustive enumeration of automorphism pairs. For each τ_Q, the matching
/// τ_X is forced column-by-column, so the cost is nQ!·nX·nQ.
pub fn brute_force_group(
    s: &FiniteInternality,
    guard: usize,
) -> Result<Vec<AutPair>, SizeGuardError> {
    if s.n_q > guard || s.n_x > guard {
        return Err(SizeGuardError { n_q: s.n_q, n_x: s.n_x, guard });
    }
    let mut column_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for x in 0..s.n_x {
        column_index.insert(s.column(x), x);
    }
    let mut out = Vec::new();
    'perm: for tau_q in permutations(s.n_q) {
        let mut inv = vec![0; s.n_q];
        for (q, &v) in tau_q.iter().enumerate() {
            inv[v] = q;
        }
        let mut tau_x = Vec::with_capacity(s.n_x);
        for x in 0..s.n_x {
            // f(τQ(q), τX(x)) = f(q, x) forces the column f_x ∘ τQ⁻¹.
            let target: Vec<usize> = (0..s.n_q).map(|q| s.f[inv[q]][x]).collect();
            match column_index.get(&target) {
                Some(&y) => tau_x.push(y),
                None => continue 'perm,
            }
        }
        out.push(AutPair { tau_q, tau_x });
    }
    out.sort();
    Ok(out)
}

pub fn pair_set_of(pairs: &[AutPair]) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    pairs.iter().map(|p| (p.tau_q.clone(), p.tau_x.clone())).collect()
}

/// Predicate of the first defining formula is constant on Π-fibers: one
/// pair has it iff any pair in the fibre has it.
pub fn intdef1_constant_on_fibers(s: &FiniteInternality, d: &DerivedStructure) -> bool {
    let pair_pred = |x: usize, y: usize| {
        (0..d.h_elems.len()).all(|h| {
            d.h_elems[h].dom != s.pi_x[x] || d.mu_in_x(h, x) == d.mu_in_x(h, y)
        })
    };
    let mut value: BTreeMap<usize, bool> = BTreeMap::new();
    for (&(x, y), &u) in &d.pi {
        let v = pair_pred(x, y);
        if let Some(&prev) = value.get(&u) {
            if prev != v {
                return false;
            }
        } else {
            value.insert(u, v);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::derived::derive;
    use super::super::structure::{random_structure, s3_tables, FiniteInternality, RandomBounds};
    use super::*;

    fn all_groups_agree(s: &FiniteInternality) {
        let d = derive(s);
        let g1 = group_intdef1(s, &d);
        let g2 = group_intdef2(s, &d);
        let gh = group_horrible(s, &d);
        let brute = brute_force_group(s, 6).unwrap();
        assert_eq!(g1.pair_set(), pair_set_of(&brute));
        assert_eq!(g2.pair_set(), pair_set_of(&brute));
        assert_eq!(gh.group.pair_set(), pair_set_of(&brute));
        assert!(intdef1_constant_on_fibers(s, &d));
    }

    #[test]
    fn cyclic_groups() {
        for n in [3, 4] {
            let s = FiniteInternality::cyclic(n);
            let d = derive(&s);
            assert_eq!(group_intdef1(&s, &d).order(), n);
            all_groups_agree(&s);
        }
    }

    #[test]
    fn cyclic_3_brute_force_is_translations() {
        // Hand check: τ_Q(q) = q + a forces τ_X(x) = x - a.
        let s = FiniteInternality::cyclic(3);
        let brute = brute_force_group(&s, 6).unwrap();
        assert_eq!(brute.len(), 3);
        for p in &brute {
            let a = p.tau_q[0];
            for q in 0..3 {
                assert_eq!(p.tau_q[q], (q + a) % 3);
            }
            for x in 0..3 {
                assert_eq!(p.tau_x[x], (x + 3 - a) % 3);
            }
        }
    }

    #[test]
    fn s3_group_model() {
        let (mul, inv) = s3_tables();
        let s = FiniteInternality::group_model(&mul);
        let d = derive(&s);
        let g = group_intdef1(&s, &d);
        assert_eq!(g.order(), 6);
        let brute = brute_force_group(&s, 6).unwrap();
        assert_eq!(brute.len(), 6);
        assert_eq!(g.pair_set(), pair_set_of(&brute));
        // Q-action is q ↦ q·g⁻¹ and X-action is x ↦ g·x, with
        // g = τ_X(identity).
        for e in &g.elements {
            let gg = e.tau_x[0];
            for q in 0..6 {
                assert_eq!(e.tau_q[q], mul[q][inv[gg]]);
            }
            for x in 0..6 {
                assert_eq!(e.tau_x[x], mul[gg][x]);
            }
        }
    }

    #[test]
    fn trivial_structure() {
        let s = FiniteInternality::from_blocks(1, 1, vec![0], vec![vec![0]]);
        let d = derive(&s);
        assert_eq!(group_intdef1(&s, &d).order(), 1);
        assert_eq!(brute_force_group(&s, 6).unwrap().len(), 1);
    }

    #[test]
    fn single_x_forces_identity() {
        // |X| = 1: τ_Q is forced to the identity by injectivity of f_x.
        let s = FiniteInternality::from_blocks(3, 1, vec![0], vec![vec![0], vec![1], vec![2]]);
        let brute = brute_force_group(&s, 6).unwrap();
        assert_eq!(brute.len(), 1);
        assert_eq!(brute[0].tau_q, vec![0, 1, 2]);
    }

    #[test]
    fn random_structures_agree() {
        for seed in 0..12 {
            let bounds = RandomBounds { n_q: 1 + (seed as usize % 4), n_d: 1 + (seed as usize % 2), n_x: 3 };
            if let Ok(s) = random_structure(seed, bounds) {
                all_groups_agree(&s);
            }
        }
    }

    #[test]
    fn size_guard() {
        let s = FiniteInternality::cyclic(7);
        assert!(brute_force_group(&s, 6).is_err());
    }

    #[test]
    fn nu_mu_commute_for_members() {
        let s = FiniteInternality::cyclic(4);
        let d = derive(&s);
        let g = group_intdef2(&s, &d);
        for e in &g.elements {
            for h in 0..d.h_elems.len() {
                for x in 0..s.n_x {
                    if d.h_elems[h].dom != s.pi_x[x] {
                        continue;
                    }
                    if let Some(mx) = d.mu_as_x(h, x) {
                        let lhs = e.tau_x[mx];
                        let rhs = d.mu_as_x(h, e.tau_x[x]).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
