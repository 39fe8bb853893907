//! Δ-restricted automorphism groups: rewriting relations into a single X
//! variable with C and H parameters, the subgroup preserving them, and the
//! Δ*-types whose equality classes are the group orbits.

use super::derived::DerivedStructure;
use super::groups::{AutPair, BindingGroup, GroupElement};
use super::structure::FiniteInternality;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sort {
    Q,
    X,
    C,
}

/// A relation over sorts of the structure, given extensionally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRelation {
    pub sorts: Vec<Sort>,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeltaError {
    #[error("tuple {tuple:?} has arity {got}, expected {expected}")]
    Arity { tuple: Vec<usize>, got: usize, expected: usize },
    #[error("tuple {tuple:?} position {position} is out of range for sort {sort:?}")]
    Range { tuple: Vec<usize>, position: usize, sort: Sort },
}

impl DeltaRelation {
    pub fn validate(&self, s: &FiniteInternality) -> Result<(), DeltaError> {
        for t in &self.tuples {
            if t.len() != self.sorts.len() {
                return Err(DeltaError::Arity {
                    tuple: t.clone(),
                    got: t.len(),
                    expected: self.sorts.len(),
                });
            }
            for (i, (&v, &sort)) in t.iter().zip(&self.sorts).enumerate() {
                let bound = match sort {
                    Sort::Q => s.n_q,
                    Sort::X => s.n_x,
                    Sort::C => s.n_c,
                };
                if v >= bound {
                    return Err(DeltaError::Range { tuple: t.clone(), position: i, sort });
                }
            }
        }
        Ok(())
    }
}

/// Sorts of a rewritten relation: the single X variable, C parameters
/// standing in for Q variables (via g) and for original C variables, and H
/// parameters standing in for X variables (via μ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StarSort {
    XVar,
    CParam,
    HParam,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRelation {
    pub sorts: Vec<StarSort>,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// Rewrite each relation φ(q̄, x̄, ē) into φ* with one X variable, by
/// substituting q_i = g(d_i, x) and x_j = μ(h_j, x). The membership
/// relation X* = "μ(h, x) ∈ X" is always included, first.
pub fn delta_star(
    s: &FiniteInternality,
    d: &DerivedStructure,
    delta: &[DeltaRelation],
) -> Vec<StarRelation> {
    let mut out = Vec::new();
    let mut x_star = StarRelation {
        sorts: vec![StarSort::XVar, StarSort::HParam],
        tuples: BTreeSet::new(),
    };
    for x in 0..s.n_x {
        for h in 0..d.h_elems.len() {
            if d.h_elems[h].dom == s.pi_x[x] && d.mu_in_x(h, x) {
                x_star.tuples.insert(vec![x, h]);
            }
        }
    }
    out.push(x_star);

    for rel in delta {
        let sorts: Vec<StarSort> = std::iter::once(StarSort::XVar)
            .chain(rel.sorts.iter().map(|s| match s {
                Sort::Q => StarSort::CParam,
                Sort::X => StarSort::HParam,
                Sort::C => StarSort::CParam,
            }))
            .collect();
        let mut tuples = BTreeSet::new();
        for x in 0..s.n_x {
            // Parameter ranges per position; assignments are enumerated by
            // an odometer over them.
            let ranges: Vec<usize> = rel
                .sorts
                .iter()
                .map(|sort| match sort {
                    Sort::Q | Sort::C => s.n_c,
                    Sort::X => d.h_elems.len(),
                })
                .collect();
            let mut assign = vec![0usize; ranges.len()];
            'odo: loop {
                // Evaluate φ at the substituted arguments, when defined.
                let mut args = Vec::with_capacity(ranges.len());
                let mut defined = true;
                for (i, sort) in rel.sorts.iter().enumerate() {
                    match sort {
                        Sort::Q => {
                            let c = assign[i];
                            match d.g[x][c] {
                                Some(q) => args.push(q),
                                None => {
                                    defined = false;
                                    break;
                                }
                            }
                        }
                        Sort::X => {
                            let h = assign[i];
                            if d.h_elems[h].dom != s.pi_x[x] {
                                defined = false;
                                break;
                            }
                            match d.mu_as_x(h, x) {
                                Some(y) => args.push(y),
                                None => {
                                    defined = false;
                                    break;
                                }
                            }
                        }
                        Sort::C => args.push(assign[i]),
                    }
                }
                if defined && rel.tuples.contains(&args) {
                    let mut tuple = vec![x];
                    tuple.extend_from_slice(&assign);
                    tuples.insert(tuple);
                }
                // Advance the odometer.
                let mut i = 0;
                loop {
                    if i == ranges.len() {
                        break 'odo;
                    }
                    assign[i] += 1;
                    if assign[i] < ranges[i] {
                        break;
                    }
                    assign[i] = 0;
                    i += 1;
                }
            }
        }
        out.push(StarRelation { sorts, tuples });
    }
    out
}

/// The Δ-restricted group: elements of the full internality group whose
/// X-action preserves every rewritten relation.
pub fn group_delta(
    s: &FiniteInternality,
    d: &DerivedStructure,
    base: &BindingGroup,
    delta: &[DeltaRelation],
) -> BindingGroup {
    let star = delta_star(s, d, delta);
    let elements: Vec<GroupElement> = base
        .elements
        .iter()
        .filter(|e| {
            star.iter().all(|rel| {
                rel.tuples.iter().all(|t| {
                    let mut mapped = t.clone();
                    mapped[0] = e.tau_x[t[0]];
                    rel.tuples.contains(&mapped)
                })
            })
        })
        .cloned()
        .collect();
    BindingGroup { elements }
}

/// Oracle: the subgroup of automorphism pairs preserving every original
/// relation (Q coordinates moved by τ_Q, X by τ_X, C fixed).
pub fn brute_delta_subgroup(delta: &[DeltaRelation], pairs: &[AutPair]) -> Vec<AutPair> {
    pairs
        .iter()
        .filter(|p| {
            delta.iter().all(|rel| {
                rel.tuples.iter().all(|t| {
                    let mapped: Vec<usize> = t
                        .iter()
                        .zip(&rel.sorts)
                        .map(|(&v, sort)| match sort {
                            Sort::Q => p.tau_q[v],
                            Sort::X => p.tau_x[v],
                            Sort::C => v,
                        })
                        .collect();
                    rel.tuples.contains(&mapped)
                })
            })
        })
        .cloned()
        .collect()
}

/// The Δ*-type of each element of X: for every rewritten relation, the set
/// of parameter tuples it satisfies.
pub fn delta_star_types(s: &FiniteInternality, star: &[StarRelation]) -> Vec<Vec<BTreeSet<Vec<usize>>>> {
    (0..s.n_x)
        .map(|x| {
            star.iter()
                .map(|rel| {
                    rel.tuples
                        .iter()
                        .filter(|t| t[0] == x)
                        .map(|t| t[1..].to_vec())
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Partition of X into Δ*-type equality classes, each sorted, ordered by
/// minimal element.
pub fn type_equality_classes(s: &FiniteInternality, star: &[StarRelation]) -> Vec<Vec<usize>> {
    let types = delta_star_types(s, star);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for x in 0..s.n_x {
        if seen.contains(&x) {
            continue;
        }
        let mut class = vec![x];
        for y in x + 1..s.n_x {
            if types[y] == types[x] {
                class.push(y);
            }
        }
        seen.extend(class.iter().copied());
        classes.push(class);
    }
    classes
}

/// Deterministic random Δ relations for fuzzing: arity 1 or 2 over random
/// sorts, with each candidate tuple kept with probability 1/2.
pub fn random_delta(s: &FiniteInternality, seed: u64, count: usize) -> Vec<DeltaRelation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_de17a);
    let sorts_pool = [Sort::Q, Sort::X, Sort::C];
    (0..count)
        .map(|_| {
            let arity = 1 + rng.gen_range(0..2);
            let sorts: Vec<Sort> = (0..arity).map(|_| sorts_pool[rng.gen_range(0..3)]).collect();
            let ranges: Vec<usize> = sorts
                .iter()
                .map(|sort| match sort {
                    Sort::Q => s.n_q,
                    Sort::X => s.n_x,
                    Sort::C => s.n_c,
                })
                .collect();
            let mut tuples = BTreeSet::new();
            let mut tuple = vec![0usize; arity];
            'odo: loop {
                if rng.gen_bool(0.5) {
                    tuples.insert(tuple.clone());
                }
                let mut i = 0;
                loop {
                    if i == arity {
                        break 'odo;
                    }
                    tuple[i] += 1;
                    if tuple[i] < ranges[i] {
                        break;
                    }
                    tuple[i] = 0;
                    i += 1;
                }
            }
            DeltaRelation { sorts, tuples }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::derived::derive;
    use super::super::groups::{brute_force_group, group_intdef2, pair_set_of};
    use super::super::structure::FiniteInternality;
    use super::*;

    #[test]
    fn empty_delta_gives_full_group() {
        let s = FiniteInternality::cyclic(4);
        let d = derive(&s);
        let base = group_intdef2(&s, &d);
        let g = group_delta(&s, &d, &base, &[]);
        assert_eq!(g.pair_set(), base.pair_set());
    }

    #[test]
    fn even_coset_of_z4_cuts_to_z2() {
        // Finite stand-in for the index-2 subgroup example: ℤ₄ with the
        // even subset of Q marked. Translations preserving it are {0, 2}.
        let s = FiniteInternality::cyclic(4);
        let d = derive(&s);
        let base = group_intdef2(&s, &d);
        let delta = vec![DeltaRelation {
            sorts: vec![Sort::Q],
            tuples: [vec![0], vec![2]].into_iter().collect(),
        }];
        let g = group_delta(&s, &d, &base, &delta);
        assert_eq!(g.order(), 2);
        let brute = brute_delta_subgroup(&delta, &brute_force_group(&s, 6).unwrap());
        assert_eq!(g.pair_set(), pair_set_of(&brute));
    }

    #[test]
    fn q1_equality_rewrites_to_diagonal() {
        // φ = (q1 = q2) on the cyclic model: the rewritten relation holds
        // exactly when the two C parameters coincide, since g(., x) is
        // injective on the fiber.
        let s = FiniteInternality::cyclic(3);
        let d = derive(&s);
        let diag: BTreeSet<Vec<usize>> = (0..3).map(|q| vec![q, q]).collect();
        let delta = vec![DeltaRelation { sorts: vec![Sort::Q, Sort::Q], tuples: diag }];
        let star = delta_star(&s, &d, &delta);
        let phi_star = &star[1];
        for t in &phi_star.tuples {
            assert_eq!(t[1], t[2], "tuple {t:?} should be diagonal in the C parameters");
        }
        // Every (x, c, c) with c in the fiber of x appears.
        assert_eq!(phi_star.tuples.len(), 9);
    }

    #[test]
    fn singleton_q_subset_rewrites_to_graph_lookup() {
        // φ = {q0}: φ* = {(x, d) : g(d, x) = q0}, one d per x.
        let s = FiniteInternality::cyclic(3);
        let d = derive(&s);
        let delta = vec![DeltaRelation {
            sorts: vec![Sort::Q],
            tuples: [vec![1]].into_iter().collect(),
        }];
        let star = delta_star(&s, &d, &delta);
        let phi_star = &star[1];
        assert_eq!(phi_star.tuples.len(), 3);
        for t in &phi_star.tuples {
            assert_eq!(d.g[t[0]][t[1]], Some(1));
        }
    }

    #[test]
    fn s3_multiplication_graph_forces_translations_commuting() {
        // Δ = graph of group multiplication on Q³; the value is fixed by
        // the brute-force oracle.
        let (mul, _) = super::super::structure::s3_tables();
        let s = FiniteInternality::group_model(&mul);
        let d = derive(&s);
        let base = group_intdef2(&s, &d);
        let mut graph = BTreeSet::new();
        for a in 0..6 {
            for b in 0..6 {
                graph.insert(vec![a, b, mul[a][b]]);
            }
        }
        let delta = vec![DeltaRelation { sorts: vec![Sort::Q, Sort::Q, Sort::Q], tuples: graph }];
        let g = group_delta(&s, &d, &base, &delta);
        let brute = brute_delta_subgroup(&delta, &brute_force_group(&s, 6).unwrap());
        assert_eq!(g.pair_set(), pair_set_of(&brute));
        // Right translations preserving left multiplication are exactly the
        // central elements; S₃ has trivial center.
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn orbits_match_type_classes() {
        let s = FiniteInternality::cyclic(4);
        let d = derive(&s);
        let base = group_intdef2(&s, &d);
        let delta = vec![DeltaRelation {
            sorts: vec![Sort::X],
            tuples: [vec![0], vec![2]].into_iter().collect(),
        }];
        let g = group_delta(&s, &d, &base, &delta);
        let star = delta_star(&s, &d, &delta);
        let classes = type_equality_classes(&s, &star);
        let orbits = super::super::groupoid::orbits_of(&s, &g);
        assert_eq!(classes, orbits.0);
    }
}
