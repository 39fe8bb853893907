//! Derived sets of an internality structure: the bijection families F and H
//! obtained by composing two elements of X, the extension X̄ of X, and the
//! composition maps μ and ν. Quotients by "defines the same map" are taken
//! extensionally with minimal-representative indexing.

use super::structure::FiniteInternality;
use std::collections::BTreeMap;

/// A partial bijection of C carrying one D-fiber onto another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HElem {
    pub dom: usize,
    pub cod: usize,
    /// Values on the domain fiber, keyed by global C index.
    pub map: BTreeMap<usize, usize>,
}

/// Everything derived from a validated structure.
///
/// Orientation conventions: Π(x, y) = g_y ∘ f_x as a permutation of Q
/// (apply f_x first), the H class of (x, y) is f_y ∘ f_x⁻¹ on the fiber
/// C_{π(x)}, μ(h, x) = h ∘ f_x, and ν(u, z) = f_z ∘ u⁻¹.
#[derive(Clone, Debug)]
pub struct DerivedStructure {
    /// Inverse family: g[x][c] = q with f(q, x) = c, for c in the fiber of x.
    pub g: Vec<Vec<Option<usize>>>,
    /// Distinct permutations of Q arising as Π(x, y).
    pub f_perms: Vec<Vec<usize>>,
    pub f_index: BTreeMap<Vec<usize>, usize>,
    /// Π: fiber-compatible pairs (x, y) to F.
    pub pi: BTreeMap<(usize, usize), usize>,
    /// Index of the inverse permutation, which is Π(y, x).
    pub f_inv: Vec<usize>,
    /// Distinct fiber-to-fiber bijections arising from pairs of X.
    pub h_elems: Vec<HElem>,
    pub h_of_pair: BTreeMap<(usize, usize), usize>,
    /// Distinct functions Q → C of the form h ∘ f_x; X embeds via the
    /// identity H element of its fiber.
    pub xbar: Vec<Vec<usize>>,
    pub x_to_xbar: Vec<usize>,
    pub xbar_to_x: Vec<Option<usize>>,
    /// μ(h, x) for dom(h) = π(x), as an X̄ index.
    pub mu: BTreeMap<(usize, usize), usize>,
    /// ν(u, z) for u ∈ F, z ∈ X, as an X̄ index.
    pub nu: Vec<Vec<usize>>,
}

/// Compute all derived sets with canonical (first-occurrence, i.e.
/// minimal-representative) indexing. Expects a validated structure.
pub fn derive(s: &FiniteInternality) -> DerivedStructure {
    let mut g = vec![vec![None; s.n_c]; s.n_x];
    for x in 0..s.n_x {
        for q in 0..s.n_q {
            g[x][s.f[q][x]] = Some(q);
        }
    }

    let mut f_perms: Vec<Vec<usize>> = Vec::new();
    let mut f_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut pi: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in 0..s.n_x {
        for y in 0..s.n_x {
            if s.pi_x[x] != s.pi_x[y] {
                continue;
            }
            let perm: Vec<usize> = (0..s.n_q)
                .map(|q| g[y][s.f[q][x]].expect("same fiber"))
                .collect();
            let idx = *f_index.entry(perm.clone()).or_insert_with(|| {
                f_perms.push(perm.clone());
                f_perms.len() - 1
            });
            pi.insert((x, y), idx);
        }
    }
    let f_inv: Vec<usize> = f_perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; s.n_q];
            for (q, &v) in p.iter().enumerate() {
                inv[v] = q;
            }
            *f_index.get(&inv).expect("inverse of Pi(x,y) is Pi(y,x)")
        })
        .collect();

    let mut h_elems: Vec<HElem> = Vec::new();
    let mut h_lookup: BTreeMap<HElem, usize> = BTreeMap::new();
    let mut h_of_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in 0..s.n_x {
        for y in 0..s.n_x {
            let dom = s.pi_x[x];
            let cod = s.pi_x[y];
            let map: BTreeMap<usize, usize> = s
                .fiber_of_c(dom)
                .into_iter()
                .map(|c| (c, s.f[g[x][c].expect("fiber")][y]))
                .collect();
            let h = HElem { dom, cod, map };
            let idx = *h_lookup.entry(h.clone()).or_insert_with(|| {
                h_elems.push(h.clone());
                h_elems.len() - 1
            });
            h_of_pair.insert((x, y), idx);
        }
    }

    let mut xbar: Vec<Vec<usize>> = Vec::new();
    let mut xbar_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut mu: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (hi, h) in h_elems.iter().enumerate() {
        for x in 0..s.n_x {
            if s.pi_x[x] != h.dom {
                continue;
            }
            let func: Vec<usize> = (0..s.n_q).map(|q| h.map[&s.f[q][x]]).collect();
            let idx = *xbar_index.entry(func.clone()).or_insert_with(|| {
                xbar.push(func.clone());
                xbar.len() - 1
            });
            mu.insert((hi, x), idx);
        }
    }
    let x_to_xbar: Vec<usize> = (0..s.n_x)
        .map(|x| *xbar_index.get(&s.column(x)).expect("X embeds in Xbar"))
        .collect();
    let mut xbar_to_x = vec![None; xbar.len()];
    for (x, &i) in x_to_xbar.iter().enumerate() {
        xbar_to_x[i] = Some(x);
    }

    // ν(u, z) = f_z ∘ u⁻¹; lands in X̄ because it equals μ(f_z ∘ g_x, y)
    // for any pair (x, y) with Π(x, y) = u.
    let mut nu = vec![vec![0; s.n_x]; f_perms.len()];
    for (u, perm) in f_perms.iter().enumerate() {
        let mut uinv = vec![0; s.n_q];
        for (q, &v) in perm.iter().enumerate() {
            uinv[v] = q;
        }
        for z in 0..s.n_x {
            let func: Vec<usize> = (0..s.n_q).map(|q| s.f[uinv[q]][z]).collect();
            nu[u][z] = *xbar_index.get(&func).expect("nu lands in Xbar");
        }
    }

    DerivedStructure {
        g,
        f_perms,
        f_index,
        pi,
        f_inv,
        h_elems,
        h_of_pair,
        xbar,
        x_to_xbar,
        xbar_to_x,
        mu,
        nu,
    }
}

impl DerivedStructure {
    /// μ(h, x) as an X element, when the image extends an element of X.
    pub fn mu_as_x(&self, h: usize, x: usize) -> Option<usize> {
        self.mu.get(&(h, x)).and_then(|&i| self.xbar_to_x[i])
    }

    /// ν(u, z) as an X element, when defined.
    pub fn nu_as_x(&self, u: usize, z: usize) -> Option<usize> {
        self.xbar_to_x[self.nu[u][z]]
    }

    /// Whether μ(h, x) belongs to X (the formula promised by the defining
    /// property of the group).
    pub fn mu_in_x(&self, h: usize, x: usize) -> bool {
        self.mu_as_x(h, x).is_some()
    }

    /// The identity H element on the fiber of x.
    pub fn identity_h(&self, x: usize) -> usize {
        self.h_of_pair[&(x, x)]
    }
}

#[cfg(test)]
mod tests {
    use super::super::structure::{s3_tables, FiniteInternality};
    use super::*;

    #[test]
    fn cyclic_counts() {
        // Enumerating all compositions for ℤ₃: 3 translations, 3 fiber
        // maps, and X̄ = X.
        let s = FiniteInternality::cyclic(3);
        let d = derive(&s);
        assert_eq!(d.f_perms.len(), 3);
        assert_eq!(d.h_elems.len(), 3);
        assert_eq!(d.xbar.len(), 3);
        assert!(d.xbar_to_x.iter().all(|o| o.is_some()));
    }

    #[test]
    fn single_point_q() {
        // |Q| = 1 forces F = {identity}.
        let s = FiniteInternality::from_blocks(1, 2, vec![0, 1], vec![vec![0, 1]]);
        assert_eq!(s.validate(), Ok(()));
        let d = derive(&s);
        assert_eq!(d.f_perms, vec![vec![0]]);
    }

    #[test]
    fn s3_has_six_translations() {
        let (mul, _) = s3_tables();
        let s = FiniteInternality::group_model(&mul);
        let d = derive(&s);
        assert_eq!(d.f_perms.len(), 6);
    }

    #[test]
    fn mu_and_f_commute() {
        // f(q, μ(h,x)) = h(f(q,x)) whenever μ(h,x) ∈ X.
        let s = FiniteInternality::cyclic(4);
        let d = derive(&s);
        for (hi, h) in d.h_elems.iter().enumerate() {
            for x in 0..s.n_x {
                if s.pi_x[x] != h.dom {
                    continue;
                }
                if let Some(y) = d.mu_as_x(hi, x) {
                    for q in 0..s.n_q {
                        assert_eq!(s.f[q][y], h.map[&s.f[q][x]]);
                    }
                }
            }
        }
    }

    #[test]
    fn pi_orientation_is_g_y_after_f_x() {
        let s = FiniteInternality::cyclic(3);
        let d = derive(&s);
        // For the cyclic model, Π(x, y)(q) = q + x - y mod 3.
        for x in 0..3 {
            for y in 0..3 {
                let perm = &d.f_perms[d.pi[&(x, y)]];
                for q in 0..3 {
                    assert_eq!(perm[q], (q + x + 3 - y) % 3);
                }
            }
        }
    }
}
