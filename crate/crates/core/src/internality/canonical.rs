//! Canonical families: the quotient of a finite relation's parameter set by
//! the same-fiber equivalence "∀y (φ(x1, y) ⟺ φ(x2, y))".

use std::collections::BTreeSet;

/// Quotient of P by same-fiber equivalence, with minimal-index
/// representatives and the reduced relation on the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFamily {
    /// Class index of each element of P (surjective onto 0..reps.len()).
    pub class_of: Vec<usize>,
    /// Minimal representative of each class, increasing.
    pub reps: Vec<usize>,
    /// ψ(z, y) ⟺ φ(rep(z), y); fibers of ψ are pairwise distinct.
    pub reduced: BTreeSet<(usize, usize)>,
}

/// Compute the canonical family of φ ⊆ P×Y given extensionally.
pub fn canonical_family(n_p: usize, relation: &BTreeSet<(usize, usize)>) -> CanonicalFamily {
    let fiber = |p: usize| -> BTreeSet<usize> {
        relation.iter().filter(|&&(a, _)| a == p).map(|&(_, y)| y).collect()
    };
    let fibers: Vec<BTreeSet<usize>> = (0..n_p).map(fiber).collect();
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![usize::MAX; n_p];
    for p in 0..n_p {
        match reps.iter().position(|&r| fibers[r] == fibers[p]) {
            Some(z) => class_of[p] = z,
            None => {
                class_of[p] = reps.len();
                reps.push(p);
            }
        }
    }
    let reduced = reps
        .iter()
        .enumerate()
        .flat_map(|(z, &r)| fibers[r].iter().map(move |&y| (z, y)))
        .collect();
    CanonicalFamily { class_of, reps, reduced }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fibers_equal_collapse_to_one() {
        let rel: BTreeSet<(usize, usize)> = (0..4).map(|p| (p, 0)).collect();
        let fam = canonical_family(4, &rel);
        assert_eq!(fam.reps, vec![0]);
        assert_eq!(fam.class_of, vec![0, 0, 0, 0]);
    }

    #[test]
    fn distinct_fibers_keep_everything() {
        let rel: BTreeSet<(usize, usize)> = (0..4).map(|p| (p, p)).collect();
        let fam = canonical_family(4, &rel);
        assert_eq!(fam.reps, vec![0, 1, 2, 3]);
        assert_eq!(fam.reduced.len(), 4);
    }

    #[test]
    fn parity_fibers_give_two_classes() {
        // φ(p, y) ⟺ y ≡ p mod 2 on P = 0..3, Y = 0..3.
        let mut rel = BTreeSet::new();
        for p in 0..4 {
            for y in 0..4 {
                if y % 2 == p % 2 {
                    rel.insert((p, y));
                }
            }
        }
        let fam = canonical_family(4, &rel);
        assert_eq!(fam.reps, vec![0, 1]);
        assert_eq!(fam.class_of, vec![0, 1, 0, 1]);
        // Fibers of the reduced relation are distinct.
        let f0: BTreeSet<usize> = fam.reduced.iter().filter(|t| t.0 == 0).map(|t| t.1).collect();
        let f1: BTreeSet<usize> = fam.reduced.iter().filter(|t| t.0 == 1).map(|t| t.1).collect();
        assert_ne!(f0, f1);
    }
}
