//! Restrict the automorphism group to maps preserving a chosen set Δ of
//! relations: the relations are rewritten into a single X variable with C
//! and H parameters, and the subgroup is cut out by invariance of the
//! rewritten sets. Orbits coincide with Δ*-type equality classes.
//!
//! Run with: cargo run --example delta_subgroups

use diffgal::internality::{
    brute_delta_subgroup, brute_force_group, delta_star, derive, group_delta, group_intdef2,
    orbits_of, pair_set_of, s3_tables, type_equality_classes, DeltaRelation, FiniteInternality,
    Sort,
};
use std::collections::BTreeSet;

fn main() {
    // Z_4 with the even subset of Q marked: translations preserving the
    // coset form the subgroup {0, 2}.
    let s = FiniteInternality::cyclic(4);
    let d = derive(&s);
    let base = group_intdef2(&s, &d);
    let evens = DeltaRelation {
        sorts: vec![Sort::Q],
        tuples: [vec![0], vec![2]].into_iter().collect(),
    };
    let g = group_delta(&s, &d, &base, std::slice::from_ref(&evens));
    let brute = brute_delta_subgroup(
        std::slice::from_ref(&evens),
        &brute_force_group(&s, 6).unwrap(),
    );
    println!("Z_4 with even coset: |G| = {}, |G_delta| = {}", base.order(), g.order());
    println!("  matches brute force: {}", g.pair_set() == pair_set_of(&brute));
    let star = delta_star(&s, &d, std::slice::from_ref(&evens));
    let classes = type_equality_classes(&s, &star);
    let orbits = orbits_of(&s, &g).0;
    println!("  orbits {:?} = type classes {:?}: {}", orbits, classes, orbits == classes);

    // S_3 with the graph of multiplication on Q^3: only central right
    // translations survive, and the center of S_3 is trivial.
    let (mul, _) = s3_tables();
    let s = FiniteInternality::group_model(&mul);
    let d = derive(&s);
    let base = group_intdef2(&s, &d);
    let mut graph = BTreeSet::new();
    for a in 0..6 {
        for b in 0..6 {
            graph.insert(vec![a, b, mul[a][b]]);
        }
    }
    let rel = DeltaRelation { sorts: vec![Sort::Q, Sort::Q, Sort::Q], tuples: graph };
    let g = group_delta(&s, &d, &base, std::slice::from_ref(&rel));
    println!("S_3 with multiplication graph: |G| = {} -> |G_delta| = {}", base.order(), g.order());
}
