//! The opposite groupoid: orbits E of the group action on X, the sets
//! H_e^f of fiber maps carrying one orbit onto another, composition, and
//! the torsor axioms — each orbit is a free transitive G-set, |H_e^f| = |G|,
//! and conjugation by any point identifies G with the vertex group H_e^e.
//!
//! Run with: cargo run --example groupoid_torsors

use diffgal::internality::{
    derive, group_delta, group_intdef2, groupoid_torsor_check, orbit_action, orbits_and_groupoid,
    torsor_check, DeltaRelation, FiniteInternality, Sort,
};

fn main() {
    let s = FiniteInternality::cyclic(4);
    let d = derive(&s);
    let base = group_intdef2(&s, &d);

    // Full group: one orbit, vertex group of size |G| = 4.
    let data = orbits_and_groupoid(&s, &d, &base).unwrap();
    println!("Z_4, no restriction: orbits = {:?}", data.orbits);
    for ((e, f), hs) in &data.hef {
        println!("  |H_{e}^{f}| = {} (|G| = {})", hs.len(), base.order());
    }
    for orbit in &data.orbits {
        torsor_check(&orbit_action(&base, orbit)).unwrap();
    }
    groupoid_torsor_check(&d, &base, &data).unwrap();
    println!("  torsor + groupoid axioms: ok");

    // Restricting by the even coset splits X into two orbits; the groupoid
    // becomes connected over four orbit pairs with |H_e^f| = 2.
    let evens = DeltaRelation {
        sorts: vec![Sort::Q],
        tuples: [vec![0], vec![2]].into_iter().collect(),
    };
    let g = group_delta(&s, &d, &base, std::slice::from_ref(&evens));
    let data = orbits_and_groupoid(&s, &d, &g).unwrap();
    println!("Z_4 with even coset: orbits = {:?}", data.orbits);
    for ((e, f), hs) in &data.hef {
        println!("  |H_{e}^{f}| = {}", hs.len());
    }
    for orbit in &data.orbits {
        torsor_check(&orbit_action(&g, orbit)).unwrap();
    }
    groupoid_torsor_check(&d, &g, &data).unwrap();
    println!("  torsor + groupoid axioms: ok");
}
