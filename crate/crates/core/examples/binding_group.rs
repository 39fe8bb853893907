//! Compute the automorphism group of an internality structure four ways —
//! two quantified formulas over the derived sets, the purely relational
//! form, and exhaustive enumeration — and confirm they agree, actions
//! included.
//!
//! Run with: cargo run --example binding_group

use diffgal::internality::{
    brute_force_group, derive, group_horrible, group_intdef1, group_intdef2, pair_set_of,
    s3_tables, FiniteInternality,
};

fn show(name: &str, s: &FiniteInternality) {
    let d = derive(s);
    let g1 = group_intdef1(s, &d);
    let g2 = group_intdef2(s, &d);
    let gh = group_horrible(s, &d);
    let brute = brute_force_group(s, 6).unwrap();
    let reference = pair_set_of(&brute);
    println!("{name}:");
    println!("  |F| = {}, |H| = {}, |Xbar| = {}", d.f_perms.len(), d.h_elems.len(), d.xbar.len());
    println!(
        "  group order {} — formulas agree with brute force: {}",
        g1.order(),
        g1.pair_set() == reference && g2.pair_set() == reference && gh.group.pair_set() == reference
    );
    for e in &g1.elements {
        println!("    tau_Q = {:?},  tau_X = {:?}", e.tau_q, e.tau_x);
    }
}

fn main() {
    show("cyclic Z_3", &FiniteInternality::cyclic(3));

    // The group model: Q = X = C = S_3 with f the multiplication table.
    // The automorphism group is S_3 itself, acting by q -> q g^{-1} on Q
    // and x -> g x on X.
    let (mul, _) = s3_tables();
    show("group model S_3", &FiniteInternality::group_model(&mul));

    // A two-fiber structure: D has two points.
    let s = FiniteInternality::from_blocks(2, 2, vec![0, 0, 1], vec![vec![0, 1, 2], vec![1, 0, 3]]);
    assert_eq!(s.validate(), Ok(()));
    show("two fibers", &s);
}
