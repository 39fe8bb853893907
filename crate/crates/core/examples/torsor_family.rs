//! The definable family of groups H̃_e acting on the fibers of the
//! invariant map F = (z²/Δ², zw/Δ², w²/Δ²): membership by exact reduction
//! of F(X·g⁻¹) modulo the fiber, a randomized sampling channel, and the
//! fact that distinct generic fibers carry distinct groups.
//!
//! Run with: cargo run --example torsor_family

use diffgal::algebra::{parse_matrix, MatrixRF, Rat, RationalFunction};
use diffgal::galois::{LinearDifferenceSystem, TorsorFamily2x2};
use diffgal::sigma::{DifferenceFieldSpec, SigmaOperator};
use num::One;

fn main() {
    let field =
        DifferenceFieldSpec::new(SigmaOperator::Shift(Rat::one()), vec!["a".into(), "b".into()])
            .unwrap();
    let a = parse_matrix("[[-1, a],[0, b]]", &field.symbols()).unwrap();
    let sys = LinearDifferenceSystem::new(field.clone(), a).unwrap();
    let fam = TorsorFamily2x2::new(&sys).unwrap();

    let e = [
        RationalFunction::from_int(4),
        RationalFunction::from_int(6),
        RationalFunction::from_int(9),
    ];
    println!("fiber value e = (4, 6, 9) with 6^2 = 4*9 on the image variety");

    // A rational point on the fiber and sampled neighbours.
    let x0 = fam.fiber_point(&e).unwrap();
    println!("fiber point x0 = {x0}");
    let samples = fam.sample_fiber(&x0, 5, 20);
    println!("sampled {} fiber points, all with F = e", samples.len());

    // Members of H_e are conjugates of the stabilizer shape through x0.
    for g in fam.members_through(&x0, 9, 3) {
        let exact = fam.membership(&e, &g).unwrap();
        let sampled = fam.membership_sampled(&e, &g, &samples).unwrap();
        println!("  member {g}: equations {exact}, sampling {sampled}");
    }
    let id = MatrixRF::identity(2);
    println!("  identity: {}", fam.membership(&e, &id).unwrap());
    let flip = parse_matrix("[[1,0],[0,-1]]", &field.symbols()).unwrap();
    println!("  diag(1,-1): {}", fam.membership(&e, &flip).unwrap());

    // Distinct generic fibers carry distinct groups: find a separating
    // element.
    let e2 = [
        RationalFunction::from_int(1),
        RationalFunction::from_int(3),
        RationalFunction::from_int(9),
    ];
    let witness = fam
        .members_through(&x0, 13, 12)
        .into_iter()
        .find(|g| fam.membership(&e, g) == Ok(true) && fam.membership(&e2, g) == Ok(false))
        .unwrap();
    println!("element of H_(4,6,9) outside H_(1,3,9): {witness}");

    // Off-variety tuples are rejected with the defining equation named.
    let bad = [
        RationalFunction::from_int(1),
        RationalFunction::from_int(1),
        RationalFunction::from_int(3),
    ];
    println!("off-variety e = (1,1,3): {}", fam.membership(&bad, &id).unwrap_err());
}
