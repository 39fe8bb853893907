//! Multiplicative relation lattices and the group G_A: for a constant
//! diagonalizable matrix, G_A is the eigenbasis conjugate of the torus
//! subgroup cut out by the characters ∏ x_i^{m_i} = 1 over the relation
//! lattice of the eigenvalues.
//!
//! Run with: cargo run --example character_lattice

use diffgal::algebra::{parse_matrix, rat_frac, rat_of, rat_to_string};
use diffgal::galois::{ga_group, multiplicative_lattice, LinearDifferenceSystem};
use diffgal::sigma::DifferenceFieldSpec;

fn main() {
    // Pure lattices.
    for values in [
        vec![rat_of(4)],
        vec![rat_of(-1)],
        vec![rat_of(2), rat_of(8)],
        vec![rat_of(2), rat_of(-2)],
        vec![rat_of(6), rat_of(10), rat_of(15)],
        vec![rat_frac(2, 3), rat_frac(9, 4)],
    ] {
        let text: Vec<String> = values.iter().map(rat_to_string).collect();
        let lattice = multiplicative_lattice(&values).unwrap();
        println!(
            "values ({:<16}) relation basis {:?}",
            text.join(", "),
            lattice.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
        );
    }

    // G_A for the profinite example diag(4): no relation, so G_A is the
    // full multiplicative group; for diag(-1) the lattice 2Z cuts mu_2.
    let field = DifferenceFieldSpec::shift1();
    for a_text in ["[[4]]", "[[-1]]", "[[2,0],[0,-2]]", "[[2,1],[0,3]]"] {
        let a = parse_matrix(a_text, &field.symbols()).unwrap();
        let sys = LinearDifferenceSystem::new(field.clone(), a).unwrap();
        match ga_group(&sys) {
            Ok(ga) => println!(
                "A = {a_text:<16} eigenvalues [{}], lattice rank {}, equality with binding group: {}",
                ga.eigenvalues.iter().map(rat_to_string).collect::<Vec<_>>().join(", "),
                ga.lattice.rank(),
                ga.equality_holds,
            ),
            Err(e) => println!("A = {a_text:<16} unsupported: {e}"),
        }
    }
    // A defective matrix is refused with the obstruction named.
    let a = parse_matrix("[[1,1],[0,1]]", &field.symbols()).unwrap();
    let sys = LinearDifferenceSystem::new(field, a).unwrap();
    println!("A = [[1,1],[0,1]]   {}", ga_group(&sys).unwrap_err());
}
