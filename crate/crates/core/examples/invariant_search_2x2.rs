//! The worked 2×2 example A = [[-1, a], [0, b]]: search for invariant
//! functions h = p(X)/det(X)^k with h = h^σ∘A, check the stabilizer
//! condition h(gX) = h(X), and emit the group presentation.
//!
//! Run with: cargo run --example invariant_search_2x2

use diffgal::algebra::{parse_matrix, Rat};
use diffgal::galois::{
    emit_group_equations, invariant_search, stabilizer_check, LinearDifferenceSystem, SearchBounds,
};
use diffgal::sigma::{DifferenceFieldSpec, SigmaOperator};
use num::One;

fn main() {
    let field =
        DifferenceFieldSpec::new(SigmaOperator::Shift(Rat::one()), vec!["a".into(), "b".into()])
            .unwrap();
    let a = parse_matrix("[[-1, a],[0, b]]", &field.symbols()).unwrap();
    let sys = LinearDifferenceSystem::new(field.clone(), a).unwrap();

    // Entry-variable search: the quadratic family z^2, zw, w^2 at k = 2
    // (z = x21, w = x22) plus det at k = 1.
    let tight = SearchBounds { entry_degree: 2, det_exponent_max: 2, t_degree: 0, param_degree: 0 };
    let found = invariant_search(&sys, &tight).unwrap();
    println!("invariants with entry-variable coefficients:");
    for inv in &found {
        println!("  h = ({}) / det(X)^{}", inv.p, inv.det_exponent);
    }

    // Widening to parameter coefficients finds ((b+1)x - az)^2 at k = 0.
    let wide = SearchBounds { entry_degree: 2, det_exponent_max: 0, t_degree: 0, param_degree: 2 };
    let with_params = invariant_search(&sys, &wide).unwrap();
    println!("additional k = 0 invariants with parameter coefficients: {}", with_params.len());

    // The stabilizer of the quadratic family is the matrices [[±1,*],[0,*]].
    let quadratics: Vec<_> = found.iter().filter(|i| i.det_exponent == 2).cloned().collect();
    for g_text in ["[[1,0],[0,1]]", "[[-1,7],[0,5]]", "[[2,0],[0,1]]", "[[1,0],[1,1]]"] {
        let g = parse_matrix(g_text, &field.symbols()).unwrap();
        println!(
            "  stabilizer_check({g_text:<16}) = {}",
            stabilizer_check(&sys, &quadratics, &g).unwrap()
        );
    }

    // Emit the presentation: σ-conjugation plus the coefficient equations.
    let pres = emit_group_equations(&sys, &quadratics).unwrap();
    println!("sigma-conjugation:");
    for eq in &pres.sigma_equations {
        println!("  {eq}");
    }
    println!("invariant-cut equations:");
    for eq in pres.equation_strings() {
        println!("  {eq}");
    }
}
