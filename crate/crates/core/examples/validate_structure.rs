//! Build finite internality structures and check the defining invariants:
//! every f(.,x) is a bijection of Q onto its C-fiber and distinct x give
//! distinct maps.
//!
//! Run with: cargo run --example validate_structure

use diffgal::internality::{random_structure, FiniteInternality, RandomBounds};

fn main() {
    // The cyclic model: Q = X = C = Z_3 with f(q, x) = q + x mod 3.
    let cyclic = FiniteInternality::cyclic(3);
    println!("cyclic Z_3:           {:?}", cyclic.validate());

    // Multiplication mod 3 is not an internality datum: f(., 0) collapses.
    let f = (0..3).map(|q| (0..3).map(|x| (q * x) % 3).collect()).collect();
    let broken = FiniteInternality::from_blocks(3, 1, vec![0; 3], f);
    println!("q*x mod 3:            {}", broken.validate().unwrap_err());

    // Duplicate columns are caught too.
    let f = vec![vec![0, 0], vec![1, 1]];
    let dup = FiniteInternality::from_blocks(2, 1, vec![0, 0], f);
    println!("duplicate columns:    {}", dup.validate().unwrap_err());

    // Seeded random structures are valid by construction and reproducible.
    let bounds = RandomBounds { n_q: 3, n_d: 2, n_x: 5 };
    let s1 = random_structure(1, bounds).unwrap();
    let s2 = random_structure(1, bounds).unwrap();
    println!("random seed=1:        validate = {:?}, reproducible = {}", s1.validate(), s1 == s2);
    println!("random structure f table (rows = q, columns = x):");
    for q in 0..s1.n_q {
        println!("  {:?}", s1.f[q]);
    }
}
