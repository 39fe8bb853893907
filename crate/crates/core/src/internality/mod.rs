//! Finite-model engine for internality: structures (Q, X, C, D, f), derived
//! sets and composition maps, three formula-based computations of the
//! automorphism group with a brute-force oracle, Δ-restricted subgroups,
//! orbits, the opposite groupoid, and torsor checks.

mod canonical;
mod delta;
mod derived;
mod groupoid;
mod groups;
mod structure;

pub use canonical::{canonical_family, CanonicalFamily};
pub use delta::{
    brute_delta_subgroup, delta_star, delta_star_types, group_delta, random_delta,
    type_equality_classes, DeltaError, DeltaRelation, Sort, StarRelation, StarSort,
};
pub use derived::{derive, DerivedStructure, HElem};
pub use groupoid::{
    groupoid_torsor_check, orbit_action, orbits_and_groupoid, orbits_of, torsor_check,
    GroupAction, GroupoidViolation, OrbitData, TorsorViolation,
};
pub use groups::{
    brute_force_group, group_horrible, group_intdef1, group_intdef2, intdef1_constant_on_fibers,
    pair_set_of, AutPair, BindingGroup, GroupElement, RelationalGroup, SizeGuardError,
};
pub use structure::{
    random_structure, s3_tables, BoundsError, FiniteInternality, RandomBounds, Violation,
};

/// Outcome of running every group computation on one structure.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub group_order: usize,
    pub agree: bool,
}

/// Run the three formula groups and the brute-force oracle and compare them
/// as sets of (τ_Q, τ_X) pairs.
pub fn oracle_agreement(s: &FiniteInternality, guard: usize) -> Result<OracleReport, SizeGuardError> {
    let d = derive(s);
    let g1 = group_intdef1(s, &d);
    let g2 = group_intdef2(s, &d);
    let gh = group_horrible(s, &d);
    let brute = brute_force_group(s, guard)?;
    let reference = pair_set_of(&brute);
    let agree = g1.pair_set() == reference
        && g2.pair_set() == reference
        && gh.group.pair_set() == reference
        && intdef1_constant_on_fibers(s, &d);
    Ok(OracleReport { group_order: reference.len(), agree })
}
