//! Orbits of the group action on X, the opposite groupoid H with its
//! composition, and torsor verification for group and groupoid actions.

use super::derived::DerivedStructure;
use super::groups::BindingGroup;
use super::structure::FiniteInternality;
use std::collections::BTreeMap;
use std::fmt;

/// Orbit partition of X (fibers of the type map t) and the sets H_e^f of
/// groupoid elements carrying orbit e onto orbit f.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    pub hef: BTreeMap<(usize, usize), Vec<usize>>,
    /// Composition table: ((h1: e→f), (h2: f→g)) ↦ h2∘h1 in H_e^g.
    pub compose: BTreeMap<(usize, usize), usize>,
}

/// Orbit partition of the group's X-action; each orbit sorted, orbits
/// ordered by minimal element.
pub fn orbits_of(s: &FiniteInternality, group: &BindingGroup) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut orbit_of = vec![usize::MAX; s.n_x];
    let mut orbits = Vec::new();
    for x in 0..s.n_x {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let idx = orbits.len();
        let mut orbit: Vec<usize> = group.elements.iter().map(|e| e.tau_x[x]).collect();
        orbit.push(x);
        orbit.sort();
        orbit.dedup();
        for &y in &orbit {
            orbit_of[y] = idx;
        }
        orbits.push(orbit);
    }
    (orbits, orbit_of)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidViolation {
    NotUnique { e: usize, f: usize, a: usize, b: usize, count: usize },
    WrongImage { h: usize, a: usize },
    SizeMismatch { e: usize, f: usize, size: usize, group: usize },
    ComposeMissing { h1: usize, h2: usize },
    NotCompatible(String),
    ConjugationNotIso(String),
}

impl fmt::Display for GroupoidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupoidViolation::NotUnique { e, f: ff, a, b, count } => write!(
                f,
                "expected a unique h in H_{e}^{ff} with mu(h,{a}) = {b}, found {count}"
            ),
            GroupoidViolation::WrongImage { h, a } => {
                write!(f, "mu({h},{a}) leaves the expected orbit")
            }
            GroupoidViolation::SizeMismatch { e, f: ff, size, group } => {
                write!(f, "|H_{e}^{ff}| = {size} differs from |G| = {group}")
            }
            GroupoidViolation::ComposeMissing { h1, h2 } => {
                write!(f, "composition of {h1} then {h2} falls outside H")
            }
            GroupoidViolation::NotCompatible(msg) | GroupoidViolation::ConjugationNotIso(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

/// Build the orbit/groupoid data and verify the defining uniqueness: for
/// a ∈ X_e, b ∈ X_f there is exactly one h ∈ H_e^f with μ(h, a) = b.
pub fn orbits_and_groupoid(
    s: &FiniteInternality,
    d: &DerivedStructure,
    group: &BindingGroup,
) -> Result<OrbitData, GroupoidViolation> {
    let (orbits, orbit_of) = orbits_of(s, group);
    let mut hef: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (e, oe) in orbits.iter().enumerate() {
        for (f, of) in orbits.iter().enumerate() {
            // H_e^f is exactly the set of classes of pairs (a, b).
            let mut hs: Vec<usize> = Vec::new();
            for &a in oe {
                for &b in of {
                    let h = d.h_of_pair[&(a, b)];
                    if !hs.contains(&h) {
                        hs.push(h);
                    }
                }
            }
            hs.sort();
            // Each carries X_e onto X_f.
            for &h in &hs {
                for &a in oe {
                    match d.mu_as_x(h, a) {
                        Some(b) if orbit_of[b] == f => {}
                        _ => return Err(GroupoidViolation::WrongImage { h, a }),
                    }
                }
            }
            // Uniqueness per the defining proposition.
            for &a in oe {
                for &b in of {
                    let count = hs.iter().filter(|&&h| d.mu_as_x(h, a) == Some(b)).count();
                    if count != 1 {
                        return Err(GroupoidViolation::NotUnique { e, f, a, b, count });
                    }
                }
            }
            hef.insert((e, f), hs);
        }
    }
    // Composition tables H_e^f × H_f^g → H_e^g via representatives.
    let mut compose = BTreeMap::new();
    let h_index: BTreeMap<(usize, BTreeMap<usize, usize>), usize> = d
        .h_elems
        .iter()
        .enumerate()
        .map(|(i, h)| ((h.dom, h.map.clone()), i))
        .collect();
    for ((_e, f), hs1) in &hef {
        for ((f2, _g), hs2) in &hef {
            if f2 != f {
                continue;
            }
            for &h1 in hs1 {
                for &h2 in hs2 {
                    let he1 = &d.h_elems[h1];
                    let he2 = &d.h_elems[h2];
                    debug_assert_eq!(he2.dom, he1.cod, "orbits respect D-fibers");
                    let map: BTreeMap<usize, usize> =
                        he1.map.iter().map(|(&c, &v)| (c, he2.map[&v])).collect();
                    match h_index.get(&(he1.dom, map)) {
                        Some(&h3) => {
                            compose.insert((h1, h2), h3);
                        }
                        None => return Err(GroupoidViolation::ComposeMissing { h1, h2 }),
                    }
                }
            }
        }
    }
    Ok(OrbitData { orbits, orbit_of, hef, compose })
}

/// A finite group action given by tables.
#[derive(Clone, Debug)]
pub struct GroupAction {
    /// mul[g][h] = g·h ("apply h first").
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    /// act[g][x] = g·x.
    pub act: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsorViolation {
    NotAGroup(String),
    NotAnAction { g: usize, h: usize, x: usize },
    NotFreeTransitive { a: usize, b: usize, count: usize },
}

impl fmt::Display for TorsorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsorViolation::NotAGroup(msg) => write!(f, "not a group: {msg}"),
            TorsorViolation::NotAnAction { g, h, x } => {
                write!(f, "action is not compatible with multiplication at g={g}, h={h}, x={x}")
            }
            TorsorViolation::NotFreeTransitive { a, b, count } => write!(
                f,
                "combined map is not a bijection: {count} group elements carry {a} to {b}"
            ),
        }
    }
}

/// Verify that the action is a torsor: group axioms, action axioms, and the
/// combined map (p2, m): G×X → X×X a bijection (freeness + transitivity).
pub fn torsor_check(action: &GroupAction) -> Result<(), TorsorViolation> {
    let n = action.mul.len();
    let e = action.identity;
    if e >= n || action.mul.iter().any(|row| row.len() != n) {
        return Err(TorsorViolation::NotAGroup("malformed multiplication table".into()));
    }
    for g in 0..n {
        if action.mul[e][g] != g || action.mul[g][e] != g {
            return Err(TorsorViolation::NotAGroup(format!("{e} is not an identity at {g}")));
        }
        if !(0..n).any(|h| action.mul[g][h] == e && action.mul[h][g] == e) {
            return Err(TorsorViolation::NotAGroup(format!("{g} has no inverse")));
        }
        for h in 0..n {
            for k in 0..n {
                if action.mul[action.mul[g][h]][k] != action.mul[g][action.mul[h][k]] {
                    return Err(TorsorViolation::NotAGroup(format!(
                        "associativity fails at ({g},{h},{k})"
                    )));
                }
            }
        }
    }
    let nx = action.act.first().map(|r| r.len()).unwrap_or(0);
    if action.act.len() != n {
        return Err(TorsorViolation::NotAGroup("action table has wrong height".into()));
    }
    for x in 0..nx {
        if action.act[e][x] != x {
            return Err(TorsorViolation::NotAnAction { g: e, h: e, x });
        }
        for g in 0..n {
            for h in 0..n {
                if action.act[action.mul[g][h]][x] != action.act[g][action.act[h][x]] {
                    return Err(TorsorViolation::NotAnAction { g, h, x });
                }
            }
        }
    }
    for a in 0..nx {
        for b in 0..nx {
            let count = (0..n).filter(|&g| action.act[g][a] == b).count();
            if count != 1 {
                return Err(TorsorViolation::NotFreeTransitive { a, b, count });
            }
        }
    }
    Ok(())
}

/// Restriction of the group's X-action to one orbit, as a [`GroupAction`].
pub fn orbit_action(group: &BindingGroup, orbit: &[usize]) -> GroupAction {
    let n = group.order();
    let mul = (0..n)
        .map(|g| (0..n).map(|h| group.compose(g, h)).collect())
        .collect();
    let act = group
        .elements
        .iter()
        .map(|e| {
            orbit
                .iter()
                .map(|&x| orbit.iter().position(|&y| y == e.tau_x[x]).expect("orbit closed"))
                .collect()
        })
        .collect();
    GroupAction { mul, identity: group.identity(), act }
}

/// Verify the groupoid-torsor axioms on X: compatibility of μ with the H
/// composition and identities, the combined-map bijection, commutation of
/// the two torsor structures, and that conjugation by each x ∈ X_e is a
/// group isomorphism G ≅ H_e^e.
pub fn groupoid_torsor_check(
    d: &DerivedStructure,
    group: &BindingGroup,
    data: &OrbitData,
) -> Result<(), GroupoidViolation> {
    // |H_e^f| = |G| on every orbit pair.
    for ((e, f), hs) in &data.hef {
        if hs.len() != group.order() {
            return Err(GroupoidViolation::SizeMismatch {
                e: *e,
                f: *f,
                size: hs.len(),
                group: group.order(),
            });
        }
    }
    // Identity elements act as identity: the class of (a, a).
    for orbit in &data.orbits {
        for &a in orbit {
            let id_h = d.h_of_pair[&(a, a)];
            for &b in orbit {
                if d.mu_as_x(id_h, b) != Some(b) {
                    return Err(GroupoidViolation::NotCompatible(format!(
                        "identity of the vertex group at {a} moves {b}"
                    )));
                }
            }
        }
    }
    // μ(h2∘h1, a) = μ(h2, μ(h1, a)) on the orbit where the chain lives.
    for ((e, f), hs1) in &data.hef {
        for ((f2, _g), hs2) in &data.hef {
            if f2 != f {
                continue;
            }
            for &h1 in hs1 {
                for &h2 in hs2 {
                    let Some(&h3) = data.compose.get(&(h1, h2)) else { continue };
                    for &a in &data.orbits[*e] {
                        let b = d.mu_as_x(h1, a).expect("hef maps the orbit");
                        let lhs = d.mu_as_x(h3, a);
                        let rhs = d.mu_as_x(h2, b);
                        if lhs.is_none() || lhs != rhs {
                            return Err(GroupoidViolation::NotCompatible(format!(
                                "mu is not compatible with composition at h1={h1}, h2={h2}, a={a}"
                            )));
                        }
                    }
                }
            }
        }
        let _ = e;
    }
    // The two torsor structures commute: g(μ(h, a)) = μ(h, g(a)).
    for elem in &group.elements {
        for ((e, _f), hs) in &data.hef {
            for &h in hs {
                for &a in &data.orbits[*e] {
                    let b = d.mu_as_x(h, a).expect("hef maps the orbit");
                    if elem.tau_x[b] != d.mu_as_x(h, elem.tau_x[a]).expect("hef maps the orbit") {
                        return Err(GroupoidViolation::NotCompatible(format!(
                            "group and groupoid actions do not commute at h={h}, a={a}"
                        )));
                    }
                }
            }
        }
    }
    // Groupoid composition is associative along orbit chains, with
    // identities and inverses.
    let n_orbits = data.orbits.len();
    for e in 0..n_orbits {
        for f in 0..n_orbits {
            for g in 0..n_orbits {
                for h in 0..n_orbits {
                    for &h1 in &data.hef[&(e, f)] {
                        for &h2 in &data.hef[&(f, g)] {
                            let h12 = data.compose[&(h1, h2)];
                            for &h3 in &data.hef[&(g, h)] {
                                let h23 = data.compose[&(h2, h3)];
                                if data.compose.get(&(h12, h3)) != data.compose.get(&(h1, h23)) {
                                    return Err(GroupoidViolation::NotCompatible(format!(
                                        "composition is not associative at ({h1},{h2},{h3})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for ((e, f), hs) in &data.hef {
        let id_e = d.h_of_pair[&(data.orbits[*e][0], data.orbits[*e][0])];
        let id_f = d.h_of_pair[&(data.orbits[*f][0], data.orbits[*f][0])];
        for &h in hs {
            if data.compose.get(&(id_e, h)) != Some(&h) || data.compose.get(&(h, id_f)) != Some(&h)
            {
                return Err(GroupoidViolation::NotCompatible(format!(
                    "identity laws fail for h={h} in H_{e}^{f}"
                )));
            }
            let back = &data.hef[&(*f, *e)];
            let inverses = back
                .iter()
                .filter(|&&h2| {
                    data.compose.get(&(h, h2)) == Some(&id_e)
                        && data.compose.get(&(h2, h)) == Some(&id_f)
                })
                .count();
            if inverses != 1 {
                return Err(GroupoidViolation::NotCompatible(format!(
                    "h={h} in H_{e}^{f} has {inverses} inverses"
                )));
            }
        }
    }
    // Conjugation by x ∈ X_e: g ↦ class of (g(x), x) is an isomorphism
    // G ≅ H_e^e.
    for (e, orbit) in data.orbits.iter().enumerate() {
        for &x in orbit {
            let phi: Vec<usize> = (0..group.order())
                .map(|g| d.h_of_pair[&(group.elements[g].tau_x[x], x)])
                .collect();
            let mut image = phi.clone();
            image.sort();
            image.dedup();
            if image != data.hef[&(e, e)] {
                return Err(GroupoidViolation::ConjugationNotIso(format!(
                    "conjugation by x={x} is not a bijection onto the vertex group"
                )));
            }
            for g1 in 0..group.order() {
                for g2 in 0..group.order() {
                    let lhs = phi[group.compose(g1, g2)];
                    let rhs = data.compose[&(phi[g2], phi[g1])];
                    if lhs != rhs {
                        return Err(GroupoidViolation::ConjugationNotIso(format!(
                            "conjugation by x={x} is not a homomorphism at ({g1},{g2})"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
