//! The smallest algebraic subgroup of GL_n over the constants containing A,
//! for A diagonalizable over ℚ: an eigenbasis conjugate of the torus
//! subgroup cut out by the character lattice of the eigenvalues.

use super::lattice::{multiplicative_lattice, CharacterLattice};
use super::{GaloisError, LinearDifferenceSystem};
use crate::algebra::{q_kernel, Polynomial, Rat};
use crate::sigma::SigmaOperator;
use num::{BigInt, Integer, One, Signed, Zero};

/// G_A in eigenbasis form: G_A = P · {diag(x) : χ_m(x) = 1 for all lattice
/// basis vectors m} · P⁻¹, together with the constant-points form of the
/// σ-conjugation subgroup U (for g over constants, σ(g) = g, so
/// U ∩ GL_n(C) = {g : gA = Ag}).
#[derive(Clone, Debug)]
pub struct GaGroup {
    /// Columns are rational eigenvectors, eigenvalue order.
    pub eigenbasis: Vec<Vec<Rat>>,
    pub eigenvalues: Vec<Rat>,
    pub lattice: CharacterLattice,
    /// Whether the base field is all constants (B = C(B)), in which case
    /// the binding group equals G_A ∩ U.
    pub equality_holds: bool,
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            large.push(&n / &d);
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small.dedup();
    small
}

/// Rational roots of a rational-coefficient polynomial, with multiplicity,
/// by the rational root theorem plus deflation.
fn rational_roots(coeffs: &[Rat]) -> (Vec<(Rat, usize)>, Vec<Rat>) {
    let mut poly: Vec<Rat> = coeffs.to_vec();
    while poly.last().map(|c| c.is_zero()).unwrap_or(false) {
        poly.pop();
    }
    let mut roots: Vec<(Rat, usize)> = Vec::new();
    'outer: loop {
        if poly.len() <= 1 {
            break;
        }
        // Zero roots first.
        if poly[0].is_zero() {
            add_root(&mut roots, Rat::zero());
            poly.remove(0);
            continue;
        }
        // Clear denominators: candidates p/q with p | a0, q | a_d.
        let mut den = BigInt::one();
        for c in &poly {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = poly.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
        let a0 = ints.first().unwrap().clone();
        let ad = ints.last().unwrap().clone();
        for p in divisors(&a0) {
            for q in divisors(&ad) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(p.clone() * BigInt::from(sign), q.clone());
                    let mut value = Rat::zero();
                    for c in poly.iter().rev() {
                        value = value * cand.clone() + c.clone();
                    }
                    if value.is_zero() {
                        add_root(&mut roots, cand.clone());
                        // Deflate by synthetic division.
                        let mut new_poly = vec![Rat::zero(); poly.len() - 1];
                        let mut carry = Rat::zero();
                        for i in (0..poly.len() - 1).rev() {
                            carry = poly[i + 1].clone() + carry * cand.clone();
                            new_poly[i] = carry.clone();
                        }
                        poly = new_poly;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    (roots, poly)
}

fn add_root(roots: &mut Vec<(Rat, usize)>, r: Rat) {
    match roots.iter_mut().find(|(x, _)| *x == r) {
        Some((_, m)) => *m += 1,
        None => roots.push((r, 1)),
    }
}

/// Characteristic polynomial coefficients of a rational matrix (ascending,
/// monic up to sign), by cofactor expansion of det(A − λI).
fn char_poly(a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    let lam = Polynomial::var("lam");
    let mat: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Polynomial::constant(a[i][j].clone());
                    if i == j {
                        c.sub(&lam)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let det = super::poly_det(&mat);
    let coeffs = det.coeffs_in("lam");
    coeffs
        .iter()
        .map(|c| c.as_constant().expect("characteristic polynomial over the rationals"))
        .collect()
}

/// Compute G_A for a system whose matrix has rational constant entries and
/// is diagonalizable over ℚ. Refuses with the obstruction otherwise.
pub fn ga_group(sys: &LinearDifferenceSystem) -> Result<GaGroup, GaloisError> {
    let n = sys.n;
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            match sys.a.at(i, j).as_rat() {
                Some(r) => row.push(r),
                None => {
                    return Err(GaloisError::Unsupported(format!(
                        "A[{}][{}] = {} is not a rational constant; G_A over the constants \
                         requires a constant matrix",
                        i + 1,
                        j + 1,
                        sys.a.at(i, j)
                    )))
                }
            }
        }
        a.push(row);
    }
    let coeffs = char_poly(&a);
    let (roots, residual) = rational_roots(&coeffs);
    if residual.len() > 1 {
        let residual_text: Vec<String> =
            residual.iter().map(crate::algebra::rat_to_string).collect();
        return Err(GaloisError::Unsupported(format!(
            "characteristic factor with coefficients [{}] has no rational root: \
             irrational or complex eigenvalues",
            residual_text.join(", ")
        )));
    }
    // Eigenspaces; geometric multiplicity must meet the algebraic one.
    let mut eigenvalues = Vec::new();
    let mut columns: Vec<Vec<Rat>> = Vec::new();
    let mut sorted_roots = roots.clone();
    sorted_roots.sort_by(|x, y| x.0.cmp(&y.0));
    for (lambda, alg_mult) in &sorted_roots {
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            a[i][j].clone() - lambda.clone()
                        } else {
                            a[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let basis = q_kernel(&rows);
        if basis.len() != *alg_mult {
            return Err(GaloisError::Unsupported(format!(
                "eigenvalue {} is defective: algebraic multiplicity {}, geometric {}; \
                 a unipotent factor contributes an additive component not handled here",
                crate::algebra::rat_to_string(lambda),
                alg_mult,
                basis.len()
            )));
        }
        for v in basis {
            eigenvalues.push(lambda.clone());
            columns.push(v);
        }
    }
    let lattice = multiplicative_lattice(&eigenvalues)
        .map_err(|e| GaloisError::Unsupported(e.to_string()))?;
    Ok(GaGroup {
        eigenbasis: columns,
        eigenvalues,
        lattice,
        equality_holds: sys.field.sigma == SigmaOperator::Identity,
    })
}
