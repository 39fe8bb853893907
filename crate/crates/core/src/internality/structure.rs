//! Finite internality structures: the datum (Q, X, C, D, f) with f a family
//! of bijections from Q onto the D-fibers of C, indexed by X.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use thiserror::Error;

/// Finite realization of an internality datum. `f[q][x]` is the element
/// f(q, x) of C; `pi_x` and `pi_c` fiber X and C over D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInternality {
    pub n_q: usize,
    pub n_x: usize,
    pub n_c: usize,
    pub n_d: usize,
    pub pi_x: Vec<usize>,
    pub pi_c: Vec<usize>,
    pub f: Vec<Vec<usize>>,
}

/// First witness of an invariant failure found by [`FiniteInternality::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    FiberSize { d: usize, size: usize, expected: usize },
    Compatibility { q: usize, x: usize, c: usize },
    NotInjective { x: usize, q1: usize, q2: usize },
    DuplicateColumns { x: usize, y: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(msg) => write!(f, "shape error: {msg}"),
            Violation::FiberSize { d, size, expected } => {
                write!(f, "C-fiber over d={d} has size {size}, expected nQ={expected}")
            }
            Violation::Compatibility { q, x, c } => write!(
                f,
                "piC(f({q},{x})) = piC({c}) differs from piX({x}): f is not over D"
            ),
            Violation::NotInjective { x, q1, q2 } => {
                write!(f, "f(.,{x}) is not injective: f({q1},{x}) = f({q2},{x})")
            }
            Violation::DuplicateColumns { x, y } => {
                write!(f, "columns {x} and {y} define the same map from Q to C")
            }
        }
    }
}

impl FiniteInternality {
    /// Construct with the block fiber layout used by the JSON format: C
    /// indices 0..nQ-1 form fiber 0, the next nQ indices fiber 1, and so on.
    pub fn from_blocks(n_q: usize, n_d: usize, pi_x: Vec<usize>, f: Vec<Vec<usize>>) -> Self {
        let n_c = n_q * n_d;
        let n_x = pi_x.len();
        let pi_c = (0..n_c).map(|c| c / n_q).collect();
        FiniteInternality { n_q, n_x, n_c, n_d, pi_x, pi_c, f }
    }

    pub fn fiber_of_c(&self, d: usize) -> Vec<usize> {
        (0..self.n_c).filter(|&c| self.pi_c[c] == d).collect()
    }

    /// Column of f at x, as the function q ↦ f(q, x).
    pub fn column(&self, x: usize) -> Vec<usize> {
        (0..self.n_q).map(|q| self.f[q][x]).collect()
    }

    /// Check the three structure invariants, reporting the first witness of
    /// failure: fibers of C have size nQ, f is over D, every f(.,x) is a
    /// bijection onto its fiber, and distinct x give distinct maps.
    pub fn validate(&self) -> Result<(), Violation> {
        if self.n_q == 0 || self.n_x == 0 || self.n_d == 0 {
            return Err(Violation::Shape("nQ, nX, nD must be positive".into()));
        }
        if self.pi_x.len() != self.n_x || self.pi_c.len() != self.n_c {
            return Err(Violation::Shape("piX/piC length mismatch".into()));
        }
        if let Some(&d) = self.pi_x.iter().find(|&&d| d >= self.n_d) {
            return Err(Violation::Shape(format!("piX value {d} out of range")));
        }
        if let Some(&d) = self.pi_c.iter().find(|&&d| d >= self.n_d) {
            return Err(Violation::Shape(format!("piC value {d} out of range")));
        }
        if self.f.len() != self.n_q || self.f.iter().any(|row| row.len() != self.n_x) {
            return Err(Violation::Shape("f table must be nQ x nX".into()));
        }
        if let Some(&c) = self.f.iter().flatten().find(|&&c| c >= self.n_c) {
            return Err(Violation::Shape(format!("f value {c} out of range")));
        }
        for d in 0..self.n_d {
            let size = self.fiber_of_c(d).len();
            if size != self.n_q {
                return Err(Violation::FiberSize { d, size, expected: self.n_q });
            }
        }
        for x in 0..self.n_x {
            for q in 0..self.n_q {
                let c = self.f[q][x];
                if self.pi_c[c] != self.pi_x[x] {
                    return Err(Violation::Compatibility { q, x, c });
                }
            }
        }
        for x in 0..self.n_x {
            for q1 in 0..self.n_q {
                for q2 in q1 + 1..self.n_q {
                    if self.f[q1][x] == self.f[q2][x] {
                        return Err(Violation::NotInjective { x, q1, q2 });
                    }
                }
            }
        }
        for x in 0..self.n_x {
            for y in x + 1..self.n_x {
                if self.column(x) == self.column(y) {
                    return Err(Violation::DuplicateColumns { x, y });
                }
            }
        }
        Ok(())
    }

    /// Cyclic model: Q = C = X = ℤ_n over a single point of D, with
    /// f(q, x) = q + x mod n.
    pub fn cyclic(n: usize) -> Self {
        let f = (0..n).map(|q| (0..n).map(|x| (q + x) % n).collect()).collect();
        Self::from_blocks(n, 1, vec![0; n], f)
    }

    /// Group model: Q = X = C = G with f the multiplication table
    /// (`mul[a][b]` = a·b).
    pub fn group_model(mul: &[Vec<usize>]) -> Self {
        let n = mul.len();
        let f = (0..n).map(|q| (0..n).map(|x| mul[q][x]).collect()).collect();
        Self::from_blocks(n, 1, vec![0; n], f)
    }
}

/// Multiplication table and inverses for S₃, with elements indexed by the
/// lexicographic order of their one-line notation on {0,1,2}. The product
/// `mul[a][b]` is the composite "apply b, then a".
pub fn s3_tables() -> (Vec<Vec<usize>>, Vec<usize>) {
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ];
    let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let mut mul = vec![vec![0; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            let prod: Vec<usize> = (0..3).map(|i| perms[a][perms[b][i]]).collect();
            mul[a][b] = index_of(&prod);
        }
    }
    let inv = (0..6)
        .map(|a| (0..6).find(|&b| mul[a][b] == 0).unwrap())
        .collect();
    (mul, inv)
}

#[derive(Clone, Copy, Debug)]
pub struct RandomBounds {
    pub n_q: usize,
    pub n_d: usize,
    pub n_x: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("bounds unsatisfiable: need nD <= nX <= nD * nQ! (nQ={n_q}, nD={n_d}, nX={n_x})")]
    Unsatisfiable { n_q: usize, n_d: usize, n_x: usize },
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Deterministic pseudo-random valid structure: D-fibers are block-laid-out,
/// X is assigned to fibers surjectively, and each f(.,x) is drawn as a
/// uniform bijection of Q onto its fiber, rejecting duplicate columns.
pub fn random_structure(seed: u64, bounds: RandomBounds) -> Result<FiniteInternality, BoundsError> {
    let RandomBounds { n_q, n_d, n_x } = bounds;
    let err = BoundsError::Unsatisfiable { n_q, n_d, n_x };
    if n_q == 0 || n_d == 0 || n_x < n_d || n_x > n_d * factorial(n_q) {
        return Err(err);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fiber assignment: first nD columns hit each fiber once, the rest are
    // uniform subject to the per-fiber capacity nQ!.
    let cap = factorial(n_q);
    let mut pi_x = vec![0usize; n_x];
    let mut counts = vec![0usize; n_d];
    for (x, slot) in pi_x.iter_mut().enumerate().take(n_d) {
        *slot = x;
        counts[x] = 1;
    }
    for slot in pi_x.iter_mut().skip(n_d) {
        let d = loop {
            let d = rng.gen_range(0..n_d);
            if counts[d] < cap {
                break d;
            }
        };
        *slot = d;
        counts[d] += 1;
    }
    // Columns: uniform bijections onto the fiber, fresh within each fiber.
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(n_x);
    for x in 0..n_x {
        let fiber: Vec<usize> = (pi_x[x] * n_q..(pi_x[x] + 1) * n_q).collect();
        loop {
            let mut perm: Vec<usize> = fiber.clone();
            for i in (1..perm.len()).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            if !columns.iter().any(|c| c == &perm) {
                columns.push(perm);
                break;
            }
        }
    }
    let f = (0..n_q)
        .map(|q| (0..n_x).map(|x| columns[x][q]).collect())
        .collect();
    let s = FiniteInternality::from_blocks(n_q, n_d, pi_x, f);
    debug_assert_eq!(s.validate(), Ok(()));
    Ok(s)
}
