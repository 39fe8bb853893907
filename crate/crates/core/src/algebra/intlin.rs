//! Exact integer and rational linear algebra: Hermite normal forms of
//! lattices, integer kernels, and rational kernels via row reduction.

use super::Rat;
use num::{BigInt, Integer, One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let entries = rows.iter().flat_map(|row| row.iter().map(|&v| BigInt::from(v))).collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn from_columns(dim: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zero(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for i in 0..dim {
                m.entries[i * cols.len() + j] = c[i].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Row Hermite normal form with unimodular transform: returns `(H, U)` with
/// `U * A = H`, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
fn hnf_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut u = IntMatrix::zero(rows, rows);
    for i in 0..rows {
        u.entries[i * rows + i] = BigInt::one();
    }
    let swap_rows = |m: &mut IntMatrix, r1: usize, r2: usize| {
        for j in 0..m.cols {
            m.entries.swap(r1 * m.cols + j, r2 * m.cols + j);
        }
    };
    let addmul_row = |m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        for j in 0..m.cols {
            let v = m.at(src, j) * q;
            m.entries[dst * m.cols + j] += v;
        }
    };
    let negate_row = |m: &mut IntMatrix, r: usize| {
        for j in 0..m.cols {
            let v = -m.at(r, j).clone();
            m.entries[r * m.cols + j] = v;
        }
    };

    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Clear the column below row r by gcd-style reduction.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h.at(i, c).is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) if h.at(i, c).abs() < h.at(b, c).abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            if b != r {
                swap_rows(&mut h, r, b);
                swap_rows(&mut u, r, b);
            }
            let mut done = true;
            let piv = h.at(r, c).clone();
            for i in r + 1..rows {
                if h.at(i, c).is_zero() {
                    continue;
                }
                let q = -floor_div(h.at(i, c), &piv);
                addmul_row(&mut h, i, r, &q);
                addmul_row(&mut u, i, r, &q);
                if !h.at(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.at(r, c).is_zero() {
            continue;
        }
        if h.at(r, c).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let piv = h.at(r, c).clone();
        for i in 0..r {
            let q = -floor_div(h.at(i, c), &piv);
            if !q.is_zero() {
                addmul_row(&mut h, i, r, &q);
                addmul_row(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

fn reverse_vec(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().rev().cloned().collect()
}

/// Canonical Hermite-normal-form basis of the lattice spanned by `gens`.
///
/// The echelon runs over the *last* coordinate first, so each basis vector's
/// trailing nonzero entry is positive; e.g. the kernel of `[1 3]` is returned
/// as `{(-3, 1)}`. The basis is unique for the lattice.
pub fn lattice_hnf(gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let dim = gens[0].len();
    let rev: Vec<Vec<BigInt>> = gens.iter().map(|g| reverse_vec(g)).collect();
    let m = IntMatrix::new(rev.len(), dim, rev.into_iter().flatten().collect());
    let (h, _) = hnf_with_transform(&m);
    (0..h.rows)
        .map(|i| h.row(i))
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .map(|row| reverse_vec(&row))
        .collect()
}

/// Membership of `v` in the lattice with canonical basis `basis` (as
/// produced by [`lattice_hnf`]).
pub fn lattice_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut w = reverse_vec(v);
    for b in basis {
        let b = reverse_vec(b);
        let pivot = b.iter().position(|x| !x.is_zero()).expect("zero basis vector");
        if w[pivot].is_zero() {
            continue;
        }
        let (q, r) = w[pivot].div_rem(&b[pivot]);
        if !r.is_zero() {
            return false;
        }
        for (wi, bi) in w.iter_mut().zip(&b) {
            *wi -= &q * bi;
        }
    }
    w.iter().all(|x| x.is_zero())
}

/// Basis of the integer kernel `{v : m v = 0}`, computed from the Hermite
/// normal form of the transpose; columns of the result form the canonical
/// HNF basis.
pub fn int_kernel(m: &IntMatrix) -> IntMatrix {
    // Transpose: rows indexed by the kernel's ambient dimension.
    let mt = IntMatrix::from_fn_transpose(m);
    let (h, u) = hnf_with_transform(&mt);
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..h.rows {
        if h.row(i).iter().all(|v| v.is_zero()) {
            gens.push(u.row(i));
        }
    }
    let basis = lattice_hnf(&gens);
    for b in &basis {
        debug_assert!(m.mul_vec(b).iter().all(|v| v.is_zero()));
    }
    IntMatrix::from_columns(m.cols, &basis)
}

impl IntMatrix {
    fn from_fn_transpose(m: &IntMatrix) -> IntMatrix {
        let mut t = IntMatrix::zero(m.cols, m.rows);
        for i in 0..m.rows {
            for j in 0..m.cols {
                t.entries[j * m.rows + i] = m.at(i, j).clone();
            }
        }
        t
    }
}

/// Basis of the rational kernel of a matrix, derived from the reduced row
/// echelon form; one vector per free column, ordered by free column index.
pub fn q_kernel(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for x in &mut m[r] {
            *x /= piv.clone();
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
    }
    let mut basis = Vec::new();
    for c in 0..ncols {
        if pivot_of_col[c].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[c] = Rat::one();
        for (j, pv) in pivot_of_col.iter().enumerate() {
            if let Some(pr) = pv {
                v[j] = -m[*pr][c].clone();
            }
        }
        basis.push(v);
    }
    basis
}
