//! Matrices over the rational function field.

use super::ratfun::RationalFunction;
use super::Rat;
use std::fmt;

/// Dense row-major matrix of rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRF {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl MatrixRF {
    pub fn new(rows: usize, cols: usize, entries: Vec<RationalFunction>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry table length must be rows*cols");
        MatrixRF { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RationalFunction) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        MatrixRF { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                RationalFunction::one()
            } else {
                RationalFunction::zero()
            }
        })
    }

    pub fn from_rats(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        Self::from_fn(r, c, |i, j| RationalFunction::from_rat(rows[i][j].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        MatrixRF {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &MatrixRF) -> MatrixRF {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        MatrixRF::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RationalFunction::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
            }
            acc
        })
    }

    /// Exact determinant by Gaussian elimination over the function field.
    /// Panics on non-square input; use [`MatrixRF::checked_det`] to report it.
    pub fn det(&self) -> RationalFunction {
        self.checked_det().expect("determinant of non-square matrix")
    }

    pub fn checked_det(&self) -> Option<RationalFunction> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = RationalFunction::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
            let Some(p) = pivot else {
                return Some(RationalFunction::zero());
            };
            if p != col {
                for j in 0..n {
                    let a = m.at(col, j).clone();
                    let b = m.at(p, j).clone();
                    m.set(col, j, b);
                    m.set(p, j, a);
                }
                det = det.neg();
            }
            let piv = m.at(col, col).clone();
            det = det.mul(&piv);
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).div(&piv);
                for j in col..n {
                    let v = m.at(r, j).sub(&factor.mul(m.at(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        Some(det)
    }

    /// Inverse over the function field; `None` if singular.
    pub fn inverse(&self) -> Option<MatrixRF> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = MatrixRF::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let (a, b) = (m.at(col, j).clone(), m.at(pivot, j).clone());
                    m.set(col, j, b);
                    m.set(pivot, j, a);
                    let (a, b) = (inv.at(col, j).clone(), inv.at(pivot, j).clone());
                    inv.set(col, j, b);
                    inv.set(pivot, j, a);
                }
            }
            let piv = m.at(col, col).clone();
            for j in 0..n {
                m.set(col, j, m.at(col, j).div(&piv));
                inv.set(col, j, inv.at(col, j).div(&piv));
            }
            for r in 0..n {
                if r == col || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in 0..n {
                    let v = m.at(r, j).sub(&factor.mul(m.at(col, j)));
                    m.set(r, j, v);
                    let v = inv.at(r, j).sub(&factor.mul(inv.at(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }
}

impl fmt::Display for MatrixRF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
