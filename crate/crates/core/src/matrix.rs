//! Dense row-major matrices over F_p with exact Gauss-Jordan elimination.
//!
//! Zero-by-k and k-by-zero matrices are first-class values: they represent
//! linear maps to or from the zero space and every operation accepts them.

use std::fmt;

use crate::error::Error;
use crate::field::PrimeModulus;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: PrimeModulus,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, p: PrimeModulus) -> Self {
        Matrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: PrimeModulus) -> Self {
        let mut m = Matrix::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from signed integer rows, reducing mod p. `cols` must be given
    /// explicitly so that empty matrices are unambiguous.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<i64>], p: PrimeModulus) -> Result<Self, Error> {
        if entries.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "expected {rows} rows, got {}",
                entries.len()
            )));
        }
        let mut m = Matrix::zeros(rows, cols, p);
        for (i, r) in entries.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, p.reduce(x));
            }
        }
        Ok(m)
    }

    /// Infallible constructor for literal matrices in code and tests.
    pub fn from_int_rows(cols: usize, entries: &[&[i64]], p: PrimeModulus) -> Self {
        let rows: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
        Matrix::from_rows(entries.len(), cols, &rows, p).expect("literal matrix shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.get();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.p, other.p, "matrix product modulus mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.p.add(out.get(i, j), self.p.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.p.sub(self.get(i, j), other.get(i, j)));
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Vertical concatenation [self ; other].
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.p, other.p);
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols, self.p);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    /// In-place reduced row-echelon form. Returns the pivot columns in
    /// increasing order; the rank is their count.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // find a pivot row
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.p.inv(self.get(r, c));
            for j in c..self.cols {
                let v = self.p.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for j in c..self.cols {
                        let v = self.p.sub(self.get(i, j), self.p.mul(f, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, y);
            self.set(b, j, x);
        }
    }

    /// Basis of the right kernel {v : self * v = 0}, one vector per row.
    pub fn kernel_basis(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols, self.p);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, self.p.neg(m.get(r, fc)));
            }
        }
        out
    }

    /// Solve self * X = rhs exactly (columnwise), free variables set to zero.
    /// Returns None when any column is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hstack(rhs);
        let pivots = aug.rref_in_place();
        // a pivot in the rhs block means an inconsistent column
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols, self.p);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, aug.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    /// Apply to a single vector.
    pub fn apply_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for j in 0..self.cols {
                    acc = self.p.add(acc, self.p.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{}]", self.rows, self.cols);
        }
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
