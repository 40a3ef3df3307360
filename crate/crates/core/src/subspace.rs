//! Canonical subspaces of F_p^d and the subspace calculus.
//!
//! A `Subspace` stores its basis as the reduced row-echelon form of any
//! spanning set, with pivots strictly increasing. Two subspaces are equal
//! as sets exactly when their stored bases are identical, so `==` is set
//! equality.

use crate::error::Error;
use crate::field::PrimeModulus;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// Full-row-rank RREF matrix; rows are the canonical basis vectors.
    basis: Matrix,
}

impl Subspace {
    /// Canonicalize a spanning set given as matrix rows.
    pub fn from_spanning_rows(rows: &Matrix) -> Subspace {
        let mut m = rows.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        let mut basis = Matrix::zeros(rank, rows.cols(), rows.modulus());
        for i in 0..rank {
            for j in 0..rows.cols() {
                basis.set(i, j, m.get(i, j));
            }
        }
        Subspace { ambient: rows.cols(), basis }
    }

    pub fn zero(ambient: usize, p: PrimeModulus) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(0, ambient, p) }
    }

    pub fn full(ambient: usize, p: PrimeModulus) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(ambient, p) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.basis.modulus()
    }

    /// The canonical RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // reduce v against the RREF basis
        let p = self.modulus();
        let mut v = v.to_vec();
        for i in 0..self.basis.rows() {
            let pc = (0..self.ambient)
                .find(|&j| self.basis.get(i, j) != 0)
                .expect("basis rows are nonzero");
            if v[pc] != 0 {
                let f = v[pc];
                for j in 0..self.ambient {
                    v[j] = p.sub(v[j], p.mul(f, self.basis.get(i, j)));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool, Error> {
        self.check_compatible(other)?;
        Ok((0..other.basis.rows()).all(|i| self.contains_vector(other.basis.row(i))))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Error> {
        self.check_compatible(other)?;
        Ok(Subspace::from_spanning_rows(&self.basis.vstack(&other.basis)))
    }

    /// Intersection via the kernel of the stacked system [B1^T | -B2^T]:
    /// a kernel vector (u, w) has B1^T u = B2^T w, and those common values
    /// span the intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, Error> {
        self.check_compatible(other)?;
        let p = self.modulus();
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient, p));
        }
        let b1t = self.basis.transpose();
        let mut neg_b2t = other.basis.transpose();
        for i in 0..neg_b2t.rows() {
            for j in 0..neg_b2t.cols() {
                neg_b2t.set(i, j, p.neg(neg_b2t.get(i, j)));
            }
        }
        let system = b1t.hstack(&neg_b2t);
        let ker = system.kernel_basis();
        // project kernel vectors onto the u-block and map through B1
        let k1 = self.basis.rows();
        let mut coeffs = Matrix::zeros(ker.rows(), k1, p);
        for i in 0..ker.rows() {
            for j in 0..k1 {
                coeffs.set(i, j, ker.get(i, j));
            }
        }
        Ok(Subspace::from_spanning_rows(&coeffs.mul(&self.basis)))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), Error> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus().get(), other.modulus().get()));
        }
        Ok(())
    }

    /// Coordinates of a vector of this subspace in the canonical basis.
    /// Because the basis is RREF, the coordinates are read off at the
    /// pivot columns; membership is verified before returning.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains_vector(v) {
            return None;
        }
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.basis.rows() {
            let pc = (0..self.ambient).find(|&j| self.basis.get(i, j) != 0).unwrap();
            coords.push(v[pc]);
        }
        Some(coords)
    }
}

/// Kernel of a linear map as a subspace of its domain F_p^cols.
pub fn kernel(m: &Matrix) -> Subspace {
    Subspace::from_spanning_rows(&m.kernel_basis())
}

/// Column space of a linear map as a subspace of its codomain F_p^rows.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::from_spanning_rows(&m.transpose())
}

/// The image { m v : v in s }.
pub fn apply(m: &Matrix, s: &Subspace) -> Result<Subspace, Error> {
    if s.ambient_dim() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "apply: map expects ambient {}, subspace has {}",
            m.cols(),
            s.ambient_dim()
        )));
    }
    Ok(Subspace::from_spanning_rows(&s.basis().mul(&m.transpose())))
}

/// The preimage { v : m v in s }. Solved through the augmented system
/// m x = B^T y: the kernel of [m | -B^T] projected on the x-block spans
/// exactly the preimage.
pub fn preimage(m: &Matrix, s: &Subspace) -> Result<Subspace, Error> {
    if s.ambient_dim() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "preimage: map lands in ambient {}, subspace has {}",
            m.rows(),
            s.ambient_dim()
        )));
    }
    let p = m.modulus();
    let bt = s.basis().transpose();
    let mut neg_bt = bt.clone();
    for i in 0..neg_bt.rows() {
        for j in 0..neg_bt.cols() {
            neg_bt.set(i, j, p.neg(neg_bt.get(i, j)));
        }
    }
    let system = m.hstack(&neg_bt);
    let ker = system.kernel_basis();
    let mut xs = Matrix::zeros(ker.rows(), m.cols(), p);
    for i in 0..ker.rows() {
        for j in 0..m.cols() {
            xs.set(i, j, ker.get(i, j));
        }
    }
    Ok(Subspace::from_spanning_rows(&xs))
}
