//! Persistence modules, the persisting subspaces S_{a,b}, diagrams and
//! barcodes.
//!
//! Index conventions follow the closed-interval reading: the interval
//! written [a, b] covers positions a..=b, and queries at the virtual
//! boundary indices 0 and n+1 see the zero space.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::field::PrimeModulus;
use crate::matrix::Matrix;
use crate::subspace::{self, Subspace};

/// A closed interval [a, b] with 1 <= a <= b <= n.
///
/// Ordered by (a ascending, b descending): within a birth index, longer
/// intervals come first. This is the canonical enumeration order for
/// representation sets and all textual output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalKey {
    pub a: usize,
    pub b: usize,
}

impl IntervalKey {
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a <= b, "interval [{a},{b}] is empty");
        IntervalKey { a, b }
    }
}

impl Ord for IntervalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.a, std::cmp::Reverse(self.b)).cmp(&(other.a, std::cmp::Reverse(other.b)))
    }
}

impl PartialOrd for IntervalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IntervalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// One copy of an interval inside a representation set, counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexedInterval {
    pub key: IntervalKey,
    pub copy: usize,
}

impl fmt::Display for IndexedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.key, self.copy)
    }
}

/// A persistence module V_1 -> V_2 -> ... -> V_n over F_p, given by the
/// dimensions d_i and the structure maps f_i of shape d_{i+1} x d_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceModule {
    dims: Vec<usize>,
    maps: Vec<Matrix>,
    p: PrimeModulus,
}

impl PersistenceModule {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix>, p: PrimeModulus) -> Result<Self, Error> {
        let n = dims.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("module of length 0".into()));
        }
        if maps.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} structure maps, got {}",
                n - 1,
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(Error::DimensionMismatch(format!(
                    "map f_{} has shape {}x{}, expected {}x{}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
            if m.modulus() != p {
                return Err(Error::ModulusMismatch(m.modulus().get(), p.get()));
            }
        }
        Ok(PersistenceModule { dims, maps, p })
    }

    /// The zero module of length n.
    pub fn zero(n: usize, p: PrimeModulus) -> Self {
        let maps = (0..n.saturating_sub(1)).map(|_| Matrix::zeros(0, 0, p)).collect();
        PersistenceModule { dims: vec![0; n], maps, p }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension at index i, with the virtual boundary V_0 = V_{n+1} = 0.
    /// Indices outside 0..=n+1 are also zero.
    pub fn dim_at(&self, i: i64) -> usize {
        if i >= 1 && i <= self.len() as i64 {
            self.dims[(i - 1) as usize]
        } else {
            0
        }
    }

    /// Structure map f_i : V_i -> V_{i+1} for 0 <= i <= n, including the
    /// boundary zero maps f_0 : 0 -> V_1 and f_n : V_n -> 0.
    pub fn map_at(&self, i: usize) -> Matrix {
        let n = self.len();
        if i == 0 {
            Matrix::zeros(self.dims[0], 0, self.p)
        } else if i == n {
            Matrix::zeros(0, self.dims[n - 1], self.p)
        } else {
            self.maps[i - 1].clone()
        }
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// The composite f_{a,b} = f_{b-1} ∘ ... ∘ f_a, with f_{a,a} the
    /// identity. Valid for 0 <= a <= b <= n+1.
    pub fn composite(&self, a: usize, b: usize) -> Result<Matrix, Error> {
        let n = self.len();
        if a > b || b > n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "composite indices {a} > {b} or out of range (n = {n})"
            )));
        }
        let mut acc = Matrix::identity(self.dim_at(a as i64), self.p);
        for i in a..b {
            acc = self.map_at(i).mul(&acc);
        }
        Ok(acc)
    }

    /// The subspace S_{a,b} = f_{a,b}(V_a) ∩ ker f_b of V_b; the zero
    /// subspace whenever (a, b) falls outside 1 <= a <= b <= n.
    pub fn persist_subspace(&self, a: i64, b: i64) -> Subspace {
        let n = self.len() as i64;
        if !(1 <= a && a <= b && b <= n) {
            return Subspace::zero(self.dim_at(b), self.p);
        }
        let fab = self.composite(a as usize, b as usize).expect("in-range composite");
        let img = subspace::image(&fab);
        let ker = subspace::kernel(&self.map_at(b as usize));
        img.intersect(&ker).expect("same ambient V_b")
    }

    /// The persistence diagram via D(a,b) = dim S_{a,b} - dim S_{a-1,b}.
    pub fn diagram(&self) -> PersistenceDiagram {
        let n = self.len();
        let mut mult = BTreeMap::new();
        for b in 1..=n {
            let mut prev = 0usize; // dim S_{0,b} = 0
            for a in 1..=b {
                let cur = self.persist_subspace(a as i64, b as i64).dim();
                debug_assert!(cur >= prev, "S_{{a-1,b}} ⊆ S_{{a,b}}");
                let m = cur - prev;
                if m > 0 {
                    mult.insert(IntervalKey::new(a, b), m);
                }
                prev = cur;
            }
        }
        PersistenceDiagram { n, multiplicities: mult }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &PersistenceModule) -> Result<PersistenceModule, Error> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "length {} vs {}",
                self.len(),
                other.len()
            )));
        }
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(&a, &b)| a + b).collect();
        let maps: Vec<Matrix> = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(m1, m2)| block_diag(m1, m2))
            .collect();
        PersistenceModule::new(dims, maps, self.p)
    }
}

pub(crate) fn block_diag(m1: &Matrix, m2: &Matrix) -> Matrix {
    let p = m1.modulus();
    let mut out = Matrix::zeros(m1.rows() + m2.rows(), m1.cols() + m2.cols(), p);
    for i in 0..m1.rows() {
        for j in 0..m1.cols() {
            out.set(i, j, m1.get(i, j));
        }
    }
    for i in 0..m2.rows() {
        for j in 0..m2.cols() {
            out.set(m1.rows() + i, m1.cols() + j, m2.get(i, j));
        }
    }
    out
}

/// The interval module I[a,b] of length n: F on positions a..=b with
/// identity maps inside and zero maps at the ends.
pub fn interval_module(a: usize, b: usize, n: usize, p: PrimeModulus) -> Result<PersistenceModule, Error> {
    if !(1 <= a && a <= b && b <= n) {
        return Err(Error::InvalidInterval { a, b, n });
    }
    let dims: Vec<usize> = (1..=n).map(|i| usize::from(a <= i && i <= b)).collect();
    let maps: Vec<Matrix> = (1..n)
        .map(|i| {
            if a <= i && i < b {
                Matrix::identity(1, p)
            } else {
                Matrix::zeros(dims[i], dims[i - 1], p)
            }
        })
        .collect();
    PersistenceModule::new(dims, maps, p)
}

/// Interval multiplicities of a module: a finitely supported function on
/// pairs (a, b) with a <= b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceDiagram {
    n: usize,
    multiplicities: BTreeMap<IntervalKey, usize>,
}

impl PersistenceDiagram {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn get(&self, a: usize, b: usize) -> usize {
        if a > b {
            return 0;
        }
        self.multiplicities.get(&IntervalKey::new(a, b)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (IntervalKey, usize)> + '_ {
        self.multiplicities.iter().map(|(&k, &m)| (k, m))
    }

    /// Pointwise sum (diagram of a direct sum).
    pub fn add(&self, other: &PersistenceDiagram) -> PersistenceDiagram {
        let mut mult = self.multiplicities.clone();
        for (k, m) in other.iter() {
            *mult.entry(k).or_insert(0) += m;
        }
        PersistenceDiagram { n: self.n.max(other.n), multiplicities: mult }
    }

    /// Drop zero entries (there are none by construction) into a barcode.
    pub fn barcode(&self) -> Barcode {
        Barcode {
            entries: self.multiplicities.iter().filter(|&(_, &m)| m > 0).map(|(&k, &m)| (k, m)).collect(),
        }
    }

    /// The canonical representation set s(B): intervals ordered by
    /// (a ascending, b descending), copies numbered from 1.
    pub fn representation_set(&self) -> Vec<IndexedInterval> {
        let mut out = Vec::new();
        for (k, m) in self.iter() {
            for copy in 1..=m {
                out.push(IndexedInterval { key: k, copy });
            }
        }
        out
    }
}

/// A multiset of intervals with strictly positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Barcode {
    entries: BTreeMap<IntervalKey, usize>,
}

impl Barcode {
    pub fn empty() -> Self {
        Barcode::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (IntervalKey, usize)>) -> Self {
        Barcode { entries: entries.into_iter().filter(|&(_, m)| m > 0).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (IntervalKey, usize)> + '_ {
        self.entries.iter().map(|(&k, &m)| (k, m))
    }

    pub fn get(&self, k: IntervalKey) -> usize {
        self.entries.get(&k).copied().unwrap_or(0)
    }

    /// Total interval count, with multiplicity.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, m)| format!("{k} x {m}")).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// Turn a basis-independent matching into a concrete partial bijection
/// between the canonical representation sets, consuming copies in
/// enumeration order. Fails when the matching violates the diagram bounds.
pub fn realize_matching(
    values: &BTreeMap<(IntervalKey, IntervalKey), usize>,
    source: &PersistenceDiagram,
    target: &PersistenceDiagram,
) -> Result<Vec<(IndexedInterval, IndexedInterval)>, Error> {
    // bound checks (Definition of a basis-independent partial matching)
    let mut row: BTreeMap<IntervalKey, usize> = BTreeMap::new();
    let mut col: BTreeMap<IntervalKey, usize> = BTreeMap::new();
    for (&(kv, ku), &m) in values {
        *row.entry(kv).or_insert(0) += m;
        *col.entry(ku).or_insert(0) += m;
    }
    for (&k, &s) in &row {
        if s > source.get(k.a, k.b) {
            return Err(Error::MatchingBounds(format!("row sum {s} at {k} exceeds source diagram")));
        }
    }
    for (&k, &s) in &col {
        if s > target.get(k.a, k.b) {
            return Err(Error::MatchingBounds(format!("column sum {s} at {k} exceeds target diagram")));
        }
    }
    let mut next_src: BTreeMap<IntervalKey, usize> = BTreeMap::new();
    let mut next_tgt: BTreeMap<IntervalKey, usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (&(kv, ku), &m) in values {
        for _ in 0..m {
            let i = next_src.entry(kv).or_insert(0);
            *i += 1;
            let j = next_tgt.entry(ku).or_insert(0);
            *j += 1;
            pairs.push((
                IndexedInterval { key: kv, copy: *i },
                IndexedInterval { key: ku, copy: *j },
            ));
        }
    }
    Ok(pairs)
}
