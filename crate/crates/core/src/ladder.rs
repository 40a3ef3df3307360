//! Morphisms between persistence modules and the basis-independent
//! partial matching a morphism induces between their barcodes.

use std::collections::BTreeMap;
use std::fmt;

use crate::elder::signed_difference;
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::matrix::Matrix;
use crate::module::{block_diag, IntervalKey, PersistenceModule};
use crate::subspace;

/// A morphism alpha: V -> U of persistence modules of the same length,
/// given by one matrix per index. Construction checks every square
/// alpha_{i+1} f^V_i = f^U_i alpha_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderMorphism {
    source: PersistenceModule,
    target: PersistenceModule,
    comps: Vec<Matrix>,
}

impl LadderMorphism {
    pub fn new(
        source: PersistenceModule,
        target: PersistenceModule,
        comps: Vec<Matrix>,
    ) -> Result<Self, Error> {
        let n = source.len();
        if target.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "source length {} vs target length {}",
                n,
                target.len()
            )));
        }
        if source.modulus() != target.modulus() {
            return Err(Error::ModulusMismatch(
                source.modulus().get(),
                target.modulus().get(),
            ));
        }
        if comps.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} component matrices, got {}",
                comps.len()
            )));
        }
        for (i, m) in comps.iter().enumerate() {
            if m.rows() != target.dims()[i] || m.cols() != source.dims()[i] {
                return Err(Error::DimensionMismatch(format!(
                    "component {} has shape {}x{}, expected {}x{}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    target.dims()[i],
                    source.dims()[i]
                )));
            }
            if m.modulus() != source.modulus() {
                return Err(Error::ModulusMismatch(
                    m.modulus().get(),
                    source.modulus().get(),
                ));
            }
        }
        for i in 1..n {
            let lhs = comps[i].mul(&source.map_at(i));
            let rhs = target.map_at(i).mul(&comps[i - 1]);
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                return Err(Error::NonCommutingSquare { square: i, difference: diff });
            }
        }
        Ok(LadderMorphism { source, target, comps })
    }

    /// The identity morphism on a module.
    pub fn identity(module: &PersistenceModule) -> Self {
        let comps = module
            .dims()
            .iter()
            .map(|&d| Matrix::identity(d, module.modulus()))
            .collect();
        LadderMorphism { source: module.clone(), target: module.clone(), comps }
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty() && self.target.is_empty()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.source.modulus()
    }

    pub fn source(&self) -> &PersistenceModule {
        &self.source
    }

    pub fn target(&self) -> &PersistenceModule {
        &self.target
    }

    /// Component at index i (1-based).
    pub fn component(&self, i: usize) -> &Matrix {
        &self.comps[i - 1]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.comps
    }

    /// Componentwise block-diagonal direct sum of two morphisms.
    pub fn direct_sum(&self, other: &LadderMorphism) -> Result<LadderMorphism, Error> {
        let source = self.source.direct_sum(&other.source)?;
        let target = self.target.direct_sum(&other.target)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        LadderMorphism::new(source, target, comps)
    }

    /// The cumulative count
    ///   chi(a, b, a', b') =
    ///     dim(S^V_{a,b} ∩ f^V_{b',b} alpha_{b'}^{-1}(S^U_{a',b'}))
    ///   - dim(S^V_{a,b} ∩ f^V_{b',b} alpha_{b'}^{-1}(0)),
    /// defined when 1 <= b' <= b <= n and zero for indices at the virtual
    /// boundary or with b' > b.
    pub fn chi(&self, a: i64, b: i64, a_p: i64, b_p: i64) -> i64 {
        let n = self.len() as i64;
        if !(1 <= b_p && b_p <= b && b <= n) {
            return 0;
        }
        if a < 1 || a_p < 0 || a > n || a_p > n {
            return 0;
        }
        let s_v = self.source.persist_subspace(a, b);
        if s_v.is_zero() {
            return 0;
        }
        let alpha = self.component(b_p as usize);
        let fvb = self
            .source
            .composite(b_p as usize, b as usize)
            .expect("b' <= b in range");

        let s_u = self.target.persist_subspace(a_p, b_p);
        let pre = subspace::preimage(alpha, &s_u).expect("alpha_{b'} on V_{b'}");
        let pushed = subspace::apply(&fvb, &pre).expect("f_{b',b} on V_{b'}");
        let hi = s_v.intersect(&pushed).expect("ambient V_b").dim() as i64;

        let pre0 = subspace::kernel(alpha);
        let pushed0 = subspace::apply(&fvb, &pre0).expect("f_{b',b} on V_{b'}");
        let lo = s_v.intersect(&pushed0).expect("ambient V_b").dim() as i64;
        hi - lo
    }

    /// The induced basis-independent partial matching: the first
    /// difference of chi in the two birth coordinates,
    ///   M(a,b,a',b') = chi(a,b,a',b') - chi(a-1,b,a',b')
    ///                - chi(a,b,a'-1,b') + chi(a-1,b,a'-1,b').
    /// Entries are supported on a' <= a <= b' <= b.
    pub fn induced_matching(&self) -> Matching {
        let n = self.len();
        let mut chi_memo: BTreeMap<(i64, i64, i64, i64), i64> = BTreeMap::new();
        let mut chi_fn = |x: &[i64]| -> i64 {
            let key = (x[0], x[1], x[2], x[3]);
            if let Some(&v) = chi_memo.get(&key) {
                return v;
            }
            let v = self.chi(x[0], x[1], x[2], x[3]);
            chi_memo.insert(key, v);
            v
        };
        let mut values = BTreeMap::new();
        for a in 1..=n {
            for b in a..=n {
                for b_p in a..=b {
                    for a_p in 1..=a.min(b_p) {
                        let m = signed_difference(
                            &mut chi_fn,
                            &[a as i64, b as i64, a_p as i64, b_p as i64],
                            &[0, 2],
                        );
                        debug_assert!(m >= 0, "matching multiplicity must be non-negative");
                        if m > 0 {
                            values.insert(
                                (IntervalKey::new(a, b), IntervalKey::new(a_p, b_p)),
                                m as usize,
                            );
                        }
                    }
                }
            }
        }
        Matching { n, values }
    }
}

/// Build a length-3 ladder morphism from a compact "uuu/vvv" dimension
/// code (target row over source row). Codes made of 0s and 1s take
/// identity maps wherever both ends are one-dimensional and zero maps
/// elsewhere. The two printed middle-2 patterns carry their specific
/// matrices:
/// "121/011" is F -(1 0)^T-> F^2 -(0 1)-> F over 0 -> F -id-> F with
/// components ((1 1)^T, id), and "110/121" its reflection.
pub fn ladder_from_code(code: &str, p: PrimeModulus) -> Result<LadderMorphism, Error> {
    let parse_row = |row: &str| -> Result<Vec<usize>, Error> {
        let digits: Option<Vec<usize>> =
            row.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        match digits {
            Some(d) if d.len() == 3 => Ok(d),
            _ => Err(Error::Parse(format!("bad ladder code row {row:?}"))),
        }
    };
    let (top, bottom) = code
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("ladder code {code:?} needs a '/'")))?;
    let u_dims = parse_row(top.trim())?;
    let v_dims = parse_row(bottom.trim())?;

    let special = |u_dims: &[usize], v_dims: &[usize]| -> Option<(Vec<Matrix>, Vec<Matrix>, Vec<Matrix>)> {
        if u_dims == [1, 2, 1] && v_dims == [0, 1, 1] {
            Some((
                vec![
                    Matrix::zeros(1, 0, p),
                    Matrix::from_int_rows(1, &[&[1]], p),
                ],
                vec![
                    Matrix::from_int_rows(1, &[&[1], &[0]], p),
                    Matrix::from_int_rows(2, &[&[0, 1]], p),
                ],
                vec![
                    Matrix::zeros(1, 0, p),
                    Matrix::from_int_rows(1, &[&[1], &[1]], p),
                    Matrix::identity(1, p),
                ],
            ))
        } else if u_dims == [1, 1, 0] && v_dims == [1, 2, 1] {
            Some((
                vec![
                    Matrix::from_int_rows(1, &[&[1], &[0]], p),
                    Matrix::from_int_rows(2, &[&[0, 1]], p),
                ],
                vec![
                    Matrix::identity(1, p),
                    Matrix::zeros(0, 1, p),
                ],
                vec![
                    Matrix::identity(1, p),
                    Matrix::from_int_rows(2, &[&[1, 1]], p),
                    Matrix::zeros(0, 1, p),
                ],
            ))
        } else {
            None
        }
    };

    let (v_maps, u_maps, comps) = if let Some(t) = special(&u_dims, &v_dims) {
        t
    } else if u_dims.iter().chain(&v_dims).all(|&d| d <= 1) {
        let ident_or_zero = |dims: &[usize], i: usize| {
            if dims[i] == 1 && dims[i + 1] == 1 {
                Matrix::identity(1, p)
            } else {
                Matrix::zeros(dims[i + 1], dims[i], p)
            }
        };
        (
            (0..2).map(|i| ident_or_zero(&v_dims, i)).collect(),
            (0..2).map(|i| ident_or_zero(&u_dims, i)).collect(),
            (0..3)
                .map(|i| {
                    if v_dims[i] == 1 && u_dims[i] == 1 {
                        Matrix::identity(1, p)
                    } else {
                        Matrix::zeros(u_dims[i], v_dims[i], p)
                    }
                })
                .collect(),
        )
    } else {
        return Err(Error::Parse(format!(
            "ladder code {code:?} has no fixed matrix table"
        )));
    };
    let v = PersistenceModule::new(v_dims, v_maps, p)?;
    let u = PersistenceModule::new(u_dims, u_maps, p)?;
    LadderMorphism::new(v, u, comps)
}

/// A basis-independent partial matching between the barcodes of two
/// modules: multiplicities on pairs of intervals, keyed
/// (source interval, target interval).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    n: usize,
    values: BTreeMap<(IntervalKey, IntervalKey), usize>,
}

impl Matching {
    pub fn from_values(
        n: usize,
        values: BTreeMap<(IntervalKey, IntervalKey), usize>,
    ) -> Self {
        let values = values.into_iter().filter(|&(_, m)| m > 0).collect();
        Matching { n, values }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, a: usize, b: usize, a_p: usize, b_p: usize) -> usize {
        if a > b || a_p > b_p {
            return 0;
        }
        self.values
            .get(&(IntervalKey::new(a, b), IntervalKey::new(a_p, b_p)))
            .copied()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((IntervalKey, IntervalKey), usize)> + '_ {
        self.values.iter().map(|(&k, &m)| (k, m))
    }

    pub fn values(&self) -> &BTreeMap<(IntervalKey, IntervalKey), usize> {
        &self.values
    }

    /// Total matched count, with multiplicity.
    pub fn total(&self) -> usize {
        self.values.values().sum()
    }

    /// Entrywise sum (matching of a direct sum of morphisms).
    pub fn add(&self, other: &Matching) -> Matching {
        let mut values = self.values.clone();
        for (k, m) in other.iter() {
            *values.entry(k).or_insert(0) += m;
        }
        Matching { n: self.n.max(other.n), values }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(kv, ku), &m) in &self.values {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{kv} -> {ku} x {m}")?;
        }
        Ok(())
    }
}
