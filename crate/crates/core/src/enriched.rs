//! Matchings enriched over a span V -> W <- U: each matched pair of
//! intervals carries the multiset of intervals of W that witnesses the
//! match, and the witnesses assemble into the common-persistence
//! submodule of W.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::field::PrimeModulus;
use crate::ladder::LadderMorphism;
use crate::matrix::Matrix;
use crate::module::{Barcode, IntervalKey, PersistenceModule};
use crate::subspace::{self, Subspace};

/// A span of morphisms alpha: V -> W and beta: U -> W with a common
/// target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    alpha: LadderMorphism,
    beta: LadderMorphism,
}

impl Span {
    pub fn new(alpha: LadderMorphism, beta: LadderMorphism) -> Result<Self, Error> {
        if alpha.target() != beta.target() {
            return Err(Error::SpanTargetMismatch);
        }
        Ok(Span { alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.alpha.modulus()
    }

    pub fn alpha(&self) -> &LadderMorphism {
        &self.alpha
    }

    pub fn beta(&self) -> &LadderMorphism {
        &self.beta
    }

    pub fn v(&self) -> &PersistenceModule {
        self.alpha.source()
    }

    pub fn w(&self) -> &PersistenceModule {
        self.alpha.target()
    }

    pub fn u(&self) -> &PersistenceModule {
        self.beta.source()
    }

    /// R(a, b, c, d) = alpha_d(f^V_{a,d}(V_a) ∩ ker f^V_{d,b+1}) ∩ S^W_{c,d},
    /// a subspace of W_d; zero unless a, c <= d <= b with all of a, c, d
    /// inside 1..=n.
    pub fn r_space(&self, a: i64, b: i64, c: i64, d: i64) -> Subspace {
        side_space(&self.alpha, self.w(), a, b, c, d)
    }

    /// The mirror of `r_space` through beta.
    pub fn l_space(&self, a_p: i64, b_p: i64, c: i64, d: i64) -> Subspace {
        side_space(&self.beta, self.w(), a_p, b_p, c, d)
    }

    /// Equivalent formulation of `r_space` that pushes the kernel from
    /// position a instead of intersecting at d:
    /// f^W_{a,d}(alpha_a(ker f^V_{a,b+1})) ∩ S^W_{c,d}. Used as an
    /// independent cross-check.
    pub fn r_space_pushed(&self, a: i64, b: i64, c: i64, d: i64) -> Subspace {
        side_space_pushed(&self.alpha, self.w(), a, b, c, d)
    }

    /// The mirror of `r_space_pushed` through beta.
    pub fn l_space_pushed(&self, a_p: i64, b_p: i64, c: i64, d: i64) -> Subspace {
        side_space_pushed(&self.beta, self.w(), a_p, b_p, c, d)
    }

    /// y(a, b, a', b', c, d) = dim(R(a,b,c,d) ∩ L(a',b',c,d)), and zero
    /// when the two windows cannot nest (a > b' or a' > b).
    pub fn y_value(&self, a: i64, b: i64, a_p: i64, b_p: i64, c: i64, d: i64) -> i64 {
        if a > b_p || a_p > b {
            return 0;
        }
        let r = self.r_space(a, b, c, d);
        if r.is_zero() {
            return 0;
        }
        let l = self.l_space(a_p, b_p, c, d);
        r.intersect(&l).expect("both live in W_d").dim() as i64
    }

    /// The enriched matching: for every pair of intervals ([a,b] of V,
    /// [a',b'] of U), the multiset of witness intervals [c,d] of W that
    /// carry classes matched through both legs.
    ///
    /// Each witness death index d is handled independently. A pair of
    /// intervals covers the subspace R(a,b,c,d) ∩ L(a',b',c,d) of W_d;
    /// every dimension of coverage is claimed by exactly one pair,
    /// resolving overlaps in elder order: earlier births win, then
    /// earlier deaths (a class enters the coverage of a cell exactly at
    /// its true birth and death indices, so the first claiming cell is
    /// the elder one). Classes that die at d and lie in both images are
    /// always covered by the maximal cell, so for every d the number of
    /// witnesses ending at d equals the number of intervals of the
    /// common-persistence submodule ending at d.
    pub fn enriched_matching(&self) -> EnrichedMatching {
        // orient the span canonically so swapping the legs transposes
        // the result exactly, independent of tie-breaking between
        // mirror-image cells
        if leg_key(&self.beta) < leg_key(&self.alpha) {
            let swapped = Span {
                alpha: self.beta.clone(),
                beta: self.alpha.clone(),
            };
            return swapped.enriched_matching_oriented().transposed();
        }
        self.enriched_matching_oriented()
    }

    fn enriched_matching_oriented(&self) -> EnrichedMatching {
        let n = self.len();
        let p = self.modulus();
        let mut entries: BTreeMap<(IntervalKey, IntervalKey), BTreeMap<IntervalKey, usize>> =
            BTreeMap::new();
        for d in 1..=n {
            // everything claimable at this level: classes in both images
            // that die at d
            let dies_at_d = subspace::kernel(
                &self
                    .w()
                    .composite(d, d + 1)
                    .expect("d + 1 <= n + 1 hits the virtual boundary at most"),
            );
            let budget = subspace::image(self.alpha.component(d))
                .intersect(&subspace::image(self.beta.component(d)))
                .expect("images live in W_d")
                .intersect(&dies_at_d)
                .expect("kernel lives in W_d")
                .dim();
            if budget == 0 {
                continue;
            }
            let mut r_memo: HashMap<(usize, usize, usize), Subspace> = HashMap::new();
            let mut l_memo: HashMap<(usize, usize, usize), Subspace> = HashMap::new();
            // cells in elder order; the pair of interval keys is compared
            // as an unordered pair so the order treats both legs alike
            let mut cells: Vec<((usize, usize), (usize, usize), usize)> = Vec::new();
            for a in 1..=d {
                for b in d..=n {
                    for a_p in 1..=d {
                        for b_p in d..=n {
                            for c in 1..=d {
                                cells.push(((a, b), (a_p, b_p), c));
                            }
                        }
                    }
                }
            }
            cells.sort_by_key(|&(kv, ku, c)| (kv.min(ku), kv.max(ku), c, kv, ku));
            let mut covered = Subspace::zero(self.w().dims()[d - 1], p);
            for ((a, b), (a_p, b_p), c) in cells {
                if covered.dim() == budget {
                    break;
                }
                let r = r_memo
                    .entry((a, b, c))
                    .or_insert_with(|| self.r_space(a as i64, b as i64, c as i64, d as i64));
                if r.is_zero() {
                    continue;
                }
                let l = l_memo
                    .entry((a_p, b_p, c))
                    .or_insert_with(|| self.l_space(a_p as i64, b_p as i64, c as i64, d as i64));
                if l.is_zero() {
                    continue;
                }
                let coverage = r.intersect(l).expect("both live in W_d");
                let merged = covered.sum(&coverage).expect("both live in W_d");
                let gained = merged.dim() - covered.dim();
                if gained > 0 {
                    let pair = (IntervalKey::new(a, b), IntervalKey::new(a_p, b_p));
                    *entries
                        .entry(pair)
                        .or_default()
                        .entry(IntervalKey::new(c, d))
                        .or_insert(0) += gained;
                    covered = merged;
                }
            }
        }
        let entries = entries
            .into_iter()
            .map(|(k, ws)| (k, Barcode::from_entries(ws)))
            .collect();
        EnrichedMatching { n, entries }
    }

    /// The common-persistence submodule K_i = alpha_i(V_i) ∩ beta_i(U_i)
    /// of W, with structure maps restricted from W, together with the
    /// inclusion K -> W.
    pub fn common_submodule(&self) -> Result<(PersistenceModule, LadderMorphism), Error> {
        let n = self.len();
        let p = self.modulus();
        let spaces: Vec<Subspace> = (1..=n)
            .map(|i| {
                let im_a = subspace::image(self.alpha.component(i));
                let im_b = subspace::image(self.beta.component(i));
                im_a.intersect(&im_b)
            })
            .collect::<Result<_, _>>()?;
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
        let mut maps = Vec::with_capacity(n.saturating_sub(1));
        for i in 1..n {
            let mut m = Matrix::zeros(dims[i], dims[i - 1], p);
            for j in 0..dims[i - 1] {
                let pushed = self.w().map_at(i).apply_vec(spaces[i - 1].basis().row(j));
                let coords = spaces[i]
                    .coords(&pushed)
                    .expect("images are invariant under the structure maps");
                for (r, c) in coords.into_iter().enumerate() {
                    m.set(r, j, c);
                }
            }
            maps.push(m);
        }
        let k = PersistenceModule::new(dims, maps, p)?;
        let incls = spaces.iter().map(|s| s.basis().transpose()).collect();
        let inclusion = LadderMorphism::new(k.clone(), self.w().clone(), incls)?;
        Ok((k, inclusion))
    }
}

/// Deterministic comparison key for a span leg: source shape and maps,
/// then the component matrices. Equal legs get equal keys, and the key
/// pins down a canonical orientation for tie-breaking.
fn leg_key(m: &LadderMorphism) -> Vec<u32> {
    let mut key = Vec::new();
    for &dim in m.source().dims() {
        key.push(dim as u32);
    }
    let push_matrix = |key: &mut Vec<u32>, mat: &Matrix| {
        key.push(mat.rows() as u32);
        key.push(mat.cols() as u32);
        for r in 0..mat.rows() {
            for c in 0..mat.cols() {
                key.push(mat.get(r, c));
            }
        }
    };
    for mat in m.source().maps() {
        push_matrix(&mut key, mat);
    }
    for i in 1..=m.len() {
        push_matrix(&mut key, m.component(i));
    }
    key
}

fn side_space(
    morphism: &LadderMorphism,
    w: &PersistenceModule,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
) -> Subspace {
    let n = w.len() as i64;
    let ambient = w.dim_at(d);
    let p = w.modulus();
    if !(1 <= a && a <= d && 1 <= c && c <= d && d <= b && d <= n) {
        return Subspace::zero(ambient, p);
    }
    let v = morphism.source();
    let fad = v.composite(a as usize, d as usize).expect("a <= d");
    let from_a = subspace::image(&fad);
    // elements at d that vanish by b+1 (b may be n, where b+1 hits the
    // virtual zero space)
    let kill = v
        .composite(d as usize, (b + 1).min(n + 1) as usize)
        .expect("d <= b+1 <= n+1");
    let dying = subspace::kernel(&kill);
    let inner = from_a.intersect(&dying).expect("both in V_d");
    let pushed = subspace::apply(morphism.component(d as usize), &inner).expect("alpha_d on V_d");
    let s_w = w.persist_subspace(c, d);
    pushed.intersect(&s_w).expect("both in W_d")
}

fn side_space_pushed(
    morphism: &LadderMorphism,
    w: &PersistenceModule,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
) -> Subspace {
    let n = w.len() as i64;
    let ambient = w.dim_at(d);
    let p = w.modulus();
    if !(1 <= a && a <= d && 1 <= c && c <= d && d <= b && d <= n) {
        return Subspace::zero(ambient, p);
    }
    let v = morphism.source();
    let kill = v
        .composite(a as usize, (b + 1).min(n + 1) as usize)
        .expect("a <= b+1 <= n+1");
    let dying = subspace::kernel(&kill);
    let at_a = subspace::apply(morphism.component(a as usize), &dying).expect("alpha_a on V_a");
    let fad = w.composite(a as usize, d as usize).expect("a <= d");
    let pushed = subspace::apply(&fad, &at_a).expect("f^W_{a,d} on W_a");
    let s_w = w.persist_subspace(c, d);
    pushed.intersect(&s_w).expect("both in W_d")
}

/// For each matched pair of intervals, the multiset of witness intervals
/// of the middle module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedMatching {
    n: usize,
    entries: BTreeMap<(IntervalKey, IntervalKey), Barcode>,
}

impl EnrichedMatching {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, a: usize, b: usize, a_p: usize, b_p: usize) -> Option<&Barcode> {
        self.entries
            .get(&(IntervalKey::new(a, b), IntervalKey::new(a_p, b_p)))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((IntervalKey, IntervalKey), &Barcode)> + '_ {
        self.entries.iter().map(|(&k, w)| (k, w))
    }

    /// Total witness count over every pair, with multiplicity.
    pub fn total_witnesses(&self) -> usize {
        self.entries.values().map(Barcode::total).sum()
    }

    /// The same matching read in the other direction: every pair of
    /// interval keys swapped.
    fn transposed(self) -> Self {
        let entries = self
            .entries
            .into_iter()
            .map(|((kv, ku), ws)| ((ku, kv), ws))
            .collect();
        EnrichedMatching { n: self.n, entries }
    }

    /// Number of witnesses (with multiplicity) whose interval ends at d.
    pub fn witnesses_ending_at(&self, d: usize) -> usize {
        self.entries
            .values()
            .flat_map(Barcode::iter)
            .filter(|(k, _)| k.b == d)
            .map(|(_, m)| m)
            .sum()
    }
}

impl fmt::Display for EnrichedMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(kv, ku), ws) in &self.entries {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{kv} ~ {ku} : {ws}")?;
        }
        Ok(())
    }
}
