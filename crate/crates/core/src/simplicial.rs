//! Simplicial filtrations and the homology pipeline: boundary matrices,
//! homology persistence modules with explicit bases, morphisms induced by
//! simplicial maps, and union filtrations glued along a partial map.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::field::PrimeModulus;
use crate::ladder::LadderMorphism;
use crate::matrix::Matrix;
use crate::module::PersistenceModule;
use crate::subspace::{self, Subspace};

/// A simplex with its entry time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub time: usize,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// A filtration of simplicial complexes over steps 1..=n. Simplices are
/// held in the canonical order (entry time, dimension, vertex list), so
/// the step-i complex is always a prefix of the step-(i+1) complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialFiltration {
    n: usize,
    simplices: Vec<Simplex>,
}

impl SimplicialFiltration {
    pub fn new(n: usize, simplices: Vec<(Vec<usize>, usize)>) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidFiltration("filtration of length 0".into()));
        }
        let mut list = Vec::with_capacity(simplices.len());
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (mut vertices, time) in simplices {
            vertices.sort_unstable();
            if vertices.is_empty() {
                return Err(Error::InvalidFiltration("empty simplex".into()));
            }
            if vertices.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFiltration(format!(
                    "repeated vertex in simplex {vertices:?}"
                )));
            }
            if !(1..=n).contains(&time) {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {vertices:?} has entry time {time} outside 1..={n}"
                )));
            }
            if !seen.insert(vertices.clone()) {
                return Err(Error::InvalidFiltration(format!(
                    "simplex {vertices:?} listed twice"
                )));
            }
            list.push(Simplex { vertices, time });
        }
        let times: BTreeMap<&[usize], usize> =
            list.iter().map(|s| (s.vertices.as_slice(), s.time)).collect();
        for s in &list {
            if s.vertices.len() < 2 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                let mut face = s.vertices.clone();
                face.remove(skip);
                match times.get(face.as_slice()) {
                    Some(&ft) if ft <= s.time => {}
                    Some(_) => {
                        return Err(Error::InvalidFiltration(format!(
                            "face {face:?} of {:?} enters after the simplex",
                            s.vertices
                        )))
                    }
                    None => {
                        return Err(Error::InvalidFiltration(format!(
                            "face {face:?} of {:?} is missing",
                            s.vertices
                        )))
                    }
                }
            }
        }
        list.sort_by(|x, y| {
            (x.time, x.vertices.len(), &x.vertices).cmp(&(y.time, y.vertices.len(), &y.vertices))
        });
        Ok(SimplicialFiltration { n, simplices: list })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.simplices
            .iter()
            .flat_map(|s| s.vertices.iter().copied())
            .collect()
    }

    /// The k-simplices present at a step, in canonical order. The list
    /// for step i is a prefix of the list for step i+1.
    fn k_simplices_at(&self, k: usize, step: usize) -> Vec<&Simplex> {
        self.simplices
            .iter()
            .filter(|s| s.dim() == k && s.time <= step)
            .collect()
    }

    /// Boundary matrix from k-chains to (k-1)-chains at a step, with
    /// alternating signs over the sorted-vertex orientation. For k = 0
    /// the matrix has no rows.
    pub fn boundary_matrix(&self, k: usize, step: usize, p: PrimeModulus) -> Matrix {
        let cols_s = self.k_simplices_at(k, step);
        if k == 0 {
            return Matrix::zeros(0, cols_s.len(), p);
        }
        let rows_s = self.k_simplices_at(k - 1, step);
        let row_index: BTreeMap<&[usize], usize> = rows_s
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices.as_slice(), i))
            .collect();
        let mut m = Matrix::zeros(rows_s.len(), cols_s.len(), p);
        for (j, s) in cols_s.iter().enumerate() {
            for skip in 0..s.vertices.len() {
                let mut face = s.vertices.clone();
                face.remove(skip);
                let i = row_index[face.as_slice()];
                let val = if skip % 2 == 0 { 1 } else { p.get() - 1 };
                m.set(i, j, val % p.get());
            }
        }
        m
    }

    /// Betti number of each step by ranks alone:
    /// dim ker boundary_k - rank boundary_{k+1}.
    pub fn betti_numbers(&self, k: usize, p: PrimeModulus) -> Vec<usize> {
        (1..=self.n)
            .map(|i| {
                let dk = self.boundary_matrix(k, i, p);
                let dk1 = self.boundary_matrix(k + 1, i, p);
                (dk.cols() - dk.rank()) - dk1.rank()
            })
            .collect()
    }
}

/// Degree-k homology of every step with a fixed basis of cycle
/// representatives, plus the boundary subspaces needed to express classes.
pub(crate) struct HomologyBases {
    /// Per step: one cycle representative per homology class, as rows in
    /// the chain coordinates of that step.
    pub reps: Vec<Matrix>,
    /// Per step: the boundary subspace of the chain space.
    pub boundaries: Vec<Subspace>,
    pub module: PersistenceModule,
}

pub(crate) fn homology_bases(
    f: &SimplicialFiltration,
    k: usize,
    p: PrimeModulus,
) -> HomologyBases {
    let n = f.len();
    let mut reps = Vec::with_capacity(n);
    let mut boundaries = Vec::with_capacity(n);
    for i in 1..=n {
        let dk = f.boundary_matrix(k, i, p);
        let cycles = dk.kernel_basis();
        let b = subspace::image(&f.boundary_matrix(k + 1, i, p));
        // pick cycle rows that extend the boundary space, in RREF order
        let mut picked = b.basis().clone();
        let mut rank = picked.rank();
        let mut chosen = Vec::new();
        for r in 0..cycles.rows() {
            let mut row = Matrix::zeros(1, cycles.cols(), p);
            for j in 0..cycles.cols() {
                row.set(0, j, cycles.get(r, j));
            }
            let candidate = picked.vstack(&row);
            if candidate.rank() > rank {
                rank += 1;
                picked = candidate;
                chosen.push(r);
            }
        }
        let mut rep = Matrix::zeros(chosen.len(), cycles.cols(), p);
        for (out, &r) in chosen.iter().enumerate() {
            for j in 0..cycles.cols() {
                rep.set(out, j, cycles.get(r, j));
            }
        }
        reps.push(rep);
        boundaries.push(b);
    }
    let dims: Vec<usize> = reps.iter().map(|m| m.rows()).collect();
    let mut maps = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let mut m = Matrix::zeros(dims[i], dims[i - 1], p);
        for j in 0..dims[i - 1] {
            // inclusion of chains is zero-padding: step-i simplices are a
            // prefix of step-(i+1) simplices
            let mut chain = reps[i - 1].row(j).to_vec();
            chain.resize(reps[i].cols(), 0);
            let coords = class_coords(&reps[i], &boundaries[i], &chain, p);
            for (r, c) in coords.into_iter().enumerate() {
                m.set(r, j, c);
            }
        }
        maps.push(m);
    }
    let module = PersistenceModule::new(dims, maps, p).expect("shapes fixed by construction");
    HomologyBases { reps, boundaries, module }
}

/// Coordinates of a cycle's homology class in the given representative
/// basis: solve rep^T x + boundary^T y = chain and read off x.
fn class_coords(reps: &Matrix, boundary: &Subspace, chain: &[u32], p: PrimeModulus) -> Vec<u32> {
    let cols = reps.rows() + boundary.dim();
    let amb = reps.cols();
    let mut sys = Matrix::zeros(amb, cols, p);
    for r in 0..reps.rows() {
        for j in 0..amb {
            sys.set(j, r, reps.get(r, j));
        }
    }
    for r in 0..boundary.dim() {
        for j in 0..amb {
            sys.set(j, reps.rows() + r, boundary.basis().get(r, j));
        }
    }
    let mut rhs = Matrix::zeros(amb, 1, p);
    for j in 0..amb {
        rhs.set(j, 0, chain[j]);
    }
    let sol = sys
        .solve(&rhs)
        .expect("cycle lies in the span of representatives and boundaries");
    (0..reps.rows()).map(|r| sol.get(r, 0)).collect()
}

/// Homology persistence module of a filtration in degree k.
pub fn homology_module(
    f: &SimplicialFiltration,
    k: usize,
    p: PrimeModulus,
) -> PersistenceModule {
    homology_bases(f, k, p).module
}

fn check_total_simplicial(
    fk: &SimplicialFiltration,
    fl: &SimplicialFiltration,
    vertex_map: &BTreeMap<usize, usize>,
) -> Result<(), Error> {
    if fk.len() != fl.len() {
        return Err(Error::InvalidSimplicialMap(format!(
            "filtration lengths differ: {} vs {}",
            fk.len(),
            fl.len()
        )));
    }
    for v in fk.vertices() {
        if !vertex_map.contains_key(&v) {
            return Err(Error::InvalidSimplicialMap(format!("vertex {v} is unmapped")));
        }
    }
    let times: BTreeMap<&[usize], usize> = fl
        .simplices()
        .iter()
        .map(|s| (s.vertices.as_slice(), s.time))
        .collect();
    for s in fk.simplices() {
        let image: BTreeSet<usize> = s.vertices.iter().map(|v| vertex_map[v]).collect();
        let image: Vec<usize> = image.into_iter().collect();
        match times.get(image.as_slice()) {
            Some(&t) if t <= s.time => {}
            Some(&t) => {
                return Err(Error::InvalidSimplicialMap(format!(
                    "image {image:?} of {:?} enters at {t} > {}",
                    s.vertices, s.time
                )))
            }
            None => {
                return Err(Error::InvalidSimplicialMap(format!(
                    "image {image:?} of {:?} is not a simplex of the target",
                    s.vertices
                )))
            }
        }
    }
    Ok(())
}

/// Sign of the permutation sorting `mapped` (distinct entries), as a field
/// element factor.
fn sort_sign(mapped: &[usize], p: PrimeModulus) -> u32 {
    let mut inversions = 0usize;
    for i in 0..mapped.len() {
        for j in i + 1..mapped.len() {
            if mapped[i] > mapped[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        p.get() - 1
    }
}

/// The morphism H_k(fK) -> H_k(fL) induced by a total simplicial map of
/// filtrations given on vertices.
pub fn induced_morphism(
    fk: &SimplicialFiltration,
    fl: &SimplicialFiltration,
    vertex_map: &BTreeMap<usize, usize>,
    k: usize,
    p: PrimeModulus,
) -> Result<LadderMorphism, Error> {
    check_total_simplicial(fk, fl, vertex_map)?;
    let hk = homology_bases(fk, k, p);
    let hl = homology_bases(fl, k, p);
    let n = fk.len();
    let mut comps = Vec::with_capacity(n);
    for i in 1..=n {
        let src = fk.k_simplices_at(k, i);
        let dst = fl.k_simplices_at(k, i);
        let dst_index: BTreeMap<&[usize], usize> = dst
            .iter()
            .enumerate()
            .map(|(j, s)| (s.vertices.as_slice(), j))
            .collect();
        // chain map: degenerate images vanish, others land with the
        // orientation sign of sorting the mapped vertices
        let mut chain = Matrix::zeros(dst.len(), src.len(), p);
        for (j, s) in src.iter().enumerate() {
            let mapped: Vec<usize> = s.vertices.iter().map(|v| vertex_map[v]).collect();
            let distinct: BTreeSet<usize> = mapped.iter().copied().collect();
            if distinct.len() < mapped.len() {
                continue;
            }
            let sorted: Vec<usize> = distinct.into_iter().collect();
            let row = dst_index[sorted.as_slice()];
            chain.set(row, j, sort_sign(&mapped, p));
        }
        let src_reps = &hk.reps[i - 1];
        let mut comp = Matrix::zeros(hl.module.dims()[i - 1], hk.module.dims()[i - 1], p);
        for j in 0..src_reps.rows() {
            let pushed = chain.apply_vec(src_reps.row(j));
            let coords = class_coords(&hl.reps[i - 1], &hl.boundaries[i - 1], &pushed, p);
            for (r, c) in coords.into_iter().enumerate() {
                comp.set(r, j, c);
            }
        }
        comps.push(comp);
    }
    LadderMorphism::new(hk.module, hl.module, comps)
}

/// A partial gluing instruction: an injective map from some vertices of
/// one filtration to vertices of another.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialVertexMap {
    pairs: BTreeMap<usize, usize>,
}

impl PartialVertexMap {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (s, t) in pairs {
            if map.insert(s, t).is_some() {
                return Err(Error::InvalidSimplicialMap(format!(
                    "vertex {s} mapped twice"
                )));
            }
            if !targets.insert(t) {
                return Err(Error::InvalidSimplicialMap(format!(
                    "target vertex {t} hit twice; the gluing map must be injective"
                )));
            }
        }
        Ok(PartialVertexMap { pairs: map })
    }

    pub fn pairs(&self) -> &BTreeMap<usize, usize> {
        &self.pairs
    }
}

/// Glue two filtrations along a partial vertex map: the target keeps its
/// labels, mapped source vertices adopt their target's label, the rest of
/// the source gets fresh labels. A simplex arising from both sides enters
/// at the earlier of its two times. Returns the union filtration and the
/// two inclusion vertex maps.
pub fn union_filtration(
    fk: &SimplicialFiltration,
    fl: &SimplicialFiltration,
    mu: &PartialVertexMap,
) -> Result<(SimplicialFiltration, BTreeMap<usize, usize>, BTreeMap<usize, usize>), Error> {
    if fk.len() != fl.len() {
        return Err(Error::InvalidFiltration(format!(
            "filtration lengths differ: {} vs {}",
            fk.len(),
            fl.len()
        )));
    }
    let kv = fk.vertices();
    let lv = fl.vertices();
    for (&s, &t) in mu.pairs() {
        if !kv.contains(&s) {
            return Err(Error::InvalidSimplicialMap(format!(
                "gluing source vertex {s} is not in the first filtration"
            )));
        }
        if !lv.contains(&t) {
            return Err(Error::InvalidSimplicialMap(format!(
                "gluing target vertex {t} is not in the second filtration"
            )));
        }
    }
    let incl_l: BTreeMap<usize, usize> = lv.iter().map(|&v| (v, v)).collect();
    let mut fresh = kv.iter().chain(lv.iter()).copied().max().unwrap_or(0) + 1;
    let mut incl_k = BTreeMap::new();
    for &v in &kv {
        if let Some(&t) = mu.pairs().get(&v) {
            incl_k.insert(v, t);
        } else {
            incl_k.insert(v, fresh);
            fresh += 1;
        }
    }
    let mut merged: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for s in fl.simplices() {
        merged.insert(s.vertices.clone(), s.time);
    }
    for s in fk.simplices() {
        let mut verts: Vec<usize> = s.vertices.iter().map(|v| incl_k[v]).collect();
        verts.sort_unstable();
        merged
            .entry(verts)
            .and_modify(|t| *t = (*t).min(s.time))
            .or_insert(s.time);
    }
    let union = SimplicialFiltration::new(
        fk.len(),
        merged.into_iter().map(|(v, t)| (v, t)).collect(),
    )?;
    Ok((union, incl_k, incl_l))
}

/// The span H_k(fK) -> H_k(union) <- H_k(fL) induced by the inclusions
/// into the glued filtration.
pub fn span_from_filtrations(
    fk: &SimplicialFiltration,
    fl: &SimplicialFiltration,
    mu: &PartialVertexMap,
    k: usize,
    p: PrimeModulus,
) -> Result<crate::enriched::Span, Error> {
    let (union, incl_k, incl_l) = union_filtration(fk, fl, mu)?;
    let alpha = induced_morphism(fk, &union, &incl_k, k, p)?;
    let beta = induced_morphism(fl, &union, &incl_l, k, p)?;
    crate::enriched::Span::new(alpha, beta)
}
