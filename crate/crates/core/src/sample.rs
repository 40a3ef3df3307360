//! Seeded random generators for persistence modules, valid morphisms,
//! spans, and filtrations. Morphisms are drawn uniformly from the full
//! solution space of the commutativity equations, so every sample is a
//! valid ladder and arbitrary-rank components occur.

use rand::Rng;

use crate::enriched::Span;
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::ladder::LadderMorphism;
use crate::matrix::Matrix;
use crate::module::PersistenceModule;
use crate::simplicial::SimplicialFiltration;

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, p: PrimeModulus) -> Matrix {
    let mut m = Matrix::zeros(rows, cols, p);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_range(0..p.get()));
        }
    }
    m
}

pub fn random_module<R: Rng>(
    rng: &mut R,
    n: usize,
    max_dim: usize,
    p: PrimeModulus,
) -> PersistenceModule {
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps: Vec<Matrix> = (0..n - 1)
        .map(|i| random_matrix(rng, dims[i + 1], dims[i], p))
        .collect();
    PersistenceModule::new(dims, maps, p).expect("shapes consistent by construction")
}

/// A basis of the space of morphisms source -> target: the kernel of the
/// linear system alpha |-> (alpha_{i+1} f^V_i - f^U_i alpha_i)_i over the
/// stacked entries of all components.
fn hom_space_basis(
    source: &PersistenceModule,
    target: &PersistenceModule,
) -> (Matrix, Vec<(usize, usize, usize)>) {
    let p = source.modulus();
    let n = source.len();
    // unknown layout: for each index i, the entries of alpha_i row-major
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0usize;
    for i in 0..n {
        offsets.push((total, target.dims()[i], source.dims()[i]));
        total += target.dims()[i] * source.dims()[i];
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..n - 1 {
        let fv = &source.maps()[i];
        let fu = &target.maps()[i];
        // equation (r, c): sum_k alpha_{i+1}[r][k] fv[k][c]
        //                - sum_k fu[r][k] alpha_i[k][c] = 0
        for r in 0..target.dims()[i + 1] {
            for c in 0..source.dims()[i] {
                let mut row = vec![0i64; total];
                let (off_next, _, cols_next) = offsets[i + 1];
                for k in 0..source.dims()[i + 1] {
                    row[off_next + r * cols_next + k] += fv.get(k, c) as i64;
                }
                let (off_cur, _, cols_cur) = offsets[i];
                for k in 0..target.dims()[i] {
                    row[off_cur + k * cols_cur + c] -= fu.get(r, k) as i64;
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(rows.len(), total, &rows, p)
        .expect("rows built with the right width");
    (system.kernel_basis(), offsets)
}

/// A uniformly random valid morphism between the two modules.
pub fn random_morphism<R: Rng>(
    rng: &mut R,
    source: &PersistenceModule,
    target: &PersistenceModule,
) -> LadderMorphism {
    let p = source.modulus();
    let (basis, offsets) = hom_space_basis(source, target);
    let total: usize = offsets.iter().map(|&(_, r, c)| r * c).sum();
    let mut flat = vec![0u32; total];
    for b in 0..basis.rows() {
        let coeff = rng.gen_range(0..p.get());
        if coeff == 0 {
            continue;
        }
        for j in 0..total {
            flat[j] = p.add(flat[j], p.mul(coeff, basis.get(b, j)));
        }
    }
    let comps = offsets
        .iter()
        .map(|&(off, rows, cols)| {
            let mut m = Matrix::zeros(rows, cols, p);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, flat[off + r * cols + c]);
                }
            }
            m
        })
        .collect();
    LadderMorphism::new(source.clone(), target.clone(), comps)
        .expect("kernel elements satisfy every square")
}

pub fn random_ladder<R: Rng>(
    rng: &mut R,
    n: usize,
    max_dim: usize,
    p: PrimeModulus,
) -> LadderMorphism {
    let v = random_module(rng, n, max_dim, p);
    let u = random_module(rng, n, max_dim, p);
    random_morphism(rng, &v, &u)
}

pub fn random_span<R: Rng>(rng: &mut R, n: usize, max_dim: usize, p: PrimeModulus) -> Span {
    let w = random_module(rng, n, max_dim, p);
    let v = random_module(rng, n, max_dim, p);
    let u = random_module(rng, n, max_dim, p);
    let alpha = random_morphism(rng, &v, &w);
    let beta = random_morphism(rng, &u, &w);
    Span::new(alpha, beta).expect("shared target by construction")
}

/// A random valid filtration with at most `max_simplices` simplices
/// (vertices, edges, and triangles) over `n` steps.
pub fn random_filtration<R: Rng>(
    rng: &mut R,
    n: usize,
    max_simplices: usize,
) -> Result<SimplicialFiltration, Error> {
    let n_vertices = rng.gen_range(1..=max_simplices.min(5));
    let mut simplices: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut time_of = std::collections::BTreeMap::new();
    for v in 0..n_vertices {
        let t = rng.gen_range(1..=n);
        time_of.insert(vec![v], t);
        simplices.push((vec![v], t));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n_vertices {
        for j in i + 1..n_vertices {
            edges.push((i, j));
        }
    }
    for &(i, j) in &edges {
        if simplices.len() >= max_simplices {
            break;
        }
        if rng.gen_bool(0.5) {
            let floor = time_of[&vec![i]].max(time_of[&vec![j]]);
            let t = rng.gen_range(floor..=n);
            time_of.insert(vec![i, j], t);
            simplices.push((vec![i, j], t));
        }
    }
    for i in 0..n_vertices {
        for j in i + 1..n_vertices {
            for k in j + 1..n_vertices {
                if simplices.len() >= max_simplices {
                    break;
                }
                let (e1, e2, e3) = (vec![i, j], vec![i, k], vec![j, k]);
                if let (Some(&t1), Some(&t2), Some(&t3)) =
                    (time_of.get(&e1), time_of.get(&e2), time_of.get(&e3))
                {
                    if rng.gen_bool(0.5) {
                        let floor = t1.max(t2).max(t3);
                        let t = rng.gen_range(floor..=n);
                        simplices.push((vec![i, j, k], t));
                    }
                }
            }
        }
    }
    SimplicialFiltration::new(n, simplices)
}
