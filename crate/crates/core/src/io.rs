//! JSON file formats for modules (.pmod), morphisms (.lmod), spans
//! (.span), filtrations (.flt), and gluing maps (.pmap).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::enriched::Span;
use crate::error::Error;
use crate::field::PrimeModulus;
use crate::ladder::LadderMorphism;
use crate::matrix::Matrix;
use crate::module::PersistenceModule;
use crate::simplicial::{PartialVertexMap, SimplicialFiltration};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub n: usize,
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(rename = "V")]
    pub v: ModuleData,
    #[serde(rename = "U")]
    pub u: ModuleData,
    pub alpha: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(rename = "V")]
    pub v: ModuleData,
    #[serde(rename = "W")]
    pub w: ModuleData,
    #[serde(rename = "U")]
    pub u: ModuleData,
    pub alpha: Vec<Vec<Vec<i64>>>,
    pub beta: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexData {
    pub v: Vec<usize>,
    pub t: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiltrationData {
    pub n: usize,
    pub simplices: Vec<SimplexData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexMapData {
    pub pairs: Vec<(usize, usize)>,
}

fn modulus_of(file_p: Option<u32>, outer: Option<PrimeModulus>, fallback: PrimeModulus) -> Result<PrimeModulus, Error> {
    match file_p {
        Some(p) => PrimeModulus::new(p),
        None => Ok(outer.unwrap_or(fallback)),
    }
}

/// One component matrix from row-major integer data.
fn matrix_from_data(
    data: &[Vec<i64>],
    rows: usize,
    cols: usize,
    p: PrimeModulus,
) -> Result<Matrix, Error> {
    if data.len() != rows {
        return Err(Error::Parse(format!(
            "matrix has {} rows, expected {rows}",
            data.len()
        )));
    }
    Matrix::from_rows(rows, cols, data, p)
}

pub fn module_from_data(
    data: &ModuleData,
    outer: Option<PrimeModulus>,
    fallback: PrimeModulus,
) -> Result<PersistenceModule, Error> {
    let p = modulus_of(data.p, outer, fallback)?;
    if data.dims.len() != data.n {
        return Err(Error::Parse(format!(
            "dims has {} entries, n = {}",
            data.dims.len(),
            data.n
        )));
    }
    if data.maps.len() + 1 != data.n {
        return Err(Error::Parse(format!(
            "maps has {} entries, expected {}",
            data.maps.len(),
            data.n - 1
        )));
    }
    let maps = data
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_data(m, data.dims[i + 1], data.dims[i], p))
        .collect::<Result<Vec<_>, _>>()?;
    PersistenceModule::new(data.dims.clone(), maps, p)
}

fn components_from_data(
    data: &[Vec<Vec<i64>>],
    source: &PersistenceModule,
    target: &PersistenceModule,
    p: PrimeModulus,
) -> Result<Vec<Matrix>, Error> {
    if data.len() != source.len() {
        return Err(Error::Parse(format!(
            "morphism has {} components, expected {}",
            data.len(),
            source.len()
        )));
    }
    data.iter()
        .enumerate()
        .map(|(i, m)| matrix_from_data(m, target.dims()[i], source.dims()[i], p))
        .collect()
}

pub fn morphism_from_data(data: &MorphismData, fallback: PrimeModulus) -> Result<LadderMorphism, Error> {
    let p = modulus_of(data.p, None, fallback)?;
    let v = module_from_data(&data.v, Some(p), fallback)?;
    let u = module_from_data(&data.u, Some(p), fallback)?;
    let comps = components_from_data(&data.alpha, &v, &u, p)?;
    LadderMorphism::new(v, u, comps)
}

pub fn span_from_data(data: &SpanData, fallback: PrimeModulus) -> Result<Span, Error> {
    let p = modulus_of(data.p, None, fallback)?;
    let v = module_from_data(&data.v, Some(p), fallback)?;
    let w = module_from_data(&data.w, Some(p), fallback)?;
    let u = module_from_data(&data.u, Some(p), fallback)?;
    let a_comps = components_from_data(&data.alpha, &v, &w, p)?;
    let b_comps = components_from_data(&data.beta, &u, &w, p)?;
    let alpha = LadderMorphism::new(v, w.clone(), a_comps)?;
    let beta = LadderMorphism::new(u, w, b_comps)?;
    Span::new(alpha, beta)
}

pub fn filtration_from_data(data: &FiltrationData) -> Result<SimplicialFiltration, Error> {
    SimplicialFiltration::new(
        data.n,
        data.simplices.iter().map(|s| (s.v.clone(), s.t)).collect(),
    )
}

pub fn vertex_map_from_data(data: &VertexMapData) -> Result<PartialVertexMap, Error> {
    PartialVertexMap::new(data.pairs.iter().copied())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_module(path: &Path, fallback: PrimeModulus) -> Result<PersistenceModule, Error> {
    module_from_data(&read_json(path)?, None, fallback)
}

pub fn load_morphism(path: &Path, fallback: PrimeModulus) -> Result<LadderMorphism, Error> {
    morphism_from_data(&read_json(path)?, fallback)
}

pub fn load_span(path: &Path, fallback: PrimeModulus) -> Result<Span, Error> {
    span_from_data(&read_json(path)?, fallback)
}

pub fn load_filtration(path: &Path) -> Result<SimplicialFiltration, Error> {
    filtration_from_data(&read_json(path)?)
}

pub fn load_vertex_map(path: &Path) -> Result<PartialVertexMap, Error> {
    vertex_map_from_data(&read_json(path)?)
}

/// Serialize a module back to its file form.
pub fn module_to_data(m: &PersistenceModule, include_p: bool) -> ModuleData {
    ModuleData {
        p: include_p.then(|| m.modulus().get()),
        n: m.len(),
        dims: m.dims().to_vec(),
        maps: m
            .maps()
            .iter()
            .map(|mat| {
                (0..mat.rows())
                    .map(|i| mat.row(i).iter().map(|&x| x as i64).collect())
                    .collect()
            })
            .collect(),
    }
}

pub fn filtration_to_data(f: &SimplicialFiltration) -> FiltrationData {
    FiltrationData {
        n: f.len(),
        simplices: f
            .simplices()
            .iter()
            .map(|s| SimplexData { v: s.vertices.clone(), t: s.time })
            .collect(),
    }
}
