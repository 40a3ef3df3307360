//! Exact persistence-module computations over a prime field: barcodes,
//! basis-independent partial matchings induced by morphisms, matchings for
//! spans of morphisms, and ingestion of simplicial filtrations.

pub mod bl;
pub mod elder;
pub mod enriched;
pub mod error;
pub mod field;
pub mod io;
pub mod ladder;
pub mod matrix;
pub mod module;
pub mod sample;
pub mod simplicial;
pub mod subspace;

pub use bl::{bl_matching, image_factorization, injective_matching, surjective_matching, SetMatching};
pub use enriched::{EnrichedMatching, Span};
pub use error::Error;
pub use field::PrimeModulus;
pub use ladder::{LadderMorphism, Matching};
pub use matrix::Matrix;
pub use module::{
    interval_module, Barcode, IndexedInterval, IntervalKey, PersistenceDiagram, PersistenceModule,
};
pub use simplicial::{
    homology_module, induced_morphism, span_from_filtrations, union_filtration,
    PartialVertexMap, SimplicialFiltration, Simplex,
};
pub use subspace::Subspace;
