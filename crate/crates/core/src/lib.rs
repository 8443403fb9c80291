//! Quivers, mutation, and cluster-tilted algebras of Dynkin type.

pub mod canonical;
pub mod cli;
pub mod error;
pub mod format;
pub mod linalg;
pub mod mutation;
pub mod quiver;
pub mod relations;
pub mod tilted;
pub mod type_a;

pub use canonical::{canonical_form, canonical_key, is_isomorphic};
pub use error::{
    MutationError, ParseError, QuiverError, RelationError, TiltError, TriangulationError,
};
pub use quiver::{Arrow, ExchangeMatrix, Quiver, Vertex, VertexId};
