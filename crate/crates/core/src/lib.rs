//! Exact combinatorics of Grassmannian torus orbits under diagonal subtori.

pub mod blocks;
pub mod error;
pub mod golden;
pub mod grassmann;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod polymatroid;
pub mod polytope;
pub mod relations;
pub mod secondary;

pub use blocks::BlockStructure;
pub use error::{Error, Result};
pub use grassmann::{PluckerVector, Sign};
pub use lattice::{lattice_index, LatticeIndex};
pub use linalg::{IndexSubset, Matrix, Rat};
pub use polymatroid::{CountVec, Matroid, Polymatroid};
pub use polytope::{Edge, Polytope};
pub use relations::{Monomial, MultiPoly};
pub use secondary::{LabeledConfig, SecondaryPolytope, Triangulation};
