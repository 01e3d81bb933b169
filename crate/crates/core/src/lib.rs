//! Fronts of Bryant type in hyperbolic space, CMC-1 faces in de Sitter space
//! and maxfaces in Lorentz-Minkowski space, computed from holomorphic data.

pub mod cli;
pub mod desitter;
pub mod holo;
pub mod lorentz;
pub mod maxface;
pub mod mesh;
pub mod weingarten;

pub use holo::{Complex, MeroExpr};
