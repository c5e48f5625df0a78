//! Bratteli-Vershik toolkit: ordered diagrams, Vershik dynamics on finitely
//! described paths, basic blocks, pair analysis and the example families.

pub mod analysis;
pub mod blocks;
pub mod codec;
pub mod diagram;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod hcode;
pub mod morphisms;
pub mod pairs;
pub mod pathspec;
pub mod render;

pub use diagram::{validate, Diagram, FinitePath, ValidationReport, Vertex};
pub use error::{Error, Result};
pub use pathspec::{PathSpec, SuffixRule, Track};
