//! Degree anonymization of undirected graphs by minimum edge insertion.
//!
//! A graph is k-anonymous when every occurring degree is shared by at least
//! `k` vertices. The pipeline first anonymizes the degree sequence exactly
//! ([`dp`]), filters the candidates through realizability tests
//! ([`realizability`]) and then tries to realize them inside the graph
//! ([`realize`]). [`solver`] ties everything together and reports lower and
//! upper bounds on the number of inserted edges.

pub mod dp;
pub mod error;
pub mod generator;
pub mod graph;
pub mod io;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod realizability;
pub mod realize;
pub mod reduction;
pub mod samples;
pub mod sequence;
pub mod solver;

pub use dp::AnonymizationSolution;
pub use error::{Error, Result};
pub use graph::{EdgeInsertionSet, Graph};
pub use realizability::EGVerdict;
pub use realize::{DemandFunction, DegreeVertexMapping, JumpConfiguration, VerificationReport};
pub use sequence::{BlockSequence, DegreeSequence, DifferenceSequence, Move};
pub use solver::{solve, sweep, BoundsReport, SolverConfig};
