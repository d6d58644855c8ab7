//! Spectral bisection with the modularity matrix on planted random-graph
//! ensembles, together with an effective-medium solver for the
//! detectable / undetectable / unpartitioned phase structure.
//!
//! The crate is organized around five pieces:
//!
//! * [`ensembles`] — planted random regular graphs and the stochastic block
//!   model, plus conversions between the structure parameterizations.
//! * [`spectral`] — matrix-free modularity and normalized-Laplacian
//!   operators, a Lanczos eigensolver, and partition statistics.
//! * [`objectives`] — exact evaluation of modularity and normalized cut on
//!   explicit bipartitions, with an exhaustive optimizer for small graphs.
//! * [`ema`] — the effective-medium saddle-point equations for arbitrary
//!   degree distributions, with closed forms for regular graphs.
//! * [`sweep`] — reproducible parameter sweeps and phase grids backing the
//!   `specphase` CLI.

pub mod dist;
pub mod ema;
pub mod ensembles;
pub mod error;
pub mod graph;
pub mod objectives;
pub mod rng;
pub mod spectral;
pub mod sweep;

pub use dist::DegreeDistribution;
pub use error::{Error, Result};
pub use graph::{Graph, PlantedKind, PlantedSpec, Provenance};
pub use spectral::SpectralOutcome;
