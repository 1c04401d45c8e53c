//! Generator, closed-form predictions and measurement tools for the η network
//! model: Barabási–Albert growth with preferential attachment, followed at every
//! step by a degree-proportional transitivity sweep that closes triangles.
//!
//! The crate is organised as a pipeline:
//!
//! * [`graph`] stores a simple undirected graph together with the sampling
//!   primitives the model needs.
//! * [`generator`] runs the growth process.
//! * [`theory`] evaluates the mean-field predictions (exponents, edge-count
//!   law, clustering lower bound).
//! * [`metrics`] measures clustering, mean distance and the degree exponent.
//! * [`experiments`] runs replicated parameter sweeps and presets.
//! * [`io`] and [`config`] handle the plain-text file formats.

pub mod config;
pub mod error;
pub mod experiments;
pub mod generator;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod theory;

pub use error::{Error, Result};
pub use generator::{generate, generate_ba, GenerationStats, InitialGraph, ModelParams, SweepMode};
pub use graph::{Graph, VertexId};
pub use metrics::{DistanceMode, MetricsConfig, MetricsReport};
pub use theory::TheoryPredictions;
