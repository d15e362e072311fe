//! Continuous-time open quantum walks on finite undirected graphs.
//!
//! The walk on a graph `G` is the quantum Markov semigroup `exp(t L)` whose
//! generator combines the graph Laplacian (as Hamiltonian) with swap jump
//! operators `sqrt(M_jk) |j><k|` along every ordered edge. This crate builds
//! that generator, evolves density matrices under it, computes and
//! certifies steady states, and compares the open walk with the classical
//! random walk and the unitary quantum walk on the same graph.
//!
//! Vertices are 0-indexed throughout.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod graph;
pub mod integrator;
pub mod lindblad;
pub mod numerics;
pub mod steady;

pub use config::Tolerances;
pub use dynamics::{
    compare_processes, ctqw_limiting_average, evolve_ctoqw, evolve_ctqw, evolve_ctrw, Comparison, InitialState, Method,
    Trajectory,
};
pub use error::{Error, Result};
pub use graph::{Family, Graph, GraphClass, RealMatrix};
pub use lindblad::{
    apply_generator, build_lindblad_variant, check_span_hermitian, check_sum_identity, commutant_dimension,
    LindbladSet, Liouvillian, Variant,
};
pub use numerics::{ComplexMatrix, ComplexVector, DensityMatrix, Spectrum};
pub use steady::{
    classify_steady_state, coherence, convergence_profile, solve_steady_state, trace_distance, Classification,
    CoherenceReport, SteadyStateReport,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
