//! Exact branching algorithms for Cluster Deletion: delete at most `k` edges
//! so that every connected component becomes a clique.

pub mod almost_clique;
pub mod bnmath;
pub mod config;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod structure;

pub use error::{CoreError, Result};
pub use graph::{validate_solution, Edge, EdgeSet, Graph, VertexId};
pub use engine::{solve_decision, solve_minimum, PathRule, SolverConfig, Strategy};
