//! Districting solvers for weighted, colored graphs: an exact dynamic
//! program over tree decompositions, a brute-force oracle, planar
//! approximation pipelines, and instance generators.

pub mod approx;
pub mod baker;
pub mod dp;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod planar;
pub mod reductions;
pub mod treewidth;

pub use approx::{approx_solve, ApproxSolution};
pub use baker::{ptas_solve, PtasSolution};
pub use dp::{solve_exact, solve_exact_default, DpOptions, ExactSolution};
pub use error::{Error, Result};
pub use graph::{
    count_winning, verify_districting, wins, BoundKind, Bounds, CandidateId, Districting,
    ElectionGraph, KMode, Objective, SolveRequest, VerifyReport, Violation,
};
pub use io::{DecompositionFile, InstanceFile, SolutionFile};
pub use oracle::{oracle_max_winning, OracleAnswer};
pub use planar::{Layers, RotationSystem};
pub use reductions::{ReductionKind, ReductionMeta, SourceGraph};
