//! Exact solvers for covering-objective network interdiction.
//!
//! A network of facilities and weighted customers is attacked by removing up
//! to `r` elements — either edges (REIC, the *r-edge interdiction covering*
//! problem) or facility nodes (RFIC, the *r-facility* variant). The attacker
//! maximizes the total weight of customers left without a path to any
//! surviving facility.
//!
//! The crate provides:
//!
//! * [`graph`] — the graph/instance model, strategy evaluation, and structural
//!   metrics such as customer joints;
//! * [`io`] — the INTERDICT v1 text format for instances;
//! * [`knapsack`] — multiple-choice knapsack engines (plain and constrained)
//!   that power every dynamic program here;
//! * [`tree_reic`] — an `O(n·r²)` DP for edge interdiction on trees;
//! * [`tree_rfic`] — an `O(n·r²)` DP for facility interdiction on trees;
//! * [`treewidth`] — tree decompositions: validation, constructors for trees
//!   and grids, a min-degree heuristic, the transform to extended nice
//!   decompositions, and the TREEDEC v1 format;
//! * [`btw_reic`] — edge interdiction on bounded-treewidth graphs via DP over
//!   an extended nice tree decomposition;
//! * [`oracle`] — brute-force exact solvers used as ground truth on small
//!   instances;
//! * [`reductions`] — small-set bipartite vertex expansion (SSBVE) on trees
//!   via facility interdiction, the bipartite normal form for facility
//!   interdiction, and a clique-detection gadget;
//! * [`instgen`] — seeded, reproducible instance generators;
//! * [`ilp`] — an LP-format exporter of the edge-interdiction integer program
//!   for external MILP solvers.

pub mod btw_reic;
pub mod graph;
pub mod ilp;
pub mod instgen;
pub mod io;
pub mod knapsack;
pub mod oracle;
pub mod reductions;
pub mod tree_reic;
pub mod tree_rfic;
pub mod treewidth;

pub use graph::{
    count_customer_joints, evaluate_strategy, validate_instance, validate_tree_instance,
    CoverageReport, Graph, Instance, NodeId, NodeRole, ProblemKind, Solution,
};
pub use io::{read_instance, write_instance, ParseError};
pub use knapsack::DpValue;

use thiserror::Error;

/// Errors shared by the interdiction solvers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The input graph is not connected; the tree solvers refuse to solve
    /// per-component because the root logic assumes one component.
    #[error("input graph is not connected")]
    NotConnected,
    /// The input graph is connected but contains a cycle.
    #[error("input graph is not a tree")]
    NotATree,
    /// The instance's problem kind does not match the solver.
    #[error("solver expects a {expected} instance")]
    WrongKind { expected: ProblemKind },
    /// The supplied tree decomposition does not validate against the graph.
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    /// Join inputs disagree on the bag they are supposed to share.
    #[error("join children disagree on the shared bag: {0}")]
    BagMismatch(String),
    /// A requested subset size exceeds the available left-side vertices.
    #[error("target size {k} exceeds the {u_count} left-side vertices")]
    TargetOutOfRange { k: usize, u_count: usize },
}
