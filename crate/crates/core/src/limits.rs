//! Resource budgets shared by the exact algorithms.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Search-tree nodes a single backtracking count may visit.
    pub node_budget: u64,
    /// Largest copy list materialized for packing, peeling and fit checks.
    pub copy_cap: usize,
    /// Largest `e_H` for exact subgraph enumeration in sparsity checks.
    pub exact_edge_cap: usize,
    /// Vertex bound for connected-subgraph enumeration in heuristic mode.
    pub heuristic_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            node_budget: 2_000_000_000,
            copy_cap: 200_000,
            exact_edge_cap: 24,
            heuristic_vertices: 6,
        }
    }
}
