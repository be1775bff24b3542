//! Exact desk-scale searches: collapsibility, optimal gradient fields and
//! the minimum of |𝔑| over them.

pub mod collapse;
pub(crate) mod engine;
pub mod optimal;

pub use collapse::{collapse_witness, is_collapsible, CollapseResult, CollapseSequence, Verdict};
pub use optimal::{
    critical_lower_bound, for_each_field_with_vector, greedy_field, min_critical_cells, nk,
    nk_graph, pl_probe, Enumeration, GraphNk, NkResult, OptimalityResult, PlLevel, PlProbe,
};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Search nodes per query; results past it are flagged inexact.
    pub budget: u64,
    /// Worker threads. Results do not depend on it.
    pub jobs: usize,
    /// Optimal fields kept as witnesses.
    pub witness_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            jobs: 1,
            witness_cap: 8,
        }
    }
}
