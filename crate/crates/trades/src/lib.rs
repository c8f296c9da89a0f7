//! Minimal combinatorial trades from defining sets, and the study of
//! their robustness when the points they are built on drift.
//!
//! A (v, k, t) trade is a pair of disjoint block families in which every
//! t-subset of points is covered equally often by both sides. This crate
//! builds minimal trades from companion-paired defining sets, verifies
//! the trade property by brute force, enumerates and counts the balanced
//! pairings whose trades have constant block sums, measures how much a
//! pairing can be unbalanced by collections of limited-magnitude point
//! swaps, searches for the pairings minimizing that worst case, and
//! assembles guaranteed-robust families on large point counts by
//! concatenating optimal patterns.

mod bounds;
mod concat;
mod counting;
mod defining_sets;
mod digraph;
mod error;
mod pairing;
mod search;
mod swap;
mod trade;

pub use bounds::{discrepancy_lower_bounds, DiscrepancyLowerBounds};
pub use concat::{build_concatenated, concat_guarantee, ConcatGuarantee};
pub use counting::{
    counting_bounds, pairing_count_lower_bound, pairing_count_upper_asymptotic,
    partition_number_asymptotic, CountBounds,
};
pub use defining_sets::{
    canonical_balanced_sets, mirror_balanced_sets, validate_defining_sets, DefiningSets,
    TradeParams, ValidationVerdict, Violation,
};
pub use digraph::{build_swap_digraph, SwapDigraph};
pub use error::{Error, Result};
pub use pairing::{enumerate_balanced_pairings, BalancedPairing, CompanionPair};
pub use search::{
    search_optimal_pairings, search_optimal_pairings_with, worst_case_discrepancy,
    worst_case_discrepancy_with_budget, DiscrepancyReport, OptimalSearch, ResumeState,
    SearchOptions, SearchProgress, DEFAULT_NODE_BUDGET,
};
pub use swap::{apply_swaps, enumerate_swap_sets, set_discrepancy, Swap, SwapSet};
pub use trade::{
    block_discrepancy, construct_trade, verify_trade, verify_trade_with_cap, Block, Trade,
    DEFAULT_SUBSET_CAP,
};
