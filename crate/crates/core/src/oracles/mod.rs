//! Exact and brute-force references the engines are checked against.

mod bounds;
mod exhaustive;
mod greedy;
mod kruskal;
mod transition;

pub use bounds::{binomial, bound_value, BoundId, BoundParams};
pub use exhaustive::{cell_optima_bruteforce, CELL_OPTIMA_LIMIT};
pub use greedy::{greedy_submodular, max_coverage_exhaustive, Selection, EXHAUSTIVE_LIMIT};
pub use kruskal::{kruskal, mst_exhaustive, spans, SpanningTree, EXHAUSTIVE_EDGE_LIMIT};
pub use transition::{check_jump_decay, ln_transition_prob, transition_prob, TransitionTable};
