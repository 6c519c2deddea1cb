//! Enhanced Monte Carlo Tree Search over complete process configurations:
//! dual-layer node values (immediate vs. potential), an augmented UCB rule
//! with feature bonuses, a dynamic revisit pool for stagnation escape,
//! layered terminal conditions and weighted final selection.

mod config;
mod node;
mod search;
mod trace;

pub use config::SearchConfig;
pub use node::{population_std, NodeId, SearchNode, SearchTree, ROOT};
pub use search::{
    alpha, check_termination, combined_value, exploration_coefficient, final_select, psi,
    run_search, select, select_revisit, ucb_enhanced, ucb_from_parts, update_pool, Search,
    SearchDeps, SearchError, SearchOutcome, SearchState, TerminationReason,
};
pub use trace::{TraceRecord, TraceWriter, UcbTerms};
