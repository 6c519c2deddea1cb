//! Quantitative evaluation of (flowsheet, simulation result, task) triples:
//! five dimension scores, their weighted combination with a failure penalty,
//! and structured improvement directives.

mod directives;
mod heuristic;
mod scores;

use flowsheet_core::{Flowsheet, TaskSpec};
use thermo_sim::SimulationResult;

pub use directives::emit_directives;
pub use heuristic::{DimensionScorer, HeuristicScorer};
pub use scores::{combine_scores, DimensionScores, EvalResult, EvalWeights};

/// Full evaluation: dimension scoring, weighted combination, directives.
pub fn evaluate(
    fs: &Flowsheet,
    sim: &SimulationResult,
    task: &TaskSpec,
    scorer: &dyn DimensionScorer,
    weights: &EvalWeights,
) -> EvalResult {
    let dims = scorer.score(fs, sim, task);
    let mut result = combine_scores(&dims, sim.converged, weights);
    result.directives = emit_directives(fs, sim, &dims);
    result
}
