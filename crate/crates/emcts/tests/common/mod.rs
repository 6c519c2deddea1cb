#![allow(dead_code)]

use evaluator::{combine_scores, DimensionScores, EvalResult, EvalWeights};
use emcts::{NodeId, SearchNode, SearchState, ROOT};

/// Attach a synthetic evaluated node with a given score; the caller
/// controls visits, values and history afterwards via `get_mut`.
pub fn add_scored_node(state: &mut SearchState, parent: NodeId, score: f64) -> NodeId {
    let eval = synthetic_eval(score);
    let id = state.tree.allocate_id();
    let depth = state.tree.get(parent).depth + 1;
    state.tree.insert(SearchNode {
        id,
        parent: Some(parent),
        children: Vec::new(),
        flowsheet: None,
        visits: 1,
        eval: Some(eval),
        converged: true,
        v_imm: score / 100.0,
        v_pot: score / 100.0,
        depth,
        revisited: false,
        score_history: vec![score],
    });
    state.tree.get_mut(parent).children.push(id);
    state.tree.get_mut(parent).visits += 1;
    for ancestor in state.tree.ancestors(parent) {
        state.tree.get_mut(ancestor).visits += 1;
    }
    id
}

pub fn synthetic_eval(score: f64) -> EvalResult {
    let mut eval = combine_scores(
        &DimensionScores::uniform(score),
        true,
        &EvalWeights::default(),
    );
    eval.score = score;
    eval.raw_score = score;
    eval
}

/// Root plus three scored children.
pub fn three_node_state(scores: [f64; 3]) -> SearchState {
    let mut state = SearchState::empty();
    for s in scores {
        add_scored_node(&mut state, ROOT, s);
    }
    state.best_trace.push(scores.iter().copied().fold(0.0, f64::max));
    state
}
