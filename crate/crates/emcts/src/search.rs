use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use agents::{describe_diff, AgentError, ExperienceEntry, ExperienceLog, Proposer};
use evaluator::{evaluate, DimensionScorer, EvalWeights};
use flowsheet_core::{Flowsheet, TaskSpec};
use thermo_sim::{SimClient, SimClientError};

use crate::config::SearchConfig;
use crate::node::{population_std, NodeId, SearchNode, SearchTree, ROOT};
use crate::trace::{TraceWriter, UcbTerms};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("seed generation failed: {0}")]
    SeedGeneration(String),

    #[error(transparent)]
    Proposer(#[from] AgentError),

    #[error(transparent)]
    Simulator(#[from] SimClientError),

    #[error("invalid search config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    TargetReached,
    IterationLimit,
    Stagnation,
    Converged,
}

/// Mutable search state: the tree, the dynamic candidate pool, the
/// iteration index and the running best-score trace.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub tree: SearchTree,
    /// Dynamic revisit pool: at most the 2nd and 3rd best non-revisited
    /// nodes, refreshed after every iteration.
    pub pool: Vec<NodeId>,
    pub t: u32,
    pub best_trace: Vec<f64>,
    pub termination: Option<TerminationReason>,
    pub experience: ExperienceLog,
}

impl SearchState {
    /// A root-only state; the entry point for synthetic trees in tests.
    pub fn empty() -> Self {
        Self {
            tree: SearchTree::with_root(),
            pool: Vec::new(),
            t: 0,
            best_trace: Vec::new(),
            termination: None,
            experience: ExperienceLog::new(),
        }
    }

    pub fn best_score(&self) -> f64 {
        self.best_trace.last().copied().unwrap_or(0.0)
    }
}

/// External capabilities the search drives.
pub struct SearchDeps<'a> {
    pub proposer: &'a mut dyn Proposer,
    pub simulator: &'a dyn SimClient,
    pub scorer: &'a dyn DimensionScorer,
    pub weights: EvalWeights,
}

/// Dynamic blend weight: alpha0 early (potential-heavy exploration) ramping
/// linearly to alpha_max at the iteration limit (exploitation).
pub fn alpha(t: u32, cfg: &SearchConfig) -> f64 {
    let progress = if cfg.max_iterations == 0 {
        1.0
    } else {
        (t as f64 / cfg.max_iterations as f64).min(1.0)
    };
    cfg.alpha0 + (cfg.alpha_max - cfg.alpha0) * progress
}

/// Exploration coefficient schedule.
pub fn exploration_coefficient(t: u32, cfg: &SearchConfig) -> f64 {
    cfg.c0 / (1.0 + t as f64).sqrt()
}

/// Dual-layer combined value: alpha(t) * V_imm + (1 - alpha(t)) * V_pot.
pub fn combined_value(node: &SearchNode, t: u32, cfg: &SearchConfig) -> f64 {
    let a = alpha(t, cfg);
    a * node.v_imm + (1.0 - a) * node.v_pot
}

/// Feature bonus: recent improvement, child-score spread, depth preference.
pub fn psi(node: &SearchNode, tree: &SearchTree, cfg: &SearchConfig) -> f64 {
    let improvement = match node.score_history.len() {
        0 | 1 => 0.0,
        n => (node.score_history[n - 1] - node.score_history[n - 2]).max(0.0) / 100.0,
    };
    let child_scores: Vec<f64> = node
        .children
        .iter()
        .map(|c| tree.get(*c).score())
        .collect();
    let spread = if child_scores.len() < 2 {
        0.0
    } else {
        population_std(&child_scores) / 100.0
    };
    let depth = if cfg.d_cap == 0 {
        0.0
    } else {
        node.depth.min(cfg.d_cap) as f64 / cfg.d_cap as f64
    };
    cfg.w_r * improvement + cfg.w_v * spread + cfg.w_d * depth
}

/// The enhanced UCB formula from parts. Kept separate so oracle tests can
/// exercise the arithmetic directly.
pub fn ucb_from_parts(v_comb: f64, c_t: f64, parent_visits: u32, visits: u32, psi: f64) -> f64 {
    v_comb + c_t * ((parent_visits as f64).ln() / visits as f64).sqrt() + psi
}

/// Enhanced UCB of a node, with the decomposed terms for the trace.
pub fn ucb_enhanced(node: &SearchNode, tree: &SearchTree, t: u32, cfg: &SearchConfig) -> UcbTerms {
    let parent_visits = node
        .parent
        .map(|p| tree.get(p).visits)
        .unwrap_or(1)
        .max(1);
    let v_comb = combined_value(node, t, cfg);
    let c_t = exploration_coefficient(t, cfg);
    let explore = c_t * ((parent_visits as f64).ln() / node.visits.max(1) as f64).sqrt();
    let bonus = psi(node, tree, cfg);
    UcbTerms {
        v_comb,
        explore,
        psi: bonus,
        total: v_comb + explore + bonus,
    }
}

/// Expandable node maximizing the enhanced UCB; ties go to the smaller id.
pub fn select(state: &SearchState, cfg: &SearchConfig) -> Option<(NodeId, UcbTerms)> {
    let mut best: Option<(NodeId, UcbTerms)> = None;
    for node in state.tree.evaluated() {
        let terms = ucb_enhanced(node, &state.tree, state.t, cfg);
        let better = match &best {
            None => true,
            Some((_, current)) => terms.total > current.total,
        };
        if better {
            best = Some((node.id, terms));
        }
    }
    best
}

/// Refresh the candidate pool: ranks 2 and 3 by score among non-revisited
/// evaluated nodes (rank 1 is the global best and excluded). Score ties
/// resolve to the smaller id.
pub fn update_pool(state: &mut SearchState) {
    let mut ranked: Vec<(f64, NodeId)> = state
        .tree
        .evaluated()
        .filter(|n| !n.revisited)
        .map(|n| (n.score(), n.id))
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    state.pool = ranked.iter().skip(1).take(2).map(|(_, id)| *id).collect();
}

/// Revisit target: pool member with the largest potential-minus-realized
/// gap; ties go to the smaller id. Marks the node revisited (sticky).
pub fn select_revisit(state: &mut SearchState) -> Option<NodeId> {
    let chosen = state
        .pool
        .iter()
        .map(|id| {
            let node = state.tree.get(*id);
            (node.v_pot - node.v_imm, *id)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, id)| id)?;
    state.tree.get_mut(chosen).revisited = true;
    Some(chosen)
}

fn stagnant(state: &SearchState, cfg: &SearchConfig) -> bool {
    let trace = &state.best_trace;
    let window = cfg.stagnation_window as usize;
    trace.len() > window
        && trace[trace.len() - 1] - trace[trace.len() - 1 - window] < 0.5
}

/// First matching terminal condition; the rules are checked in a fixed
/// priority order.
pub fn check_termination(state: &SearchState, cfg: &SearchConfig) -> Option<TerminationReason> {
    if state.best_score() >= cfg.target_score {
        return Some(TerminationReason::TargetReached);
    }
    if state.t >= cfg.max_iterations {
        return Some(TerminationReason::IterationLimit);
    }
    if stagnant(state, cfg) && state.pool.is_empty() {
        return Some(TerminationReason::Stagnation);
    }
    let root_visits = state.tree.root().visits;
    if root_visits > 0 && state.best_trace.len() >= 5 {
        let top_subtree = state
            .tree
            .root()
            .children
            .iter()
            .map(|c| state.tree.get(*c).visits)
            .max()
            .unwrap_or(0);
        let concentrated = top_subtree as f64 >= cfg.theta_v * root_visits as f64;
        let last5 = &state.best_trace[state.best_trace.len() - 5..];
        if concentrated && population_std(last5) < cfg.eps_s {
            return Some(TerminationReason::Converged);
        }
    }
    None
}

/// Final answer: the evaluated leaf maximizing
/// quality*(S/100) + visit_share*(v/sum leaf v) + stability*(1-min(1,std/10)).
pub fn final_select(state: &SearchState, cfg: &SearchConfig) -> Option<NodeId> {
    let total_leaf_visits: u32 = state.tree.leaves().map(|n| n.visits).sum();
    if total_leaf_visits == 0 {
        return None;
    }
    let (wq, wv, ws) = cfg.final_weights;
    let mut best: Option<(f64, NodeId)> = None;
    for leaf in state.tree.leaves() {
        let quality = leaf.score() / 100.0;
        let visit_share = leaf.visits as f64 / total_leaf_visits as f64;
        let stability = 1.0 - (population_std(&leaf.score_history) / 10.0).min(1.0);
        let value = wq * quality + wv * visit_share + ws * stability;
        let better = match best {
            None => true,
            Some((current, _)) => value > current,
        };
        if better {
            best = Some((value, leaf.id));
        }
    }
    best.map(|(_, id)| id)
}

/// Canonical configuration content, instance id stripped, for duplicate
/// detection among sibling proposals.
fn canonical(fs: &Flowsheet) -> Value {
    let mut v = serde_json::to_value(fs).expect("flowsheet serializes");
    v["id"] = Value::Null;
    v
}

/// The full search: owns the state, drives proposer/simulator/evaluator.
pub struct Search<'a, 'd> {
    pub task: &'a TaskSpec,
    pub cfg: &'a SearchConfig,
    pub deps: &'a mut SearchDeps<'d>,
    pub state: SearchState,
    pub trace: TraceWriter,
}

/// Completed search plus the selected configuration.
pub struct SearchOutcome {
    pub state: SearchState,
    pub termination: TerminationReason,
    /// Node chosen by final selection.
    pub final_node: NodeId,
    pub trace: TraceWriter,
}

impl<'a, 'd> Search<'a, 'd> {
    pub fn new(
        task: &'a TaskSpec,
        cfg: &'a SearchConfig,
        deps: &'a mut SearchDeps<'d>,
    ) -> Result<Self, SearchError> {
        cfg.validate().map_err(SearchError::Config)?;
        let mut search = Self {
            task,
            cfg,
            deps,
            state: SearchState::empty(),
            trace: TraceWriter::new(),
        };
        // the config owns the evaluation weights and the shared penalty factor
        search.deps.weights = EvalWeights {
            w1: cfg.eval_weights[0],
            w2: cfg.eval_weights[1],
            w3: cfg.eval_weights[2],
            w4: cfg.eval_weights[3],
            w5: cfg.eval_weights[4],
            lambda: cfg.lambda,
        };
        search
            .deps
            .weights
            .validate()
            .map_err(SearchError::Config)?;
        search.init()?;
        Ok(search)
    }

    /// Simulate, evaluate and attach one configuration under `parent`;
    /// backpropagates visits and score history to the root.
    fn attach_child(&mut self, parent: NodeId, fs: Flowsheet) -> Result<NodeId, SearchError> {
        let sim = self
            .deps
            .simulator
            .simulate(&fs, self.cfg.sim_tol, self.cfg.sim_max_iter)?;
        let eval = evaluate(&fs, &sim, self.task, self.deps.scorer, &self.deps.weights);
        let score = eval.score;
        let v_imm = eval.score / 100.0;
        let v_pot = 0.5 * (eval.raw_score / 100.0) + 0.5 * (eval.dims.max_dimension() / 100.0);

        let id = self.state.tree.allocate_id();
        let depth = self.state.tree.get(parent).depth + 1;
        self.state.tree.insert(SearchNode {
            id,
            parent: Some(parent),
            children: Vec::new(),
            flowsheet: Some(fs),
            visits: 1,
            eval: Some(eval),
            converged: sim.converged,
            v_imm,
            v_pot,
            depth,
            revisited: false,
            score_history: vec![score],
        });
        self.state.tree.get_mut(parent).children.push(id);

        // backpropagation: one visit and one observed score per ancestor
        self.state.tree.get_mut(parent).visits += 1;
        self.state.tree.get_mut(parent).score_history.push(score);
        for ancestor in self.state.tree.ancestors(parent) {
            self.state.tree.get_mut(ancestor).visits += 1;
            self.state.tree.get_mut(ancestor).score_history.push(score);
        }
        Ok(id)
    }

    /// Initialization: virtual root plus `initial_nodes` evaluated seeds
    /// from a full workflow pass; empty candidate pool; t = 0.
    fn init(&mut self) -> Result<(), SearchError> {
        let seeds = self
            .deps
            .proposer
            .seed_configurations(self.task)
            .map_err(|e| SearchError::SeedGeneration(e.to_string()))?;
        if seeds.is_empty() {
            return Err(SearchError::SeedGeneration(
                "proposer returned no configurations".to_string(),
            ));
        }
        for fs in seeds.into_iter().take(self.cfg.initial_nodes as usize) {
            self.attach_child(ROOT, fs)?;
        }
        let best = self
            .state
            .tree
            .evaluated()
            .map(SearchNode::score)
            .fold(0.0, f64::max);
        self.state.best_trace.push(best);
        self.trace.record(0, "expand", ROOT, None, Some(best));
        Ok(())
    }

    /// One search iteration: terminal check, (re)selection, expansion,
    /// pool refresh. Returns the termination reason once finished.
    pub fn step(&mut self) -> Result<Option<TerminationReason>, SearchError> {
        if let Some(reason) = check_termination(&self.state, self.cfg) {
            self.state.termination = Some(reason);
            self.trace.record(
                self.state.t,
                "terminate",
                ROOT,
                None,
                Some(self.state.best_score()),
            );
            return Ok(Some(reason));
        }

        let iteration = self.state.t + 1;
        let target = if stagnant(&self.state, self.cfg) && !self.state.pool.is_empty() {
            let node = select_revisit(&mut self.state).expect("pool checked non-empty");
            let score = self.state.tree.get(node).score();
            self.trace
                .record(iteration, "revisit", node, None, Some(score));
            node
        } else {
            let (node, terms) = select(&self.state, self.cfg)
                .expect("initialization guarantees an expandable node");
            let score = self.state.tree.get(node).score();
            self.trace
                .record(iteration, "select", node, Some(terms), Some(score));
            node
        };

        self.expand(target, iteration)?;

        self.state.t = iteration;
        let best = f64::max(
            self.state.best_score(),
            self.state
                .tree
                .evaluated()
                .map(SearchNode::score)
                .fold(0.0, f64::max),
        );
        self.state.best_trace.push(best);
        update_pool(&mut self.state);
        self.trace
            .record(iteration, "expand", target, None, Some(best));
        Ok(None)
    }

    /// Generate `children_per_expansion` refined configurations under the
    /// selected node. Duplicate proposals are re-perturbed once, then
    /// accepted as-is.
    fn expand(&mut self, target: NodeId, iteration: u32) -> Result<(), SearchError> {
        let parent_fs = self
            .state
            .tree
            .get(target)
            .flowsheet
            .clone()
            .expect("non-root nodes carry configurations");
        let directives = self
            .state
            .tree
            .get(target)
            .eval
            .as_ref()
            .map(|e| e.directives.clone())
            .unwrap_or_default();
        let parent_score = self.state.tree.get(target).score();

        let mut proposals: Vec<Flowsheet> = Vec::new();
        for _ in 0..self.cfg.children_per_expansion {
            let child = self
                .deps
                .proposer
                .refine(&parent_fs, &directives, &self.state.experience)?;
            proposals.push(child);
        }
        let mut seen: Vec<Value> = vec![canonical(&parent_fs)];
        for proposal in proposals.iter_mut() {
            let key = canonical(proposal);
            if seen.contains(&key) {
                log::warn!("duplicate child proposal; re-perturbing once");
                *proposal = self
                    .deps
                    .proposer
                    .refine(proposal, &[], &self.state.experience)?;
            }
            seen.push(canonical(proposal));
        }

        for proposal in proposals {
            let summary = describe_diff(&parent_fs, &proposal);
            let child = self.attach_child(target, proposal)?;
            let node = self.state.tree.get(child);
            self.state.experience.append(ExperienceEntry {
                iteration,
                parent_node: target.to_string(),
                summary,
                delta_score: node.score() - parent_score,
                converged: node.converged,
                directives_applied: directives.clone(),
            });
        }
        Ok(())
    }

    /// Run to termination and select the final configuration.
    pub fn run(mut self) -> Result<SearchOutcome, SearchError> {
        let reason = loop {
            if let Some(reason) = self.step()? {
                break reason;
            }
        };
        let final_node =
            final_select(&self.state, self.cfg).expect("tree has evaluated leaves");
        Ok(SearchOutcome {
            state: self.state,
            termination: reason,
            final_node,
            trace: self.trace,
        })
    }
}

/// Convenience wrapper: initialize and run a full search.
pub fn run_search(
    task: &TaskSpec,
    cfg: &SearchConfig,
    deps: &mut SearchDeps,
) -> Result<SearchOutcome, SearchError> {
    Search::new(task, cfg, deps)?.run()
}
