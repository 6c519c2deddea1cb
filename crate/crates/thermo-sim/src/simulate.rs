//! Sequential-modular flowsheet solve with tear-stream iteration and
//! Wegstein acceleration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use flowsheet_core::{
    component, validate_topology, ChemComponent, Flowsheet, PortSide, StreamState, UnitKind,
};

use crate::error::SimError;
use crate::sequence::order_units;
use crate::units::simulate_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NotConverged,
    TopologyInvalid,
    PropertyRangeExceeded,
}

/// Outcome of a flowsheet solve. Non-convergence is a result, not an error:
/// failed configurations must still reach the evaluator's penalty path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub converged: bool,
    pub iterations: u32,
    pub streams: BTreeMap<String, StreamState>,
    /// max over components of |in + generation - out| / max(in, eps).
    pub component_balance_residual: f64,
    /// Final max relative change in tear component flows.
    pub tear_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_reason: Option<FailureReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_detail: Option<String>,
    /// Heater duty per unit id, kJ/h.
    #[serde(default)]
    pub duties: BTreeMap<String, f64>,
    #[serde(default)]
    pub tear_streams: Vec<String>,
    /// Final relative residual per tear stream.
    #[serde(default)]
    pub tear_residuals: BTreeMap<String, f64>,
}

impl SimulationResult {
    fn failed(reason: FailureReason, detail: impl Into<String>) -> Self {
        Self {
            converged: false,
            iterations: 0,
            streams: BTreeMap::new(),
            component_balance_residual: 1.0,
            tear_residual: 1.0,
            failure_reason: Some(reason),
            failure_detail: Some(detail.into()),
            duties: BTreeMap::new(),
            tear_streams: Vec::new(),
            tear_residuals: BTreeMap::new(),
        }
    }

    /// Tear stream with the largest final residual, if any.
    pub fn worst_tear(&self) -> Option<(&str, f64)> {
        self.tear_residuals
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(id, r)| (id.as_str(), *r))
    }
}

/// Solver knobs. `wegstein: false` disables acceleration (pure direct
/// substitution), used by the convergence regression suite.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub tol: f64,
    pub max_iter: u32,
    pub wegstein: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 200,
            wegstein: true,
        }
    }
}

/// Acceleration factor bounds: q = 0 is direct substitution, negative q
/// extrapolates; the clamp prevents oscillation blow-up.
const WEGSTEIN_Q_MIN: f64 = -5.0;
const WEGSTEIN_Q_MAX: f64 = 0.0;
/// Every how many iterations the Wegstein update replaces direct
/// substitution.
const WEGSTEIN_PERIOD: u32 = 4;
/// After the user tolerance is met, iteration quietly continues down to this
/// residual (or `POLISH_BUDGET` extra passes) so converged results close
/// their component balances to reporting precision.
const POLISH_TOL: f64 = 1e-11;
const POLISH_BUDGET: u32 = 100;

struct Pass {
    states: BTreeMap<String, StreamState>,
    duties: BTreeMap<String, f64>,
    extents: BTreeMap<String, f64>,
}

fn run_pass(
    fs: &Flowsheet,
    comps: &[&ChemComponent],
    sequence: &[String],
    tears: &[String],
    tear_guess: &BTreeMap<String, StreamState>,
) -> Result<Pass, SimError> {
    let mut states: BTreeMap<String, StreamState> = tear_guess.clone();
    let mut duties = BTreeMap::new();
    let mut extents = BTreeMap::new();

    for unit_id in sequence {
        let unit = fs.unit(unit_id).expect("sequence references known units");
        let mut inlet_streams: Vec<&flowsheet_core::Stream> = fs
            .streams
            .values()
            .filter(|s| s.to.unit == *unit_id)
            .collect();
        inlet_streams.sort_by_key(|s| s.to.port);
        let inlets: Vec<StreamState> = inlet_streams
            .iter()
            .map(|s| {
                states
                    .get(&s.id)
                    .cloned()
                    .unwrap_or_else(|| StreamState::zero(&fs.components, 300.0, 101_325.0))
            })
            .collect();

        let outputs = simulate_unit(unit, &inlets, comps, &fs.property_method)?;
        if let Some(duty) = outputs.duty {
            duties.insert(unit_id.clone(), duty);
        }
        if let Some(extent) = outputs.extent {
            extents.insert(unit_id.clone(), extent);
        }
        for (port, state) in outputs.outlets.into_iter().enumerate() {
            if let Some(stream) = fs.stream_at(unit_id, PortSide::Outlet, port) {
                // tear guesses stay fixed for the duration of a pass
                if tears.contains(&stream.id) {
                    states.insert(format!("computed:{}", stream.id), state);
                } else {
                    states.insert(stream.id.clone(), state);
                }
            }
        }
    }
    Ok(Pass {
        states,
        duties,
        extents,
    })
}

fn tear_change(guess: &StreamState, computed: &StreamState) -> f64 {
    let scale = computed.total_flow().max(1e-10);
    guess
        .flows
        .keys()
        .chain(computed.flows.keys())
        .map(|c| (computed.flow(c) - guess.flow(c)).abs() / scale)
        .fold(0.0, f64::max)
}

fn balance_residual(
    fs: &Flowsheet,
    comps: &[&ChemComponent],
    pass: &Pass,
) -> f64 {
    let mut max_residual: f64 = 0.0;
    for comp in comps {
        let c = comp.id.as_str();
        let mut inflow = 0.0;
        for feed in fs.units_of_kind(UnitKind::Feed) {
            if let Some(stream) = fs.stream_at(&feed.id, PortSide::Outlet, 0) {
                if let Some(state) = pass.states.get(&stream.id) {
                    inflow += state.flow(c);
                }
            }
        }
        let mut outflow = 0.0;
        for product in fs.units_of_kind(UnitKind::Product) {
            for s in fs.streams.values() {
                if s.to.unit == product.id {
                    if let Some(state) = pass.states.get(&s.id) {
                        outflow += state.flow(c);
                    }
                }
            }
        }
        let mut generation = 0.0;
        for (unit_id, extent) in &pass.extents {
            let unit = fs.unit(unit_id).expect("extent references known unit");
            if let Some(stoich) = unit
                .params
                .get("stoichiometry")
                .and_then(flowsheet_core::ParamValue::as_map)
            {
                generation += stoich.get(c).copied().unwrap_or(0.0) * extent;
            }
        }
        let denom = (inflow + generation.max(0.0)).max(1e-10);
        let residual = (inflow + generation - outflow).abs() / denom;
        max_residual = max_residual.max(residual);
    }
    max_residual
}

/// Run the sequential-modular solve with explicit options.
pub fn run_simulation_with(fs: &Flowsheet, opts: &SimOptions) -> SimulationResult {
    let violations = validate_topology(fs);
    if !violations.is_empty() {
        let summary: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return SimulationResult::failed(FailureReason::TopologyInvalid, summary.join("; "));
    }
    let comps: Vec<&ChemComponent> = match fs
        .components
        .iter()
        .map(|id| component::get(id).ok_or_else(|| SimError::UnknownComponent(id.clone())))
        .collect()
    {
        Ok(v) => v,
        Err(e) => return SimulationResult::failed(FailureReason::TopologyInvalid, e.to_string()),
    };

    let order = order_units(fs);
    let tears = order.tears.clone();

    // feed-average initial conditions for tear guesses
    let feeds: Vec<&flowsheet_core::UnitOp> = fs.units_of_kind(UnitKind::Feed).collect();
    let n_feeds = feeds.len().max(1) as f64;
    let t0 = feeds.iter().filter_map(|u| u.number("T")).sum::<f64>() / n_feeds;
    let p0 = feeds.iter().filter_map(|u| u.number("P")).sum::<f64>() / n_feeds;
    let mut tear_guess: BTreeMap<String, StreamState> = tears
        .iter()
        .map(|id| (id.clone(), StreamState::zero(&fs.components, t0, p0)))
        .collect();

    let mut prev_guess: BTreeMap<String, StreamState> = BTreeMap::new();
    let mut prev_computed: BTreeMap<String, StreamState> = BTreeMap::new();

    let mut converged_at: Option<u32> = None;
    let mut tear_residual = if tears.is_empty() { 0.0 } else { 1.0 };
    let mut tear_residuals: BTreeMap<String, f64> = BTreeMap::new();
    let mut iter = 0u32;

    loop {
        iter += 1;
        let over_budget = match converged_at {
            Some(at) => iter > at + POLISH_BUDGET,
            None => iter > opts.max_iter,
        };
        if over_budget {
            iter -= 1;
            break;
        }

        let pass = match run_pass(fs, &comps, &order.sequence, &tears, &tear_guess) {
            Ok(p) => p,
            Err(e) => return failure_from(e),
        };

        if tears.is_empty() {
            return finish(fs, &comps, pass, iter, 0.0, tear_residuals, tears, true, None);
        }

        let mut worst = 0.0_f64;
        let mut computed_now: BTreeMap<String, StreamState> = BTreeMap::new();
        for tid in &tears {
            let computed = pass.states[&format!("computed:{tid}")].clone();
            let change = tear_change(&tear_guess[tid], &computed);
            tear_residuals.insert(tid.clone(), change);
            worst = worst.max(change);
            computed_now.insert(tid.clone(), computed);
        }
        tear_residual = worst;

        if converged_at.is_none() && worst < opts.tol {
            converged_at = Some(iter);
        }
        if converged_at.is_some() && worst < POLISH_TOL {
            break;
        }

        // tear update: direct substitution, Wegstein every WEGSTEIN_PERIOD
        let accelerate =
            opts.wegstein && iter.is_multiple_of(WEGSTEIN_PERIOD) && !prev_guess.is_empty();
        let mut next_guess: BTreeMap<String, StreamState> = BTreeMap::new();
        for tid in &tears {
            let x_k = &tear_guess[tid];
            let g_k = &computed_now[tid];
            let mut new_state = g_k.clone();
            if accelerate {
                let x_prev = &prev_guess[tid];
                let g_prev = &prev_computed[tid];
                for (c, flow) in new_state.flows.iter_mut() {
                    let dx = x_k.flow(c) - x_prev.flow(c);
                    if dx.abs() > 1e-14 {
                        let s = (g_k.flow(c) - g_prev.flow(c)) / dx;
                        if (s - 1.0).abs() > 1e-14 {
                            let q = (s / (s - 1.0)).clamp(WEGSTEIN_Q_MIN, WEGSTEIN_Q_MAX);
                            *flow = q * x_k.flow(c) + (1.0 - q) * g_k.flow(c);
                        }
                    }
                }
            }
            next_guess.insert(tid.clone(), new_state);
        }
        prev_guess = tear_guess;
        prev_computed = computed_now;
        tear_guess = next_guess;
    }

    // snapshot pass: every reported stream reflects one consistent sweep
    // with the final tear guesses
    let pass = match run_pass(fs, &comps, &order.sequence, &tears, &tear_guess) {
        Ok(p) => p,
        Err(e) => return failure_from(e),
    };
    let converged = converged_at.is_some();
    let iterations = converged_at.unwrap_or(iter);
    let reason = if converged {
        None
    } else {
        Some(FailureReason::NotConverged)
    };
    finish(
        fs,
        &comps,
        pass,
        iterations,
        tear_residual,
        tear_residuals,
        tears,
        converged,
        reason,
    )
}

fn failure_from(e: SimError) -> SimulationResult {
    let reason = match e {
        SimError::PropertyRangeExceeded { .. } => FailureReason::PropertyRangeExceeded,
        _ => FailureReason::NotConverged,
    };
    SimulationResult::failed(reason, e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    fs: &Flowsheet,
    comps: &[&ChemComponent],
    pass: Pass,
    iterations: u32,
    tear_residual: f64,
    tear_residuals: BTreeMap<String, f64>,
    tears: Vec<String>,
    converged: bool,
    failure_reason: Option<FailureReason>,
) -> SimulationResult {
    let residual = balance_residual(fs, comps, &pass);
    let streams: BTreeMap<String, StreamState> = pass
        .states
        .into_iter()
        .filter(|(id, _)| !id.starts_with("computed:"))
        .collect();
    SimulationResult {
        converged,
        iterations,
        streams,
        component_balance_residual: residual,
        tear_residual,
        failure_reason,
        failure_detail: None,
        duties: pass.duties,
        tear_streams: tears,
        tear_residuals,
    }
}

/// Solve a flowsheet with the given tolerance and iteration limit.
/// Invalid topology and property-range failures come back as results with
/// a `failure_reason`, never as panics or errors.
pub fn run_simulation(fs: &Flowsheet, tol: f64, max_iter: u32) -> SimulationResult {
    run_simulation_with(
        fs,
        &SimOptions {
            tol,
            max_iter,
            ..SimOptions::default()
        },
    )
}

/// Boundary through which the search reaches a simulator: in-process here,
/// over HTTP in the service crate.
pub trait SimClient: Send + Sync {
    fn simulate(&self, fs: &Flowsheet, tol: f64, max_iter: u32)
        -> Result<SimulationResult, SimClientError>;
}

#[derive(Debug, thiserror::Error)]
#[error("simulation client: {0}")]
pub struct SimClientError(pub String);

/// Direct in-process simulation.
#[derive(Debug, Default, Clone, Copy)]
pub struct InProcessSim;

impl SimClient for InProcessSim {
    fn simulate(
        &self,
        fs: &Flowsheet,
        tol: f64,
        max_iter: u32,
    ) -> Result<SimulationResult, SimClientError> {
        Ok(run_simulation(fs, tol, max_iter))
    }
}
