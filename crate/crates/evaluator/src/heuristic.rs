//! Deterministic stand-in for judgment-based scoring: fixed formulas per
//! dimension so search regressions are reproducible. Alternate scorers plug
//! in through [`DimensionScorer`].

use flowsheet_core::{
    component, validate_topology, Flowsheet, PortSide, TaskSpec, UnitKind, ViolationCode,
};
use thermo_sim::SimulationResult;

use crate::scores::DimensionScores;

/// Anything that can map a (flowsheet, simulation, task) triple onto the
/// five dimension scores in [0,100].
pub trait DimensionScorer: Send + Sync {
    fn score(&self, fs: &Flowsheet, sim: &SimulationResult, task: &TaskSpec) -> DimensionScores;
}

/// The built-in rule-based scorer.
#[derive(Debug, Default, Clone, Copy)]
pub struct HeuristicScorer;

/// Mass flow of a stream in kg/h.
fn mass_flow(state: &flowsheet_core::StreamState) -> f64 {
    state
        .flows
        .iter()
        .map(|(c, f)| component::get(c).map_or(0.0, |comp| comp.molar_mass * f))
        .sum()
}

impl DimensionScorer for HeuristicScorer {
    fn score(&self, fs: &Flowsheet, sim: &SimulationResult, _task: &TaskSpec) -> DimensionScores {
        let violations = validate_topology(fs);
        let unreachable = violations
            .iter()
            .filter(|v| v.code == ViolationCode::UnreachableUnit)
            .count();

        let tr = 100.0 - 10.0 * violations.len() as f64 - 5.0 * unreachable as f64;

        let tf = if sim.converged {
            100.0 - 2.0 * (sim.iterations as f64 - 20.0).max(0.0)
        } else {
            40.0 * (1.0 - sim.tear_residual).max(0.0)
        };

        let heater_duty_mj: f64 = sim.duties.values().map(|d| d.abs()).sum::<f64>() / 1000.0;
        let ef = 100.0 - 3.0 * fs.units.len() as f64 - 0.05 * heater_duty_mj;

        let mass_in: f64 = fs
            .units_of_kind(UnitKind::Feed)
            .filter_map(|u| fs.stream_at(&u.id, PortSide::Outlet, 0))
            .filter_map(|s| sim.streams.get(&s.id))
            .map(mass_flow)
            .sum();
        let mass_to_products: f64 = fs
            .units_of_kind(UnitKind::Product)
            .flat_map(|u| fs.streams.values().filter(move |s| s.to.unit == u.id))
            .filter_map(|s| sim.streams.get(&s.id))
            .map(mass_flow)
            .sum();
        let recovered = if mass_in > 0.0 {
            mass_to_products / mass_in
        } else {
            0.0
        };
        let waste_outlets = violations
            .iter()
            .filter(|v| v.code == ViolationCode::UnboundPort && v.location.contains(".out"))
            .count();
        let es = 100.0 * recovered - 10.0 * waste_outlets as f64;

        let flammables = fs
            .components
            .iter()
            .filter(|c| component::get(c).is_some_and(|comp| comp.flammable))
            .count();
        let severe_units = fs
            .units
            .values()
            .filter(|u| {
                let hot = ["T", "T_out"]
                    .iter()
                    .filter_map(|k| u.number(k))
                    .any(|t| t > 500.0);
                let pressurized = ["P", "P_out"]
                    .iter()
                    .filter_map(|k| u.number(k))
                    .any(|p| p > 20.0e5);
                hot || pressurized
            })
            .count();
        let ps = 100.0 - 15.0 * flammables as f64 - 10.0 * severe_units as f64;

        DimensionScores::new(ef, es, ps, tf, tr).clamped()
    }
}
