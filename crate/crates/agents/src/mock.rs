//! Deterministic seeded proposer: a small template library plus directive
//! application, standing in for the LLM backends in offline runs and tests.

use std::collections::BTreeMap;

use once_cell::sync::Lazy;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use regex::Regex;

use flowsheet_core::{
    component, Flowsheet, ObjectiveMetric, ParamValue, Params, PortRef, PortSide, PropertyMethod,
    TaskSpec, UnitKind,
};

use crate::error::AgentError;
use crate::experience::ExperienceLog;
use crate::proposer::Proposer;

static CONNECT_DIRECTIVE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"^connect\s+\S+\s+(\S+)\s+(outlet|inlet)\s+(\d+)").expect("static regex")
});
static TEAR_DIRECTIVE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"^reduce tear residual on stream (\S+) via unit (\S+)").expect("static regex")
});
static IMPROVE_DIRECTIVE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^improve (\w+)").expect("static regex"));
static UNREACHABLE_DIRECTIVE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^remove or connect unreachable unit (\S+)").expect("static regex"));
static ROUTE_DIRECTIVE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^route unit (\S+) toward a Product").expect("static regex"));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Template {
    FlashSeparation,
    RecycleSeparation,
    HeatPath,
    Linear,
}

/// Deterministic proposer. All randomness flows from the configured seed;
/// identical (inputs, seed) give identical outputs.
pub struct MockProposer {
    seed: u64,
    refine_calls: u64,
    /// Directives that could not be applied, newest last.
    pub skip_log: Vec<String>,
    initial: Option<Vec<Flowsheet>>,
}

impl MockProposer {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            refine_calls: 0,
            skip_log: Vec::new(),
            initial: None,
        }
    }

    /// Seed the search from given configurations instead of templates
    /// (regression harness for repairing known-bad topologies).
    pub fn with_initial(seed: u64, flowsheets: Vec<Flowsheet>) -> Self {
        Self {
            seed,
            refine_calls: 0,
            skip_log: Vec::new(),
            initial: Some(flowsheets),
        }
    }

    fn pick_template(task: &TaskSpec) -> Template {
        let wants_separation = task
            .objectives
            .iter()
            .any(|o| matches!(o.metric, ObjectiveMetric::Purity | ObjectiveMetric::Recovery))
            || task.components.len() >= 2;
        if wants_separation {
            let wants_recycle = task.notes.to_ascii_lowercase().contains("recycle")
                || task
                    .objectives
                    .iter()
                    .any(|o| o.metric == ObjectiveMetric::Recovery);
            if wants_recycle {
                Template::RecycleSeparation
            } else {
                Template::FlashSeparation
            }
        } else if !task.components.is_empty() {
            Template::HeatPath
        } else {
            Template::Linear
        }
    }
}

fn jitter(rng: &mut ChaCha8Rng, value: f64, relative: f64) -> f64 {
    value * (1.0 + relative * (2.0 * rng.random::<f64>() - 1.0))
}

fn num(v: f64) -> ParamValue {
    ParamValue::Number(v)
}

/// Overlap of the Antoine validity ranges of the flowsheet components.
fn common_range(component_ids: &[String]) -> (f64, f64) {
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    for id in component_ids {
        if let Some(c) = component::get(id) {
            lo = lo.max(c.antoine.t_min);
            hi = hi.min(c.antoine.t_max);
        }
    }
    if hi.is_finite() && lo < hi {
        (lo, hi)
    } else {
        (280.0, 400.0)
    }
}

fn mean_boiling_point(component_ids: &[String]) -> f64 {
    let nbps: Vec<f64> = component_ids
        .iter()
        .filter_map(|id| component::get(id))
        .map(|c| c.normal_boiling_point)
        .collect();
    if nbps.is_empty() {
        350.0
    } else {
        nbps.iter().sum::<f64>() / nbps.len() as f64
    }
}

struct TaskBasis {
    component_ids: Vec<String>,
    flows: BTreeMap<String, f64>,
    feed_t: f64,
    feed_p: f64,
}

fn task_basis(task: &TaskSpec) -> TaskBasis {
    let mut component_ids: Vec<String> = task
        .components
        .iter()
        .filter_map(|name| component::lookup(name))
        .map(|c| c.id.clone())
        .collect();
    if component_ids.is_empty() {
        component_ids.push("water".to_string());
    }
    let (flows, feed_t, feed_p) = match task.feeds.as_ref().and_then(|f| f.first()) {
        Some(feed) => (feed.flows.clone(), feed.temperature, feed.pressure),
        None => {
            let share = 100.0 / component_ids.len() as f64;
            (
                component_ids.iter().map(|c| (c.clone(), share)).collect(),
                300.0,
                101_325.0,
            )
        }
    };
    TaskBasis {
        component_ids,
        flows,
        feed_t,
        feed_p,
    }
}

fn add_feed(fs: &mut Flowsheet, basis: &TaskBasis) -> Result<String, AgentError> {
    let id = fs.add_unit(
        UnitKind::Feed,
        Params::from([
            ("flows".to_string(), ParamValue::Map(basis.flows.clone())),
            ("T".to_string(), num(basis.feed_t)),
            ("P".to_string(), num(basis.feed_p)),
        ]),
    )?;
    Ok(id)
}

fn build_template(
    template: Template,
    task: &TaskSpec,
    rng: &mut ChaCha8Rng,
) -> Result<Flowsheet, AgentError> {
    let basis = task_basis(task);
    let mut fs = Flowsheet::create(task)?;
    for id in &basis.component_ids {
        fs.add_component(id)?;
    }
    fs.property_method = PropertyMethod::margules_with_defaults(&fs.components);

    let (range_lo, range_hi) = common_range(&basis.component_ids);
    let clamp_t = |t: f64| t.clamp(range_lo + 2.0, range_hi - 2.0);

    match template {
        Template::FlashSeparation => {
            let flash_t = clamp_t(jitter(rng, mean_boiling_point(&basis.component_ids), 0.10));
            let flash_p = jitter(rng, basis.feed_p, 0.10);
            let feed = add_feed(&mut fs, &basis)?;
            let heater = fs.add_unit(
                UnitKind::Heater,
                Params::from([("T_out".to_string(), num(clamp_t(jitter(rng, flash_t, 0.10))))]),
            )?;
            let flash = fs.add_unit(
                UnitKind::Flash,
                Params::from([("T".to_string(), num(flash_t)), ("P".to_string(), num(flash_p))]),
            )?;
            let vapor = fs.add_unit(UnitKind::Product, Params::new())?;
            let liquid = fs.add_unit(UnitKind::Product, Params::new())?;
            fs.connect(PortRef::new(&feed, 0), PortRef::new(&heater, 0))?;
            fs.connect(PortRef::new(&heater, 0), PortRef::new(&flash, 0))?;
            fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor, 0))?;
            fs.connect(PortRef::new(&flash, 1), PortRef::new(&liquid, 0))?;
        }
        Template::RecycleSeparation => {
            let light = basis.component_ids[0].clone();
            let mut split: BTreeMap<String, f64> = BTreeMap::new();
            for id in &basis.component_ids {
                let base = if *id == light { 0.92 } else { 0.08 };
                split.insert(id.clone(), jitter(rng, base, 0.10).clamp(0.0, 1.0));
            }
            let recycle = jitter(rng, 0.5, 0.10).clamp(0.05, 0.95);
            let feed = add_feed(&mut fs, &basis)?;
            let mixer = fs.add_unit(UnitKind::Mixer, Params::new())?;
            let heater = fs.add_unit(
                UnitKind::Heater,
                Params::from([(
                    "T_out".to_string(),
                    num(clamp_t(jitter(rng, basis.feed_t + 20.0, 0.10))),
                )]),
            )?;
            let csplit = fs.add_unit(
                UnitKind::ComponentSplitter,
                Params::from([("split_fractions".to_string(), ParamValue::Map(split))]),
            )?;
            let light_product = fs.add_unit(UnitKind::Product, Params::new())?;
            let splitter = fs.add_unit(
                UnitKind::Splitter,
                Params::from([(
                    "fractions".to_string(),
                    ParamValue::List(vec![1.0 - recycle, recycle]),
                )]),
            )?;
            let heavy_product = fs.add_unit(UnitKind::Product, Params::new())?;
            fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0))?;
            fs.connect(PortRef::new(&mixer, 0), PortRef::new(&heater, 0))?;
            fs.connect(PortRef::new(&heater, 0), PortRef::new(&csplit, 0))?;
            fs.connect(PortRef::new(&csplit, 0), PortRef::new(&light_product, 0))?;
            fs.connect(PortRef::new(&csplit, 1), PortRef::new(&splitter, 0))?;
            fs.connect(PortRef::new(&splitter, 0), PortRef::new(&heavy_product, 0))?;
            fs.connect(PortRef::new(&splitter, 1), PortRef::new(&mixer, 1))?;
        }
        Template::HeatPath => {
            let feed = add_feed(&mut fs, &basis)?;
            let heater = fs.add_unit(
                UnitKind::Heater,
                Params::from([(
                    "T_out".to_string(),
                    num((jitter(rng, basis.feed_t + 15.0, 0.10)).max(275.0)),
                )]),
            )?;
            let product = fs.add_unit(UnitKind::Product, Params::new())?;
            fs.connect(PortRef::new(&feed, 0), PortRef::new(&heater, 0))?;
            fs.connect(PortRef::new(&heater, 0), PortRef::new(&product, 0))?;
        }
        Template::Linear => {
            let feed = add_feed(&mut fs, &basis)?;
            let product = fs.add_unit(UnitKind::Product, Params::new())?;
            fs.connect(PortRef::new(&feed, 0), PortRef::new(&product, 0))?;
        }
    }
    Ok(fs)
}

/// Numeric (unit, key) parameters in deterministic order, jitter targets.
fn numeric_params(fs: &Flowsheet) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (id, unit) in &fs.units {
        for (key, value) in &unit.params {
            if matches!(value, ParamValue::Number(_)) {
                out.push((id.clone(), key.clone()));
            }
        }
    }
    out
}

fn jitter_one_parameter(fs: &mut Flowsheet, rng: &mut ChaCha8Rng) -> bool {
    let candidates = numeric_params(fs);
    if candidates.is_empty() {
        return false;
    }
    let (unit_id, key) = candidates[rng.random_range(0..candidates.len())].clone();
    let unit = fs.units.get_mut(&unit_id).expect("candidate exists");
    if let Some(ParamValue::Number(v)) = unit.params.get_mut(&key) {
        let factor = 1.0 + 0.10 * (2.0 * rng.random::<f64>() - 1.0);
        *v = (*v * factor).max(1e-3);
        true
    } else {
        false
    }
}

fn scale_param(fs: &mut Flowsheet, unit_id: &str, keys: &[&str], factor: f64) -> bool {
    if let Some(unit) = fs.units.get_mut(unit_id) {
        for key in keys {
            if let Some(ParamValue::Number(v)) = unit.params.get_mut(*key) {
                *v *= factor;
                return true;
            }
        }
    }
    false
}

impl MockProposer {
    fn apply_directive(
        &mut self,
        fs: &mut Flowsheet,
        directive: &str,
        log: &ExperienceLog,
    ) -> bool {
        if let Some(c) = CONNECT_DIRECTIVE.captures(directive) {
            let unit_id = c[1].to_string();
            let port: usize = c[3].parse().expect("regex digits");
            let is_outlet = &c[2] == "outlet";
            if fs.units.contains_key(&unit_id) {
                let side = if is_outlet { PortSide::Outlet } else { PortSide::Inlet };
                if fs.stream_at(&unit_id, side, port).is_none() {
                    let result = if is_outlet {
                        fs.add_unit(UnitKind::Product, Params::new())
                            .and_then(|p| {
                                fs.connect(PortRef::new(&unit_id, port), PortRef::new(&p, 0))
                            })
                            .map_err(AgentError::Core)
                    } else {
                        let basis = TaskBasis {
                            component_ids: fs.components.clone(),
                            flows: fs.components.iter().map(|c| (c.clone(), 10.0)).collect(),
                            feed_t: 300.0,
                            feed_p: 101_325.0,
                        };
                        add_feed(fs, &basis).and_then(|f| {
                            fs.connect(PortRef::new(&f, 0), PortRef::new(&unit_id, port))
                                .map_err(AgentError::Core)
                        })
                    };
                    if result.is_ok() {
                        return true;
                    }
                }
            }
            self.skip_log.push(directive.to_string());
            return false;
        }

        if let Some(c) = TEAR_DIRECTIVE.captures(directive) {
            let unit_id = c[2].to_string();
            // walk the loop: nudge T on the named unit, direction informed by
            // the last logged attempt on the same unit
            let step = match log.last_mentioning(&unit_id) {
                Some(entry) if entry.delta_score < 0.0 => 5.0,
                _ => -5.0,
            };
            if let Some(unit) = fs.units.get_mut(&unit_id) {
                for key in ["T_out", "T"] {
                    if let Some(ParamValue::Number(v)) = unit.params.get_mut(key) {
                        *v = (*v + step).max(1.0);
                        return true;
                    }
                }
            }
            self.skip_log.push(directive.to_string());
            return false;
        }

        if let Some(c) = IMPROVE_DIRECTIVE.captures(directive) {
            match &c[1] {
                "ef" => {
                    let heaters: Vec<String> = fs
                        .units_of_kind(UnitKind::Heater)
                        .map(|u| u.id.clone())
                        .collect();
                    let mut changed = false;
                    for h in heaters {
                        changed |= scale_param(fs, &h, &["T_out"], 0.95);
                    }
                    if changed {
                        return true;
                    }
                }
                "ps" => {
                    let ids: Vec<String> = fs.units.keys().cloned().collect();
                    let mut changed = false;
                    for id in ids {
                        let unit = &fs.units[&id];
                        let hot = ["T", "T_out"].iter().filter_map(|k| unit.number(k)).any(|t| t > 500.0);
                        let pressurized =
                            ["P", "P_out"].iter().filter_map(|k| unit.number(k)).any(|p| p > 20.0e5);
                        if hot {
                            changed |= scale_param(fs, &id, &["T", "T_out"], 0.9);
                        }
                        if pressurized {
                            changed |= scale_param(fs, &id, &["P", "P_out"], 0.9);
                        }
                    }
                    if changed {
                        return true;
                    }
                }
                _ => {}
            }
            self.skip_log.push(directive.to_string());
            return false;
        }

        if let Some(c) = UNREACHABLE_DIRECTIVE.captures(directive) {
            let unit_id = c[1].to_string();
            if fs.cascade_delete(&unit_id).is_ok() {
                return true;
            }
            self.skip_log.push(directive.to_string());
            return false;
        }

        if let Some(c) = ROUTE_DIRECTIVE.captures(directive) {
            let unit_id = c[1].to_string();
            if let Ok(unit) = fs.unit(&unit_id) {
                let arity = unit.outlet_ports();
                for port in 0..8 {
                    if !arity.allows(port) {
                        break;
                    }
                    if fs.stream_at(&unit_id, PortSide::Outlet, port).is_none() {
                        let ok = fs
                            .add_unit(UnitKind::Product, Params::new())
                            .and_then(|p| {
                                fs.connect(PortRef::new(&unit_id, port), PortRef::new(&p, 0))
                            })
                            .is_ok();
                        if ok {
                            return true;
                        }
                    }
                }
            }
            self.skip_log.push(directive.to_string());
            return false;
        }

        if directive == "add a Feed unit" {
            let basis = TaskBasis {
                component_ids: fs.components.clone(),
                flows: fs.components.iter().map(|c| (c.clone(), 100.0)).collect(),
                feed_t: 300.0,
                feed_p: 101_325.0,
            };
            if !fs.components.is_empty() && add_feed(fs, &basis).is_ok() {
                return true;
            }
            self.skip_log.push(directive.to_string());
            return false;
        }
        if directive == "add a Product unit" {
            fs.add_unit(UnitKind::Product, Params::new()).expect("product has no params");
            return true;
        }

        self.skip_log.push(directive.to_string());
        false
    }
}

impl Proposer for MockProposer {
    fn seed_configurations(&mut self, task: &TaskSpec) -> Result<Vec<Flowsheet>, AgentError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);

        if let Some(initial) = self.initial.clone() {
            let mut seeds = Vec::new();
            for i in 0..3 {
                let base = &initial[i % initial.len()];
                let mut fork = base.fork();
                if i >= initial.len() {
                    jitter_one_parameter(&mut fork, &mut rng);
                }
                seeds.push(fork);
            }
            return Ok(seeds);
        }

        let template = Self::pick_template(task);
        if template == Template::Linear {
            log::warn!("no template matches task; falling back to linear Feed->Product");
        }
        let mut seeds = Vec::new();
        for _ in 0..3 {
            seeds.push(build_template(template, task, &mut rng)?);
        }
        Ok(seeds)
    }

    fn refine(
        &mut self,
        fs: &Flowsheet,
        directives: &[String],
        log: &ExperienceLog,
    ) -> Result<Flowsheet, AgentError> {
        self.refine_calls += 1;
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed ^ self.refine_calls.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut out = fs.fork();

        let mut changed = false;
        for directive in directives {
            changed |= self.apply_directive(&mut out, directive, log);
        }
        if !changed {
            // no applicable directive: seeded jitter on one parameter
            jitter_one_parameter(&mut out, &mut rng);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn separation_task() -> TaskSpec {
        crate::parse::parse_task(
            "separate 60 kmol/h benzene and 40 kmol/h toluene at 330 K and 1 bar, 95% purity of benzene",
        )
        .unwrap()
    }

    #[test]
    fn separation_task_yields_three_flash_variants() {
        let mut proposer = MockProposer::new(42);
        let seeds = proposer.seed_configurations(&separation_task()).unwrap();
        assert_eq!(seeds.len(), 3);
        for fs in &seeds {
            assert_eq!(fs.units_of_kind(UnitKind::Flash).count(), 1);
            assert!(fs.check_invariants().is_ok());
        }
        // structurally identical, distinct parameters
        let t0 = seeds[0].units_of_kind(UnitKind::Flash).next().unwrap().number("T");
        let t1 = seeds[1].units_of_kind(UnitKind::Flash).next().unwrap().number("T");
        assert_ne!(t0, t1);
    }

    #[test]
    fn seeding_is_deterministic_per_seed() {
        let task = separation_task();
        let a = MockProposer::new(42).seed_configurations(&task).unwrap();
        let b = MockProposer::new(42).seed_configurations(&task).unwrap();
        for (x, y) in a.iter().zip(&b) {
            // ids differ (independent instances); configurations match
            assert_eq!(
                serde_json::to_value(x).map(strip_id).unwrap(),
                serde_json::to_value(y).map(strip_id).unwrap()
            );
        }
    }

    fn strip_id(mut v: serde_json::Value) -> serde_json::Value {
        v["id"] = serde_json::Value::Null;
        v
    }

    #[test]
    fn fallback_template_is_linear() {
        let task = TaskSpec::design(&[]);
        let mut proposer = MockProposer::new(1);
        let seeds = proposer.seed_configurations(&task).unwrap();
        assert_eq!(seeds.len(), 3);
        for fs in seeds {
            assert_eq!(fs.units.len(), 2);
        }
    }

    #[test]
    fn refine_applies_connect_directive() {
        let task = separation_task();
        let mut proposer = MockProposer::new(42);
        let mut fs = proposer.seed_configurations(&task).unwrap().remove(0);
        // break the topology: drop the vapor product
        let vapor_product = fs
            .units_of_kind(UnitKind::Product)
            .next()
            .unwrap()
            .id
            .clone();
        fs.cascade_delete(&vapor_product).unwrap();
        let flash = fs.units_of_kind(UnitKind::Flash).next().unwrap().id.clone();

        let directive = format!("connect Flash {flash} outlet 0");
        let log = ExperienceLog::new();
        let fixed = proposer.refine(&fs, &[directive], &log).unwrap();
        assert!(fixed.stream_at(&flash, PortSide::Outlet, 0).is_some());
    }

    #[test]
    fn refine_without_directives_changes_exactly_one_parameter() {
        let task = separation_task();
        let mut proposer = MockProposer::new(42);
        let fs = proposer.seed_configurations(&task).unwrap().remove(0);
        let refined = proposer.refine(&fs, &[], &ExperienceLog::new()).unwrap();

        let mut changes = 0;
        for (id, unit) in &fs.units {
            let after = &refined.units[id];
            for (key, value) in &unit.params {
                if after.params.get(key) != Some(value) {
                    changes += 1;
                }
            }
        }
        assert_eq!(changes, 1);

        // deterministic: a fresh proposer at the same call index repeats it
        let mut proposer2 = MockProposer::new(42);
        let fs2 = proposer2.seed_configurations(&task).unwrap().remove(0);
        let refined2 = proposer2.refine(&fs2, &[], &ExperienceLog::new()).unwrap();
        assert_eq!(
            serde_json::to_value(&refined).map(strip_id).unwrap(),
            serde_json::to_value(&refined2).map(strip_id).unwrap()
        );
    }

    #[test]
    fn inapplicable_directive_is_skipped_and_logged() {
        let task = separation_task();
        let mut proposer = MockProposer::new(42);
        let fs = proposer.seed_configurations(&task).unwrap().remove(0);
        let refined = proposer
            .refine(
                &fs,
                &["connect Flash ghost42 outlet 0".to_string()],
                &ExperienceLog::new(),
            )
            .unwrap();
        assert_eq!(proposer.skip_log.len(), 1);
        // fell back to a parameter jitter, so output still differs
        assert_ne!(
            serde_json::to_value(&fs).map(strip_id).unwrap(),
            serde_json::to_value(&refined).map(strip_id).unwrap()
        );
    }
}
