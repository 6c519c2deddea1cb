//! Steady-state models for the individual unit operations.

use std::collections::BTreeMap;

use flowsheet_core::{ChemComponent, ParamValue, PropertyMethod, StreamState, UnitKind, UnitOp};

use crate::error::SimError;
use crate::flash::rachford_rice;
use crate::vle::k_values;

/// Outputs of a single unit solve.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitOutputs {
    pub outlets: Vec<StreamState>,
    /// Heater duty, kJ/h.
    pub duty: Option<f64>,
    /// Reaction extent, kmol/h (conversion reactors).
    pub extent: Option<f64>,
}

impl UnitOutputs {
    fn outlets(outlets: Vec<StreamState>) -> Self {
        Self {
            outlets,
            duty: None,
            extent: None,
        }
    }
}

fn component_ids(components: &[&ChemComponent]) -> Vec<String> {
    components.iter().map(|c| c.id.clone()).collect()
}

fn param(unit: &UnitOp, key: &str) -> f64 {
    unit.number(key).unwrap_or(0.0)
}

fn feed_state(unit: &UnitOp, components: &[&ChemComponent]) -> StreamState {
    let flows_param = unit
        .params
        .get("flows")
        .and_then(ParamValue::as_map)
        .cloned()
        .unwrap_or_default();
    let flows: BTreeMap<String, f64> = components
        .iter()
        .map(|c| (c.id.clone(), flows_param.get(&c.id).copied().unwrap_or(0.0)))
        .collect();
    StreamState::new(flows, param(unit, "T"), param(unit, "P"))
}

fn mix(inlets: &[StreamState], components: &[&ChemComponent]) -> StreamState {
    let ids = component_ids(components);
    let mut out = StreamState::zero(&ids, 0.0, f64::INFINITY);
    let mut total = 0.0;
    let mut t_weighted = 0.0;
    let mut vf_weighted = 0.0;
    for inlet in inlets {
        let flow = inlet.total_flow();
        total += flow;
        t_weighted += flow * inlet.temperature;
        vf_weighted += flow * inlet.vapor_fraction;
        out.pressure = out.pressure.min(inlet.pressure);
        for (c, f) in &inlet.flows {
            *out.flows.entry(c.clone()).or_insert(0.0) += f;
        }
    }
    if total > 0.0 {
        out.temperature = t_weighted / total;
        out.vapor_fraction = vf_weighted / total;
    } else {
        // arithmetic mean keeps empty mixers well-defined
        let n = inlets.len().max(1) as f64;
        out.temperature = inlets.iter().map(|s| s.temperature).sum::<f64>() / n;
    }
    if !out.pressure.is_finite() {
        out.pressure = 101_325.0;
    }
    out
}

fn flash(
    unit: &UnitOp,
    inlet: &StreamState,
    components: &[&ChemComponent],
    method: &PropertyMethod,
) -> Result<UnitOutputs, SimError> {
    let t = param(unit, "T");
    let p = param(unit, "P");
    let ids = component_ids(components);
    let total = inlet.total_flow();

    let z: Vec<f64> = if total > 0.0 {
        ids.iter().map(|c| inlet.flow(c) / total).collect()
    } else {
        vec![1.0 / ids.len() as f64; ids.len()]
    };

    // K depends on liquid composition under Margules: successive substitution
    let mut x = z.clone();
    let mut split = None;
    for _ in 0..100 {
        let k = k_values(components, t, p, method, &x)?;
        let s = rachford_rice(&z, &k)?;
        let delta: f64 = s
            .x
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = s.x.clone();
        let done = delta < 1e-12;
        split = Some(s);
        if done {
            break;
        }
    }
    let split = split.expect("at least one flash iteration runs");

    let vapor_total = split.beta * total;
    let liquid_total = (1.0 - split.beta) * total;
    let mut vapor = StreamState::zero(&ids, t, p);
    let mut liquid = StreamState::zero(&ids, t, p);
    vapor.vapor_fraction = 1.0;
    liquid.vapor_fraction = 0.0;
    for (i, c) in ids.iter().enumerate() {
        vapor.flows.insert(c.clone(), vapor_total * split.y[i]);
        liquid.flows.insert(c.clone(), liquid_total * split.x[i]);
    }
    Ok(UnitOutputs::outlets(vec![vapor, liquid]))
}

fn reactor(
    unit: &UnitOp,
    inlet: &StreamState,
    components: &[&ChemComponent],
) -> Result<UnitOutputs, SimError> {
    let stoich = unit
        .params
        .get("stoichiometry")
        .and_then(ParamValue::as_map)
        .cloned()
        .unwrap_or_default();
    let key = unit
        .params
        .get("key_component")
        .and_then(ParamValue::as_text)
        .unwrap_or_default()
        .to_string();
    let conversion = param(unit, "conversion");
    let nu_key = stoich.get(&key).copied().unwrap_or(1.0);
    let extent = conversion * inlet.flow(&key) / nu_key.abs();

    let ids = component_ids(components);
    let mut out = inlet.clone();
    for c in &ids {
        let nu = stoich.get(c).copied().unwrap_or(0.0);
        let flow = inlet.flow(c) + nu * extent;
        if flow < -1e-9 {
            return Err(SimError::InfeasibleConversion {
                unit: unit.id.clone(),
                component: c.clone(),
                flow,
            });
        }
        out.flows.insert(c.clone(), flow.max(0.0));
    }
    Ok(UnitOutputs {
        outlets: vec![out],
        duty: None,
        extent: Some(extent),
    })
}

/// Solve one unit from fully-specified inlet states.
pub fn simulate_unit(
    unit: &UnitOp,
    inlets: &[StreamState],
    components: &[&ChemComponent],
    method: &PropertyMethod,
) -> Result<UnitOutputs, SimError> {
    match unit.kind {
        UnitKind::Feed => Ok(UnitOutputs::outlets(vec![feed_state(unit, components)])),
        UnitKind::Product => Ok(UnitOutputs::outlets(Vec::new())),
        UnitKind::Mixer => Ok(UnitOutputs::outlets(vec![mix(inlets, components)])),
        UnitKind::Splitter => {
            let inlet = &inlets[0];
            let fractions = unit
                .params
                .get("fractions")
                .and_then(ParamValue::as_list)
                .unwrap_or(&[])
                .to_vec();
            let outs = fractions
                .iter()
                .map(|f| {
                    let mut s = inlet.clone();
                    for v in s.flows.values_mut() {
                        *v *= f;
                    }
                    s
                })
                .collect();
            Ok(UnitOutputs::outlets(outs))
        }
        UnitKind::Heater => {
            let inlet = &inlets[0];
            let t_out = param(unit, "T_out");
            let duty: f64 = components
                .iter()
                .map(|c| inlet.flow(&c.id) * c.cp_liq * (t_out - inlet.temperature))
                .sum();
            let mut out = inlet.clone();
            out.temperature = t_out;
            Ok(UnitOutputs {
                outlets: vec![out],
                duty: Some(duty),
                extent: None,
            })
        }
        UnitKind::Pump | UnitKind::Valve => {
            let mut out = inlets[0].clone();
            out.pressure = param(unit, "P_out");
            Ok(UnitOutputs::outlets(vec![out]))
        }
        UnitKind::Flash => flash(unit, &inlets[0], components, method),
        UnitKind::ComponentSplitter => {
            let inlet = &inlets[0];
            let split = unit
                .params
                .get("split_fractions")
                .and_then(ParamValue::as_map)
                .cloned()
                .unwrap_or_default();
            let mut out0 = inlet.clone();
            let mut out1 = inlet.clone();
            for (c, flow) in &inlet.flows {
                let f = split.get(c).copied().unwrap_or(0.0);
                out0.flows.insert(c.clone(), flow * f);
                out1.flows.insert(c.clone(), flow * (1.0 - f));
            }
            Ok(UnitOutputs::outlets(vec![out0, out1]))
        }
        UnitKind::ConversionReactor => reactor(unit, &inlets[0], components),
    }
}
