//! Structured improvement directions: rule echoes the mock proposer can
//! parse deterministically.

use flowsheet_core::{validate_topology, Flowsheet, ViolationCode};
use thermo_sim::SimulationResult;

use crate::scores::DimensionScores;

/// The lowest-scoring dimension only triggers a directive below this value;
/// healthy flowsheets should come back with an empty list.
const DIMENSION_ATTENTION_THRESHOLD: f64 = 70.0;

/// One directive per triggered rule, in deterministic order: convergence
/// first, then topology defects, then the weakest dimension.
pub fn emit_directives(
    fs: &Flowsheet,
    sim: &SimulationResult,
    dims: &DimensionScores,
) -> Vec<String> {
    let mut out = Vec::new();

    if !sim.converged {
        if let Some((tear, residual)) = sim.worst_tear() {
            let upstream = fs
                .streams
                .get(tear)
                .map(|s| s.from.unit.clone())
                .unwrap_or_default();
            out.push(format!(
                "reduce tear residual on stream {tear} via unit {upstream} (residual {residual:.3e})"
            ));
        }
    }

    for violation in validate_topology(fs) {
        let directive = match violation.code {
            ViolationCode::UnboundPort => {
                // location is "<unit>.<side><port>"
                let (unit_id, port_part) = violation
                    .location
                    .split_once('.')
                    .unwrap_or((violation.location.as_str(), "in0"));
                let (side, index) = if let Some(rest) = port_part.strip_prefix("out") {
                    ("outlet", rest)
                } else {
                    ("inlet", port_part.strip_prefix("in").unwrap_or("0"))
                };
                let kind = fs
                    .units
                    .get(unit_id)
                    .map(|u| u.kind.name())
                    .unwrap_or("unit");
                format!("connect {kind} {unit_id} {side} {index}")
            }
            ViolationCode::NoFeed => "add a Feed unit".to_string(),
            ViolationCode::NoProduct => "add a Product unit".to_string(),
            ViolationCode::EmptyComponents => "add components".to_string(),
            ViolationCode::UnreachableUnit => {
                format!("remove or connect unreachable unit {}", violation.location)
            }
            ViolationCode::DisconnectedProduct => {
                format!("route unit {} toward a Product", violation.location)
            }
        };
        out.push(directive);
    }

    if out.is_empty() {
        let (name, value) = dims.min_dimension();
        if value < DIMENSION_ATTENTION_THRESHOLD {
            let hint = match name {
                "ef" => "improve ef: reduce heater duty or unit count",
                "es" => "improve es: route more feed mass to products",
                "ps" => "improve ps: reduce temperatures above 500 K or pressures above 20 bar",
                "tf" => "improve tf: simplify the recycle structure",
                _ => "improve tr: fix topology defects",
            };
            out.push(hint.to_string());
        }
    }

    out
}
