//! Rule-based task understanding: free text to a structured [`TaskSpec`].

use std::collections::BTreeMap;

use once_cell::sync::Lazy;
use regex::Regex;

use flowsheet_core::{
    component, Constraint, ConstraintQuantity, FeedSpec, Objective, ObjectiveMetric, RequestKind,
    TaskSpec,
};

use crate::error::AgentError;

static TEMPERATURE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(\d+(?:\.\d+)?)\s*(K\b|°C|deg\s*C)").expect("static regex"));
static PRESSURE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(\d+(?:\.\d+)?)\s*(bar\b|kPa\b|MPa\b|Pa\b)").expect("static regex"));
static FLOW: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"(\d+(?:\.\d+)?)\s*kmol/h(?:\s+(?:of\s+)?([A-Za-z][A-Za-z0-9-]*))?")
        .expect("static regex")
});
static PERCENT: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"(\d+(?:\.\d+)?)\s*%\s*(purity|recovery)?(?:\s+(?:of\s+)?([A-Za-z][A-Za-z0-9-]*))?")
        .expect("static regex")
});
static LIMIT: Lazy<Regex> = Lazy::new(|| {
    Regex::new(
        r"(below|under|at most|no more than|maximum of|above|at least|minimum of)\s+(\d+(?:\.\d+)?)\s*(K\b|°C|bar\b|kPa\b|MPa\b|Pa\b)",
    )
    .expect("static regex")
});
static TARGET_SCORE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"target score\s+(\d+(?:\.\d+)?)").expect("static regex"));

const THERMO_KEYWORDS: [&str; 6] = [
    "azeotrope",
    "vle",
    "phase equilibrium",
    "phase-equilibrium",
    "vapor-liquid",
    "bubble point",
];

fn to_kelvin(value: f64, unit: &str) -> f64 {
    if unit.starts_with('K') {
        value
    } else {
        value + 273.15
    }
}

fn to_pascal(value: f64, unit: &str) -> f64 {
    match unit {
        "bar" => value * 1e5,
        "kPa" => value * 1e3,
        "MPa" => value * 1e6,
        _ => value,
    }
}

/// Database components mentioned in the text, ordered by first occurrence.
fn find_components(lower: &str) -> Vec<String> {
    let mut found: Vec<(usize, String)> = Vec::new();
    for id in component::all_component_ids() {
        let comp = component::get(&id).expect("db component");
        let mut names = vec![comp.id.clone(), comp.name.to_ascii_lowercase()];
        // synonym lookup goes through the same resolver the flowsheet uses
        for candidate in ["ethyl alcohol", "methyl alcohol", "hexane", "ethene", "methylbenzene"] {
            if component::lookup(candidate).map(|c| c.id.as_str()) == Some(id.as_str()) {
                names.push(candidate.to_string());
            }
        }
        for name in names {
            let pattern = Regex::new(&format!(r"\b{}\b", regex::escape(&name)))
                .expect("escaped pattern");
            if let Some(m) = pattern.find(lower) {
                if !found.iter().any(|(_, existing)| *existing == id) {
                    found.push((m.start(), id.clone()));
                }
            }
        }
    }
    found.sort();
    found.into_iter().map(|(_, id)| id).collect()
}

/// Parse an informal request into the standardized inter-agent record.
/// Azeotrope/VLE vocabulary routes to thermodynamic analysis; everything
/// else is a design request. The full text is preserved in `notes`.
pub fn parse_task(text: &str) -> Result<TaskSpec, AgentError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(AgentError::EmptyTask);
    }
    let lower = trimmed.to_ascii_lowercase();

    let request_kind = if THERMO_KEYWORDS.iter().any(|k| lower.contains(k)) {
        RequestKind::ThermoAnalysis
    } else {
        RequestKind::Design
    };

    let components = find_components(&lower);
    if request_kind == RequestKind::ThermoAnalysis && components.len() != 2 {
        return Err(AgentError::UnderspecifiedTask(format!(
            "thermodynamic analysis needs exactly 2 known components, recognized {:?}",
            components
        )));
    }

    let first_temperature = TEMPERATURE
        .captures(trimmed)
        .map(|c| to_kelvin(c[1].parse().expect("regex digits"), &c[2]));
    let first_pressure = PRESSURE
        .captures(trimmed)
        .map(|c| to_pascal(c[1].parse().expect("regex digits"), &c[2]));

    // feed flows: every "N kmol/h [of component]" mention
    let mut flows: BTreeMap<String, f64> = BTreeMap::new();
    for captures in FLOW.captures_iter(trimmed) {
        let value: f64 = captures[1].parse().expect("regex digits");
        let comp = captures
            .get(2)
            .and_then(|m| component::lookup(m.as_str()))
            .map(|c| c.id.clone())
            .or_else(|| (components.len() == 1).then(|| components[0].clone()));
        if let Some(comp) = comp {
            *flows.entry(comp).or_insert(0.0) += value;
        }
    }
    let feeds = if flows.is_empty() {
        None
    } else {
        Some(vec![FeedSpec {
            flows,
            temperature: first_temperature.unwrap_or(300.0),
            pressure: first_pressure.unwrap_or(101_325.0),
        }])
    };

    let mut objectives = Vec::new();
    for captures in PERCENT.captures_iter(trimmed) {
        let value: f64 = captures[1].parse().expect("regex digits");
        let metric = match captures.get(2).map(|m| m.as_str()) {
            Some("recovery") => ObjectiveMetric::Recovery,
            Some("purity") => ObjectiveMetric::Purity,
            _ if lower.contains("recover") => ObjectiveMetric::Recovery,
            _ => ObjectiveMetric::Purity,
        };
        let comp = captures
            .get(3)
            .and_then(|m| component::lookup(m.as_str()))
            .map(|c| c.id.clone())
            .or_else(|| components.first().cloned());
        if let Some(component) = comp {
            objectives.push(Objective {
                metric,
                component,
                target: value,
            });
        }
    }
    if objectives.is_empty() && lower.contains("throughput") {
        if let (Some(comp), Some(feeds)) = (components.first(), feeds.as_ref()) {
            let total: f64 = feeds[0].flows.values().sum();
            objectives.push(Objective {
                metric: ObjectiveMetric::Throughput,
                component: comp.clone(),
                target: total,
            });
        }
    }

    let mut constraints = Vec::new();
    for captures in LIMIT.captures_iter(trimmed) {
        let upper_bound = matches!(
            &captures[1],
            "below" | "under" | "at most" | "no more than" | "maximum of"
        );
        let value: f64 = captures[2].parse().expect("regex digits");
        let unit = &captures[3];
        let is_temperature = unit.starts_with('K') || unit.contains('C');
        let quantity = match (is_temperature, upper_bound) {
            (true, true) => ConstraintQuantity::MaxT,
            (true, false) => ConstraintQuantity::MinT,
            (false, true) => ConstraintQuantity::MaxP,
            (false, false) => ConstraintQuantity::MinP,
        };
        let converted = if is_temperature {
            to_kelvin(value, unit)
        } else {
            to_pascal(value, unit)
        };
        constraints.push(Constraint {
            quantity,
            value: converted,
        });
    }

    let target_score = TARGET_SCORE
        .captures(&lower)
        .map(|c| c[1].parse().expect("regex digits"));

    Ok(TaskSpec {
        request_kind,
        components,
        feeds,
        objectives,
        constraints,
        target_score,
        notes: trimmed.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn azeotrope_question_routes_to_thermo_analysis() {
        let task = parse_task("check whether water and ethanol form an azeotrope").unwrap();
        assert_eq!(task.request_kind, RequestKind::ThermoAnalysis);
        assert_eq!(task.components, vec!["water", "ethanol"]);
    }

    #[test]
    fn ambiguous_design_text_is_preserved_in_notes() {
        let text = "design an ethylene cracking process";
        let task = parse_task(text).unwrap();
        assert_eq!(task.request_kind, RequestKind::Design);
        assert!(task.components.contains(&"ethylene".to_string()));
        assert!(task.feeds.is_none());
        assert_eq!(task.notes, text);
    }

    #[test]
    fn empty_text_is_an_error() {
        assert!(matches!(parse_task("  "), Err(AgentError::EmptyTask)));
    }

    #[test]
    fn thermo_analysis_without_components_is_underspecified() {
        assert!(matches!(
            parse_task("do these two form an azeotrope?"),
            Err(AgentError::UnderspecifiedTask(_))
        ));
    }

    #[test]
    fn numbers_with_units_bind_to_feeds_objectives_and_constraints() {
        let task = parse_task(
            "Separate a feed of 60 kmol/h benzene and 40 kmol/h toluene at 350 K and 1 bar; \
             target 95% purity of benzene, keep temperatures below 450 K.",
        )
        .unwrap();
        let feeds = task.feeds.expect("feed parsed");
        assert_eq!(feeds[0].flows["benzene"], 60.0);
        assert_eq!(feeds[0].flows["toluene"], 40.0);
        assert_eq!(feeds[0].temperature, 350.0);
        assert_eq!(feeds[0].pressure, 1e5);
        assert_eq!(task.objectives.len(), 1);
        assert_eq!(task.objectives[0].metric, ObjectiveMetric::Purity);
        assert_eq!(task.objectives[0].component, "benzene");
        assert_eq!(task.objectives[0].target, 95.0);
        assert_eq!(task.constraints.len(), 1);
        assert_eq!(task.constraints[0].quantity, ConstraintQuantity::MaxT);
        assert_eq!(task.constraints[0].value, 450.0);
    }

    #[test]
    fn celsius_converts_to_kelvin() {
        let task = parse_task("heat 10 kmol/h of water starting from 25 °C").unwrap();
        assert_eq!(task.feeds.unwrap()[0].temperature, 298.15);
    }
}
