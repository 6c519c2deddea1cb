use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestKind {
    Design,
    ThermoAnalysis,
}

impl std::fmt::Display for RequestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RequestKind::Design => f.write_str("design"),
            RequestKind::ThermoAnalysis => f.write_str("thermo_analysis"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveMetric {
    Purity,
    Recovery,
    Throughput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub metric: ObjectiveMetric,
    pub component: String,
    pub target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintQuantity {
    MaxT,
    MaxP,
    MinT,
    MinP,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub quantity: ConstraintQuantity,
    pub value: f64,
}

/// A feed the task prescribes: component molar flows plus conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedSpec {
    /// Component id -> kmol/h.
    pub flows: BTreeMap<String, f64>,
    /// K
    pub temperature: f64,
    /// Pa
    pub pressure: f64,
}

/// Structured design request: the standardized inter-agent record extracted
/// from free-text input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub request_kind: RequestKind,
    /// Component names resolved against the embedded database.
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feeds: Option<Vec<FeedSpec>>,
    #[serde(default)]
    pub objectives: Vec<Objective>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_score: Option<f64>,
    /// Original request text, preserved verbatim.
    #[serde(default)]
    pub notes: String,
}

impl TaskSpec {
    pub fn design(components: &[&str]) -> Self {
        Self {
            request_kind: RequestKind::Design,
            components: components.iter().map(|s| s.to_string()).collect(),
            feeds: None,
            objectives: Vec::new(),
            constraints: Vec::new(),
            target_score: None,
            notes: String::new(),
        }
    }

    pub fn thermo_analysis(c1: &str, c2: &str) -> Self {
        Self {
            request_kind: RequestKind::ThermoAnalysis,
            components: vec![c1.to_string(), c2.to_string()],
            feeds: None,
            objectives: Vec::new(),
            constraints: Vec::new(),
            target_score: None,
            notes: String::new(),
        }
    }
}
