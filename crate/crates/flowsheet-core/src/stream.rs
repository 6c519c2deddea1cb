use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One endpoint of a stream: a unit id plus a port index on that unit.
/// Serialized as a two-element array `[unit, port]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(String, usize)", into = "(String, usize)")]
pub struct PortRef {
    pub unit: String,
    pub port: usize,
}

impl PortRef {
    pub fn new(unit: impl Into<String>, port: usize) -> Self {
        Self {
            unit: unit.into(),
            port,
        }
    }
}

impl From<(String, usize)> for PortRef {
    fn from((unit, port): (String, usize)) -> Self {
        Self { unit, port }
    }
}

impl From<PortRef> for (String, usize) {
    fn from(p: PortRef) -> Self {
        (p.unit, p.port)
    }
}

impl std::fmt::Display for PortRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.unit, self.port)
    }
}

/// Solved thermodynamic state of a stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamState {
    /// Per-component molar flow, kmol/h.
    pub flows: BTreeMap<String, f64>,
    /// K
    pub temperature: f64,
    /// Pa
    pub pressure: f64,
    pub vapor_fraction: f64,
}

impl StreamState {
    pub fn new(flows: BTreeMap<String, f64>, temperature: f64, pressure: f64) -> Self {
        Self {
            flows,
            temperature,
            pressure,
            vapor_fraction: 0.0,
        }
    }

    /// Zero flow of every listed component.
    pub fn zero(components: &[String], temperature: f64, pressure: f64) -> Self {
        Self::new(
            components.iter().map(|c| (c.clone(), 0.0)).collect(),
            temperature,
            pressure,
        )
    }

    /// Total molar flow, kmol/h.
    pub fn total_flow(&self) -> f64 {
        self.flows.values().sum()
    }

    pub fn flow(&self, component: &str) -> f64 {
        self.flows.get(component).copied().unwrap_or(0.0)
    }

    /// Mole fractions; uniform zero composition when the stream is empty.
    pub fn mole_fractions(&self) -> BTreeMap<String, f64> {
        let total = self.total_flow();
        self.flows
            .iter()
            .map(|(c, f)| (c.clone(), if total > 0.0 { f / total } else { 0.0 }))
            .collect()
    }
}

/// A directed material stream between two unit ports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stream {
    pub id: String,
    pub from: PortRef,
    pub to: PortRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StreamState>,
}
