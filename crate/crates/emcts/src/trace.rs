use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::node::NodeId;

/// Decomposed selection score, logged for regression comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UcbTerms {
    pub v_comb: f64,
    pub explore: f64,
    pub psi: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: u32,
    pub event: String,
    pub node: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ucb: Option<UcbTerms>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

/// Line-delimited JSON search trace; byte-identical across runs of the same
/// (task, seed, config).
#[derive(Debug, Default, Clone)]
pub struct TraceWriter {
    lines: Vec<String>,
}

impl TraceWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(
        &mut self,
        t: u32,
        event: &str,
        node: NodeId,
        ucb: Option<UcbTerms>,
        s: Option<f64>,
    ) {
        let record = TraceRecord {
            t,
            event: event.to_string(),
            node: node.to_string(),
            ucb,
            s,
        };
        self.lines
            .push(serde_json::to_string(&record).expect("trace records serialize"));
    }

    pub fn as_text(&self) -> String {
        let mut text = self.lines.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        text
    }

    pub fn write_to(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.as_text())
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}
