use serde::{Deserialize, Serialize};

use flowsheet_core::Flowsheet;

/// One attempted modification and what it bought.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperienceEntry {
    pub iteration: u32,
    pub parent_node: String,
    pub summary: String,
    pub delta_score: f64,
    pub converged: bool,
    pub directives_applied: Vec<String>,
}

/// Append-only record of all modifications with their improvements or
/// failures, ordered by iteration. Single-writer: the search loop appends,
/// proposers read.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperienceLog {
    entries: Vec<ExperienceEntry>,
}

impl ExperienceLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn append(&mut self, entry: ExperienceEntry) {
        debug_assert!(
            self.entries
                .last()
                .is_none_or(|last| last.iteration <= entry.iteration),
            "entries must stay ordered by iteration"
        );
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[ExperienceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Latest entry whose summary mentions `needle`.
    pub fn last_mentioning(&self, needle: &str) -> Option<&ExperienceEntry> {
        self.entries.iter().rev().find(|e| e.summary.contains(needle))
    }
}

/// Compact description of what changed between a parent configuration and
/// its child, for the experience log.
pub fn describe_diff(parent: &Flowsheet, child: &Flowsheet) -> String {
    let mut notes = Vec::new();

    for id in child.units.keys() {
        if !parent.units.contains_key(id) {
            notes.push(format!("+unit {id}"));
        }
    }
    for id in parent.units.keys() {
        if !child.units.contains_key(id) {
            notes.push(format!("-unit {id}"));
        }
    }
    for (id, unit) in &child.units {
        if let Some(before) = parent.units.get(id) {
            for (key, value) in &unit.params {
                if before.params.get(key) != Some(value) {
                    notes.push(format!("{id}.{key} changed"));
                }
            }
        }
    }
    let stream_delta = child.streams.len() as i64 - parent.streams.len() as i64;
    if stream_delta != 0 {
        notes.push(format!("{stream_delta:+} streams"));
    }
    for comp in &child.components {
        if !parent.components.contains(comp) {
            notes.push(format!("+component {comp}"));
        }
    }

    if notes.is_empty() {
        "no structural change".to_string()
    } else {
        notes.join(", ")
    }
}
