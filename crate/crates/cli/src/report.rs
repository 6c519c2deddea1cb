use serde::{Deserialize, Serialize};
use serde_json::Value;

use evaluator::DimensionScores;

/// Outcome record of one task run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub task_id: String,
    /// Termination reason, or "thermo_analysis" for the VLE path.
    pub terminated: String,
    pub best_score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimensionScores>,
    /// Whether the final selected configuration simulated converged (for
    /// thermo tasks: whether the analysis completed).
    pub converged: bool,
    pub iterations: u32,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub llm_time_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flowsheet_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vle_path: Option<String>,
}

impl RunReport {
    /// Copy with volatile fields (timings, output paths) cleared, for
    /// cross-run comparison.
    pub fn normalized(&self) -> Self {
        Self {
            wall_time_s: 0.0,
            llm_time_s: None,
            flowsheet_path: None,
            trace_path: None,
            vle_path: None,
            ..self.clone()
        }
    }
}

/// Aggregate over a task suite. SCR counts tasks whose final selected
/// configuration simulated converged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub tasks: Vec<RunReport>,
    pub scr: f64,
    pub mean_time_s: f64,
    pub mean_score: f64,
}

impl BatchReport {
    pub fn from_tasks(tasks: Vec<RunReport>) -> Self {
        let n = tasks.len().max(1) as f64;
        let converged = tasks.iter().filter(|t| t.converged).count() as f64;
        let mean_time_s = tasks.iter().map(|t| t.wall_time_s).sum::<f64>() / n;
        let mean_score = tasks.iter().map(|t| t.best_score).sum::<f64>() / n;
        Self {
            scr: converged / n,
            mean_time_s,
            mean_score,
            tasks,
        }
    }
}

/// Minimal schema checker: the bundled schema files list required keys with
/// expected JSON types.
pub fn validate_against_schema(document: &Value, schema: &Value) -> Result<(), String> {
    let required = schema
        .get("required")
        .and_then(Value::as_object)
        .ok_or("schema must contain a 'required' object")?;
    let object = document.as_object().ok_or("document must be an object")?;
    for (key, expected) in required {
        let expected = expected.as_str().ok_or("schema types must be strings")?;
        let value = object
            .get(key)
            .ok_or_else(|| format!("missing required key '{key}'"))?;
        let matches = match expected {
            "string" => value.is_string(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            "array" => value.is_array(),
            "object" => value.is_object(),
            other => return Err(format!("unknown schema type '{other}'")),
        };
        if !matches {
            return Err(format!("key '{key}' is not a {expected}: {value}"));
        }
    }
    Ok(())
}

pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run_report.schema.json");
pub const BATCH_REPORT_SCHEMA: &str = include_str!("../schema/batch_report.schema.json");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_validate_against_bundled_schemas() {
        let report = RunReport {
            task_id: "t".into(),
            terminated: "target_reached".into(),
            best_score: 90.0,
            dims: None,
            converged: true,
            iterations: 3,
            wall_time_s: 0.5,
            llm_time_s: None,
            tokens: None,
            flowsheet_path: None,
            trace_path: None,
            vle_path: None,
        };
        let schema: Value = serde_json::from_str(RUN_REPORT_SCHEMA).unwrap();
        validate_against_schema(&serde_json::to_value(&report).unwrap(), &schema).unwrap();

        let batch = BatchReport::from_tasks(vec![report]);
        let schema: Value = serde_json::from_str(BATCH_REPORT_SCHEMA).unwrap();
        validate_against_schema(&serde_json::to_value(&batch).unwrap(), &schema).unwrap();
    }

    #[test]
    fn scr_counts_converged_tasks() {
        let make = |converged: bool| RunReport {
            task_id: "t".into(),
            terminated: "iteration_limit".into(),
            best_score: 50.0,
            dims: None,
            converged,
            iterations: 1,
            wall_time_s: 1.0,
            llm_time_s: None,
            tokens: None,
            flowsheet_path: None,
            trace_path: None,
            vle_path: None,
        };
        let batch = BatchReport::from_tasks(vec![make(true), make(true), make(false), make(false)]);
        assert_eq!(batch.scr, 0.5);
    }
}
