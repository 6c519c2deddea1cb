use flowsheet_core::{Flowsheet, TaskSpec};

use crate::error::AgentError;
use crate::experience::ExperienceLog;

/// Contract shared by the topology-generation and parameter-configuration
/// backends: produce seed configurations for a task, and refine an existing
/// configuration from directives plus accumulated experience.
///
/// Outputs must satisfy the flowsheet type invariants but are allowed to
/// fail topology validation -- invalid configurations have to be
/// representable so the evaluation penalty path gets exercised.
pub trait Proposer {
    fn seed_configurations(&mut self, task: &TaskSpec) -> Result<Vec<Flowsheet>, AgentError>;

    fn refine(
        &mut self,
        fs: &Flowsheet,
        directives: &[String],
        log: &ExperienceLog,
    ) -> Result<Flowsheet, AgentError>;
}
