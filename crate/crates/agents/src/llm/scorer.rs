//! Optional LLM-backed dimension scorer behind the same contract as the
//! deterministic heuristic.

use evaluator::{DimensionScorer, DimensionScores, HeuristicScorer};
use flowsheet_core::{Flowsheet, TaskSpec};
use thermo_sim::SimulationResult;

use crate::llm::client::LlmClient;
use crate::llm::AgentMessage;

pub const EVALUATION_SYSTEM_PROMPT: &str = include_str!("../../prompts/evaluation_system.txt");

pub struct LlmScorer<'a> {
    client: &'a LlmClient,
    fallback: HeuristicScorer,
}

impl<'a> LlmScorer<'a> {
    pub fn new(client: &'a LlmClient) -> Self {
        Self {
            client,
            fallback: HeuristicScorer,
        }
    }

    fn try_score(&self, fs: &Flowsheet, sim: &SimulationResult) -> Option<DimensionScores> {
        let prompt = format!(
            "Configuration:\n{}\nSimulation: converged={}, iterations={}, tear_residual={:.3e}",
            flowsheet_core::io::to_json_string(fs),
            sim.converged,
            sim.iterations,
            sim.tear_residual
        );
        let messages = [
            AgentMessage::system(EVALUATION_SYSTEM_PROMPT),
            AgentMessage::user(prompt),
        ];
        let reply = self
            .client
            .chat(&messages, self.client.config.temperature_precise, &[])
            .ok()?;
        let value: serde_json::Value = serde_json::from_str(reply.content.trim()).ok()?;
        let field = |name: &str| value.get(name).and_then(serde_json::Value::as_f64);
        Some(
            DimensionScores::new(
                field("ef")?,
                field("es")?,
                field("ps")?,
                field("tf")?,
                field("tr")?,
            )
            .clamped(),
        )
    }
}

impl DimensionScorer for LlmScorer<'_> {
    fn score(&self, fs: &Flowsheet, sim: &SimulationResult, task: &TaskSpec) -> DimensionScores {
        match self.try_score(fs, sim) {
            Some(dims) => dims,
            None => {
                log::warn!("LLM scorer unavailable or malformed; using heuristic scores");
                self.fallback.score(fs, sim, task)
            }
        }
    }
}
