use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("empty task text")]
    EmptyTask,

    #[error("underspecified task: {0}")]
    UnderspecifiedTask(String),

    #[error("seed generation failed: {0}")]
    SeedGenerationFailed(String),

    #[error("LLM unavailable: {0}")]
    LlmUnavailable(String),

    #[error("tool argument error: {0}")]
    ToolArgumentError(String),

    #[error(transparent)]
    Core(#[from] flowsheet_core::CoreError),
}
