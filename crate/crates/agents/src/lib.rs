//! The four agent contracts -- task understanding, topology generation,
//! parameter configuration, evaluation analysis -- with two interchangeable
//! proposer backends: a deterministic seeded mock for offline operation and
//! a chat-completion LLM adapter.

mod error;
mod experience;
pub mod llm;
mod mock;
mod parse;
mod proposer;

pub use error::AgentError;
pub use experience::{describe_diff, ExperienceEntry, ExperienceLog};
pub use llm::client::{LlmClient, LlmConfig, TokenUsage};
pub use llm::propose::{run_tool_loop, tool_schemas, LlmProposer, ProposeOutcome, TOOL_CALL_CAP};
pub use llm::scorer::LlmScorer;
pub use llm::transport::{
    scripted_status, scripted_text, scripted_tool_call, ChatTransport, HttpReply, HttpTransport,
    ScriptedTransport,
};
pub use llm::{AgentMessage, Role, ToolCall};
pub use mock::MockProposer;
pub use parse::parse_task;
pub use proposer::Proposer;
