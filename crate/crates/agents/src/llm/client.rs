use std::sync::Mutex;
use std::time::Duration;

use serde_json::Value;

use crate::error::AgentError;
use crate::llm::transport::{ChatTransport, HttpTransport};
use crate::llm::{AgentMessage, Role, ToolCall};

/// Endpoint and behavior knobs for the chat client. Temperatures default to
/// 0.1 for understanding/evaluation and 0.9 for topology/parameter work.
#[derive(Debug, Clone)]
pub struct LlmConfig {
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the credential.
    pub api_key_env: String,
    pub max_attempts: u32,
    pub backoff_ms: u64,
    pub temperature_precise: f64,
    pub temperature_creative: f64,
}

impl Default for LlmConfig {
    fn default() -> Self {
        Self {
            base_url: "http://127.0.0.1:8080/v1".to_string(),
            model: "gpt-4o".to_string(),
            api_key_env: "PROCDES_LLM_API_KEY".to_string(),
            max_attempts: 3,
            backoff_ms: 250,
            temperature_precise: 0.1,
            temperature_creative: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenUsage {
    pub prompt: u64,
    pub completion: u64,
}

impl TokenUsage {
    pub fn total(&self) -> u64 {
        self.prompt + self.completion
    }
}

/// Blocking chat-completion client with retry and token accounting.
pub struct LlmClient {
    pub config: LlmConfig,
    transport: Box<dyn ChatTransport>,
    usage: Mutex<TokenUsage>,
    attempts_made: Mutex<Vec<u32>>,
    request_seconds: Mutex<f64>,
}

impl LlmClient {
    pub fn new(config: LlmConfig) -> Self {
        let transport = HttpTransport::new(&config.base_url, &config.api_key_env);
        Self::with_transport(config, Box::new(transport))
    }

    pub fn with_transport(config: LlmConfig, transport: Box<dyn ChatTransport>) -> Self {
        Self {
            config,
            transport,
            usage: Mutex::new(TokenUsage::default()),
            attempts_made: Mutex::new(Vec::new()),
            request_seconds: Mutex::new(0.0),
        }
    }

    pub fn usage(&self) -> TokenUsage {
        *self.usage.lock().expect("no poisoning")
    }

    /// Cumulative wall time spent inside LLM requests.
    pub fn request_seconds(&self) -> f64 {
        *self.request_seconds.lock().expect("no poisoning")
    }

    /// Attempts used per chat call (retry diagnostics).
    pub fn attempt_history(&self) -> Vec<u32> {
        self.attempts_made.lock().expect("no poisoning").clone()
    }

    /// Send one chat request; transient failures (transport errors, 5xx)
    /// are retried with exponential backoff, other non-2xx fail immediately.
    pub fn chat(
        &self,
        messages: &[AgentMessage],
        temperature: f64,
        tools: &[Value],
    ) -> Result<AgentMessage, AgentError> {
        let mut request = serde_json::json!({
            "model": self.config.model,
            "messages": messages.iter().map(AgentMessage::to_wire).collect::<Vec<_>>(),
            "temperature": temperature,
        });
        if !tools.is_empty() {
            request["tools"] = Value::Array(tools.to_vec());
        }

        let started = std::time::Instant::now();
        let _timer = TimerGuard {
            total: &self.request_seconds,
            started,
        };
        let mut last_error = String::new();
        for attempt in 1..=self.config.max_attempts {
            match self.transport.send(&request) {
                Ok(reply) if (200..300).contains(&reply.status) => {
                    self.attempts_made.lock().expect("no poisoning").push(attempt);
                    return self.parse_reply(&reply.body);
                }
                Ok(reply) if reply.status >= 500 => {
                    last_error = format!("status {}", reply.status);
                }
                Ok(reply) => {
                    self.attempts_made.lock().expect("no poisoning").push(attempt);
                    return Err(AgentError::LlmUnavailable(format!(
                        "status {}: {}",
                        reply.status, reply.body
                    )));
                }
                Err(e) => last_error = e,
            }
            if attempt < self.config.max_attempts {
                std::thread::sleep(Duration::from_millis(
                    self.config.backoff_ms << (attempt - 1),
                ));
            }
        }
        self.attempts_made
            .lock()
            .expect("no poisoning")
            .push(self.config.max_attempts);
        Err(AgentError::LlmUnavailable(last_error))
    }

    fn parse_reply(&self, body: &Value) -> Result<AgentMessage, AgentError> {
        // usage accounting happens before any parse failure below so token
        // totals stay the sum over all completed HTTP exchanges
        if let Some(usage) = body.get("usage") {
            let mut total = self.usage.lock().expect("no poisoning");
            total.prompt += usage["prompt_tokens"].as_u64().unwrap_or(0);
            total.completion += usage["completion_tokens"].as_u64().unwrap_or(0);
        }
        let message = &body["choices"][0]["message"];
        if message.is_null() {
            return Err(AgentError::LlmUnavailable(format!(
                "malformed completion body: {body}"
            )));
        }
        let content = message["content"].as_str().unwrap_or_default().to_string();
        let tool_call = match message["tool_calls"].get(0) {
            Some(raw) => {
                let name = raw["function"]["name"].as_str().unwrap_or_default();
                let raw_args = raw["function"]["arguments"].as_str().unwrap_or("{}");
                let arguments: Value = serde_json::from_str(raw_args).map_err(|e| {
                    AgentError::ToolArgumentError(format!(
                        "arguments for {name} are not valid JSON: {e}"
                    ))
                })?;
                Some(ToolCall {
                    id: raw["id"].as_str().unwrap_or("call-0").to_string(),
                    name: name.to_string(),
                    arguments,
                })
            }
            None => None,
        };
        Ok(AgentMessage {
            role: Role::Assistant,
            content,
            tool_call,
            tool_call_id: None,
        })
    }
}

struct TimerGuard<'a> {
    total: &'a Mutex<f64>,
    started: std::time::Instant,
}

impl Drop for TimerGuard<'_> {
    fn drop(&mut self) {
        *self.total.lock().expect("no poisoning") += self.started.elapsed().as_secs_f64();
    }
}
