use std::collections::VecDeque;
use std::sync::Mutex;

use serde_json::Value;

/// Raw HTTP-level reply: status code plus parsed JSON body.
#[derive(Debug, Clone)]
pub struct HttpReply {
    pub status: u16,
    pub body: Value,
}

/// Where chat-completion requests go. Implemented over HTTP for real
/// endpoints and by a scripted fake for tests.
pub trait ChatTransport: Send + Sync {
    fn send(&self, body: &Value) -> Result<HttpReply, String>;
}

/// reqwest-backed transport for OpenAI-compatible endpoints.
pub struct HttpTransport {
    url: String,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new(base_url: &str, api_key_env: &str) -> Self {
        Self {
            url: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key: std::env::var(api_key_env).ok(),
            client: reqwest::blocking::Client::new(),
        }
    }
}

impl ChatTransport for HttpTransport {
    fn send(&self, body: &Value) -> Result<HttpReply, String> {
        let mut request = self.client.post(&self.url).json(body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request.send().map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let body: Value = response.json().unwrap_or(Value::Null);
        Ok(HttpReply { status, body })
    }
}

/// Canned-response transport. Pops one scripted reply per request and keeps
/// every request body for assertions.
#[derive(Default)]
pub struct ScriptedTransport {
    replies: Mutex<VecDeque<Result<HttpReply, String>>>,
    pub requests: Mutex<Vec<Value>>,
}

impl ScriptedTransport {
    pub fn new(replies: Vec<Result<HttpReply, String>>) -> Self {
        Self {
            replies: Mutex::new(replies.into()),
            requests: Mutex::new(Vec::new()),
        }
    }

    pub fn request_count(&self) -> usize {
        self.requests.lock().expect("no poisoning").len()
    }
}

impl ChatTransport for ScriptedTransport {
    fn send(&self, body: &Value) -> Result<HttpReply, String> {
        self.requests
            .lock()
            .expect("no poisoning")
            .push(body.clone());
        self.replies
            .lock()
            .expect("no poisoning")
            .pop_front()
            .unwrap_or_else(|| Err("script exhausted".to_string()))
    }
}

/// Assemble an OpenAI-style assistant reply containing one tool call.
pub fn scripted_tool_call(name: &str, arguments: Value) -> Result<HttpReply, String> {
    Ok(HttpReply {
        status: 200,
        body: serde_json::json!({
            "choices": [{
                "message": {
                    "role": "assistant",
                    "content": null,
                    "tool_calls": [{
                        "id": format!("call-{name}"),
                        "type": "function",
                        "function": { "name": name, "arguments": arguments.to_string() },
                    }],
                },
                "finish_reason": "tool_calls",
            }],
            "usage": { "prompt_tokens": 10, "completion_tokens": 5 },
        }),
    })
}

/// Assemble a plain-text assistant reply.
pub fn scripted_text(content: &str) -> Result<HttpReply, String> {
    Ok(HttpReply {
        status: 200,
        body: serde_json::json!({
            "choices": [{
                "message": { "role": "assistant", "content": content },
                "finish_reason": "stop",
            }],
            "usage": { "prompt_tokens": 10, "completion_tokens": 5 },
        }),
    })
}

/// Assemble a bare status reply (error simulation).
pub fn scripted_status(status: u16) -> Result<HttpReply, String> {
    Ok(HttpReply {
        status,
        body: serde_json::json!({ "error": { "message": format!("status {status}") } }),
    })
}
