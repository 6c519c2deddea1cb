use serde_json::Value;

use flowsheet_core::Flowsheet;
use thermo_sim::{SimClient, SimClientError, SimulationResult};

/// [`SimClient`] implementation that crosses the HTTP boundary; drop-in for
/// the in-process simulator.
pub struct HttpSimClient {
    base_url: String,
    client: reqwest::blocking::Client,
}

impl HttpSimClient {
    pub fn new(base_url: &str) -> Self {
        Self {
            base_url: base_url.trim_end_matches('/').to_string(),
            client: reqwest::blocking::Client::new(),
        }
    }

    pub fn health(&self) -> Result<Value, SimClientError> {
        let response = self
            .client
            .get(format!("{}/health", self.base_url))
            .send()
            .map_err(|e| SimClientError(e.to_string()))?;
        response.json().map_err(|e| SimClientError(e.to_string()))
    }
}

impl SimClient for HttpSimClient {
    fn simulate(
        &self,
        fs: &Flowsheet,
        tol: f64,
        max_iter: u32,
    ) -> Result<SimulationResult, SimClientError> {
        let mut body = serde_json::to_value(fs).map_err(|e| SimClientError(e.to_string()))?;
        body["tol"] = tol.into();
        body["max_iter"] = max_iter.into();
        let response = self
            .client
            .post(format!("{}/simulate", self.base_url))
            .json(&body)
            .send()
            .map_err(|e| SimClientError(e.to_string()))?;
        let status = response.status();
        let reply: Value = response
            .json()
            .map_err(|e| SimClientError(e.to_string()))?;
        if !status.is_success() {
            return Err(SimClientError(format!("status {status}: {reply}")));
        }
        serde_json::from_value(reply["result"].clone())
            .map_err(|e| SimClientError(format!("malformed result document: {e}")))
    }
}
