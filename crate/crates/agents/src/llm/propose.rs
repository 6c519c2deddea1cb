//! Tool-call loop: the model drives flowsheet construction through the
//! registered tool schema against a scratch instance.

use serde_json::{json, Value};

use flowsheet_core::{Flowsheet, Params, PortRef, PropertyMethod, TaskSpec, UnitKind};

use crate::error::AgentError;
use crate::experience::ExperienceLog;
use crate::llm::client::LlmClient;
use crate::llm::{AgentMessage, ToolCall};
use crate::proposer::Proposer;

pub const TOPOLOGY_SYSTEM_PROMPT: &str = include_str!("../../prompts/topology_system.txt");
pub const PARAMETER_FEWSHOT_PROMPT: &str = include_str!("../../prompts/parameter_fewshot.txt");

/// Hard cap on tool calls per construction loop.
pub const TOOL_CALL_CAP: u32 = 40;

/// Tool schema exposed to the model.
pub fn tool_schemas() -> Vec<Value> {
    let tool = |name: &str, description: &str, parameters: Value| {
        json!({
            "type": "function",
            "function": { "name": name, "description": description, "parameters": parameters },
        })
    };
    vec![
        tool(
            "create_flowsheet",
            "Create a fresh empty process manager instance.",
            json!({"type": "object", "properties": {}}),
        ),
        tool(
            "add_component",
            "Add a chemical component from the database by name.",
            json!({"type": "object", "properties": {"name": {"type": "string"}}, "required": ["name"]}),
        ),
        tool(
            "set_property_method",
            "Select the thermodynamic property method.",
            json!({"type": "object", "properties": {
                "variant": {"type": "string", "enum": ["ideal_raoult", "margules"]},
                "params": {"type": "object", "additionalProperties": {"type": "number"}}
            }, "required": ["variant"]}),
        ),
        tool(
            "add_unit",
            "Instantiate a unit operation with kind-specific parameters.",
            json!({"type": "object", "properties": {
                "kind": {"type": "string"},
                "params": {"type": "object"}
            }, "required": ["kind"]}),
        ),
        tool(
            "connect_streams",
            "Connect an outlet port to an inlet port: from [unit, port] to [unit, port].",
            json!({"type": "object", "properties": {
                "from": {"type": "array"},
                "to": {"type": "array"}
            }, "required": ["from", "to"]}),
        ),
        tool(
            "delete_unit",
            "Cascade-delete a unit and all incident streams.",
            json!({"type": "object", "properties": {"unit": {"type": "string"}}, "required": ["unit"]}),
        ),
        tool(
            "save_design",
            "Persist the completed topology and end the construction loop.",
            json!({"type": "object", "properties": {}}),
        ),
    ]
}

#[derive(Debug)]
pub struct ProposeOutcome {
    pub flowsheet: Flowsheet,
    pub warnings: Vec<String>,
    pub tool_calls: u32,
}

fn execute_tool(
    scratch: &mut Option<Flowsheet>,
    task: &TaskSpec,
    call: &ToolCall,
) -> Result<String, String> {
    if call.name == "create_flowsheet" {
        let fs = Flowsheet::create(task).map_err(|e| e.to_string())?;
        let id = fs.id.clone();
        *scratch = Some(fs);
        return Ok(format!("created flowsheet {id}"));
    }
    let fs = scratch
        .as_mut()
        .ok_or_else(|| "no flowsheet yet; call create_flowsheet first".to_string())?;
    let args = &call.arguments;
    match call.name.as_str() {
        "add_component" => {
            let name = args["name"].as_str().ok_or("missing string field 'name'")?;
            let id = fs.add_component(name).map_err(|e| e.to_string())?;
            Ok(format!("component {id} present"))
        }
        "set_property_method" => {
            let variant = args["variant"].as_str().ok_or("missing field 'variant'")?;
            fs.property_method = match variant {
                "ideal_raoult" => PropertyMethod::IdealRaoult,
                "margules" => {
                    let params = args
                        .get("params")
                        .and_then(Value::as_object)
                        .map(|m| {
                            m.iter()
                                .filter_map(|(k, v)| v.as_f64().map(|f| (k.clone(), f)))
                                .collect()
                        })
                        .unwrap_or_default();
                    PropertyMethod::Margules { params }
                }
                other => return Err(format!("unknown property method '{other}'")),
            };
            Ok(format!("property method set to {variant}"))
        }
        "add_unit" => {
            let kind_name = args["kind"].as_str().ok_or("missing field 'kind'")?;
            let kind = UnitKind::parse(kind_name)
                .ok_or_else(|| format!("unknown unit kind '{kind_name}'"))?;
            let params: Params = match args.get("params") {
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| e.to_string())?,
                None => Params::new(),
            };
            let id = fs.add_unit(kind, params).map_err(|e| e.to_string())?;
            Ok(format!("added unit {id}"))
        }
        "connect_streams" => {
            let port_ref = |v: &Value, field: &str| -> Result<PortRef, String> {
                let arr = v.as_array().ok_or(format!("field '{field}' must be [unit, port]"))?;
                let unit = arr
                    .first()
                    .and_then(Value::as_str)
                    .ok_or(format!("field '{field}' must start with a unit id"))?;
                let port = arr.get(1).and_then(Value::as_u64).unwrap_or(0) as usize;
                Ok(PortRef::new(unit, port))
            };
            let from = port_ref(&args["from"], "from")?;
            let to = port_ref(&args["to"], "to")?;
            let id = fs.connect(from, to).map_err(|e| e.to_string())?;
            Ok(format!("connected stream {id}"))
        }
        "delete_unit" => {
            let unit = args["unit"].as_str().ok_or("missing field 'unit'")?;
            let removed = fs.cascade_delete(unit).map_err(|e| e.to_string())?;
            Ok(format!("removed {}", removed.join(", ")))
        }
        other => Err(format!("__unknown_tool__{other}")),
    }
}

/// Run the construction loop until save_design or the call cap. The
/// resulting flowsheet is returned regardless of topology validity.
pub fn run_tool_loop(
    client: &LlmClient,
    task: &TaskSpec,
    mut scratch: Option<Flowsheet>,
    user_prompt: String,
) -> Result<ProposeOutcome, AgentError> {
    let mut messages = vec![
        AgentMessage::system(format!(
            "{TOPOLOGY_SYSTEM_PROMPT}\n\n{PARAMETER_FEWSHOT_PROMPT}"
        )),
        AgentMessage::user(user_prompt),
    ];
    let tools = tool_schemas();
    let mut warnings = Vec::new();
    let mut tool_calls = 0u32;
    let mut argument_error_used = false;
    let mut rounds = 0u32;

    loop {
        rounds += 1;
        if tool_calls >= TOOL_CALL_CAP || rounds > 2 * TOOL_CALL_CAP {
            warnings.push("LoopCapReached".to_string());
            break;
        }
        let reply = match client.chat(&messages, client.config.temperature_creative, &tools) {
            Ok(m) => m,
            Err(AgentError::ToolArgumentError(detail)) if !argument_error_used => {
                // feed the problem back to the model exactly once
                argument_error_used = true;
                messages.push(AgentMessage::user(format!(
                    "your last tool call was invalid ({detail}); try again"
                )));
                continue;
            }
            Err(e) => return Err(e),
        };

        let Some(call) = reply.tool_call.clone() else {
            // plain prose: keep the exchange going until the cap
            messages.push(reply);
            messages.push(AgentMessage::user(
                "continue building; call save_design when the topology is complete".to_string(),
            ));
            continue;
        };

        tool_calls += 1;
        messages.push(reply);
        if call.name == "save_design" {
            messages.push(AgentMessage::tool_result(call.id.clone(), "design saved"));
            break;
        }
        match execute_tool(&mut scratch, task, &call) {
            Ok(result) => messages.push(AgentMessage::tool_result(call.id.clone(), result)),
            Err(detail) if detail.starts_with("__unknown_tool__") => {
                let name = detail.trim_start_matches("__unknown_tool__");
                if argument_error_used {
                    return Err(AgentError::ToolArgumentError(format!(
                        "unknown tool '{name}'"
                    )));
                }
                argument_error_used = true;
                messages.push(AgentMessage::tool_result(
                    call.id.clone(),
                    format!("error: unknown tool '{name}'; use the registered tools only"),
                ));
            }
            Err(detail) => {
                messages.push(AgentMessage::tool_result(
                    call.id.clone(),
                    format!("error: {detail}"),
                ));
            }
        }
    }

    let flowsheet = match scratch {
        Some(fs) => fs,
        None => {
            warnings.push("model never created a flowsheet; returning an empty one".to_string());
            Flowsheet::create(task)?
        }
    };
    Ok(ProposeOutcome {
        flowsheet,
        warnings,
        tool_calls,
    })
}

/// LLM-backed implementation of the proposer contract.
pub struct LlmProposer<'a> {
    client: &'a LlmClient,
    pub warnings: Vec<String>,
}

impl<'a> LlmProposer<'a> {
    pub fn new(client: &'a LlmClient) -> Self {
        Self {
            client,
            warnings: Vec::new(),
        }
    }
}

impl Proposer for LlmProposer<'_> {
    fn seed_configurations(&mut self, task: &TaskSpec) -> Result<Vec<Flowsheet>, AgentError> {
        let mut seeds = Vec::new();
        let mut failures = Vec::new();
        for variant in 0..3 {
            let prompt = format!(
                "Design request:\n{}\n\nStructured task: {}\n\nProduce candidate topology #{} \
                 (vary structure or parameters across candidates).",
                task.notes,
                serde_json::to_string(task).expect("task serializes"),
                variant + 1,
            );
            match run_tool_loop(self.client, task, None, prompt) {
                Ok(outcome) => {
                    self.warnings.extend(outcome.warnings);
                    seeds.push(outcome.flowsheet);
                }
                Err(e) => failures.push(e.to_string()),
            }
        }
        if seeds.is_empty() {
            return Err(AgentError::SeedGenerationFailed(failures.join("; ")));
        }
        Ok(seeds)
    }

    fn refine(
        &mut self,
        fs: &Flowsheet,
        directives: &[String],
        log: &ExperienceLog,
    ) -> Result<Flowsheet, AgentError> {
        let recent: Vec<String> = log
            .entries()
            .iter()
            .rev()
            .take(8)
            .map(|e| {
                format!(
                    "t={} {} -> dS {:+.2} ({})",
                    e.iteration,
                    e.summary,
                    e.delta_score,
                    if e.converged { "converged" } else { "failed" }
                )
            })
            .collect();
        let task = TaskSpec::design(
            &fs.components.iter().map(String::as_str).collect::<Vec<_>>(),
        );
        let prompt = format!(
            "Current configuration:\n{}\n\nEvaluator directives:\n{}\n\nRecent modifications \
             and outcomes:\n{}\n\nApply the directives (or a better parameter adjustment) to \
             this configuration. Rebuild it with tool calls and save.",
            flowsheet_core::io::to_json_string(fs),
            directives.join("\n"),
            recent.join("\n"),
        );
        let outcome = run_tool_loop(self.client, &task, Some(fs.fork()), prompt)?;
        self.warnings.extend(outcome.warnings);
        Ok(outcome.flowsheet)
    }
}
