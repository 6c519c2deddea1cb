use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};

use agents::{parse_task, LlmClient, LlmConfig, LlmProposer, MockProposer, Proposer};
use emcts::{run_search, SearchConfig, SearchDeps, TerminationReason};
use evaluator::{EvalWeights, HeuristicScorer};
use flowsheet_core::{component, io, PropertyMethod, RequestKind, TaskSpec};
use thermo_sim::{analyze_binary_vle, run_simulation, InProcessSim, VleResult};

use crate::report::{BatchReport, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposerKind {
    Mock,
    Llm,
}

#[derive(Debug, Clone)]
pub struct DesignArgs {
    pub task_file: Option<PathBuf>,
    pub text: Option<String>,
    pub seed: u64,
    pub config: Option<PathBuf>,
    pub proposer: ProposerKind,
    pub out_dir: PathBuf,
}

/// Exit-code contract: 0 when the search ends on TargetReached/Converged
/// (or a thermo analysis completes), 2 on IterationLimit/Stagnation,
/// 1 on errors.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;

fn load_task(args: &DesignArgs) -> Result<(String, TaskSpec)> {
    if let Some(text) = &args.text {
        let task = parse_task(text)?;
        return Ok(("adhoc".to_string(), task));
    }
    let path = args
        .task_file
        .as_ref()
        .ok_or_else(|| anyhow!("either --task or --text is required"))?;
    let raw = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read task file {}", path.display()))?;
    let task = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&raw).with_context(|| "task file is not a valid TaskSpec")?
    } else {
        parse_task(&raw)?
    };
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "task".to_string());
    Ok((id, task))
}

fn search_config(args_config: Option<&Path>, seed: u64) -> Result<SearchConfig> {
    let mut cfg = match args_config {
        Some(path) => SearchConfig::from_file(path).map_err(|e| anyhow!(e))?,
        None => SearchConfig::default(),
    };
    cfg.seed = seed;
    Ok(cfg)
}

fn llm_config_from_env() -> LlmConfig {
    let mut cfg = LlmConfig::default();
    if let Ok(url) = std::env::var("PROCDES_LLM_BASE_URL") {
        cfg.base_url = url;
    }
    if let Ok(model) = std::env::var("PROCDES_LLM_MODEL") {
        cfg.model = model;
    }
    cfg
}

/// The thermodynamic-analysis path: binary VLE at the task pressure.
fn run_thermo_analysis(
    task_id: &str,
    task: &TaskSpec,
    out_dir: &Path,
    started: Instant,
) -> Result<(RunReport, i32)> {
    let c1 = component::resolve(&task.components[0])?;
    let c2 = component::resolve(&task.components[1])?;
    let pressure = task
        .feeds
        .as_ref()
        .and_then(|f| f.first())
        .map(|f| f.pressure)
        .unwrap_or(101_325.0);
    let method =
        PropertyMethod::margules_with_defaults(&[c1.id.clone(), c2.id.clone()]);
    let result = analyze_binary_vle(c1, c2, pressure, &method)
        .with_context(|| format!("VLE analysis failed for {}-{}", c1.id, c2.id))?;

    let vle_path = out_dir.join("vle.json");
    std::fs::write(&vle_path, serde_json::to_string_pretty(&result)?)?;
    std::fs::write(out_dir.join("summary.txt"), vle_summary(&result))?;

    let report = RunReport {
        task_id: task_id.to_string(),
        terminated: "thermo_analysis".to_string(),
        best_score: 100.0,
        dims: None,
        converged: true,
        iterations: 0,
        wall_time_s: started.elapsed().as_secs_f64(),
        llm_time_s: None,
        tokens: None,
        flowsheet_path: None,
        trace_path: None,
        vle_path: Some(vle_path.to_string_lossy().to_string()),
    };
    Ok((report, EXIT_OK))
}

pub fn vle_summary(result: &VleResult) -> String {
    let mut text = format!(
        "binary VLE of {} and {} at {} Pa\nbubble T range: {:.2} K .. {:.2} K\nrelative volatility: {:.3} .. {:.3}\n",
        result.components.0,
        result.components.1,
        result.pressure,
        result.points.iter().map(|p| p.t_bubble).fold(f64::INFINITY, f64::min),
        result.points.iter().map(|p| p.t_bubble).fold(0.0, f64::max),
        result.relative_volatility_range.0,
        result.relative_volatility_range.1,
    );
    match &result.azeotrope {
        Some(az) => {
            text.push_str(&format!(
                "azeotrope: x1 = {:.4} at {:.2} K\n",
                az.x1, az.temperature
            ));
        }
        None => text.push_str("azeotrope: none\n"),
    }
    text
}

fn termination_label(reason: TerminationReason) -> &'static str {
    match reason {
        TerminationReason::TargetReached => "target_reached",
        TerminationReason::IterationLimit => "iteration_limit",
        TerminationReason::Stagnation => "stagnation",
        TerminationReason::Converged => "converged",
    }
}

/// Run one design (or thermo-analysis) task end to end, writing artifacts
/// under `<out>/<task_id>/`.
pub fn cmd_design(args: &DesignArgs) -> Result<(RunReport, i32)> {
    let started = Instant::now();
    let (task_id, task) = load_task(args)?;
    let out_dir = args.out_dir.join(&task_id);
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create output dir {}", out_dir.display()))?;

    if task.request_kind == RequestKind::ThermoAnalysis {
        let (report, code) = run_thermo_analysis(&task_id, &task, &out_dir, started)?;
        write_report(&out_dir, &report)?;
        return Ok((report, code));
    }

    let cfg = search_config(args.config.as_deref(), args.seed)?;
    let llm_client = match args.proposer {
        ProposerKind::Llm => Some(LlmClient::new(llm_config_from_env())),
        ProposerKind::Mock => None,
    };
    let mut mock;
    let mut llm;
    let proposer: &mut dyn Proposer = match &llm_client {
        None => {
            mock = MockProposer::new(cfg.seed);
            &mut mock
        }
        Some(client) => {
            llm = LlmProposer::new(client);
            &mut llm
        }
    };
    let mut deps = SearchDeps {
        proposer,
        simulator: &InProcessSim,
        scorer: &HeuristicScorer,
        weights: EvalWeights::default(),
    };
    let outcome = run_search(&task, &cfg, &mut deps)?;

    let final_node = outcome.state.tree.get(outcome.final_node);
    let mut best_fs = final_node
        .flowsheet
        .clone()
        .expect("final node carries a configuration");
    // normalize the instance id so written artifacts are reproducible
    best_fs.id = format!("{task_id}-best");

    let flowsheet_path = out_dir.join("flowsheet.json");
    io::save_design(&best_fs, &flowsheet_path)?;
    let trace_path = out_dir.join("trace.jsonl");
    outcome.trace.write_to(&trace_path)?;

    let report = RunReport {
        task_id: task_id.clone(),
        terminated: termination_label(outcome.termination).to_string(),
        best_score: outcome.state.best_score(),
        dims: final_node.eval.as_ref().map(|e| e.dims),
        converged: final_node.converged,
        iterations: outcome.state.t,
        wall_time_s: started.elapsed().as_secs_f64(),
        llm_time_s: llm_client.as_ref().map(LlmClient::request_seconds),
        tokens: llm_client.as_ref().map(|c| c.usage().total()),
        flowsheet_path: Some(flowsheet_path.to_string_lossy().to_string()),
        trace_path: Some(trace_path.to_string_lossy().to_string()),
        vle_path: None,
    };
    write_report(&out_dir, &report)?;

    let code = match outcome.termination {
        TerminationReason::TargetReached | TerminationReason::Converged => EXIT_OK,
        TerminationReason::IterationLimit | TerminationReason::Stagnation => EXIT_NO_CONVERGENCE,
    };
    Ok((report, code))
}

fn write_report(out_dir: &Path, report: &RunReport) -> Result<()> {
    std::fs::write(
        out_dir.join("report.json"),
        serde_json::to_string_pretty(report)?,
    )?;
    let summary = format!(
        "task: {}\nterminated: {}\nbest score: {:.3}\nconverged: {}\niterations: {}\nwall time: {:.3} s\n",
        report.task_id,
        report.terminated,
        report.best_score,
        report.converged,
        report.iterations,
        report.wall_time_s,
    );
    std::fs::write(out_dir.join("summary.txt"), summary)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BatchArgs {
    pub suite_dir: PathBuf,
    pub seed: u64,
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub jobs: usize,
}

/// Run every task in a suite directory (sorted by file name), aggregate the
/// simulation convergence rate, and write the batch report. Tasks are
/// independent and run on a bounded worker pool.
pub fn cmd_batch(args: &BatchArgs) -> Result<BatchReport> {
    let mut task_files: Vec<PathBuf> = std::fs::read_dir(&args.suite_dir)
        .with_context(|| format!("cannot read suite dir {}", args.suite_dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .is_some_and(|e| e == "txt" || e == "json")
        })
        .collect();
    task_files.sort();
    if task_files.is_empty() {
        bail!("suite directory {} contains no task files", args.suite_dir.display());
    }

    let jobs = args.jobs.max(1);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<RunReport>>> = Mutex::new(vec![None; task_files.len()]);
    let errors: Mutex<Vec<String>> = Mutex::new(Vec::new());

    std::thread::scope(|scope| {
        for _ in 0..jobs.min(task_files.len()) {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::SeqCst);
                if index >= task_files.len() {
                    break;
                }
                let design_args = DesignArgs {
                    task_file: Some(task_files[index].clone()),
                    text: None,
                    seed: args.seed,
                    config: args.config.clone(),
                    proposer: ProposerKind::Mock,
                    out_dir: args.out_dir.clone(),
                };
                match cmd_design(&design_args) {
                    Ok((report, _)) => {
                        results.lock().expect("no poisoning")[index] = Some(report);
                    }
                    Err(e) => errors
                        .lock()
                        .expect("no poisoning")
                        .push(format!("{}: {e:#}", task_files[index].display())),
                }
            });
        }
    });

    let errors = errors.into_inner().expect("no poisoning");
    if !errors.is_empty() {
        bail!("batch had task errors:\n{}", errors.join("\n"));
    }
    let tasks: Vec<RunReport> = results
        .into_inner()
        .expect("no poisoning")
        .into_iter()
        .map(|r| r.expect("all tasks completed"))
        .collect();

    let batch = BatchReport::from_tasks(tasks);
    std::fs::create_dir_all(&args.out_dir)?;
    std::fs::write(
        args.out_dir.join("batch_report.json"),
        serde_json::to_string_pretty(&batch)?,
    )?;
    let mut summary = format!(
        "tasks: {}\nSCR: {:.3}\nmean score: {:.2}\nmean time: {:.3} s\n\n",
        batch.tasks.len(),
        batch.scr,
        batch.mean_score,
        batch.mean_time_s
    );
    for task in &batch.tasks {
        summary.push_str(&format!(
            "{}  {}  S={:.2}  converged={}\n",
            task.task_id, task.terminated, task.best_score, task.converged
        ));
    }
    std::fs::write(args.out_dir.join("summary.txt"), summary)?;
    Ok(batch)
}

/// Load a flowsheet file, run the simulator, print the result document.
pub fn cmd_simulate(flowsheet_path: &Path) -> Result<String> {
    let fs = io::load_design(flowsheet_path).map_err(|e| anyhow!("{e}"))?;
    let result = run_simulation(&fs, 1e-6, 200);
    Ok(serde_json::to_string_pretty(&result)?)
}

/// Binary VLE analysis; returns (result JSON, human summary).
pub fn cmd_vle(
    components: &str,
    pressure: f64,
    method: Option<&str>,
    a12: Option<f64>,
) -> Result<(String, String)> {
    let names: Vec<&str> = components.split(',').map(str::trim).collect();
    if names.len() != 2 {
        bail!("--components expects exactly two names, got {}", names.len());
    }
    let c1 = component::resolve(names[0])?;
    let c2 = component::resolve(names[1])?;
    let method = match (method, a12) {
        (Some("ideal") | Some("ideal_raoult"), _) => PropertyMethod::IdealRaoult,
        (_, Some(a12)) => PropertyMethod::margules(&[(&c1.id, &c2.id, a12)]),
        _ => PropertyMethod::margules_with_defaults(&[c1.id.clone(), c2.id.clone()]),
    };
    let result = analyze_binary_vle(c1, c2, pressure, &method)?;
    Ok((serde_json::to_string_pretty(&result)?, vle_summary(&result)))
}
