//! Command behavior: exit codes, report schemas, determinism under
//! parallel batch execution, and the bundled task corpus.

use std::path::{Path, PathBuf};
use std::process::Command;

use procdes_cli::{
    cmd_batch, cmd_design, cmd_simulate, cmd_vle, validate_against_schema, BatchArgs, DesignArgs,
    ProposerKind,
};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_procdes")
}

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn tasks_dir() -> PathBuf {
    manifest_dir().join("tasks")
}

fn design(task: &str, out: &Path) -> (procdes_cli::RunReport, i32) {
    cmd_design(&DesignArgs {
        task_file: Some(tasks_dir().join(task)),
        text: None,
        seed: 42,
        config: None,
        proposer: ProposerKind::Mock,
        out_dir: out.to_path_buf(),
    })
    .unwrap()
}

#[test]
fn design_happy_path_writes_artifacts_and_exits_zero() {
    let out = tempfile::tempdir().unwrap();
    let (report, code) = design("task-02.txt", out.path());
    assert_eq!(code, 0, "separation task reaches the target score");
    assert_eq!(report.terminated, "target_reached");
    for file in ["report.json", "summary.txt", "flowsheet.json", "trace.jsonl"] {
        assert!(out.path().join("task-02").join(file).exists(), "{file}");
    }

    // the written flowsheet loads back cleanly
    let fs =
        flowsheet_core::io::load_design(&out.path().join("task-02/flowsheet.json")).unwrap();
    assert_eq!(fs.id, "task-02-best");
}

#[test]
fn thermo_task_takes_the_vle_path_without_searching() {
    let out = tempfile::tempdir().unwrap();
    let (report, code) = design("task-03.txt", out.path());
    assert_eq!(code, 0);
    assert_eq!(report.terminated, "thermo_analysis");
    assert!(report.vle_path.is_some());
    assert!(report.trace_path.is_none(), "no search ran");
    let vle: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.path().join("task-03/vle.json")).unwrap(),
    )
    .unwrap();
    // ethanol-water under the default Margules coefficient has an azeotrope
    assert!(!vle["azeotrope"].is_null());
}

#[test]
fn run_reports_validate_against_the_bundled_schema() {
    let out = tempfile::tempdir().unwrap();
    let schema: serde_json::Value =
        serde_json::from_str(procdes_cli::report::RUN_REPORT_SCHEMA).unwrap();
    for task in ["task-01.txt", "task-03.txt", "task-06.txt"] {
        let (report, _) = design(task, out.path());
        let value = serde_json::to_value(&report).unwrap();
        validate_against_schema(&value, &schema).unwrap();
    }
}

#[test]
fn missing_task_file_exits_one() {
    let status = Command::new(binary())
        .args(["design", "--task", "/nonexistent/task.txt"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stderr).contains("error"));
}

#[test]
fn unknown_config_key_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    std::fs::write(&config, "alpha_zero = 0.4\n").unwrap();
    let output = Command::new(binary())
        .args(["design", "--text", "heat 10 kmol/h of water for throughput"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown key"));
}

#[test]
fn exit_code_two_signals_unconverged_termination() {
    // an unreachable target forces the iteration limit
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("strict.cfg");
    std::fs::write(&config, "target_score = 100\nmax_iterations = 2\n").unwrap();
    let output = Command::new(binary())
        .args([
            "design",
            "--task",
            tasks_dir().join("task-02.txt").to_str().unwrap(),
        ])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn exit_code_contract_holds_across_the_mini_suite() {
    let out = tempfile::tempdir().unwrap();
    let mut task_files: Vec<PathBuf> = std::fs::read_dir(tasks_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    task_files.sort();
    for task in task_files {
        let (report, code) = cmd_design(&DesignArgs {
            task_file: Some(task.clone()),
            text: None,
            seed: 42,
            config: None,
            proposer: ProposerKind::Mock,
            out_dir: out.path().to_path_buf(),
        })
        .unwrap();
        let expected = match report.terminated.as_str() {
            "target_reached" | "converged" | "thermo_analysis" => 0,
            "iteration_limit" | "stagnation" => 2,
            other => panic!("unexpected termination {other}"),
        };
        assert_eq!(code, expected, "{}", task.display());
    }
}

#[test]
fn batch_is_deterministic_across_worker_counts() {
    let run = |jobs: usize| {
        let out = tempfile::tempdir().unwrap();
        cmd_batch(&BatchArgs {
            suite_dir: tasks_dir(),
            seed: 42,
            config: None,
            out_dir: out.path().to_path_buf(),
            jobs,
        })
        .unwrap()
    };
    let serial = run(1);
    let parallel = run(4);
    assert_eq!(serial.scr, parallel.scr);
    for (a, b) in serial.tasks.iter().zip(&parallel.tasks) {
        assert_eq!(a.normalized(), b.normalized(), "{}", a.task_id);
    }
}

#[test]
fn batch_of_trivial_tasks_has_full_convergence() {
    let suite = tempfile::tempdir().unwrap();
    for i in 0..3 {
        std::fs::write(
            suite.path().join(format!("trivial-{i}.txt")),
            "move 10 kmol/h of water through the plant; throughput only",
        )
        .unwrap();
    }
    let out = tempfile::tempdir().unwrap();
    let batch = cmd_batch(&BatchArgs {
        suite_dir: suite.path().to_path_buf(),
        seed: 42,
        config: None,
        out_dir: out.path().to_path_buf(),
        jobs: 1,
    })
    .unwrap();
    assert_eq!(batch.scr, 1.0);
}

#[test]
fn empty_suite_is_an_error() {
    let suite = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let err = cmd_batch(&BatchArgs {
        suite_dir: suite.path().to_path_buf(),
        seed: 42,
        config: None,
        out_dir: out.path().to_path_buf(),
        jobs: 1,
    })
    .unwrap_err();
    assert!(err.to_string().contains("no task files"));

    let status = Command::new(binary())
        .args(["batch", "--suite"])
        .arg(suite.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn simulate_prints_a_converged_result_for_the_golden_fixture() {
    let fixture = manifest_dir().join("fixtures/flash_benzene_toluene.json");
    let output = cmd_simulate(&fixture).unwrap();
    let value: serde_json::Value = serde_json::from_str(&output).unwrap();
    assert_eq!(value["converged"], true);

    let run = Command::new(binary())
        .args(["simulate", "--flowsheet"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("\"converged\": true"));
}

#[test]
fn simulate_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, r#"{"id":"x","components":[]}"#).unwrap();
    assert!(cmd_simulate(&path).is_err());
    let run = Command::new(binary())
        .args(["simulate", "--flowsheet"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn vle_command_reports_no_azeotrope_for_benzene_toluene() {
    let (json, summary) = cmd_vle("benzene,toluene", 101_325.0, Some("ideal"), None).unwrap();
    assert!(summary.contains("azeotrope: none"));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(value["azeotrope"].is_null());

    let run = Command::new(binary())
        .args(["vle", "--components", "benzene,toluene", "--method", "ideal"])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("azeotrope: none"));
}

#[test]
fn serve_subcommand_answers_health_checks() {
    // find a free port, then hand it to the binary
    let port = {
        let probe = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        probe.local_addr().unwrap().port()
    };
    let mut child = Command::new(binary())
        .args(["serve", "--port", &port.to_string()])
        .spawn()
        .unwrap();

    let url = format!("http://127.0.0.1:{port}/health");
    let mut reply = None;
    for _ in 0..50 {
        std::thread::sleep(std::time::Duration::from_millis(20));
        if let Ok(response) = reqwest::blocking::get(&url) {
            reply = Some(response.json::<serde_json::Value>().unwrap());
            break;
        }
    }
    child.kill().unwrap();
    let _ = child.wait();
    let reply = reply.expect("server came up");
    assert_eq!(reply["status"], "ok");
}

#[test]
fn every_bundled_task_parses_and_round_trips() {
    let mut task_files: Vec<PathBuf> = std::fs::read_dir(tasks_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    task_files.sort();
    assert_eq!(task_files.len(), 20);
    for path in task_files {
        let text = std::fs::read_to_string(&path).unwrap();
        let task = agents::parse_task(&text)
            .unwrap_or_else(|e| panic!("{} failed to parse: {e}", path.display()));
        let json = serde_json::to_string(&task).unwrap();
        let back: flowsheet_core::TaskSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(task, back, "{}", path.display());
    }
}
