use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use procdes_cli::{
    cmd_batch, cmd_design, cmd_simulate, cmd_vle, BatchArgs, DesignArgs, ProposerKind,
};

#[derive(Parser)]
#[command(name = "procdes", version, about = "Automated chemical process design engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a design search (or thermodynamic analysis) for one task.
    Design {
        /// Task file: free text (.txt) or a structured TaskSpec (.json).
        #[arg(long, conflicts_with = "text")]
        task: Option<PathBuf>,
        /// Inline task text.
        #[arg(long)]
        text: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Search configuration file (flat key = value).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "mock", value_parser = parse_proposer)]
        proposer: ProposerKind,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a suite of tasks and report the simulation convergence rate.
    Batch {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Parallel task workers.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Simulate a saved flowsheet file and print the result document.
    Simulate {
        #[arg(long)]
        flowsheet: PathBuf,
    },
    /// Binary vapor-liquid equilibrium analysis.
    Vle {
        /// Two component names, comma separated.
        #[arg(long)]
        components: String,
        /// Pa
        #[arg(long, default_value_t = 101_325.0)]
        pressure: f64,
        /// "ideal" (Raoult) or "margules" (database defaults).
        #[arg(long)]
        method: Option<String>,
        /// Explicit symmetric Margules coefficient.
        #[arg(long)]
        a12: Option<f64>,
    },
    /// Serve the simulation HTTP API.
    Serve {
        #[arg(long, default_value_t = 8099)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
    },
}

fn parse_proposer(value: &str) -> Result<ProposerKind, String> {
    match value {
        "mock" => Ok(ProposerKind::Mock),
        "llm" => Ok(ProposerKind::Llm),
        other => Err(format!("unknown proposer '{other}' (expected mock or llm)")),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Design {
            task,
            text,
            seed,
            config,
            proposer,
            out,
        } => {
            let (report, code) = cmd_design(&DesignArgs {
                task_file: task,
                text,
                seed,
                config,
                proposer,
                out_dir: out,
            })?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(code)
        }
        Command::Batch {
            suite,
            seed,
            config,
            out,
            jobs,
        } => {
            let batch = cmd_batch(&BatchArgs {
                suite_dir: suite,
                seed,
                config,
                out_dir: out,
                jobs,
            })?;
            println!(
                "tasks: {}  SCR: {:.3}  mean score: {:.2}  mean time: {:.3} s",
                batch.tasks.len(),
                batch.scr,
                batch.mean_score,
                batch.mean_time_s
            );
            Ok(0)
        }
        Command::Simulate { flowsheet } => {
            println!("{}", cmd_simulate(&flowsheet)?);
            Ok(0)
        }
        Command::Vle {
            components,
            pressure,
            method,
            a12,
        } => {
            let (json, summary) = cmd_vle(&components, pressure, method.as_deref(), a12)?;
            println!("{json}");
            print!("{summary}");
            Ok(0)
        }
        Command::Serve { port, bind } => {
            sim_service::serve_blocking(&bind, port)?;
            Ok(0)
        }
    }
}
