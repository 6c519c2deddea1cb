//! Regenerate the committed fixtures: the demo flowsheet file and the
//! pinned batch regression golden. Run after an intentional behavior
//! change:
//!
//!   cargo run -p procdes-cli --example make_fixtures

use std::path::Path;

use procdes_cli::{cmd_batch, corpus, BatchArgs};
use serde_json::json;

fn main() -> anyhow::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));

    let flash = corpus::golden_corpus()
        .into_iter()
        .find(|f| f.id == "g03-flash-bt")
        .expect("corpus contains the flash case");
    std::fs::create_dir_all(root.join("fixtures"))?;
    flowsheet_core::io::save_design(&flash, &root.join("fixtures/flash_benzene_toluene.json"))?;

    let scratch = tempfile::tempdir()?;
    let batch = cmd_batch(&BatchArgs {
        suite_dir: root.join("tasks"),
        seed: 42,
        config: None,
        out_dir: scratch.path().to_path_buf(),
        jobs: 1,
    })?;
    let golden = json!({
        "seed": 42,
        "scr": batch.scr,
        "mean_score": batch.mean_score,
        "tasks": batch
            .tasks
            .iter()
            .map(|t| serde_json::to_value(t.normalized()).expect("report serializes"))
            .collect::<Vec<_>>(),
    });
    std::fs::create_dir_all(root.join("tests/golden"))?;
    std::fs::write(
        root.join("tests/golden/batch_golden.json"),
        serde_json::to_string_pretty(&golden)? + "\n",
    )?;
    println!(
        "wrote fixtures; batch SCR {:.3}, mean score {:.3}",
        batch.scr, batch.mean_score
    );
    Ok(())
}
