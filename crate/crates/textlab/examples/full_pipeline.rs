//! The whole pipeline, end to end, through the library API.
//!
//! Writes a small corpus to a scratch directory, runs every analysis in
//! dependency order (embeddings are trained before the bias audit reads
//! them), and lists the reports that landed in the output directory.
//! Running it twice with the same seed produces byte-identical reports;
//! only `run_manifest.json` (wall-clock timings) differs.
//!
//! Run with: `cargo run --example full_pipeline`

use std::fs;

use textlab::corpus::save_corpus;
use textlab::pipeline::{run, Analysis, RunConfig};
use textlab::{Corpus, TextRecord};

fn main() -> textlab::Result<()> {
    let scratch = std::env::temp_dir().join("textlab-full-pipeline-example");
    let _ = fs::remove_dir_all(&scratch);
    fs::create_dir_all(&scratch).expect("create scratch dir");

    // three authors, two prompts, six texts each
    let mut records = Vec::new();
    for author in ["human", "verbose-model", "brief-model"] {
        for p in 0..2 {
            for d in 0..6 {
                let text = match author {
                    "human" => format!("Draft {d} looks fine. He said ship it. She agreed fast."),
                    "verbose-model" => format!(
                        "Iteration {d} of the deliverable demonstrates considerable refinement; \
                         the nurse and the doctor reviewed the documentation thoroughly."
                    ),
                    _ => format!("Version {d} is ready. The teacher approved the final plan."),
                };
                records.push(TextRecord {
                    id: format!("{author}-{p}-{d}"),
                    prompt_id: format!("prompt-{p}"),
                    author: author.to_string(),
                    text,
                });
            }
        }
    }
    let corpus_path = scratch.join("corpus.jsonl");
    save_corpus(&Corpus::from_records(records)?, &corpus_path)?;

    let config = RunConfig {
        corpus: corpus_path,
        out: scratch.join("reports"),
        seed: 7,
        // small embeddings keep the example snappy
        dim: 16,
        epochs: 3,
        min_count: 1,
        ..RunConfig::default()
    };
    run(Analysis::All, &config)?;

    println!("\nreports in {}:", config.out.display());
    let mut names: Vec<String> = fs::read_dir(&config.out)
        .expect("read output dir")
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    println!("\nrerun this example: the reports (except run_manifest.json) will not change.");
    Ok(())
}
