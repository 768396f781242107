//! Audit embedding associations along a definitional axis.
//!
//! Trains two tiny models on corpora with different co-occurrence
//! patterns, derives a gender direction from definitional pairs, scores
//! a set of neutral occupation words against it, and compares the
//! models' DirectBias aggregates.
//!
//! Run with: `cargo run --example bias_audit`

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use textlab::bias::{bias_direction, direct_bias, NeutralWordSet, PairSet};
use textlab::embedding::{train_cbow, EmbeddingModel, TrainConfig};

/// Mix occupation words into gendered contexts with a given skew:
/// 1.0 pairs "nurse"/"teacher" only with she-words, 0.5 mixes evenly.
fn synthetic_docs(skew: f64, seed: u64) -> Vec<Vec<String>> {
    let he_words = ["he", "him", "his", "man", "father"];
    let she_words = ["she", "her", "hers", "woman", "mother"];
    let tilted = ["nurse", "teacher"];
    let balanced = ["engineer", "doctor", "clerk", "pilot"];
    let filler = ["works", "as", "a", "fine", "busy", "every", "day"];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for _ in 0..300 {
        let she_side = rng.random_bool(0.5);
        let occupation = if rng.random_bool(0.4) {
            // tilted occupations follow the skew, not the coin
            let she_side = rng.random_bool(skew);
            let pronouns = if she_side { &she_words } else { &he_words };
            docs.push(vec![
                pronouns[rng.random_range(0..5)].to_string(),
                filler[rng.random_range(0..filler.len())].to_string(),
                tilted[rng.random_range(0..2)].to_string(),
            ]);
            continue;
        } else {
            balanced[rng.random_range(0..4)]
        };
        let pronouns = if she_side { &she_words } else { &he_words };
        docs.push(vec![
            pronouns[rng.random_range(0..5)].to_string(),
            filler[rng.random_range(0..filler.len())].to_string(),
            occupation.to_string(),
        ]);
    }
    docs
}

fn audit(label: &str, model: &EmbeddingModel) -> textlab::Result<()> {
    let pairs = PairSet::new(
        "gender",
        vec![
            ("he".into(), "she".into()),
            ("him".into(), "her".into()),
            ("man".into(), "woman".into()),
            ("father".into(), "mother".into()),
        ],
    )?;
    let neutral = NeutralWordSet::new(vec![
        "nurse".into(),
        "teacher".into(),
        "engineer".into(),
        "doctor".into(),
        "clerk".into(),
        "pilot".into(),
    ])?;

    let axis = bias_direction(model, &pairs)?;
    let report = direct_bias(model, &neutral, &axis)?;
    println!(
        "{label}: DirectBias {:.3} over {} words ({} pairs used)",
        report.direct_bias,
        report.word_scores.len(),
        axis.used_pairs.len()
    );
    for (word, b) in &report.word_scores {
        let pole = if *b > 0.0 { "he-pole" } else { "she-pole" };
        println!("  {word:9} b = {b:+.3}  ({pole})");
    }
    Ok(())
}

fn main() -> textlab::Result<()> {
    let config = TrainConfig {
        dim: 24,
        window: 2,
        epochs: 8,
        seed: 9,
        ..TrainConfig::default()
    };
    let skewed = train_cbow(&synthetic_docs(0.95, 1), &config)?;
    let mixed = train_cbow(&synthetic_docs(0.5, 1), &config)?;

    audit("skewed corpus ", &skewed)?;
    println!();
    audit("mixed corpus  ", &mixed)?;
    Ok(())
}
