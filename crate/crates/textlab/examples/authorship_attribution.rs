//! Who wrote it? Bag-of-words authorship attribution.
//!
//! Builds a corpus of three authors with overlapping vocabulary but
//! different habits, splits it 60/20/20 stratified by author, trains
//! both classifier heads, and prints accuracy, per-class metrics, and
//! the test confusion matrix.
//!
//! Run with: `cargo run --example authorship_attribution`

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use textlab::attribution::{run_attribution, AttributionOptions, ClassifierOptions, Head};
use textlab::{Corpus, TextRecord};

fn build_corpus() -> textlab::Result<Corpus> {
    let shared = [
        "the", "a", "report", "meeting", "plan", "team", "week", "note", "idea", "change",
    ];
    let habits: [(&str, [&str; 4]); 3] = [
        ("kim", ["frankly", "honestly", "look", "anyway"]),
        ("lee", ["therefore", "moreover", "hence", "thus"]),
        ("pat", ["maybe", "perhaps", "possibly", "roughly"]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut records = Vec::new();
    for (author, habit) in habits {
        for d in 0..30 {
            let mut words: Vec<&str> = (0..12)
                .map(|_| shared[rng.random_range(0..shared.len())])
                .collect();
            // two habit words per document is enough signal
            for _ in 0..2 {
                let slot = rng.random_range(0..words.len());
                words[slot] = habit[rng.random_range(0..habit.len())];
            }
            records.push(TextRecord {
                id: format!("{author}-{d:02}"),
                prompt_id: format!("p{}", d % 3),
                author: author.to_string(),
                text: words.join(" "),
            });
        }
    }
    Corpus::from_records(records)
}

fn main() -> textlab::Result<()> {
    let corpus = build_corpus()?;
    for head in [Head::Nb, Head::Logreg] {
        let options = AttributionOptions {
            classifier: ClassifierOptions {
                head,
                ..ClassifierOptions::default()
            },
            ..AttributionOptions::default()
        };
        let run = run_attribution(&corpus, &options)?;
        let (train, val, test) = run.fold_sizes;
        println!("=== {head:?} head ===");
        println!("folds: train {train} / validation {val} / test {test}");
        println!(
            "accuracy: validation {:.3}, test {:.3}",
            run.validation.accuracy, run.test.accuracy
        );
        for m in &run.test.per_class {
            println!(
                "  {:4} precision {:.3}  recall {:.3}  f1 {:.3}  (support {})",
                m.class, m.precision, m.recall, m.f1, m.support
            );
        }
        println!("test confusion (rows = true, columns = predicted):");
        for (class, row) in run.model.classes.iter().zip(&run.test.confusion) {
            println!("  {class:4} {row:?}");
        }
        println!();
    }
    Ok(())
}
