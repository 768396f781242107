//! Inner- and inter-author similarity on a small inline corpus.
//!
//! Builds a corpus of three authors answering the same two prompts,
//! then prints each author's self-similarity distribution and the full
//! author-by-author matrix for both metrics.
//!
//! Run with: `cargo run --example similarity_matrix`

use textlab::similarity::{inner_similarity, inter_similarity, Metric, SimilarityOptions};
use textlab::{Corpus, TextRecord};

fn record(id: &str, prompt: &str, author: &str, text: &str) -> TextRecord {
    TextRecord {
        id: id.to_string(),
        prompt_id: prompt.to_string(),
        author: author.to_string(),
        text: text.to_string(),
    }
}

fn main() -> textlab::Result<()> {
    let corpus = Corpus::from_records(vec![
        record("r01", "p1", "terse", "Plant the seeds early."),
        record("r02", "p1", "terse", "Plant seeds early and water them."),
        record("r03", "p1", "terse", "Early seeds grow best."),
        record(
            "r04",
            "p1",
            "florid",
            "One should plant the garden seeds remarkably early in the gentle season.",
        ),
        record(
            "r05",
            "p1",
            "florid",
            "A wise gardener plants seeds early, greeting the gentle season with patience.",
        ),
        record(
            "r06",
            "p1",
            "florid",
            "Seeds, planted early and tended with patience, reward the gentle gardener.",
        ),
        record("r07", "p1", "human", "Just get them in the dirt by March."),
        record(
            "r08",
            "p1",
            "human",
            "March is fine. Dirt, seeds, water, done.",
        ),
        record("r09", "p2", "terse", "Check the oil monthly."),
        record("r10", "p2", "terse", "Check oil and tires monthly."),
        record(
            "r11",
            "p2",
            "florid",
            "A careful owner examines the oil each month without fail.",
        ),
        record(
            "r12",
            "p2",
            "florid",
            "Each month the careful owner examines both oil and tires.",
        ),
        record(
            "r13",
            "p2",
            "human",
            "Oil light on? Too late. Check it monthly.",
        ),
        record("r14", "p2", "human", "Monthly. Just check it monthly."),
    ])?;

    for metric in [Metric::Cosine, Metric::Edit] {
        let opts = SimilarityOptions {
            metric,
            ..SimilarityOptions::default()
        };

        println!("=== {metric:?} metric ===");
        println!("inner similarity (same author, same prompt):");
        for author in corpus.authors().map(str::to_string).collect::<Vec<_>>() {
            let s = inner_similarity(&corpus, &author, &opts)?;
            println!(
                "  {author:7} mean {:.3}  sd {:.3}  median {:.3}  over {} pairs",
                s.mean, s.sd, s.median, s.n
            );
        }

        let matrix = inter_similarity(&corpus, &opts)?;
        println!("author x author mean similarity:");
        print!("{}", matrix.mean_csv());
        println!();
    }
    Ok(())
}
