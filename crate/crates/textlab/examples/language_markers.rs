//! Author-specific language markers via pointwise mutual information.
//!
//! Two authors share most of their vocabulary but each leans on a few
//! pet words; PMI surfaces those as markers, and the word-cloud export
//! rescales marker strength to drawable weights.
//!
//! Run with: `cargo run --example language_markers`

use textlab::markers::{compute_pmi_filtered, export_wordcloud, top_markers};
use textlab::wordlists::default_stop_words;
use textlab::{Corpus, TextRecord};

fn main() -> textlab::Result<()> {
    let base = "the team reviewed the plan and shipped the feature on time";
    let mut records = Vec::new();
    for i in 0..8 {
        records.push(TextRecord {
            id: format!("a{i}"),
            prompt_id: "p1".into(),
            author: "casual".into(),
            text: format!("{base} basically and honestly it was basically fine honestly"),
        });
        records.push(TextRecord {
            id: format!("b{i}"),
            prompt_id: "p1".into(),
            author: "formal".into(),
            text: format!("{base} furthermore the committee concurred and furthermore approved"),
        });
    }
    let corpus = Corpus::from_records(records)?;

    // stop words would otherwise dominate the counts
    let stop_words = default_stop_words();
    let table = compute_pmi_filtered(&corpus, 5, Some(&stop_words))?;

    for author in ["casual", "formal"] {
        println!("top markers for {author}:");
        for marker in top_markers(&table, author, 5)? {
            println!(
                "  {:12} pmi {:+.3}  joint count {}",
                marker.word, marker.pmi, marker.joint_count
            );
        }
        println!("word-cloud weights:");
        for weighted in export_wordcloud(&table, author, 5)? {
            let bar = "#".repeat((weighted.weight * 20.0).round() as usize);
            println!("  {:12} {:.2} {bar}", weighted.word, weighted.weight);
        }
        println!();
    }
    Ok(())
}
