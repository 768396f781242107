//! textlab: corpus analytics for prompt-keyed, author-labeled text.
//!
//! The input is a JSONL corpus where each record carries an id, a prompt
//! id, an author label, and a text body. On top of that, textlab offers:
//!
//! - [`similarity`] — inner-/inter-author similarity distributions over
//!   same-prompt text pairs (term-frequency cosine or word-level edit
//!   similarity), with seeded pair sampling under a budget.
//! - [`stylometry`] — per-document readability (Flesch reading ease, a
//!   four-formula consensus grade, difficult words, reading time) and
//!   per-author corpus measures (unique-word ratio, Shannon entropy,
//!   syllable profile, MTLD lexical diversity).
//! - [`markers`] — author-specific language markers ranked by pointwise
//!   mutual information, plus word-cloud weights.
//! - [`embedding`] — CBOW word embeddings with negative sampling,
//!   trained from scratch, deterministically, per author.
//! - [`bias`] — embedding association audits: paired-difference bias
//!   directions, per-word bias scores, and the DirectBias aggregate.
//! - [`attribution`] — bag-of-words authorship classification with a
//!   stratified train/validation/test split and a choice of multinomial
//!   naive Bayes or one-vs-rest logistic regression.
//! - [`pipeline`] — deterministic report emission for all of the above,
//!   shared by the `textlab` binary.
//!
//! Every analysis is seeded from one global seed; rerunning with the
//! same seed and corpus reproduces every report byte for byte.
//!
//! ## Runnable examples
//!
//! Each major capability has a self-contained example that builds a
//! small corpus inline and prints what it computes:
//!
//! ```bash
//! cargo run --example similarity_matrix        # cosine/edit distributions
//! cargo run --example readability_stats        # readability + corpus measures
//! cargo run --example language_markers         # PMI markers + word cloud
//! cargo run --example train_embeddings         # CBOW training + neighbors
//! cargo run --example bias_audit               # bias directions + DirectBias
//! cargo run --example authorship_attribution   # split/train/evaluate
//! cargo run --example export_vectors           # labeled document vectors
//! cargo run --example full_pipeline            # the whole run, end to end
//! ```
//!
//! The `textlab` binary exposes the same analyses as subcommands
//! (`validate`, `similarity`, `stylometry`, `markers`, `embed`, `bias`,
//! `classify`, `vectors`, `all`); see the README for the flag reference.

pub mod attribution;
pub mod bias;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod markers;
pub mod pipeline;
pub mod similarity;
pub mod stylometry;
pub mod wordlists;

pub use corpus::{load_corpus, save_corpus, Corpus, TextRecord};
pub use error::{Error, Result};
