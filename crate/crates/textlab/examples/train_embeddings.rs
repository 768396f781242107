//! Train word embeddings from scratch and poke at the vector space.
//!
//! Trains a small CBOW model with negative sampling on sentences where
//! "hot" and "warm" appear in the same frames, then shows that the
//! trained space placed them closer together than the control word,
//! and that retraining with the same seed reproduces the vectors bit
//! for bit.
//!
//! Run with: `cargo run --example train_embeddings`

use textlab::embedding::{train_cbow, TrainConfig};

fn main() -> textlab::Result<()> {
    let frames = [
        "the soup stays X all night",
        "keep the tea X for me",
        "a X meal waits inside",
        "the stove keeps bread X",
        "she likes the bath X",
    ];
    let controls = [
        "shut the door before dark",
        "the door creaks on rusty hinges",
        "lock the door twice tonight",
        "prop the door with a brick",
    ];
    // unrelated sentences keep the space from collapsing into one blob
    let filler = [
        "birds sing near the quiet pond",
        "rain drums on old tin roofs",
        "maps fold badly after long trips",
        "clocks tick slower past midnight",
        "dust settles on unread books",
        "trains rattle through empty fields",
    ];

    let mut docs: Vec<Vec<String>> = Vec::new();
    for _ in 0..12 {
        for frame in frames {
            for word in ["hot", "warm"] {
                docs.push(
                    frame
                        .split(' ')
                        .map(|t| if t == "X" { word } else { t }.to_string())
                        .collect(),
                );
            }
        }
        for sentence in controls.iter().chain(&filler) {
            docs.push(sentence.split(' ').map(str::to_string).collect());
        }
    }

    let config = TrainConfig {
        dim: 16,
        window: 2,
        epochs: 40,
        negative_samples: 8,
        seed: 42,
        ..TrainConfig::default()
    };
    let model = train_cbow(&docs, &config)?;
    println!(
        "trained {} words at dimension {} over {} documents",
        model.vocab_size(),
        model.dim(),
        docs.len()
    );

    println!("cosine(hot, warm) = {:+.3}", model.cosine("hot", "warm")?);
    println!("cosine(hot, door) = {:+.3}", model.cosine("hot", "door")?);
    println!("cosine(tea, soup) = {:+.3}", model.cosine("tea", "soup")?);

    // nearest neighbors of "hot" by input-vector cosine
    let mut neighbors: Vec<(f64, String)> = model
        .words()
        .filter(|&w| w != "hot")
        .map(|w| (model.cosine("hot", w).unwrap(), w.to_string()))
        .collect();
    neighbors.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!("nearest to hot:");
    for (score, word) in neighbors.iter().take(4) {
        println!("  {word:8} {score:+.3}");
    }

    // determinism: same seed, same bits
    let again = train_cbow(&docs, &config)?;
    let identical = model.words().all(|w| {
        model
            .vector(w)
            .unwrap()
            .iter()
            .zip(again.vector(w).unwrap())
            .all(|(a, b)| a.to_bits() == b.to_bits())
    });
    println!("retrain with the same seed is bit-identical: {identical}");
    Ok(())
}
