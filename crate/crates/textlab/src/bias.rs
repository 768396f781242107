//! Embedded-association auditing for trained embeddings.
//!
//! An axis is defined by word pairs (e.g. he/she): each in-vocabulary
//! pair contributes the difference of its unit-normalized vectors, and
//! the axis direction `g` is the mean of those differences. A word's
//! score is `b_w = cos(vec(w), g)`; positive values associate the word
//! with the first element of the pairs, negative with the second. The
//! aggregate score over a neutral word list is the mean of `|b_w|`.
//!
//! Out-of-vocabulary pair or neutral words are skipped and reported,
//! never imputed.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::embedding::{cosine, EmbeddingModel};
use crate::error::{Error, Result};

/// Named list of (first-pole, second-pole) word pairs.
#[derive(Debug, Clone)]
pub struct PairSet {
    pub axis_name: String,
    pub pairs: Vec<(String, String)>,
}

impl PairSet {
    pub fn new(axis_name: impl Into<String>, pairs: Vec<(String, String)>) -> Result<Self> {
        let axis_name = axis_name.into();
        if pairs.is_empty() {
            return Err(Error::Config(format!("axis {axis_name:?} has no pairs")));
        }
        for (w1, w2) in &pairs {
            if w1 == w2 {
                return Err(Error::Config(format!(
                    "axis {axis_name:?} pairs {w1:?} with itself"
                )));
            }
        }
        Ok(PairSet { axis_name, pairs })
    }
}

/// Deduplicated list of supposedly neutral words to score against an axis.
#[derive(Debug, Clone)]
pub struct NeutralWordSet {
    pub words: Vec<String>,
}

impl NeutralWordSet {
    pub fn new(words: Vec<String>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Config("neutral word list is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for word in &words {
            if !seen.insert(word.clone()) {
                return Err(Error::Config(format!("neutral word list repeats {word:?}")));
            }
        }
        Ok(NeutralWordSet { words })
    }
}

/// A resolved axis for one model.
#[derive(Debug, Clone, Serialize)]
pub struct BiasAxis {
    pub axis_name: String,
    /// Mean of unit-normalized pair differences.
    pub direction: Vec<f64>,
    pub used_pairs: Vec<(String, String)>,
    pub skipped_pairs: Vec<(String, String)>,
}

/// Scores of a neutral word list against one axis.
#[derive(Debug, Clone, Serialize)]
pub struct BiasReport {
    pub axis_name: String,
    /// word -> cosine score in [-1, 1], in neutral-list order.
    pub word_scores: Vec<(String, f64)>,
    /// Mean absolute score over the scored words.
    pub direct_bias: f64,
    /// scored words / requested words.
    pub coverage: f64,
    pub skipped_words: Vec<String>,
}

/// Spelling fallbacks tried when a pair word is missing from the
/// vocabulary (common list typos and number disagreements).
const LOOKUP_ALIASES: &[(&str, &str)] = &[("women", "woman"), ("femal", "female")];

fn resolve<'a>(model: &'a EmbeddingModel, word: &str) -> Option<(&'a [f64], f64)> {
    let lookup = |w: &str| {
        model
            .vector(w)
            .ok()
            .map(|v| (v, v.iter().map(|x| x * x).sum::<f64>().sqrt()))
    };
    if let Some(found) = lookup(word) {
        return Some(found);
    }
    for &(from, to) in LOOKUP_ALIASES {
        if word == from {
            return lookup(to);
        }
    }
    None
}

/// Mean of unit-normalized pair differences over the pairs found in
/// the vocabulary. Errors when no pair resolves, or when the mean
/// direction collapses to (numerically) zero.
pub fn bias_direction(model: &EmbeddingModel, pairs: &PairSet) -> Result<BiasAxis> {
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    let mut direction: Option<Vec<f64>> = None;
    for (w1, w2) in &pairs.pairs {
        let (first, second) = match (resolve(model, w1), resolve(model, w2)) {
            (Some(a), Some(b)) if a.1 > 0.0 && b.1 > 0.0 => (a, b),
            _ => {
                skipped.push((w1.clone(), w2.clone()));
                continue;
            }
        };
        let sum = direction.get_or_insert_with(|| vec![0.0; first.0.len()]);
        for (d, (&x, &y)) in sum.iter_mut().zip(first.0.iter().zip(second.0)) {
            *d += x / first.1 - y / second.1;
        }
        used.push((w1.clone(), w2.clone()));
    }
    let mut direction = direction.ok_or_else(|| Error::DegenerateAxis {
        axis: pairs.axis_name.clone(),
        reason: "no pair is fully in the vocabulary".to_string(),
    })?;
    let inv = 1.0 / used.len() as f64;
    direction.iter_mut().for_each(|d| *d *= inv);
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return Err(Error::DegenerateAxis {
            axis: pairs.axis_name.clone(),
            reason: format!("pair differences cancel out (norm {norm:.3e})"),
        });
    }
    Ok(BiasAxis {
        axis_name: pairs.axis_name.clone(),
        direction,
        used_pairs: used,
        skipped_pairs: skipped,
    })
}

/// `cos(vec(word), g)`: positive leans toward the first pole of the
/// axis pairs, negative toward the second.
pub fn word_bias(model: &EmbeddingModel, word: &str, axis: &BiasAxis) -> Result<f64> {
    Ok(cosine(model.vector(word)?, &axis.direction))
}

/// Score every in-vocabulary neutral word and average the absolute
/// scores. Errors when no neutral word is in the vocabulary.
pub fn direct_bias(
    model: &EmbeddingModel,
    neutral: &NeutralWordSet,
    axis: &BiasAxis,
) -> Result<BiasReport> {
    let mut word_scores = Vec::new();
    let mut skipped = Vec::new();
    for word in &neutral.words {
        match model.vector(word) {
            Ok(v) => word_scores.push((word.clone(), cosine(v, &axis.direction))),
            Err(_) => skipped.push(word.clone()),
        }
    }
    if word_scores.is_empty() {
        return Err(Error::DegenerateAxis {
            axis: axis.axis_name.clone(),
            reason: "no neutral word is in the vocabulary".to_string(),
        });
    }
    let direct_bias =
        word_scores.iter().map(|(_, b)| b.abs()).sum::<f64>() / word_scores.len() as f64;
    Ok(BiasReport {
        axis_name: axis.axis_name.clone(),
        direct_bias,
        coverage: word_scores.len() as f64 / neutral.words.len() as f64,
        word_scores,
        skipped_words: skipped,
    })
}

/// One model's position in the two-axis association plane.
#[derive(Debug, Clone, Serialize)]
pub struct ModelPoint {
    pub label: String,
    /// Mean signed score over in-vocabulary neutral words, per axis.
    pub first_axis: f64,
    pub second_axis: f64,
}

/// One neutral word's position for one model.
#[derive(Debug, Clone, Serialize)]
pub struct WordPoint {
    pub label: String,
    pub word: String,
    pub first_axis: f64,
    pub second_axis: f64,
}

/// Scatter coordinates for plotting.
#[derive(Debug, Clone, Serialize)]
pub struct AssociationScatter {
    pub first_axis_name: String,
    pub second_axis_name: String,
    /// Per-model mean points; models with a degenerate axis are listed
    /// in `omitted` instead.
    pub model_points: Vec<ModelPoint>,
    pub word_points: Vec<WordPoint>,
    pub omitted: Vec<(String, String)>,
}

/// Place each labeled model (and each of its in-vocabulary neutral words)
/// in the plane spanned by two axes: x = signed score on the first axis,
/// y = signed score on the second. Models for which either axis cannot be
/// built are omitted with the reason recorded.
pub fn association_scatter(
    models: &[(String, &EmbeddingModel)],
    neutral: &NeutralWordSet,
    first: &PairSet,
    second: &PairSet,
) -> Result<AssociationScatter> {
    let mut scatter = AssociationScatter {
        first_axis_name: first.axis_name.clone(),
        second_axis_name: second.axis_name.clone(),
        model_points: Vec::new(),
        word_points: Vec::new(),
        omitted: Vec::new(),
    };
    for (label, model) in models {
        let axes = bias_direction(model, first)
            .and_then(|fa| bias_direction(model, second).map(|sa| (fa, sa)));
        let (first_axis, second_axis) = match axes {
            Ok(pair) => pair,
            Err(e) => {
                scatter.omitted.push((label.clone(), e.to_string()));
                continue;
            }
        };
        let mut sums = (0.0f64, 0.0f64);
        let mut scored = 0usize;
        for word in &neutral.words {
            let Ok(v) = model.vector(word) else { continue };
            let x = cosine(v, &first_axis.direction);
            let y = cosine(v, &second_axis.direction);
            scatter.word_points.push(WordPoint {
                label: label.clone(),
                word: word.clone(),
                first_axis: x,
                second_axis: y,
            });
            sums.0 += x;
            sums.1 += y;
            scored += 1;
        }
        if scored == 0 {
            scatter
                .omitted
                .push((label.clone(), "no neutral word in vocabulary".to_string()));
            continue;
        }
        scatter.model_points.push(ModelPoint {
            label: label.clone(),
            first_axis: sums.0 / scored as f64,
            second_axis: sums.1 / scored as f64,
        });
    }
    Ok(scatter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(entries: &[(&str, &[f64])]) -> EmbeddingModel {
        EmbeddingModel::from_vectors(
            entries
                .iter()
                .map(|(w, v)| (w.to_string(), v.to_vec()))
                .collect(),
        )
        .unwrap()
    }

    fn pair_set(name: &str, pairs: &[(&str, &str)]) -> PairSet {
        PairSet::new(
            name,
            pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap()
    }

    fn neutral(words: &[&str]) -> NeutralWordSet {
        NeutralWordSet::new(words.iter().map(|w| w.to_string()).collect()).unwrap()
    }

    #[test]
    fn single_pair_direction_is_unit_difference() {
        let m = model(&[("he", &[3.0, 0.0]), ("she", &[0.0, 2.0])]);
        let axis = bias_direction(&m, &pair_set("gender", &[("he", "she")])).unwrap();
        // normalized difference: (1,0) - (0,1)
        assert_eq!(axis.direction, vec![1.0, -1.0]);
        assert_eq!(axis.used_pairs.len(), 1);
        assert!(axis.skipped_pairs.is_empty());
    }

    #[test]
    fn equal_differences_average_to_themselves() {
        let m = model(&[
            ("aa", &[1.0, 0.0]),
            ("bb", &[0.0, 1.0]),
            ("cc", &[1.0, 0.0]),
            ("dd", &[0.0, 1.0]),
        ]);
        let axis = bias_direction(&m, &pair_set("x", &[("aa", "bb"), ("cc", "dd")])).unwrap();
        assert_eq!(axis.direction, vec![1.0, -1.0]);
    }

    #[test]
    fn three_pair_hand_mean() {
        let m = model(&[
            ("a1", &[1.0, 0.0]),
            ("a2", &[0.0, 1.0]),
            ("b1", &[0.0, 1.0]),
            ("b2", &[1.0, 0.0]),
            ("c1", &[1.0, 0.0]),
            ("c2", &[0.0, -1.0]),
        ]);
        let axis = bias_direction(
            &m,
            &pair_set("x", &[("a1", "a2"), ("b1", "b2"), ("c1", "c2")]),
        )
        .unwrap();
        // differences: (1,-1), (-1,1), (1,1); mean (1/3, 1/3)
        assert!((axis.direction[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((axis.direction[1] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn oov_pairs_skipped_and_all_oov_errors() {
        let m = model(&[("he", &[1.0, 0.0]), ("she", &[0.0, 1.0])]);
        let axis =
            bias_direction(&m, &pair_set("gender", &[("he", "she"), ("king", "queen")])).unwrap();
        assert_eq!(axis.used_pairs.len(), 1);
        assert_eq!(axis.skipped_pairs.len(), 1);

        let err = bias_direction(&m, &pair_set("gender", &[("king", "queen")]));
        assert!(matches!(err, Err(Error::DegenerateAxis { .. })));
    }

    #[test]
    fn cancelling_pairs_are_degenerate() {
        let m = model(&[("aa", &[1.0, 0.0]), ("bb", &[0.0, 1.0])]);
        let err = bias_direction(&m, &pair_set("x", &[("aa", "bb"), ("bb", "aa")]));
        assert!(matches!(err, Err(Error::DegenerateAxis { .. })));
    }

    #[test]
    fn alias_lookup_applies() {
        let m = model(&[("man", &[1.0, 0.0]), ("woman", &[0.0, 1.0])]);
        let axis = bias_direction(&m, &pair_set("gender", &[("man", "women")])).unwrap();
        assert_eq!(axis.used_pairs.len(), 1);
        assert_eq!(axis.direction, vec![1.0, -1.0]);
    }

    #[test]
    fn word_bias_angles() {
        let m = model(&[
            ("he", &[1.0, 0.0]),
            ("she", &[-1.0, 0.0]),
            ("parallel", &[2.0, 0.0]),
            ("orthogonal", &[0.0, 5.0]),
            ("sixty", &[1.0, 3f64.sqrt()]),
        ]);
        let axis = bias_direction(&m, &pair_set("gender", &[("he", "she")])).unwrap();
        assert!((word_bias(&m, "parallel", &axis).unwrap() - 1.0).abs() < 1e-12);
        assert!(word_bias(&m, "orthogonal", &axis).unwrap().abs() < 1e-12);
        assert!((word_bias(&m, "sixty", &axis).unwrap() - 0.5).abs() < 1e-9);
        assert!(matches!(
            word_bias(&m, "missing", &axis),
            Err(Error::OutOfVocabulary(_))
        ));
    }

    #[test]
    fn direct_bias_hand_cases() {
        // geometry chosen so the neutral words score +0.5 and -0.3
        let g = [1.0, 0.0];
        let up = |b: f64| vec![b, (1.0 - b * b).sqrt()];
        let m = model(&[
            ("he", &[1.0, 0.0]),
            ("she", &[-1.0, 0.0]),
            ("plus", &up(0.5)),
            ("minus", &up(-0.3)),
            ("ortho", &[0.0, 1.0]),
        ]);
        let axis = bias_direction(&m, &pair_set("gender", &[("he", "she")])).unwrap();
        assert_eq!(axis.direction, vec![g[0] * 2.0, 0.0]);

        let report = direct_bias(&m, &neutral(&["plus", "minus"]), &axis).unwrap();
        assert!((report.direct_bias - 0.4).abs() < 1e-12);
        assert_eq!(report.coverage, 1.0);

        // all-orthogonal list scores zero
        let report = direct_bias(&m, &neutral(&["ortho"]), &axis).unwrap();
        assert!(report.direct_bias.abs() < 1e-12);

        // single word with negative score: absolute value
        let report = direct_bias(&m, &neutral(&["minus"]), &axis).unwrap();
        assert!((report.direct_bias - 0.3).abs() < 1e-12);
    }

    #[test]
    fn coverage_counts_oov_words() {
        let m = model(&[
            ("he", &[1.0, 0.0]),
            ("she", &[-1.0, 0.0]),
            ("here", &[0.3, 0.4]),
        ]);
        let axis = bias_direction(&m, &pair_set("gender", &[("he", "she")])).unwrap();
        let report = direct_bias(&m, &neutral(&["here", "gone", "away", "lost"]), &axis).unwrap();
        assert_eq!(report.coverage, 0.25);
        assert_eq!(report.skipped_words.len(), 3);

        assert!(matches!(
            direct_bias(&m, &neutral(&["gone", "lost"]), &axis),
            Err(Error::DegenerateAxis { .. })
        ));
    }

    #[test]
    fn pair_swap_negates_scores_not_aggregate() {
        let m = model(&[
            ("he", &[0.8, 0.6]),
            ("she", &[-0.6, 0.8]),
            ("him", &[0.9, -0.1]),
            ("her", &[-0.7, 0.2]),
            ("w1", &[0.5, 0.5]),
            ("w2", &[0.2, -0.9]),
        ]);
        let forward = bias_direction(&m, &pair_set("g", &[("he", "she"), ("him", "her")])).unwrap();
        let swapped = bias_direction(&m, &pair_set("g", &[("she", "he"), ("her", "him")])).unwrap();
        for (f, s) in forward.direction.iter().zip(&swapped.direction) {
            assert_eq!(*f, -s);
        }
        let words = neutral(&["w1", "w2"]);
        let rf = direct_bias(&m, &words, &forward).unwrap();
        let rs = direct_bias(&m, &words, &swapped).unwrap();
        for ((_, bf), (_, bs)) in rf.word_scores.iter().zip(&rs.word_scores) {
            assert_eq!(*bf, -bs);
        }
        assert_eq!(rf.direct_bias, rs.direct_bias);
    }

    #[test]
    fn positive_scaling_leaves_scores_unchanged() {
        let base: Vec<(&str, Vec<f64>)> = vec![
            ("he", vec![0.8, 0.6]),
            ("she", vec![-0.6, 0.8]),
            ("w1", vec![0.5, 0.5]),
            ("w2", vec![0.2, -0.9]),
        ];
        let m1 = EmbeddingModel::from_vectors(
            base.iter()
                .map(|(w, v)| (w.to_string(), v.clone()))
                .collect(),
        )
        .unwrap();
        let m2 = EmbeddingModel::from_vectors(
            base.iter()
                .map(|(w, v)| (w.to_string(), v.iter().map(|x| x * 7.3).collect()))
                .collect(),
        )
        .unwrap();
        let words = neutral(&["w1", "w2"]);
        let a1 = bias_direction(&m1, &pair_set("g", &[("he", "she")])).unwrap();
        let a2 = bias_direction(&m2, &pair_set("g", &[("he", "she")])).unwrap();
        let r1 = direct_bias(&m1, &words, &a1).unwrap();
        let r2 = direct_bias(&m2, &words, &a2).unwrap();
        for ((_, b1), (_, b2)) in r1.word_scores.iter().zip(&r2.word_scores) {
            assert!((b1 - b2).abs() < 1e-9);
        }
        assert!((r1.direct_bias - r2.direct_bias).abs() < 1e-9);
    }

    #[test]
    fn direct_bias_permutation_invariant() {
        let m = model(&[
            ("he", &[1.0, 0.0]),
            ("she", &[-1.0, 0.0]),
            ("w1", &[0.5, 0.5]),
            ("w2", &[0.2, -0.9]),
            ("w3", &[-0.4, 0.1]),
        ]);
        let axis = bias_direction(&m, &pair_set("g", &[("he", "she")])).unwrap();
        let a = direct_bias(&m, &neutral(&["w1", "w2", "w3"]), &axis).unwrap();
        let b = direct_bias(&m, &neutral(&["w3", "w1", "w2"]), &axis).unwrap();
        assert_eq!(a.direct_bias, b.direct_bias);
    }

    #[test]
    fn scatter_places_models_and_words() {
        let balanced = model(&[
            ("he", &[1.0, 0.0, 0.0]),
            ("she", &[-1.0, 0.0, 0.0]),
            ("white", &[0.0, 1.0, 0.0]),
            ("black", &[0.0, -1.0, 0.0]),
            ("nurse", &[0.0, 0.0, 1.0]),
        ]);
        let leaning = model(&[
            ("he", &[1.0, 0.0, 0.0]),
            ("she", &[-1.0, 0.0, 0.0]),
            ("white", &[0.0, 1.0, 0.0]),
            ("black", &[0.0, -1.0, 0.0]),
            ("nurse", &[-0.7, -0.7, 0.1]),
        ]);
        let gender = pair_set("gender", &[("he", "she")]);
        let race = pair_set("race", &[("white", "black")]);
        let words = neutral(&["nurse"]);
        let scatter = association_scatter(
            &[
                ("balanced".to_string(), &balanced),
                ("leaning".to_string(), &leaning),
            ],
            &words,
            &gender,
            &race,
        )
        .unwrap();
        assert_eq!(scatter.model_points.len(), 2);
        let origin = &scatter.model_points[0];
        assert!(origin.first_axis.abs() < 1e-12 && origin.second_axis.abs() < 1e-12);
        let shifted = &scatter.model_points[1];
        assert!(shifted.first_axis < 0.0 && shifted.second_axis < 0.0);

        // identical models produce identical points
        let twice = association_scatter(
            &[
                ("one".to_string(), &balanced),
                ("two".to_string(), &balanced),
            ],
            &words,
            &gender,
            &race,
        )
        .unwrap();
        assert_eq!(
            twice.model_points[0].first_axis,
            twice.model_points[1].first_axis
        );

        // a model missing an axis pair is omitted, not fatal
        let no_axis = model(&[("nurse", &[1.0, 0.0, 0.0])]);
        let partial =
            association_scatter(&[("broken".to_string(), &no_axis)], &words, &gender, &race)
                .unwrap();
        assert!(partial.model_points.is_empty());
        assert_eq!(partial.omitted.len(), 1);
    }

    #[test]
    fn pair_set_validation() {
        assert!(PairSet::new("x", vec![]).is_err());
        assert!(PairSet::new("x", vec![("same".into(), "same".into())]).is_err());
        assert!(NeutralWordSet::new(vec![]).is_err());
        assert!(NeutralWordSet::new(vec!["dup".into(), "dup".into()]).is_err());
    }
}
