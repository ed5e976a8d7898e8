//! TF-IDF weighting over a train-side vocabulary.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{TokenList, Vocabulary};
use crate::features::SparseVec;
use crate::{Error, Result};

/// A fitted TF-IDF model: vocabulary plus per-token inverse document
/// frequency weights.
///
/// The formula is pinned as `idf(t) = ln((1 + N) / (1 + df(t))) + 1` with
/// raw term counts, where `N` is the number of training documents. The
/// fitted weights travel with the model so serialized models replay exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    vocabulary: Vocabulary,
    idf: Vec<f64>,
    n_docs: usize,
}

impl TfidfModel {
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }
}

/// Fits IDF weights on training token lists over an existing vocabulary.
pub fn fit_tfidf(train: &[TokenList], vocabulary: &Vocabulary) -> Result<TfidfModel> {
    if train.is_empty() {
        return Err(Error::validation("cannot fit TF-IDF on an empty train set"));
    }
    let n = train.len() as f64;
    let mut document_frequency = vec![0usize; vocabulary.len()];
    for tokens in train {
        let mut seen = vec![false; vocabulary.len()];
        for token in tokens.iter() {
            if let Some(idx) = vocabulary.index_of(token) {
                if !seen[idx] {
                    seen[idx] = true;
                    document_frequency[idx] += 1;
                }
            }
        }
    }
    let idf = document_frequency
        .iter()
        .map(|&df| ((1.0 + n) / (1.0 + df as f64)).ln() + 1.0)
        .collect();
    Ok(TfidfModel {
        vocabulary: vocabulary.clone(),
        idf,
        n_docs: train.len(),
    })
}

/// Raw term counts over the model's vocabulary; out-of-vocabulary tokens are
/// dropped.
pub fn count_vector(vocabulary: &Vocabulary, tokens: &TokenList) -> SparseVec {
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for token in tokens.iter() {
        if let Some(idx) = vocabulary.index_of(token) {
            *counts.entry(idx).or_insert(0.0) += 1.0;
        }
    }
    SparseVec::from_pairs(vocabulary.len(), counts)
}

/// `count(t) * idf(t)` for each in-vocabulary token.
pub fn transform_tfidf(model: &TfidfModel, tokens: &TokenList) -> SparseVec {
    let counts = count_vector(&model.vocabulary, tokens);
    SparseVec::from_pairs(
        model.vocabulary.len(),
        counts.iter().map(|(i, c)| (i, c * model.idf[i])),
    )
}
