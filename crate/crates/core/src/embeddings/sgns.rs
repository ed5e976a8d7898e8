//! Skip-gram with negative sampling at desk scale.
//!
//! Pinned choices: unigram^0.75 negative-sampling distribution, linear
//! learning-rate decay over all (epoch, pair) steps, fixed context window,
//! no subsampling. Input vectors initialize uniform in [-0.5/dim, 0.5/dim],
//! output vectors at zero; the returned table holds the input vectors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::TokenList;
use crate::embeddings::EmbeddingTable;
use crate::{derive_seed, Error, Result};

#[derive(Clone, Debug)]
pub struct SgnsParams {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub seed: u64,
    pub initial_lr: f64,
}

impl Default for SgnsParams {
    fn default() -> Self {
        SgnsParams {
            dim: 100,
            window: 3,
            negatives: 5,
            epochs: 5,
            seed: 0,
            initial_lr: 0.025,
        }
    }
}

/// Mean negative-sampling loss per (center, context) pair, one entry per
/// epoch.
#[derive(Clone, Debug, Default)]
pub struct SgnsTrace {
    pub epoch_loss: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Trains skip-gram embeddings on the given sentences.
///
/// Deterministic per seed. With `epochs == 0` the seeded random
/// initialization is returned untouched.
pub fn train_sgns(sentences: &[TokenList], params: &SgnsParams) -> Result<(EmbeddingTable, SgnsTrace)> {
    if params.dim == 0 {
        return Err(Error::validation("embedding dimension must be positive"));
    }
    if params.window == 0 {
        return Err(Error::validation("context window must be positive"));
    }
    let total_tokens: usize = sentences.iter().map(TokenList::len).sum();
    if total_tokens < 100 {
        return Err(Error::validation(format!(
            "skip-gram training needs at least 100 tokens, got {total_tokens}"
        )));
    }

    // Vocabulary in first-seen order with unigram counts.
    let mut tokens: Vec<String> = Vec::new();
    let mut counts: Vec<f64> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for sentence in sentences {
        for token in sentence.iter() {
            match index.get(token) {
                Some(&i) => counts[i] += 1.0,
                None => {
                    index.insert(token.clone(), tokens.len());
                    tokens.push(token.clone());
                    counts.push(1.0);
                }
            }
        }
    }
    let vocab_size = tokens.len();

    // Sentences as index sequences.
    let encoded: Vec<Vec<usize>> = sentences
        .iter()
        .map(|s| s.iter().map(|t| index[t]).collect())
        .collect();

    // Cumulative unigram^0.75 distribution for negative sampling.
    let weights: Vec<f64> = counts.iter().map(|c| c.powf(0.75)).collect();
    let mut cumulative = Vec::with_capacity(vocab_size);
    let mut running = 0.0;
    for w in &weights {
        running += w;
        cumulative.push(running);
    }
    let weight_total = running;

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, "embeddings.sgns"));
    let span = 0.5 / params.dim as f64;
    let mut input: Vec<Vec<f64>> = (0..vocab_size)
        .map(|_| (0..params.dim).map(|_| rng.gen_range(-span..span)).collect())
        .collect();
    let mut output: Vec<Vec<f64>> = vec![vec![0.0; params.dim]; vocab_size];

    // Total (center, context) pairs per epoch, for the linear decay schedule.
    let pairs_per_epoch: usize = encoded
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|t| {
                    let lo = t.saturating_sub(params.window);
                    let hi = (t + params.window).min(s.len() - 1);
                    hi - lo
                })
                .sum::<usize>()
        })
        .sum();
    let total_steps = (params.epochs * pairs_per_epoch).max(1) as f64;

    let mut trace = SgnsTrace::default();
    let mut step = 0usize;
    let mut gradient = vec![0.0; params.dim];
    for _epoch in 0..params.epochs {
        let mut epoch_loss = 0.0;
        let mut epoch_pairs = 0usize;
        for sentence in &encoded {
            for (t, &center) in sentence.iter().enumerate() {
                let lo = t.saturating_sub(params.window);
                let hi = (t + params.window).min(sentence.len().saturating_sub(1));
                for context_pos in lo..=hi {
                    if context_pos == t {
                        continue;
                    }
                    let context = sentence[context_pos];
                    let lr = params.initial_lr * (1.0 - step as f64 / total_steps).max(1e-4);
                    step += 1;
                    epoch_pairs += 1;

                    gradient.iter_mut().for_each(|g| *g = 0.0);
                    // Positive target plus sampled negatives; a negative
                    // that collides with the true context is skipped.
                    let mut pair_loss = 0.0;
                    for sample in 0..=params.negatives {
                        let (target, label) = if sample == 0 {
                            (context, 1.0)
                        } else {
                            let draw = rng.gen::<f64>() * weight_total;
                            let target = cumulative.partition_point(|&c| c < draw).min(vocab_size - 1);
                            if target == context {
                                continue;
                            }
                            (target, 0.0)
                        };
                        let z: f64 = input[center]
                            .iter()
                            .zip(&output[target])
                            .map(|(a, b)| a * b)
                            .sum();
                        let prediction = sigmoid(z);
                        pair_loss -= if label > 0.5 {
                            prediction.max(1e-12).ln()
                        } else {
                            (1.0 - prediction).max(1e-12).ln()
                        };
                        let delta = (prediction - label) * lr;
                        for d in 0..params.dim {
                            gradient[d] += delta * output[target][d];
                            output[target][d] -= delta * input[center][d];
                        }
                    }
                    for d in 0..params.dim {
                        input[center][d] -= gradient[d];
                    }
                    epoch_loss += pair_loss;
                }
            }
        }
        trace
            .epoch_loss
            .push(epoch_loss / epoch_pairs.max(1) as f64);
    }

    let mut table = EmbeddingTable::new(params.dim, format!("sgns(seed={})", params.seed));
    for (token, vector) in tokens.into_iter().zip(input) {
        table.insert(token, vector)?;
    }
    Ok((table, trace))
}
