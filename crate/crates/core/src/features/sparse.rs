//! A minimal sparse vector with strictly increasing indices.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVec {
    pub fn zeros(dim: usize) -> Self {
        SparseVec {
            dim,
            entries: Vec::new(),
        }
    }

    /// Builds from unordered pairs, summing duplicate indices and dropping
    /// exact zeros.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut collected: Vec<(usize, f64)> = pairs.into_iter().collect();
        collected.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(collected.len());
        for (idx, value) in collected {
            debug_assert!(idx < dim, "index {idx} out of bounds for dim {dim}");
            match entries.last_mut() {
                Some((last, acc)) if *last == idx => *acc += value,
                _ => entries.push((idx, value)),
            }
        }
        entries.retain(|(_, v)| *v != 0.0);
        SparseVec { dim, entries }
    }

    pub fn from_dense(values: &[f64]) -> Self {
        SparseVec {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, *v))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            dense[i] = v;
        }
        dense
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for (_, v) in &mut self.entries {
            *v *= factor;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    /// Concatenates blocks into one vector; each block's indices are shifted
    /// by the widths of the blocks before it.
    pub fn concat(blocks: &[SparseVec]) -> SparseVec {
        let dim = blocks.iter().map(SparseVec::dim).sum();
        let mut entries = Vec::with_capacity(blocks.iter().map(SparseVec::nnz).sum());
        let mut offset = 0;
        for block in blocks {
            for &(i, v) in &block.entries {
                entries.push((offset + i, v));
            }
            offset += block.dim;
        }
        SparseVec { dim, entries }
    }
}

/// Scales a vector to unit L2 norm; the zero vector is returned unchanged.
pub fn l2_normalize(v: &mut SparseVec) {
    let norm = v.norm();
    if norm > 0.0 {
        v.scale(1.0 / norm);
    }
}
