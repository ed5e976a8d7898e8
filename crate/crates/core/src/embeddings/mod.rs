//! Word-vector tables: text-format IO, desk-scale skip-gram training with
//! negative sampling, and cosine nearest-neighbor probes.

use std::collections::HashMap;
use std::path::Path;

use crate::{Error, Result};

mod sgns;

pub use sgns::{train_sgns, SgnsParams, SgnsTrace};

/// A token-to-vector table with a fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    tokens: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
    source: String,
}

impl EmbeddingTable {
    pub fn new(dim: usize, source: impl Into<String>) -> Self {
        EmbeddingTable {
            dim,
            tokens: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
            source: source.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Tokens in insertion order.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.index.get(token).map(|&i| self.vectors[i].as_slice())
    }

    /// Inserts a vector; duplicate tokens and wrong dimensions are errors.
    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let token = token.into();
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: vector.len(),
            });
        }
        if self.index.contains_key(&token) {
            return Err(Error::validation(format!("duplicate token `{token}`")));
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        self.vectors.push(vector);
        Ok(())
    }

    /// Loads the text format: a `V D` header line, then one
    /// `token v1 ... vD` line per token.
    pub fn load(path: &Path, expected_dim: Option<usize>) -> Result<Self> {
        let content = std::fs::read_to_string(path)?;
        Self::parse_text(&content, &path.display().to_string(), expected_dim)
    }

    pub fn parse_text(content: &str, origin: &str, expected_dim: Option<usize>) -> Result<Self> {
        let mut lines = content.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(origin, 1, "missing header line"))?;
        let mut parts = header.split_whitespace();
        let declared_len: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::parse(origin, 1, "header must be `<count> <dim>`"))?;
        let dim: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::parse(origin, 1, "header must be `<count> <dim>`"))?;
        if let Some(expected) = expected_dim {
            if dim != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    actual: dim,
                });
            }
        }

        let mut table = EmbeddingTable::new(dim, origin);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let token = fields
                .next()
                .ok_or_else(|| Error::parse(origin, idx + 1, "empty row"))?;
            let values: Vec<f64> = fields
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(origin, idx + 1, format!("bad value: {e}")))?;
            if values.len() != dim {
                return Err(Error::parse(
                    origin,
                    idx + 1,
                    format!("row has {} values, expected {dim}", values.len()),
                ));
            }
            table
                .insert(token, values)
                .map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
        }
        if table.len() != declared_len {
            return Err(Error::parse(
                origin,
                1,
                format!("header declares {declared_len} tokens, file has {}", table.len()),
            ));
        }
        Ok(table)
    }

    /// Serializes to the text format. Values print in shortest round-trip
    /// form, so load(save(table)) reproduces every vector exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.dim);
        for (token, vector) in self.tokens.iter().zip(&self.vectors) {
            out.push_str(token);
            for value in vector {
                out.push(' ');
                out.push_str(&value.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Cosine similarity between two stored tokens; 0 when either norm is 0.
    pub fn cosine(&self, a: &str, b: &str) -> Result<f64> {
        let va = self
            .get(a)
            .ok_or_else(|| Error::UnknownToken(a.to_string()))?;
        let vb = self
            .get(b)
            .ok_or_else(|| Error::UnknownToken(b.to_string()))?;
        Ok(cosine(va, vb))
    }

    /// The `k` nearest tokens to `token` by cosine similarity, descending,
    /// ties broken lexicographically; the query itself is excluded.
    pub fn nearest_neighbors(&self, token: &str, k: usize) -> Result<Vec<(String, f64)>> {
        let query = self
            .get(token)
            .ok_or_else(|| Error::UnknownToken(token.to_string()))?;
        let mut scored: Vec<(String, f64)> = self
            .tokens
            .iter()
            .filter(|t| t.as_str() != token)
            .map(|t| (t.clone(), cosine(query, self.get(t).unwrap())))
            .collect();
        scored.sort_by(|(ta, sa), (tb, sb)| {
            sb.partial_cmp(sa)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| ta.cmp(tb))
        });
        scored.truncate(k);
        Ok(scored)
    }
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_rows() {
        let table = EmbeddingTable::parse_text("2 3\na 1 0 0\nb 0 1 0\n", "test", None).unwrap();
        assert_eq!(table.dim(), 3);
        assert_eq!(table.len(), 2);
        assert_eq!(table.get("a"), Some([1.0, 0.0, 0.0].as_slice()));
    }

    #[test]
    fn ragged_row_errors_with_line_number() {
        let err = EmbeddingTable::parse_text("2 3\na 1 0 0\nb 0 1\n", "vec.txt", None).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_token_errors_naming_token() {
        let err = EmbeddingTable::parse_text("2 2\na 1 0\na 0 1\n", "vec.txt", None).unwrap_err();
        assert!(err.to_string().contains("`a`"));
    }

    #[test]
    fn expected_dim_mismatch_is_an_error() {
        let err = EmbeddingTable::parse_text("1 3\na 1 0 0\n", "vec.txt", Some(5)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 5, actual: 3 }));
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let mut table = EmbeddingTable::new(3, "test");
        table
            .insert("alpha", vec![0.123456789012345, -7.25, 1e-17])
            .unwrap();
        table
            .insert("beta", vec![std::f64::consts::PI, 0.0, -0.1])
            .unwrap();
        let text = table.to_text();
        let reloaded = EmbeddingTable::parse_text(&text, "test", Some(3)).unwrap();
        assert_eq!(table.get("alpha"), reloaded.get("alpha"));
        assert_eq!(table.get("beta"), reloaded.get("beta"));
    }

    #[test]
    fn nearest_neighbors_ranks_by_cosine_with_lexicographic_ties() {
        let mut table = EmbeddingTable::new(2, "test");
        table.insert("a", vec![1.0, 0.0]).unwrap();
        table.insert("b", vec![1.0, 0.0]).unwrap();
        table.insert("c", vec![0.0, 1.0]).unwrap();
        let neighbors = table.nearest_neighbors("a", 2).unwrap();
        assert_eq!(neighbors[0].0, "b");
        assert!((neighbors[0].1 - 1.0).abs() < 1e-15);
        assert_eq!(neighbors[1].0, "c");
        assert!(neighbors[1].1.abs() < 1e-15);
    }

    #[test]
    fn nearest_neighbors_k_larger_than_vocab_returns_all_others() {
        let mut table = EmbeddingTable::new(2, "test");
        table.insert("a", vec![1.0, 0.0]).unwrap();
        table.insert("b", vec![0.5, 0.5]).unwrap();
        let neighbors = table.nearest_neighbors("a", 10).unwrap();
        assert_eq!(neighbors.len(), 1);
    }

    #[test]
    fn antiparallel_vector_ranks_last() {
        let mut table = EmbeddingTable::new(2, "test");
        table.insert("q", vec![1.0, 0.0]).unwrap();
        table.insert("anti", vec![-1.0, 0.0]).unwrap();
        table.insert("ortho", vec![0.0, 1.0]).unwrap();
        table.insert("near", vec![0.9, 0.1]).unwrap();
        let neighbors = table.nearest_neighbors("q", 3).unwrap();
        assert_eq!(neighbors.last().unwrap().0, "anti");
        assert!((neighbors.last().unwrap().1 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn nearest_neighbors_invariant_to_insertion_order() {
        let mut forward = EmbeddingTable::new(2, "test");
        let mut backward = EmbeddingTable::new(2, "test");
        let entries = [
            ("a", vec![1.0, 0.0]),
            ("b", vec![0.8, 0.2]),
            ("c", vec![0.2, 0.8]),
            ("d", vec![0.0, 1.0]),
        ];
        for (t, v) in &entries {
            forward.insert(*t, v.clone()).unwrap();
        }
        for (t, v) in entries.iter().rev() {
            backward.insert(*t, v.clone()).unwrap();
        }
        assert_eq!(
            forward.nearest_neighbors("a", 3).unwrap(),
            backward.nearest_neighbors("a", 3).unwrap()
        );
    }

    #[test]
    fn unknown_query_is_an_error() {
        let table = EmbeddingTable::new(2, "test");
        assert!(matches!(
            table.nearest_neighbors("missing", 1),
            Err(Error::UnknownToken(_))
        ));
    }
}
