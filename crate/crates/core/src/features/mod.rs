//! Feature engineering: TF-IDF bag-of-words, embedding projection, one-hot
//! site/phenotype encodings, and concept-occurrence features, assembled
//! into named configurations.


use serde::{Deserialize, Serialize};

use crate::corpus::{preprocess, Corpus, Split, StopwordList, TokenList, Vocabulary};
use crate::embeddings::EmbeddingTable;
use crate::{Error, Result};

mod concepts;
mod sparse;
mod tfidf;

pub use concepts::{
    annotate_with_lexicon, annotations_from_str, annotations_to_jsonl, bundled_lexicon,
    parse_annotations_jsonl, AnnotationSet, ConceptAnnotation, ConceptMode, Lexicon, LexiconEntry,
};
pub use sparse::{l2_normalize, SparseVec};
pub use tfidf::{count_vector, fit_tfidf, transform_tfidf, TfidfModel};

/// The base representation of a fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureBase {
    Bow,
    Embedding,
}

/// Optional feature blocks appended after the base block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extra {
    Site,
    Phenotype,
    Cui,
    SemanticType,
}

impl Extra {
    const ALL: [Extra; 4] = [Extra::Site, Extra::Phenotype, Extra::Cui, Extra::SemanticType];

    fn label(self) -> &'static str {
        match self {
            Extra::Site => "Site",
            Extra::Phenotype => "Pheno",
            Extra::Cui => "CUI",
            Extra::SemanticType => "ST",
        }
    }
}

/// A named feature configuration: base block plus extras, with optional
/// row-level L2 normalization (on by default, applied to the concatenated
/// vector).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub base: FeatureBase,
    pub extras: Vec<Extra>,
    pub normalize: bool,
}

impl FeatureConfig {
    pub fn new(base: FeatureBase, extras: &[Extra]) -> Self {
        // Canonical order, duplicates collapsed.
        let extras = Extra::ALL
            .into_iter()
            .filter(|e| extras.contains(e))
            .collect();
        FeatureConfig {
            base,
            extras,
            normalize: true,
        }
    }

    pub fn bow() -> Self {
        Self::new(FeatureBase::Bow, &[])
    }

    pub fn embedding() -> Self {
        Self::new(FeatureBase::Embedding, &[])
    }

    /// Canonical display name, e.g. `BOW+Site` or `Embedding+CUI`.
    pub fn name(&self) -> String {
        let mut name = match self.base {
            FeatureBase::Bow => "BOW".to_string(),
            FeatureBase::Embedding => "Embedding".to_string(),
        };
        for extra in &self.extras {
            name.push('+');
            name.push_str(extra.label());
        }
        name
    }

    /// Parses a canonical name back into a configuration.
    pub fn parse(name: &str) -> Result<Self> {
        let mut parts = name.split('+');
        let base = match parts.next() {
            Some("BOW") => FeatureBase::Bow,
            Some("Embedding") => FeatureBase::Embedding,
            other => {
                return Err(Error::validation(format!(
                    "unknown feature base `{}`",
                    other.unwrap_or("")
                )))
            }
        };
        let mut extras = Vec::new();
        for part in parts {
            let extra = Extra::ALL
                .into_iter()
                .find(|e| e.label() == part)
                .ok_or_else(|| Error::validation(format!("unknown feature extra `{part}`")))?;
            if extras.contains(&extra) {
                return Err(Error::validation(format!("duplicate feature extra `{part}`")));
            }
            extras.push(extra);
        }
        Ok(Self::new(base, &extras))
    }
}

/// A sparse matrix of fragment feature vectors under one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub config_name: String,
    pub row_ids: Vec<String>,
    pub columns: Vec<String>,
    rows: Vec<SparseVec>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Sparse triplet CSV: `row_id,column_name,value`, rows in matrix order.
    pub fn to_triplet_csv(&self) -> String {
        let mut out = String::from("row_id,column_name,value\n");
        for (id, row) in self.row_ids.iter().zip(&self.rows) {
            for (col, value) in row.iter() {
                out.push_str(id);
                out.push(',');
                out.push_str(&self.columns[col]);
                out.push(',');
                out.push_str(&value.to_string());
                out.push('\n');
            }
        }
        out
    }
}

/// One-hot encodes a categorical value against a fixed universe.
///
/// Unseen values encode to the all-zero vector rather than erroring, since
/// test folds may contain sites or phenotypes absent from train.
pub fn encode_categorical(value: &str, universe: &[String]) -> SparseVec {
    match universe.iter().position(|u| u == value) {
        Some(idx) => SparseVec::from_pairs(universe.len(), [(idx, 1.0)]),
        None => SparseVec::zeros(universe.len()),
    }
}

/// Projects a bag-of-words count vector through an embedding table:
/// `sum_t count(t) * embedding(t)`. Tokens without embeddings contribute
/// zero. The count vector must be indexed by `vocabulary`.
pub fn embed_project(
    bow: &SparseVec,
    vocabulary: &Vocabulary,
    table: &EmbeddingTable,
) -> Result<Vec<f64>> {
    if bow.dim() != vocabulary.len() {
        return Err(Error::DimensionMismatch {
            expected: vocabulary.len(),
            actual: bow.dim(),
        });
    }
    let mut projected = vec![0.0; table.dim()];
    for (idx, count) in bow.iter() {
        if let Some(vector) = table.get(&vocabulary.tokens()[idx]) {
            for (out, v) in projected.iter_mut().zip(vector) {
                *out += count * v;
            }
        }
    }
    Ok(projected)
}

/// Everything fitted on the train side that `transform` needs: vocabulary,
/// TF-IDF weights, categorical and concept universes, column names.
#[derive(Clone, Debug)]
pub struct FeatureSpace {
    pub config: FeatureConfig,
    vocabulary: Vocabulary,
    tfidf: Option<TfidfModel>,
    embedding: Option<EmbeddingTable>,
    site_universe: Vec<String>,
    phenotype_universe: Vec<String>,
    cui_universe: Vec<String>,
    st_universe: Vec<String>,
    columns: Vec<String>,
}

impl FeatureSpace {
    /// Fits the feature space on the training fragments named by `train_ids`.
    pub fn fit(
        corpus: &Corpus,
        train_ids: &[String],
        config: &FeatureConfig,
        stopwords: &StopwordList,
        annotations: Option<&AnnotationSet>,
        embedding: Option<&EmbeddingTable>,
    ) -> Result<Self> {
        let train_fragments: Vec<_> = train_ids
            .iter()
            .map(|id| {
                corpus
                    .get(id)
                    .ok_or_else(|| Error::validation(format!("split references unknown id `{id}`")))
            })
            .collect::<Result<_>>()?;

        let train_tokens: Vec<TokenList> = train_fragments
            .iter()
            .map(|f| preprocess(&f.text, stopwords))
            .collect();
        let vocabulary = crate::corpus::build_vocabulary(&train_tokens);

        let needs = |extra: Extra| config.extras.contains(&extra);
        if (needs(Extra::Cui) || needs(Extra::SemanticType)) && annotations.is_none() {
            return Err(Error::MissingArtifact(format!(
                "configuration {} needs concept annotations",
                config.name()
            )));
        }

        let tfidf = match config.base {
            FeatureBase::Bow => Some(fit_tfidf(&train_tokens, &vocabulary)?),
            FeatureBase::Embedding => None,
        };
        let embedding = match config.base {
            FeatureBase::Embedding => Some(
                embedding
                    .ok_or_else(|| {
                        Error::MissingArtifact(format!(
                            "configuration {} needs an embedding table",
                            config.name()
                        ))
                    })?
                    .clone(),
            ),
            FeatureBase::Bow => None,
        };

        // First-seen universes over train fragments.
        let mut site_universe = Vec::new();
        let mut phenotype_universe = Vec::new();
        if needs(Extra::Site) {
            for fragment in &train_fragments {
                if !site_universe.contains(&fragment.site) {
                    site_universe.push(fragment.site.clone());
                }
            }
        }
        if needs(Extra::Phenotype) {
            for fragment in &train_fragments {
                if !phenotype_universe.contains(&fragment.phenotype) {
                    phenotype_universe.push(fragment.phenotype.clone());
                }
            }
        }
        let cui_universe = if needs(Extra::Cui) {
            annotations.unwrap().universe(train_ids, ConceptMode::Cui)
        } else {
            Vec::new()
        };
        let st_universe = if needs(Extra::SemanticType) {
            annotations
                .unwrap()
                .universe(train_ids, ConceptMode::SemanticType)
        } else {
            Vec::new()
        };

        let mut columns = Vec::new();
        match config.base {
            FeatureBase::Bow => {
                columns.extend(vocabulary.tokens().iter().map(|t| format!("bow:{t}")));
            }
            FeatureBase::Embedding => {
                let dim = embedding.as_ref().unwrap().dim();
                columns.extend((0..dim).map(|d| format!("emb:{d}")));
            }
        }
        for extra in &config.extras {
            match extra {
                Extra::Site => columns.extend(site_universe.iter().map(|s| format!("site:{s}"))),
                Extra::Phenotype => {
                    columns.extend(phenotype_universe.iter().map(|p| format!("pheno:{p}")))
                }
                Extra::Cui => columns.extend(cui_universe.iter().map(|c| format!("cui:{c}"))),
                Extra::SemanticType => {
                    columns.extend(st_universe.iter().map(|s| format!("st:{s}")))
                }
            }
        }
        {
            let mut unique: Vec<&String> = columns.iter().collect();
            unique.sort();
            unique.dedup();
            if unique.len() != columns.len() {
                return Err(Error::validation("duplicate feature column names"));
            }
        }

        Ok(FeatureSpace {
            config: config.clone(),
            vocabulary,
            tfidf,
            embedding,
            site_universe,
            phenotype_universe,
            cui_universe,
            st_universe,
            columns,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    /// Transforms the named fragments into a feature matrix.
    pub fn transform(
        &self,
        corpus: &Corpus,
        ids: &[String],
        stopwords: &StopwordList,
        annotations: Option<&AnnotationSet>,
    ) -> Result<FeatureMatrix> {
        let needs = |extra: Extra| self.config.extras.contains(&extra);
        if (needs(Extra::Cui) || needs(Extra::SemanticType)) && annotations.is_none() {
            return Err(Error::MissingArtifact(format!(
                "configuration {} needs concept annotations",
                self.config.name()
            )));
        }
        let mut rows = Vec::with_capacity(ids.len());
        for id in ids {
            let fragment = corpus
                .get(id)
                .ok_or_else(|| Error::validation(format!("unknown fragment id `{id}`")))?;
            let tokens = preprocess(&fragment.text, stopwords);

            let mut blocks = Vec::new();
            match self.config.base {
                FeatureBase::Bow => {
                    blocks.push(transform_tfidf(self.tfidf.as_ref().unwrap(), &tokens));
                }
                FeatureBase::Embedding => {
                    let counts = count_vector(&self.vocabulary, &tokens);
                    let projected = embed_project(
                        &counts,
                        &self.vocabulary,
                        self.embedding.as_ref().unwrap(),
                    )?;
                    blocks.push(SparseVec::from_dense(&projected));
                }
            }
            for extra in &self.config.extras {
                let block = match extra {
                    Extra::Site => encode_categorical(&fragment.site, &self.site_universe),
                    Extra::Phenotype => {
                        encode_categorical(&fragment.phenotype, &self.phenotype_universe)
                    }
                    Extra::Cui => concepts::concept_features(
                        annotations.unwrap(),
                        id,
                        &self.cui_universe,
                        ConceptMode::Cui,
                    ),
                    Extra::SemanticType => concepts::concept_features(
                        annotations.unwrap(),
                        id,
                        &self.st_universe,
                        ConceptMode::SemanticType,
                    ),
                };
                blocks.push(block);
            }

            let mut row = SparseVec::concat(&blocks);
            if self.config.normalize {
                l2_normalize(&mut row);
            }
            rows.push(row);
        }
        Ok(FeatureMatrix {
            config_name: self.config.name(),
            row_ids: ids.to_vec(),
            columns: self.columns.clone(),
            rows,
        })
    }
}

/// Fits on the split's train side and transforms both sides.
pub fn build_features(
    corpus: &Corpus,
    split: &Split,
    config: &FeatureConfig,
    stopwords: &StopwordList,
    annotations: Option<&AnnotationSet>,
    embedding: Option<&EmbeddingTable>,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    let space = FeatureSpace::fit(corpus, &split.train, config, stopwords, annotations, embedding)?;
    let train = space.transform(corpus, &split.train, stopwords, annotations)?;
    let test = space.transform(corpus, &split.test, stopwords, annotations)?;
    Ok((train, test))
}
