//! UMLS-style concept annotations (CUIs and semantic types) and a toy
//! phrase lexicon that stands in for an external annotator in tests.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::{preprocess, Corpus, StopwordList};
use crate::features::SparseVec;
use crate::{Error, Result};

/// One concept occurrence on a fragment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptAnnotation {
    pub fragment_id: String,
    pub cui: String,
    pub semantic_type: String,
}

/// Which concept field acts as the feature key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConceptMode {
    Cui,
    SemanticType,
}

impl ConceptMode {
    fn key<'a>(&self, annotation: &'a ConceptAnnotation) -> &'a str {
        match self {
            ConceptMode::Cui => &annotation.cui,
            ConceptMode::SemanticType => &annotation.semantic_type,
        }
    }
}

/// Parses a JSON Lines annotation file.
pub fn parse_annotations_jsonl(path: &Path) -> Result<Vec<ConceptAnnotation>> {
    let content = std::fs::read_to_string(path)?;
    annotations_from_str(&content, &path.display().to_string())
}

pub fn annotations_from_str(content: &str, origin: &str) -> Result<Vec<ConceptAnnotation>> {
    let mut annotations = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let annotation: ConceptAnnotation = serde_json::from_str(line)
            .map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
        annotations.push(annotation);
    }
    Ok(annotations)
}

/// Annotations indexed by fragment, preserving file order.
#[derive(Clone, Debug, Default)]
pub struct AnnotationSet {
    annotations: Vec<ConceptAnnotation>,
    by_fragment: HashMap<String, Vec<usize>>,
}

impl AnnotationSet {
    /// Indexes annotations; fragment ids must exist in the corpus.
    pub fn new(annotations: Vec<ConceptAnnotation>, corpus: &Corpus) -> Result<Self> {
        for annotation in &annotations {
            if corpus.get(&annotation.fragment_id).is_none() {
                return Err(Error::validation(format!(
                    "annotation references unknown fragment `{}`",
                    annotation.fragment_id
                )));
            }
        }
        Ok(Self::new_unchecked(annotations))
    }

    pub fn new_unchecked(annotations: Vec<ConceptAnnotation>) -> Self {
        let mut by_fragment: HashMap<String, Vec<usize>> = HashMap::new();
        for (idx, annotation) in annotations.iter().enumerate() {
            by_fragment
                .entry(annotation.fragment_id.clone())
                .or_default()
                .push(idx);
        }
        AnnotationSet {
            annotations,
            by_fragment,
        }
    }

    pub fn len(&self) -> usize {
        self.annotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.annotations.is_empty()
    }

    pub fn for_fragment(&self, fragment_id: &str) -> impl Iterator<Item = &ConceptAnnotation> {
        self.by_fragment
            .get(fragment_id)
            .into_iter()
            .flatten()
            .map(|&idx| &self.annotations[idx])
    }

    /// Distinct concept keys over the given fragments, in first-seen order
    /// (fragment order, then annotation order within a fragment). Fix the
    /// universe on train ids only.
    pub fn universe(&self, fragment_ids: &[String], mode: ConceptMode) -> Vec<String> {
        let mut seen = HashMap::new();
        let mut universe = Vec::new();
        for id in fragment_ids {
            for annotation in self.for_fragment(id) {
                let key = mode.key(annotation);
                if !seen.contains_key(key) {
                    seen.insert(key.to_string(), universe.len());
                    universe.push(key.to_string());
                }
            }
        }
        universe
    }
}

/// Occurrence counts of each universe concept on one fragment.
pub fn concept_features(
    annotations: &AnnotationSet,
    fragment_id: &str,
    universe: &[String],
    mode: ConceptMode,
) -> SparseVec {
    let index: HashMap<&str, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, key)| (key.as_str(), i))
        .collect();
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for annotation in annotations.for_fragment(fragment_id) {
        if let Some(&idx) = index.get(mode.key(annotation)) {
            *counts.entry(idx).or_insert(0.0) += 1.0;
        }
    }
    SparseVec::from_pairs(universe.len(), counts)
}

/// One exact-phrase lexicon entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub phrase: String,
    pub cui: String,
    pub semantic_type: String,
}

/// An exact-phrase-to-concept lexicon.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

impl Lexicon {
    pub fn new(entries: Vec<LexiconEntry>) -> Self {
        Lexicon { entries }
    }

    pub fn parse_jsonl(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path)?;
        Self::from_str_content(&content, &path.display().to_string())
    }

    pub fn from_str_content(content: &str, origin: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: LexiconEntry = serde_json::from_str(line)
                .map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
            entries.push(entry);
        }
        Ok(Lexicon { entries })
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }
}

/// The bundled toy lexicon.
pub fn bundled_lexicon() -> &'static Lexicon {
    static LEXICON: OnceLock<Lexicon> = OnceLock::new();
    LEXICON.get_or_init(|| {
        Lexicon::from_str_content(include_str!("../../data/toy_lexicon.jsonl"), "bundled")
            .expect("bundled lexicon is well-formed")
    })
}

/// Annotates a corpus by exact phrase matching against the lexicon.
///
/// Fragment text and lexicon phrases go through the same normalization with
/// an empty stop-word list, so multi-word phrases containing stop words
/// still match. Every matching start position yields one annotation;
/// overlaps count separately.
pub fn annotate_with_lexicon(corpus: &Corpus, lexicon: &Lexicon) -> Vec<ConceptAnnotation> {
    let no_stopwords = StopwordList::empty();
    let phrase_tokens: Vec<Vec<String>> = lexicon
        .entries()
        .iter()
        .map(|e| preprocess(&e.phrase, &no_stopwords).tokens().to_vec())
        .collect();

    let mut annotations = Vec::new();
    for fragment in corpus.fragments() {
        let tokens = preprocess(&fragment.text, &no_stopwords);
        let tokens = tokens.tokens();
        for (entry, phrase) in lexicon.entries().iter().zip(&phrase_tokens) {
            if phrase.is_empty() || phrase.len() > tokens.len() {
                continue;
            }
            for start in 0..=(tokens.len() - phrase.len()) {
                if tokens[start..start + phrase.len()] == phrase[..] {
                    annotations.push(ConceptAnnotation {
                        fragment_id: fragment.id.clone(),
                        cui: entry.cui.clone(),
                        semantic_type: entry.semantic_type.clone(),
                    });
                }
            }
        }
    }
    annotations
}

/// Serializes annotations as JSON Lines.
pub fn annotations_to_jsonl(annotations: &[ConceptAnnotation]) -> String {
    let mut out = String::new();
    for annotation in annotations {
        out.push_str(&serde_json::to_string(annotation).expect("annotation serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DesignPattern, Fragment};

    fn annotation(fragment: &str, cui: &str, st: &str) -> ConceptAnnotation {
        ConceptAnnotation {
            fragment_id: fragment.to_string(),
            cui: cui.to_string(),
            semantic_type: st.to_string(),
        }
    }

    #[test]
    fn occurrence_counts_per_fragment() {
        let set = AnnotationSet::new_unchecked(vec![
            annotation("f1", "C0011849", "T047"),
            annotation("f1", "C0011849", "T047"),
            annotation("f2", "C0020538", "T047"),
        ]);
        let universe = vec!["C0011849".to_string(), "C0020538".to_string()];
        let v = concept_features(&set, "f1", &universe, ConceptMode::Cui);
        assert_eq!(v.get(0), 2.0);
        assert_eq!(v.get(1), 0.0);
    }

    #[test]
    fn fragment_without_annotations_is_zero() {
        let set = AnnotationSet::new_unchecked(vec![annotation("f1", "C1", "T1")]);
        let universe = vec!["C1".to_string()];
        let v = concept_features(&set, "f9", &universe, ConceptMode::Cui);
        assert!(v.is_zero());
    }

    #[test]
    fn semantic_type_mode_counts_types() {
        let set = AnnotationSet::new_unchecked(vec![
            annotation("f1", "C1", "T047"),
            annotation("f1", "C2", "T123"),
        ]);
        let universe = set.universe(&["f1".to_string()], ConceptMode::SemanticType);
        assert_eq!(universe, vec!["T047".to_string(), "T123".to_string()]);
        let v = concept_features(&set, "f1", &universe, ConceptMode::SemanticType);
        assert_eq!(v.get(0), 1.0);
        assert_eq!(v.get(1), 1.0);
    }

    #[test]
    fn universe_uses_only_listed_fragments() {
        let set = AnnotationSet::new_unchecked(vec![
            annotation("train", "C1", "T1"),
            annotation("test", "C2", "T2"),
        ]);
        let universe = set.universe(&["train".to_string()], ConceptMode::Cui);
        assert_eq!(universe, vec!["C1".to_string()]);
    }

    #[test]
    fn annotation_set_rejects_unknown_fragments() {
        let corpus = Corpus::new(vec![Fragment {
            id: "f1".into(),
            text: "x".into(),
            site: "s".into(),
            phenotype: "p".into(),
            labels: [DesignPattern::RuleOfN].into_iter().collect(),
        }])
        .unwrap();
        assert!(AnnotationSet::new(vec![annotation("f1", "C1", "T1")], &corpus).is_ok());
        assert!(AnnotationSet::new(vec![annotation("f2", "C1", "T1")], &corpus).is_err());
    }

    #[test]
    fn lexicon_matches_phrases_after_normalization() {
        let corpus = Corpus::new(vec![Fragment {
            id: "f1".into(),
            text: "Requires 2 diagnosis codes from the LAB VALUE sheet".into(),
            site: "s".into(),
            phenotype: "p".into(),
            labels: [DesignPattern::RuleOfN].into_iter().collect(),
        }])
        .unwrap();
        let lexicon = Lexicon::new(vec![
            LexiconEntry {
                phrase: "diagnosis codes".into(),
                cui: "C0011900".into(),
                semantic_type: "T033".into(),
            },
            LexiconEntry {
                phrase: "lab value".into(),
                cui: "C0022885".into(),
                semantic_type: "T059".into(),
            },
            LexiconEntry {
                phrase: "unrelated".into(),
                cui: "C9".into(),
                semantic_type: "T9".into(),
            },
        ]);
        let annotations = annotate_with_lexicon(&corpus, &lexicon);
        let cuis: Vec<&str> = annotations.iter().map(|a| a.cui.as_str()).collect();
        assert_eq!(cuis, vec!["C0011900", "C0022885"]);
    }

    #[test]
    fn bundled_lexicon_parses() {
        assert!(bundled_lexicon().entries().len() >= 20);
    }

    #[test]
    fn annotations_jsonl_round_trip() {
        let annotations = vec![annotation("f1", "C1", "T1"), annotation("f2", "C2", "T2")];
        let text = annotations_to_jsonl(&annotations);
        let parsed = annotations_from_str(&text, "roundtrip").unwrap();
        assert_eq!(annotations, parsed);
    }
}
