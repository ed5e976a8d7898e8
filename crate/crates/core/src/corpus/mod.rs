//! The annotated fragment corpus: design-pattern labels, fragments, text
//! normalization, train/test splitting, and a synthetic fixture generator.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

mod preprocess;
mod split;
mod synthetic;

pub use preprocess::{
    build_vocabulary, default_stopwords, preprocess, StopwordList, TokenList, Vocabulary,
    NUMBER_TOKEN,
};
pub use split::{split_corpus, Split};
pub use synthetic::{
    bundled_synthetic_config, generate_synthetic, SyntheticClassConfig, SyntheticConfig,
};

/// The six phenotyping design-pattern classes.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum DesignPattern {
    ConfirmDiseaseWasChecked,
    RuleOfN,
    UseDistinctDates,
    WhereDidItHappen,
    CredentialsOfTheActor,
    CheckForNegation,
}

impl DesignPattern {
    /// All six patterns in canonical order.
    pub const ALL: [DesignPattern; 6] = [
        DesignPattern::ConfirmDiseaseWasChecked,
        DesignPattern::RuleOfN,
        DesignPattern::UseDistinctDates,
        DesignPattern::WhereDidItHappen,
        DesignPattern::CredentialsOfTheActor,
        DesignPattern::CheckForNegation,
    ];

    /// The enumeration name, as used in corpus files.
    pub fn name(self) -> &'static str {
        match self {
            DesignPattern::ConfirmDiseaseWasChecked => "ConfirmDiseaseWasChecked",
            DesignPattern::RuleOfN => "RuleOfN",
            DesignPattern::UseDistinctDates => "UseDistinctDates",
            DesignPattern::WhereDidItHappen => "WhereDidItHappen",
            DesignPattern::CredentialsOfTheActor => "CredentialsOfTheActor",
            DesignPattern::CheckForNegation => "CheckForNegation",
        }
    }

    /// Human-readable label.
    pub fn display_name(self) -> &'static str {
        match self {
            DesignPattern::ConfirmDiseaseWasChecked => "Confirm Disease Was Checked",
            DesignPattern::RuleOfN => "Rule of N",
            DesignPattern::UseDistinctDates => "Use Distinct Dates",
            DesignPattern::WhereDidItHappen => "Where Did It Happen",
            DesignPattern::CredentialsOfTheActor => "Credentials of the Actor",
            DesignPattern::CheckForNegation => "Check For Negation",
        }
    }

    /// Position of this pattern in [`DesignPattern::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|p| *p == self).unwrap()
    }

    /// Parses an enumeration name.
    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// The bundled description of this pattern.
    pub fn description(self) -> &'static str {
        &bundled_pattern_descriptions()[&self]
    }
}

#[derive(Debug, Deserialize)]
struct PatternRecord {
    id: String,
    #[allow(dead_code)]
    name: String,
    description: String,
}

/// Descriptions for the six patterns, loaded from the bundled label file.
pub fn bundled_pattern_descriptions() -> &'static BTreeMap<DesignPattern, String> {
    static DESCRIPTIONS: OnceLock<BTreeMap<DesignPattern, String>> = OnceLock::new();
    DESCRIPTIONS.get_or_init(|| {
        let records: Vec<PatternRecord> =
            serde_json::from_str(include_str!("../../data/design_patterns.json"))
                .expect("bundled label file is well-formed");
        let map: BTreeMap<DesignPattern, String> = records
            .into_iter()
            .map(|r| {
                let pattern = DesignPattern::parse(&r.id).expect("bundled label id is valid");
                (pattern, r.description)
            })
            .collect();
        assert_eq!(map.len(), DesignPattern::ALL.len(), "bundled label file covers all patterns");
        map
    })
}

/// One annotated sentence fragment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub id: String,
    pub text: String,
    pub site: String,
    pub phenotype: String,
    pub labels: BTreeSet<DesignPattern>,
}

impl Fragment {
    fn validate(&self) -> Result<()> {
        if self.text.is_empty() {
            return Err(Error::validation(format!(
                "fragment `{}` has empty text",
                self.id
            )));
        }
        if self.labels.is_empty() {
            return Err(Error::validation(format!(
                "fragment `{}` has no labels",
                self.id
            )));
        }
        Ok(())
    }
}

/// An ordered collection of fragments with derived site and phenotype sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    fragments: Vec<Fragment>,
    sites: BTreeSet<String>,
    phenotypes: BTreeSet<String>,
}

impl Corpus {
    /// Builds a corpus, validating fragment invariants and id uniqueness.
    pub fn new(fragments: Vec<Fragment>) -> Result<Self> {
        let mut seen = HashSet::new();
        for fragment in &fragments {
            fragment.validate()?;
            if !seen.insert(fragment.id.as_str()) {
                return Err(Error::validation(format!(
                    "duplicate fragment id `{}`",
                    fragment.id
                )));
            }
        }
        let sites = fragments.iter().map(|f| f.site.clone()).collect();
        let phenotypes = fragments.iter().map(|f| f.phenotype.clone()).collect();
        Ok(Corpus {
            fragments,
            sites,
            phenotypes,
        })
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn sites(&self) -> &BTreeSet<String> {
        &self.sites
    }

    pub fn phenotypes(&self) -> &BTreeSet<String> {
        &self.phenotypes
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Looks a fragment up by id.
    pub fn get(&self, id: &str) -> Option<&Fragment> {
        self.fragments.iter().find(|f| f.id == id)
    }

    /// Number of fragments carrying each pattern label.
    pub fn label_counts(&self) -> BTreeMap<DesignPattern, usize> {
        let mut counts = BTreeMap::new();
        for fragment in &self.fragments {
            for label in &fragment.labels {
                *counts.entry(*label).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Parses a JSON Lines corpus file.
    pub fn parse_jsonl(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path)?;
        Self::from_jsonl_str(&content, &path.display().to_string())
    }

    /// Parses JSON Lines corpus content; `origin` names the source in errors.
    pub fn from_jsonl_str(content: &str, origin: &str) -> Result<Self> {
        let mut fragments = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: RawFragment = serde_json::from_str(line)
                .map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
            fragments.push(record.into_fragment()?);
        }
        Self::new(fragments)
    }

    /// Serializes the corpus back to JSON Lines, one fragment per line.
    pub fn to_jsonl_string(&self) -> String {
        let mut out = String::new();
        for fragment in &self.fragments {
            out.push_str(&serde_json::to_string(fragment).expect("fragment serializes"));
            out.push('\n');
        }
        out
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_jsonl_string())?;
        Ok(())
    }
}

/// Raw record shape; labels are validated strings rather than enum values so
/// that an unknown label surfaces as a label error, not a serde error.
#[derive(Deserialize)]
struct RawFragment {
    id: String,
    text: String,
    site: String,
    phenotype: String,
    labels: Vec<String>,
}

impl RawFragment {
    fn into_fragment(self) -> Result<Fragment> {
        let mut labels = BTreeSet::new();
        for label in &self.labels {
            labels.insert(DesignPattern::parse(label)?);
        }
        Ok(Fragment {
            id: self.id,
            text: self.text,
            site: self.site,
            phenotype: self.phenotype,
            labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fragment(id: &str, text: &str, site: &str, pheno: &str, labels: &[DesignPattern]) -> Fragment {
        Fragment {
            id: id.to_string(),
            text: text.to_string(),
            site: site.to_string(),
            phenotype: pheno.to_string(),
            labels: labels.iter().copied().collect(),
        }
    }

    #[test]
    fn exactly_six_patterns_with_bundled_descriptions() {
        assert_eq!(DesignPattern::ALL.len(), 6);
        let descriptions = bundled_pattern_descriptions();
        assert_eq!(descriptions.len(), 6);
        for pattern in DesignPattern::ALL {
            assert!(!pattern.description().is_empty());
        }
        assert!(DesignPattern::RuleOfN
            .description()
            .starts_with("More evidence is often required"));
        assert!(DesignPattern::WhereDidItHappen
            .description()
            .contains("inpatient or outpatient"));
    }

    #[test]
    fn parse_empty_file_gives_empty_corpus() {
        let corpus = Corpus::from_jsonl_str("", "test").unwrap();
        assert!(corpus.is_empty());
        assert!(corpus.sites().is_empty());
        assert!(corpus.phenotypes().is_empty());
    }

    #[test]
    fn parse_single_record() {
        let line = r#"{"id":"f1","text":"requires 2 codes","site":"Mayo","phenotype":"T2DM","labels":["RuleOfN"]}"#;
        let corpus = Corpus::from_jsonl_str(line, "test").unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.sites().iter().collect::<Vec<_>>(), vec!["Mayo"]);
        assert_eq!(
            corpus.fragments()[0].labels,
            [DesignPattern::RuleOfN].into_iter().collect()
        );
    }

    #[test]
    fn unknown_label_is_rejected() {
        let line = r#"{"id":"f1","text":"x","site":"s","phenotype":"p","labels":["FooPattern"]}"#;
        let err = Corpus::from_jsonl_str(line, "test").unwrap_err();
        assert!(matches!(err, Error::UnknownLabel(l) if l == "FooPattern"));
    }

    #[test]
    fn malformed_line_error_names_line_number() {
        let content = concat!(
            r#"{"id":"f1","text":"x","site":"s","phenotype":"p","labels":["RuleOfN"]}"#,
            "\n",
            "{not json",
        );
        let err = Corpus::from_jsonl_str(content, "bad.jsonl").unwrap_err();
        match err {
            Error::Parse { origin, line, .. } => {
                assert_eq!(origin, "bad.jsonl");
                assert_eq!(line, 2);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_and_empty_fields_are_rejected() {
        let a = fragment("f1", "x", "s", "p", &[DesignPattern::RuleOfN]);
        let b = fragment("f1", "y", "s", "p", &[DesignPattern::RuleOfN]);
        assert!(Corpus::new(vec![a.clone(), b]).is_err());

        let empty_text = fragment("f2", "", "s", "p", &[DesignPattern::RuleOfN]);
        assert!(Corpus::new(vec![empty_text]).is_err());

        let no_labels = fragment("f3", "x", "s", "p", &[]);
        assert!(Corpus::new(vec![no_labels]).is_err());
    }

    #[test]
    fn jsonl_round_trip_is_field_exact() {
        let corpus = Corpus::new(vec![
            fragment(
                "f1",
                "requires 2 diagnosis codes",
                "Mayo",
                "T2DM",
                &[DesignPattern::RuleOfN, DesignPattern::UseDistinctDates],
            ),
            fragment(
                "f2",
                "entered by a physician",
                "Marshfield",
                "Cataract",
                &[DesignPattern::CredentialsOfTheActor],
            ),
        ])
        .unwrap();
        let text = corpus.to_jsonl_string();
        let reparsed = Corpus::from_jsonl_str(&text, "roundtrip").unwrap();
        assert_eq!(corpus, reparsed);
    }
}
