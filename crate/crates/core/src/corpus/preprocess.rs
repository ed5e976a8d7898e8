//! Text normalization: tokenization, digit masking, stop-word removal, and
//! the train-side vocabulary.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Token every maximal digit run is replaced with.
pub const NUMBER_TOKEN: &str = "_number";

/// A normalized token sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenList {
    tokens: Vec<String>,
}

impl TokenList {
    pub fn new(tokens: Vec<String>) -> Self {
        TokenList { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.tokens.iter()
    }

    /// Rejoins the tokens with single spaces.
    pub fn join(&self) -> String {
        self.tokens.join(" ")
    }
}

/// A fixed stop-word list.
#[derive(Clone, Debug, Default)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn empty() -> Self {
        StopwordList::default()
    }

    /// One word per line; blank lines ignored.
    pub fn from_lines(content: &str) -> Self {
        let words = content
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect();
        StopwordList { words }
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: Into<String>>(words: I) -> Self {
        StopwordList {
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn load(path: &std::path::Path) -> crate::Result<Self> {
        Ok(Self::from_lines(&std::fs::read_to_string(path)?))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The bundled English stop-word list.
pub fn default_stopwords() -> &'static StopwordList {
    static DEFAULT: OnceLock<StopwordList> = OnceLock::new();
    DEFAULT.get_or_init(|| StopwordList::from_lines(include_str!("../../data/stopwords.txt")))
}

fn is_token_char(c: char) -> bool {
    // Underscore counts as a word character so that the `_number` mask
    // survives re-tokenization (preprocess must be idempotent on its output).
    c.is_alphanumeric() || c == '_'
}

fn mask_digit_runs(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    let mut in_digits = false;
    for c in token.chars() {
        if c.is_ascii_digit() {
            if !in_digits {
                out.push_str(NUMBER_TOKEN);
                in_digits = true;
            }
        } else {
            in_digits = false;
            out.push(c);
        }
    }
    out
}

/// Normalizes raw text: lowercase, split on runs of non-word characters,
/// replace every maximal digit run with [`NUMBER_TOKEN`], drop stop words.
pub fn preprocess(text: &str, stopwords: &StopwordList) -> TokenList {
    let lowered = text.to_lowercase();
    let tokens = lowered
        .split(|c: char| !is_token_char(c))
        .filter(|t| !t.is_empty())
        .map(mask_digit_runs)
        .filter(|t| !stopwords.contains(t))
        .collect();
    TokenList::new(tokens)
}

/// An ordered token-to-index mapping with dense indices `0..len`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    tokens: Vec<String>,
    #[allow(clippy::struct_field_names)]
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Tokens in index order.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

impl From<Vec<String>> for Vocabulary {
    fn from(tokens: Vec<String>) -> Self {
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary { tokens, index }
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(vocab: Vocabulary) -> Self {
        vocab.tokens
    }
}

/// Builds a vocabulary in first-seen order over the given token lists.
///
/// Call this on training tokens only; test-time tokens outside the
/// vocabulary are dropped downstream.
pub fn build_vocabulary<'a, I>(lists: I) -> Vocabulary
where
    I: IntoIterator<Item = &'a TokenList>,
{
    let mut tokens = Vec::new();
    let mut index = HashMap::new();
    for list in lists {
        for token in list.iter() {
            if !index.contains_key(token) {
                index.insert(token.clone(), tokens.len());
                tokens.push(token.clone());
            }
        }
    }
    Vocabulary { tokens, index }
}
