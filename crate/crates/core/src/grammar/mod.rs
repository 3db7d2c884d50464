//! Toy pregroup fragment: lexicon, parsing into sentence diagrams, corpus
//! generation and labelling, and relative-pronoun questions.

mod corpus;
mod parse;
mod question;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{types, Diagram, DiagramError, TypeList};

pub use corpus::{generate_all, load_corpus, write_corpus, CorpusRecord, LabeledCorpus, Labelled, Split, Template, VerbRule, World};
pub use parse::{parse, parse_as};
pub use question::{build_question, parse_question};

#[derive(Debug, Error, PartialEq)]
pub enum GrammarError {
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("no reduction to {target}; stuck at {stuck}")]
    NoReduction { target: TypeList, stuck: TypeList },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error("bad corpus split: {0}")]
    Split(String),
    #[error("bad lexicon: {0}")]
    Lexicon(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pos {
    Noun,
    TransitiveVerb,
    Copula,
    Adjective,
    RelativePronoun,
}

impl Pos {
    /// Pregroup type of each part of speech. A predicative adjective is a
    /// plain noun-typed state, so `n · nʳsnˡ · n` reduces to `s`.
    pub fn pregroup_type(self) -> TypeList {
        match self {
            Pos::Noun | Pos::Adjective => types("n"),
            Pos::TransitiveVerb | Pos::Copula => types("n^r s n^l"),
            Pos::RelativePronoun => types("n^r n s^l n"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub word: String,
    pub pos: Pos,
    #[serde(skip)]
    pub pregroup_type: TypeList,
}

impl LexiconEntry {
    pub fn new(word: &str, pos: Pos) -> Self {
        Self {
            word: word.to_string(),
            pos,
            pregroup_type: pos.pregroup_type(),
        }
    }
}

/// Words in file order; lookups are linear, the vocabulary is tiny.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

impl Lexicon {
    pub fn new(entries: Vec<LexiconEntry>) -> Result<Self, GrammarError> {
        for (i, e) in entries.iter().enumerate() {
            if e.word.is_empty() || e.word.chars().any(char::is_whitespace) {
                return Err(GrammarError::Lexicon(format!("bad word {:?}", e.word)));
            }
            if entries[..i].iter().any(|x| x.word == e.word) {
                return Err(GrammarError::Lexicon(format!("duplicate word {:?}", e.word)));
            }
        }
        Ok(Self { entries })
    }

    /// The six-word vocabulary plus `is` and `who`.
    pub fn toy() -> Self {
        use Pos::*;
        let words = [
            ("Alice", Noun),
            ("Bob", Noun),
            ("loves", TransitiveVerb),
            ("hates", TransitiveVerb),
            ("is", Copula),
            ("rich", Adjective),
            ("silly", Adjective),
            ("who", RelativePronoun),
        ];
        Self::new(words.iter().map(|&(w, p)| LexiconEntry::new(w, p)).collect()).unwrap()
    }

    /// JSON array of `{word, pos}`.
    pub fn from_json(text: &str) -> Result<Self, GrammarError> {
        let raw: Vec<LexiconEntry> = serde_json::from_str(text).map_err(|e| GrammarError::Lexicon(e.to_string()))?;
        Self::new(raw.into_iter().map(|e| LexiconEntry::new(&e.word, e.pos)).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("lexicon serialises")
    }

    pub fn get(&self, word: &str) -> Option<&LexiconEntry> {
        self.entries.iter().find(|e| e.word == word)
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn words_with(&self, pos: Pos) -> Vec<&str> {
        self.entries.iter().filter(|e| e.pos == pos).map(|e| e.word.as_str()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Tokens with their diagram. Full sentences have codomain `[s]`; noun
/// phrases used to build questions have `[n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub diagram: Diagram,
}

impl Sentence {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}
