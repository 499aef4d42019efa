//! Alphabets, words, DFAs and the regular-language machinery used by every
//! other module: minimization, enumeration, local testability, syntactic
//! monoids, and unbordered-word search.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod dfa;
mod markers;
mod monoid;
mod regex;
mod testable;

pub use dfa::Dfa;
pub use markers::{find_marker_words, MarkerSearchError};
pub use monoid::SyntacticMonoid;
pub use regex::parse_regex;
pub use testable::{is_locally_testable, local_testability_counterexample};

#[cfg(test)]
pub(crate) use testable::even_zero_one_count;

/// Index of a symbol inside its [`Alphabet`].
pub type SymbolId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LangError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet contains duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("alphabets do not match")]
    AlphabetMismatch,
    #[error("the empty word has no borders")]
    EmptyWord,
    #[error("start state {start} out of range 0..{states}")]
    BadStartState { start: usize, states: usize },
    #[error("accepting state {state} out of range 0..{states}")]
    BadAcceptingState { state: usize, states: usize },
    #[error("transition table has wrong shape (expected {states} rows of {symbols} entries)")]
    BadTransitionShape { states: usize, symbols: usize },
    #[error("transition target {target} out of range 0..{states}")]
    BadTransitionTarget { target: usize, states: usize },
    #[error("cannot parse regular expression: {0}")]
    Regex(String),
}

/// An ordered, duplicate-free list of symbols. The order is significant: it
/// fixes the row/column indexing of every matrix derived downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, SymbolId>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, LangError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(LangError::EmptyAlphabet);
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(LangError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// The binary alphabet `0, 1`.
    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, id: SymbolId) -> &str {
        &self.symbols[id]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    pub fn id(&self, symbol: &str) -> Option<SymbolId> {
        self.index.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    /// Extends the alphabet with extra symbols; existing ids are unchanged.
    pub fn extend<I, S>(&self, extra: I) -> Result<Self, LangError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols = self.symbols.clone();
        symbols.extend(extra.into_iter().map(Into::into));
        Alphabet::new(symbols)
    }

    /// Renames every symbol through `f`, keeping the order.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<Self, LangError> {
        Alphabet::new(self.symbols.iter().map(|s| f(s)))
    }

    /// Parses a word in which every character is a single-character symbol.
    pub fn word_from_str(&self, text: &str) -> Result<Word, LangError> {
        text.chars()
            .map(|c| {
                let s = c.to_string();
                self.id(&s).ok_or(LangError::UnknownSymbol(s))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Builds a word from explicit symbol names.
    pub fn word_from_symbols<'a, I>(&self, symbols: I) -> Result<Word, LangError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        symbols
            .into_iter()
            .map(|s| self.id(s).ok_or_else(|| LangError::UnknownSymbol(s.into())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Renders a word using this alphabet's symbol names. Multi-character
    /// symbols are separated by spaces, single characters are concatenated.
    pub fn format(&self, w: &Word) -> String {
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            w.0.iter().map(|&i| self.symbols[i].as_str()).collect()
        } else {
            w.0.iter()
                .map(|&i| self.symbols[i].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

/// A finite word: a sequence of symbol ids over some [`Alphabet`].
///
/// Ordering is length-then-lexicographic by symbol id, which is the canonical
/// enumeration order everywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<SymbolId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn suffix(&self, n: usize) -> Word {
        let len = self.0.len();
        Word(self.0[len - n.min(len)..].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    /// All factors (contiguous subwords) of length exactly `n`.
    pub fn factors(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        self.0.windows(n).map(|w| Word(w.to_vec()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// True iff no proper non-empty prefix of `w` is also a suffix of `w`.
pub fn is_unbordered(w: &Word) -> Result<bool, LangError> {
    if w.is_empty() {
        return Err(LangError::EmptyWord);
    }
    for k in 1..w.len() {
        if w.0[..k] == w.0[w.len() - k..] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff no non-empty proper prefix of `u` is a suffix of `v`.
pub(crate) fn no_prefix_is_suffix(u: &Word, v: &Word) -> bool {
    for k in 1..u.len() {
        if k <= v.len() && u.0[..k] == v.0[v.len() - k..] {
            return false;
        }
    }
    true
}
