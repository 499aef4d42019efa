//! Veelike actions on the language L = ε + (0+1)*1: local
//! prefix-substitution rules, their construction from V and 2V elements by
//! conjugation through the bijection between L and finitely-supported
//! sequences, and brute-force verification of the defining property.
//!
//! A rule of depth `n` rewrites a word `uv ∈ L` with `|u| = n` to
//! `long(u)·v`, and rewrites the finitely many shorter words of L through an
//! explicit short table.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{parse_regex, Dfa};
use crate::thompson::{all_words, EventuallyZero, VElement};

mod pair;

pub use pair::{PairRuleViolation, PairVeelikeRule, WordPair};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VeelikeError {
    #[error("word {0:?} is not in the language")]
    NotInLanguage(String),
    #[error("rule has no entry for {0:?}")]
    MissingEntry(String),
}

/// The language ε + (0+1)*1 carried by every rule in this module, as a DFA
/// over the alphabet 0,1.
pub fn target_language() -> Dfa {
    parse_regex("eps+(0+1)*1", None).expect("fixed pattern compiles")
}

/// Membership in ε + (0+1)*1.
pub fn language_contains(w: &str) -> bool {
    w.bytes().all(|b| b == b'0' || b == b'1') && (w.is_empty() || w.ends_with('1'))
}

/// The bijection sending a word of L to the point it spells followed by
/// zeros. Words of L are exactly the canonical heads, so this is the
/// identity on representations.
pub fn word_to_point(w: &str) -> Result<EventuallyZero, VeelikeError> {
    if !language_contains(w) {
        return Err(VeelikeError::NotInLanguage(w.to_string()));
    }
    Ok(EventuallyZero::from_canonical(w).expect("language words are canonical heads"))
}

/// Inverse of [`word_to_point`].
pub fn point_to_word(x: &EventuallyZero) -> String {
    x.head().to_string()
}

/// A local rule acting on L: words of length at least `n` have their
/// length-`n` prefix substituted through `long`, shorter words are mapped
/// through `short`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeelikeRule {
    n: usize,
    short: BTreeMap<String, String>,
    long: BTreeMap<String, String>,
}

impl VeelikeRule {
    pub fn new(
        n: usize,
        short: BTreeMap<String, String>,
        long: BTreeMap<String, String>,
    ) -> Self {
        VeelikeRule { n, short, long }
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn short_table(&self) -> &BTreeMap<String, String> {
        &self.short
    }

    pub fn long_table(&self) -> &BTreeMap<String, String> {
        &self.long
    }

    /// Builds the rule realizing the action of a V element on L. The depth
    /// is one more than the tree-pair depth, so that the substituted prefix
    /// never swallows the final 1 of a word.
    pub fn from_element(g: &VElement) -> VeelikeRule {
        let g = g.reduce();
        let d = g.depth();
        let f = g.local_rule(d).expect("rule depth equals element depth");
        let mut long = BTreeMap::new();
        for u0 in all_words(d) {
            let image = f.image(&u0).expect("local rule is total");
            for a in ['0', '1'] {
                long.insert(format!("{u0}{a}"), format!("{image}{a}"));
            }
        }
        let mut short = BTreeMap::new();
        for w in short_language_words(d + 1) {
            let x = word_to_point(&w).expect("enumerated words lie in L");
            short.insert(w, point_to_word(&g.apply(&x)));
        }
        VeelikeRule {
            n: d + 1,
            short,
            long,
        }
    }

    pub fn identity() -> VeelikeRule {
        VeelikeRule::from_element(&VElement::identity())
    }

    /// The involution exchanging ε and 1 while fixing every other word of L.
    /// It is veelike but does not come from the V action.
    pub fn eps_one_involution() -> VeelikeRule {
        let mut short = BTreeMap::new();
        short.insert(String::new(), "1".to_string());
        short.insert("1".to_string(), String::new());
        let long = all_words(2).into_iter().map(|u| (u.clone(), u)).collect();
        VeelikeRule { n: 2, short, long }
    }

    pub fn apply(&self, w: &str) -> Result<String, VeelikeError> {
        if !language_contains(w) {
            return Err(VeelikeError::NotInLanguage(w.to_string()));
        }
        if w.len() < self.n {
            self.short
                .get(w)
                .cloned()
                .ok_or_else(|| VeelikeError::MissingEntry(w.to_string()))
        } else {
            let (u, v) = w.split_at(self.n);
            let image = self
                .long
                .get(u)
                .ok_or_else(|| VeelikeError::MissingEntry(u.to_string()))?;
            Ok(format!("{image}{v}"))
        }
    }

    /// Sweeps every word of the language up to `max_len` and checks that the
    /// rule is a well-defined bijection acting by prefix substitution:
    /// tables are total, images stay in the language, prefix substitution is
    /// consistent, no two words collide, and every image value short enough
    /// to force a preimage inside the window is hit.
    pub fn verify(&self, lang: &Dfa, max_len: usize) -> Verification {
        let alphabet = lang.alphabet().clone();
        let words: Vec<String> = lang
            .enumerate(max_len)
            .iter()
            .map(|w| alphabet.format(w))
            .collect();
        let in_lang = |w: &str| match alphabet.word_from_str(w) {
            Ok(word) => lang.accepts(&word),
            Err(_) => false,
        };

        // totality
        for w in &words {
            if w.len() < self.n && !self.short.contains_key(w.as_str()) {
                return Verification::Fail(RuleViolation::MissingEntry { word: w.clone() });
            }
        }
        for u in all_words(self.n) {
            if !self.long.contains_key(&u) {
                return Verification::Fail(RuleViolation::MissingEntry { word: u });
            }
        }

        // images in the language, and prefix substitution is consistent
        for w in &words {
            let image = match self.apply(w) {
                Ok(i) => i,
                Err(VeelikeError::MissingEntry(word) | VeelikeError::NotInLanguage(word)) => {
                    return Verification::Fail(RuleViolation::MissingEntry { word })
                }
            };
            if !in_lang(&image) {
                return Verification::Fail(RuleViolation::ImageNotInLanguage {
                    input: w.clone(),
                    output: image,
                });
            }
            if w.len() >= self.n {
                let (u, v) = w.split_at(self.n);
                let expected = format!("{}{}", self.long[u], v);
                if image != expected {
                    return Verification::Fail(RuleViolation::SubstitutionMismatch {
                        prefix: u.to_string(),
                        tail: v.to_string(),
                        expected,
                        actual: image,
                    });
                }
            }
        }

        // injectivity on the window
        let mut seen: HashMap<String, String> = HashMap::new();
        for w in &words {
            let image = self.apply(w).expect("checked above");
            if let Some(first) = seen.get(&image) {
                return Verification::Fail(RuleViolation::NotInjective {
                    first: first.clone(),
                    second: w.clone(),
                    image,
                });
            }
            seen.insert(image, w.clone());
        }

        // surjectivity onto the shrunk window: any global preimage of a word
        // this short would itself fit in the window
        let shrink = self
            .long
            .values()
            .map(|img| self.n.saturating_sub(img.len()))
            .max()
            .unwrap_or(0);
        if max_len >= self.n + shrink {
            let bound = max_len - shrink;
            for y in &words {
                if y.len() <= bound && !seen.contains_key(y.as_str()) {
                    return Verification::Fail(RuleViolation::NotSurjective { missing: y.clone() });
                }
            }
        }

        Verification::Pass
    }
}

/// Words of L strictly shorter than `n`, in length-then-lexicographic order.
pub(crate) fn short_language_words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for len in 1..n {
        for mut w in all_words(len - 1) {
            w.push('1');
            out.push(w);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Outcome of a verification sweep, carrying the first violation found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification<V = RuleViolation> {
    Pass,
    Fail(V),
}

impl<V> Verification<V> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verification::Pass)
    }
}

/// First defect found by [`VeelikeRule::verify`], in sweep order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleViolation {
    MissingEntry {
        word: String,
    },
    ImageNotInLanguage {
        input: String,
        output: String,
    },
    SubstitutionMismatch {
        prefix: String,
        tail: String,
        expected: String,
        actual: String,
    },
    NotInjective {
        first: String,
        second: String,
        image: String,
    },
    NotSurjective {
        missing: String,
    },
}

/// First word of the language (length at most `max_len`) moved by the rule,
/// if any. A non-identity action must move some short word.
pub fn faithfulness_witness(
    rule: &VeelikeRule,
    lang: &Dfa,
    max_len: usize,
) -> Option<String> {
    let alphabet = lang.alphabet().clone();
    lang.enumerate(max_len)
        .iter()
        .map(|w| alphabet.format(w))
        .find(|w| rule.apply(w).ok().as_deref() != Some(w.as_str()))
}
