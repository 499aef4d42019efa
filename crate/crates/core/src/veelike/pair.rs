//! Veelike rules on the pair language L × L, built from 2V elements by
//! conjugating through the word/point bijection in each coordinate.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::lang::Dfa;
use crate::thompson::{all_words, EventuallyZero, TwoVElement};

use super::{
    language_contains, short_language_words, word_to_point, VeelikeError, Verification,
};

/// A pair of binary words, one per coordinate of the pair language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WordPair {
    pub left: String,
    pub right: String,
}

impl WordPair {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        WordPair {
            left: left.into(),
            right: right.into(),
        }
    }

    /// Componentwise prefixes of length at most `n` (the whole word when
    /// shorter).
    pub fn alpha(&self, n: usize) -> WordPair {
        WordPair {
            left: self.left[..n.min(self.left.len())].to_string(),
            right: self.right[..n.min(self.right.len())].to_string(),
        }
    }

    /// Componentwise tails complementary to [`WordPair::alpha`], so that
    /// `alpha(n) · omega(n)` reassembles the pair.
    pub fn omega(&self, n: usize) -> WordPair {
        WordPair {
            left: self.left[n.min(self.left.len())..].to_string(),
            right: self.right[n.min(self.right.len())..].to_string(),
        }
    }

    /// Componentwise concatenation.
    pub fn concat(&self, other: &WordPair) -> WordPair {
        WordPair {
            left: format!("{}{}", self.left, other.left),
            right: format!("{}{}", self.right, other.right),
        }
    }

    pub fn in_language(&self) -> bool {
        language_contains(&self.left) && language_contains(&self.right)
    }
}

impl std::fmt::Display for WordPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |s: &str| if s.is_empty() { "ε".to_string() } else { s.to_string() };
        write!(f, "({}, {})", show(&self.left), show(&self.right))
    }
}

/// First defect found by [`PairVeelikeRule::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairRuleViolation {
    MissingEntry { key: WordPair },
    ImageNotInLanguage { input: WordPair, output: WordPair },
    NotInjective { first: WordPair, second: WordPair, image: WordPair },
    NotSurjective { missing: WordPair },
}

/// A local rule on the pair language: the `alpha`-prefix of a pair is
/// substituted through the table and the `omega`-tail is carried along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVeelikeRule {
    n: usize,
    table: BTreeMap<(String, String), (String, String)>,
}

impl PairVeelikeRule {
    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &BTreeMap<(String, String), (String, String)> {
        &self.table
    }

    pub fn identity() -> PairVeelikeRule {
        PairVeelikeRule::from_element(&TwoVElement::identity())
    }

    /// Builds the rule realizing the action of a 2V element on L × L. As in
    /// the single-word case, the rule depth exceeds the rectangle depth by
    /// one so that substituted prefixes never swallow a final 1.
    pub fn from_element(g: &TwoVElement) -> PairVeelikeRule {
        let d = g.depth();
        let n = d + 1;
        let f = g.local_rule(d).expect("rule depth equals element depth");
        let trim = |s: &str| {
            EventuallyZero::new(s)
                .expect("binary image")
                .head()
                .to_string()
        };
        let pad = |w: &str| format!("{w}{}", "0".repeat(d - w.len()));

        let mut keys: Vec<(String, bool)> = Vec::new(); // (component, is_long)
        for u in all_words(n) {
            keys.push((u, true));
        }
        for w in short_language_words(n) {
            keys.push((w, false));
        }

        let mut table = BTreeMap::new();
        for (ku, ku_long) in &keys {
            for (kv, kv_long) in &keys {
                let value = match (ku_long, kv_long) {
                    (true, true) => {
                        let (u0, a) = ku.split_at(d);
                        let (v0, b) = kv.split_at(d);
                        let (f1, f2) = f.image(u0, v0).expect("local rule is total");
                        (format!("{f1}{a}"), format!("{f2}{b}"))
                    }
                    (true, false) => {
                        let (u0, a) = ku.split_at(d);
                        let w = pad(kv);
                        let (f1, f2) = f.image(u0, &w).expect("local rule is total");
                        (format!("{f1}{a}"), trim(f2))
                    }
                    (false, true) => {
                        let w = pad(ku);
                        let (v0, b) = kv.split_at(d);
                        let (f1, f2) = f.image(&w, v0).expect("local rule is total");
                        (trim(f1), format!("{f2}{b}"))
                    }
                    (false, false) => {
                        let x = word_to_point(ku).expect("short keys lie in L");
                        let y = word_to_point(kv).expect("short keys lie in L");
                        let (ix, iy) = g.apply(&x, &y);
                        (ix.head().to_string(), iy.head().to_string())
                    }
                };
                table.insert((ku.clone(), kv.clone()), value);
            }
        }
        PairVeelikeRule { n, table }
    }

    pub fn apply(&self, p: &WordPair) -> Result<WordPair, VeelikeError> {
        if !p.in_language() {
            return Err(VeelikeError::NotInLanguage(p.to_string()));
        }
        let head = p.alpha(self.n);
        let tail = p.omega(self.n);
        let (vl, vr) = self
            .table
            .get(&(head.left.clone(), head.right.clone()))
            .ok_or_else(|| VeelikeError::MissingEntry(head.to_string()))?;
        Ok(WordPair {
            left: format!("{vl}{}", tail.left),
            right: format!("{vr}{}", tail.right),
        })
    }

    /// Pairwise analogue of the single-word verification sweep, over all
    /// pairs whose components have length at most `max_len`.
    pub fn verify(
        &self,
        left: &Dfa,
        right: &Dfa,
        max_len: usize,
    ) -> Verification<PairRuleViolation> {
        let la = left.alphabet().clone();
        let ra = right.alphabet().clone();
        let left_words: Vec<String> = left.enumerate(max_len).iter().map(|w| la.format(w)).collect();
        let right_words: Vec<String> =
            right.enumerate(max_len).iter().map(|w| ra.format(w)).collect();
        let in_left = |w: &str| la.word_from_str(w).map(|x| left.accepts(&x)).unwrap_or(false);
        let in_right = |w: &str| ra.word_from_str(w).map(|x| right.accepts(&x)).unwrap_or(false);

        // totality on realized keys
        for wl in &left_words {
            for wr in &right_words {
                let key = WordPair::new(wl.clone(), wr.clone()).alpha(self.n);
                if !self.table.contains_key(&(key.left.clone(), key.right.clone())) {
                    return Verification::Fail(PairRuleViolation::MissingEntry { key });
                }
            }
        }

        // image membership and injectivity
        let mut seen: HashMap<(String, String), WordPair> = HashMap::new();
        for wl in &left_words {
            for wr in &right_words {
                let p = WordPair::new(wl.clone(), wr.clone());
                let image = self.apply(&p).expect("totality checked above");
                if !in_left(&image.left) || !in_right(&image.right) {
                    return Verification::Fail(PairRuleViolation::ImageNotInLanguage {
                        input: p,
                        output: image,
                    });
                }
                let key = (image.left.clone(), image.right.clone());
                if let Some(first) = seen.get(&key) {
                    return Verification::Fail(PairRuleViolation::NotInjective {
                        first: first.clone(),
                        second: p,
                        image,
                    });
                }
                seen.insert(key, p);
            }
        }

        // surjectivity onto the shrunk window, component shrink bounds taken
        // over long-key entries only (short preimages always fit)
        let mut shrink_l = 0;
        let mut shrink_r = 0;
        for ((ku, kv), (vl, vr)) in &self.table {
            if ku.len() == self.n {
                shrink_l = shrink_l.max(self.n.saturating_sub(vl.len()));
            }
            if kv.len() == self.n {
                shrink_r = shrink_r.max(self.n.saturating_sub(vr.len()));
            }
        }
        if max_len >= self.n + shrink_l.max(shrink_r) {
            for wl in &left_words {
                for wr in &right_words {
                    if wl.len() <= max_len - shrink_l
                        && wr.len() <= max_len - shrink_r
                        && !seen.contains_key(&(wl.clone(), wr.clone()))
                    {
                        return Verification::Fail(PairRuleViolation::NotSurjective {
                            missing: WordPair::new(wl.clone(), wr.clone()),
                        });
                    }
                }
            }
        }

        Verification::Pass
    }
}
