//! Search for marker words: equal-length, pairwise mutually unbordered words
//! of a language whose common syntactic-monoid image is idempotent and
//! accepting, so that arbitrary concatenations of them stay in the language.

use thiserror::Error;

use super::{is_unbordered, no_prefix_is_suffix, Dfa, SyntacticMonoid, Word};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no {count} marker words of a common length <= {max_len} exist")]
pub struct MarkerSearchError {
    pub count: usize,
    pub max_len: usize,
}

/// Finds `count` accepted words, all of one length at most `max_len`, that
/// are pairwise mutually unbordered (including each against itself), share
/// one idempotent accepting syntactic-monoid image, and whose concatenations
/// up to four blocks are accepted. Returns the lexicographically first such
/// set at the smallest admissible length.
pub fn find_marker_words(
    d: &Dfa,
    count: usize,
    max_len: usize,
) -> Result<Vec<Word>, MarkerSearchError> {
    assert!(count >= 1, "marker search requires count >= 1");
    let monoid = SyntacticMonoid::of(d);
    for len in 1..=max_len {
        let words: Vec<Word> = d
            .enumerate(len)
            .into_iter()
            .filter(|w| w.len() == len)
            .filter(|w| is_unbordered(w) == Ok(true))
            .collect();

        // group by monoid image; only idempotent accepting images can give
        // concatenation closure
        let mut candidates_by_image: std::collections::BTreeMap<usize, Vec<&Word>> =
            std::collections::BTreeMap::new();
        for w in &words {
            let img = monoid.word_image(w);
            if monoid.is_idempotent(img) && monoid.image_accepts(img) {
                candidates_by_image.entry(img).or_default().push(w);
            }
        }

        for group in candidates_by_image.values() {
            if group.len() < count {
                continue;
            }
            let mut chosen: Vec<&Word> = Vec::new();
            if search(group, count, 0, &mut chosen, d) {
                return Ok(chosen.into_iter().cloned().collect());
            }
        }
    }
    Err(MarkerSearchError { count, max_len })
}

fn mutually_unbordered(u: &Word, v: &Word) -> bool {
    no_prefix_is_suffix(u, v) && no_prefix_is_suffix(v, u)
}

fn search<'a>(
    group: &[&'a Word],
    count: usize,
    from: usize,
    chosen: &mut Vec<&'a Word>,
    d: &Dfa,
) -> bool {
    if chosen.len() == count {
        return concatenation_closure(chosen, d);
    }
    for i in from..group.len() {
        let w = group[i];
        if chosen.iter().all(|c| mutually_unbordered(c, w)) {
            chosen.push(w);
            if search(group, count, i + 1, chosen, d) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Operational check: every concatenation of up to four blocks from the set
/// is accepted. Together with idempotence of the shared image this covers
/// arbitrarily long concatenations.
fn concatenation_closure(words: &[&Word], d: &Dfa) -> bool {
    fn rec(words: &[&Word], d: &Dfa, acc: &Word, blocks: usize) -> bool {
        if !d.accepts(acc) {
            return false;
        }
        if blocks == 0 {
            return true;
        }
        words.iter().all(|w| rec(words, d, &acc.concat(w), blocks - 1))
    }
    words.iter().all(|w| rec(words, d, w, 3))
}
