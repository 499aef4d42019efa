//! The hull of a language: the smallest subshift containing every bi-infinite
//! concatenation of language words joined by a separator symbol (and, in pair
//! mode, of two-component segments around an inner separator). For locally
//! 2-testable languages this hull is a vertex shift, read off from the
//! bigrams of short witness strings; `cross_validate` compares the factor
//! language of the resulting matrix against a direct enumeration of
//! configuration windows.

use std::collections::BTreeSet;

use crate::lang::{local_testability_counterexample, Alphabet, Dfa, Word};

use super::{SubshiftError, VertexShift};

/// Description of a hull: a single language with a separator, or a pair of
/// languages around an inner separator, the left component written reversed.
#[derive(Debug, Clone)]
pub enum HullSpec {
    Single {
        language: Dfa,
        separator: String,
    },
    Pair {
        left: Dfa,
        right: Dfa,
        inner: String,
        separator: String,
        reverse_left: bool,
    },
}

impl HullSpec {
    pub fn single(language: Dfa, separator: &str) -> Result<Self, SubshiftError> {
        if language.alphabet().contains(separator) {
            return Err(SubshiftError::SeparatorClash(separator.to_string()));
        }
        Ok(HullSpec::Single {
            language,
            separator: separator.to_string(),
        })
    }

    pub fn pair(
        left: Dfa,
        right: Dfa,
        inner: &str,
        separator: &str,
        reverse_left: bool,
    ) -> Result<Self, SubshiftError> {
        for s in right.alphabet().symbols() {
            if left.alphabet().contains(s) {
                return Err(SubshiftError::AlphabetOverlap(s.to_string()));
            }
        }
        for sep in [inner, separator] {
            if left.alphabet().contains(sep) || right.alphabet().contains(sep) {
                return Err(SubshiftError::SeparatorClash(sep.to_string()));
            }
        }
        if inner == separator {
            return Err(SubshiftError::SeparatorClash(separator.to_string()));
        }
        Ok(HullSpec::Pair {
            left,
            right,
            inner: inner.to_string(),
            separator: separator.to_string(),
            reverse_left,
        })
    }

    /// Symbol order of the hull shift: content alphabet then separator, or
    /// left alphabet, inner separator, right alphabet, outer separator.
    pub fn hull_alphabet(&self) -> Alphabet {
        match self {
            HullSpec::Single {
                language,
                separator,
            } => language
                .alphabet()
                .extend([separator.as_str()])
                .expect("separator checked at construction"),
            HullSpec::Pair {
                left,
                right,
                inner,
                separator,
                ..
            } => {
                let names: Vec<String> = left
                    .alphabet()
                    .symbols()
                    .map(String::from)
                    .chain([inner.clone()])
                    .chain(right.alphabet().symbols().map(String::from))
                    .chain([separator.clone()])
                    .collect();
                Alphabet::new(names).expect("disjointness checked at construction")
            }
        }
    }

    /// Builds the vertex shift of the hull. Refuses languages that are not
    /// locally 2-testable, since the hull then need not be a vertex shift.
    pub fn vertex_shift(&self) -> Result<VertexShift, SubshiftError> {
        match self {
            HullSpec::Single {
                language,
                separator: _,
            } => {
                check_testable(language)?;
                let alphabet = self.hull_alphabet();
                let sep = alphabet.len() - 1;
                let words = language.enumerate(3);
                let mut matrix = vec![vec![0u64; alphabet.len()]; alphabet.len()];
                for w1 in &words {
                    for w2 in &words {
                        let mut s = vec![sep];
                        s.extend_from_slice(w1.symbols());
                        s.push(sep);
                        s.extend_from_slice(w2.symbols());
                        s.push(sep);
                        mark_bigrams(&s, &mut matrix);
                    }
                }
                VertexShift::new(alphabet, matrix)
            }
            HullSpec::Pair {
                left,
                right,
                reverse_left,
                ..
            } => {
                check_testable(left)?;
                check_testable(right)?;
                let alphabet = self.hull_alphabet();
                let inner = left.alphabet().len();
                let right_base = inner + 1;
                let sep = alphabet.len() - 1;
                let lwords: Vec<Vec<usize>> = left
                    .enumerate(3)
                    .iter()
                    .map(|w| oriented(w, *reverse_left, 0))
                    .collect();
                let rwords: Vec<Vec<usize>> = right
                    .enumerate(3)
                    .iter()
                    .map(|w| oriented(w, false, right_base))
                    .collect();
                let segments: Vec<Vec<usize>> = lwords
                    .iter()
                    .flat_map(|u| {
                        rwords.iter().map(move |v| {
                            let mut s = u.clone();
                            s.push(inner);
                            s.extend_from_slice(v);
                            s
                        })
                    })
                    .collect();
                let mut matrix = vec![vec![0u64; alphabet.len()]; alphabet.len()];
                for s1 in &segments {
                    for s2 in &segments {
                        let mut s = vec![sep];
                        s.extend_from_slice(s1);
                        s.push(sep);
                        s.extend_from_slice(s2);
                        s.push(sep);
                        mark_bigrams(&s, &mut matrix);
                    }
                }
                VertexShift::new(alphabet, matrix)
            }
        }
    }
}

fn check_testable(language: &Dfa) -> Result<(), SubshiftError> {
    if let Some((w1, w2)) = local_testability_counterexample(language, 2) {
        let a = language.alphabet();
        return Err(SubshiftError::NotLocallyTestable(
            a.format(&w1),
            a.format(&w2),
        ));
    }
    Ok(())
}

fn mark_bigrams(s: &[usize], matrix: &mut [Vec<u64>]) {
    for p in s.windows(2) {
        matrix[p[0]][p[1]] = 1;
    }
}

fn oriented(w: &Word, reversed: bool, offset: usize) -> Vec<usize> {
    let mut v: Vec<usize> = w.symbols().iter().map(|&s| s + offset).collect();
    if reversed {
        v.reverse();
    }
    v
}

/// Outcome of the factor-language comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossValidation {
    Pass,
    /// `in_shift` tells which side claims the word: true means the matrix
    /// admits it but no configuration window realizes it.
    Counterexample { word: Vec<String>, in_shift: bool },
}

impl CrossValidation {
    pub fn is_pass(&self) -> bool {
        matches!(self, CrossValidation::Pass)
    }
}

/// Compares the words of length at most `m` admitted by the vertex shift
/// against a direct enumeration of all length-`m` windows of hull
/// configurations, built from language prefixes, suffixes, factors, and
/// whole short words around explicit separators.
pub fn cross_validate(spec: &HullSpec, shift: &VertexShift, m: usize) -> CrossValidation {
    assert_eq!(
        &spec.hull_alphabet(),
        shift.alphabet(),
        "shift was not built from this hull description"
    );
    let brute = match spec {
        HullSpec::Single {
            language,
            separator: _,
        } => single_windows(language, m),
        HullSpec::Pair {
            left,
            right,
            reverse_left,
            ..
        } => pair_windows(left, right, *reverse_left, m),
    };
    let from_shift: BTreeSet<Word> = shift.language(m).into_iter().collect();
    if brute == from_shift {
        return CrossValidation::Pass;
    }
    let alphabet = shift.alphabet();
    let witness = brute
        .symmetric_difference(&from_shift)
        .min()
        .expect("sets differ")
        .clone();
    let in_shift = from_shift.contains(&witness);
    CrossValidation::Counterexample {
        word: witness
            .symbols()
            .iter()
            .map(|&s| alphabet.symbol(s).to_string())
            .collect(),
        in_shift,
    }
}

/// All strings `sep (w sep)*` of length at most `max_len` over the given
/// word list.
fn separator_blocks(words: &[Vec<usize>], sep: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![sep]];
    let mut frontier = vec![vec![sep]];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for block in &frontier {
            for w in words {
                if block.len() + w.len() + 1 <= max_len {
                    let mut s = block.clone();
                    s.extend_from_slice(w);
                    s.push(sep);
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn single_windows(language: &Dfa, m: usize) -> BTreeSet<Word> {
    let sep = language.alphabet().len();
    let mut set = BTreeSet::new();

    // windows inside one content word
    for f in language.enumerate_factors(m) {
        set.insert(f);
    }

    // windows touching at least one separator: a suffix of a word, then
    // complete words between separators, then a prefix of a word
    let edge = m.saturating_sub(1);
    let suffixes: Vec<Vec<usize>> = language
        .enumerate_suffixes(edge)
        .iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    let prefixes: Vec<Vec<usize>> = language
        .enumerate_prefixes(edge)
        .iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    let inner_words: Vec<Vec<usize>> = language
        .enumerate(m.saturating_sub(2))
        .iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    let blocks = separator_blocks(&inner_words, sep, m);
    for suf in &suffixes {
        for block in &blocks {
            if suf.len() + block.len() > m {
                continue;
            }
            for pre in &prefixes {
                if suf.len() + block.len() + pre.len() > m {
                    continue;
                }
                let mut w = suf.clone();
                w.extend_from_slice(block);
                w.extend_from_slice(pre);
                set.insert(Word(w));
            }
        }
    }
    set
}

fn pair_windows(left: &Dfa, right: &Dfa, reverse_left: bool, m: usize) -> BTreeSet<Word> {
    let inner = left.alphabet().len();
    let right_base = inner + 1;
    let sep = right_base + right.alphabet().len();
    let edge = m.saturating_sub(1);

    // left-component pieces, in segment orientation
    let l_factors: Vec<Vec<usize>> = left
        .enumerate_factors(m)
        .iter()
        .map(|w| oriented(w, reverse_left, 0))
        .collect();
    let (l_suffixes, l_prefixes): (Vec<Vec<usize>>, Vec<Vec<usize>>) = if reverse_left {
        (
            left.enumerate_prefixes(edge)
                .iter()
                .map(|w| oriented(w, true, 0))
                .collect(),
            left.enumerate_suffixes(edge)
                .iter()
                .map(|w| oriented(w, true, 0))
                .collect(),
        )
    } else {
        (
            left.enumerate_suffixes(edge)
                .iter()
                .map(|w| oriented(w, false, 0))
                .collect(),
            left.enumerate_prefixes(edge)
                .iter()
                .map(|w| oriented(w, false, 0))
                .collect(),
        )
    };
    let l_words: Vec<Vec<usize>> = left
        .enumerate(m)
        .iter()
        .map(|w| oriented(w, reverse_left, 0))
        .collect();

    let r_factors: Vec<Vec<usize>> = right
        .enumerate_factors(m)
        .iter()
        .map(|w| oriented(w, false, right_base))
        .collect();
    let r_suffixes: Vec<Vec<usize>> = right
        .enumerate_suffixes(edge)
        .iter()
        .map(|w| oriented(w, false, right_base))
        .collect();
    let r_prefixes: Vec<Vec<usize>> = right
        .enumerate_prefixes(edge)
        .iter()
        .map(|w| oriented(w, false, right_base))
        .collect();
    let r_words: Vec<Vec<usize>> = right
        .enumerate(m)
        .iter()
        .map(|w| oriented(w, false, right_base))
        .collect();

    let joined = |a: &[usize], mid: usize, b: &[usize]| {
        let mut s = a.to_vec();
        s.push(mid);
        s.extend_from_slice(b);
        s
    };

    let mut set = BTreeSet::new();

    // windows within one segment
    for f in l_factors.iter().chain(r_factors.iter()) {
        if f.len() <= m {
            set.insert(Word(f.clone()));
        }
    }
    if m >= 1 {
        for a in &l_suffixes {
            for b in &r_prefixes {
                if a.len() + 1 + b.len() <= m {
                    set.insert(Word(joined(a, inner, b)));
                }
            }
        }
    }

    // windows crossing separators: segment suffix, whole segments, prefix
    let mut seg_suffixes: Vec<Vec<usize>> = r_suffixes.clone();
    for a in &l_suffixes {
        for v in &r_words {
            if a.len() + 1 + v.len() <= edge {
                seg_suffixes.push(joined(a, inner, v));
            }
        }
    }
    let mut seg_prefixes: Vec<Vec<usize>> = l_prefixes.clone();
    for u in &l_words {
        for b in &r_prefixes {
            if u.len() + 1 + b.len() <= edge {
                seg_prefixes.push(joined(u, inner, b));
            }
        }
    }
    let mut segments: Vec<Vec<usize>> = Vec::new();
    for u in &l_words {
        for v in &r_words {
            if u.len() + 1 + v.len() <= m.saturating_sub(2) {
                segments.push(joined(u, inner, v));
            }
        }
    }
    let blocks = separator_blocks(&segments, sep, m);
    for suf in &seg_suffixes {
        for block in &blocks {
            if suf.len() + block.len() > m {
                continue;
            }
            for pre in &seg_prefixes {
                if suf.len() + block.len() + pre.len() > m {
                    continue;
                }
                let mut w = suf.clone();
                w.extend_from_slice(block);
                w.extend_from_slice(pre);
                set.insert(Word(w));
            }
        }
    }
    set
}
