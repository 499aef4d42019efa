//! Finite presentations of Thompson's group V and the Brin-Thompson group 2V:
//! bijections between complete binary prefix codes (respectively dyadic
//! rectangle partitions of the Cantor square), with composition, inversion,
//! canonical reduction, local rules, and pointwise application to
//! finitely-supported sequences.
//!
//! Binary words are plain strings over the characters `0` and `1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod random;
mod twov;

pub use random::{random_tv_element, random_v_element};
pub use twov::{RectPartition, TvLocalRule, TwoVElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThompsonError {
    #[error("word {0:?} is not over the alphabet 0,1")]
    NotBinary(String),
    #[error("{0:?} is a prefix of {1:?}: code is not prefix-free")]
    NotPrefixFree(String, String),
    #[error("Kraft sum of the code differs from 1: code is not complete")]
    IncompleteCode,
    #[error("domain has {domain} words but range has {range}")]
    SizeMismatch { domain: usize, range: usize },
    #[error("local rule depth {given} is below the element depth {required}")]
    DepthTooSmall { required: usize, given: usize },
    #[error("head {0:?} is not canonical (must be empty or end in 1)")]
    NotCanonicalHead(String),
    #[error("rectangles ({0},{1}) and ({2},{3}) overlap")]
    RectOverlap(String, String, String, String),
}

pub(crate) fn check_binary(w: &str) -> Result<(), ThompsonError> {
    if w.bytes().all(|b| b == b'0' || b == b'1') {
        Ok(())
    } else {
        Err(ThompsonError::NotBinary(w.to_string()))
    }
}

fn two_pow(n: usize) -> BigInt {
    BigInt::one() << n
}

/// A finite complete prefix code over {0,1}: prefix-free with Kraft sum
/// exactly 1; equivalently the leaf set of a finite rooted binary tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    words: Vec<String>,
}

impl PrefixCode {
    pub fn new<I, S>(words: I) -> Result<Self, ThompsonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut words: Vec<String> = words.into_iter().map(Into::into).collect();
        words.sort();
        for w in &words {
            check_binary(w)?;
        }
        for i in 0..words.len() {
            for j in 0..words.len() {
                if i != j && words[j].starts_with(&words[i]) {
                    return Err(ThompsonError::NotPrefixFree(
                        words[i].clone(),
                        words[j].clone(),
                    ));
                }
            }
        }
        let sum: BigRational = words
            .iter()
            .map(|w| BigRational::new(BigInt::one(), two_pow(w.len())))
            .sum();
        if sum != BigRational::one() {
            return Err(ThompsonError::IncompleteCode);
        }
        Ok(PrefixCode { words })
    }

    /// The trivial code containing only the empty word.
    pub fn root() -> Self {
        PrefixCode {
            words: vec![String::new()],
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a complete code always has at least one word
    }

    pub fn depth(&self) -> usize {
        self.words.iter().map(String::len).max().unwrap_or(0)
    }

    /// Exact Kraft sum, always 1 for a valid code.
    pub fn kraft_sum(&self) -> BigRational {
        self.words
            .iter()
            .map(|w| BigRational::new(BigInt::one(), two_pow(w.len())))
            .sum()
    }
}

/// The smallest complete prefix code refining both arguments: every word of
/// either code is a prefix of a word of the result.
fn common_refinement(p: &[String], q: &[String]) -> Vec<String> {
    let mut all: Vec<&String> = p.iter().chain(q.iter()).collect();
    all.sort();
    all.dedup();
    let mut out: Vec<String> = all
        .iter()
        .filter(|w| {
            !all.iter()
                .any(|x| x.len() > w.len() && x.starts_with(w.as_str()))
        })
        .map(|w| (*w).clone())
        .collect();
    out.sort();
    out
}

/// A point of the binary Cantor space with finitely many ones: the head
/// followed by an infinite tail of zeros. Canonical heads are empty or end
/// in 1, which makes the representation unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyZero {
    head: String,
}

impl EventuallyZero {
    /// Canonicalizes by trimming trailing zeros.
    pub fn new(head: impl Into<String>) -> Result<Self, ThompsonError> {
        let mut head = head.into();
        check_binary(&head)?;
        while head.ends_with('0') {
            head.pop();
        }
        Ok(EventuallyZero { head })
    }

    /// Rejects heads that are not already canonical.
    pub fn from_canonical(head: impl Into<String>) -> Result<Self, ThompsonError> {
        let head = head.into();
        check_binary(&head)?;
        if head.ends_with('0') {
            return Err(ThompsonError::NotCanonicalHead(head));
        }
        Ok(EventuallyZero { head })
    }

    pub fn zero() -> Self {
        EventuallyZero {
            head: String::new(),
        }
    }

    pub fn head(&self) -> &str {
        &self.head
    }

    /// The first `n` digits of the full sequence.
    pub fn digits(&self, n: usize) -> String {
        let mut s = self.head.clone();
        while s.len() < n {
            s.push('0');
        }
        s.truncate(n);
        s
    }
}

/// The local rule of a V element at depth `n`: the substitution applied to
/// length-`n` prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VLocalRule {
    n: usize,
    table: BTreeMap<String, String>,
}

impl VLocalRule {
    pub fn depth(&self) -> usize {
        self.n
    }

    pub fn image(&self, u: &str) -> Option<&str> {
        self.table.get(u).map(String::as_str)
    }

    pub fn table(&self) -> &BTreeMap<String, String> {
        &self.table
    }
}

/// An element of Thompson's group V: a bijection between two complete prefix
/// codes, acting on the Cantor space by prefix substitution.
///
/// The pairs are kept sorted by domain word; `reduce` gives the canonical
/// form with no mergeable sibling pairs, and `compose`/`inverse` always
/// return reduced elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VElement {
    domain: Vec<String>,
    range: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VElementRepr {
    domain: Vec<String>,
    range: Vec<String>,
}

impl Serialize for VElement {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        VElementRepr {
            domain: self.domain.clone(),
            range: self.range.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for VElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = VElementRepr::deserialize(de)?;
        let pairs = repr
            .domain
            .into_iter()
            .zip(repr.range)
            .collect::<Vec<_>>();
        VElement::new(pairs).map_err(serde::de::Error::custom)
    }
}

impl VElement {
    /// Builds an element from (domain word, range word) pairs. Both word
    /// sets must be complete prefix codes of equal size.
    pub fn new<I, S, T>(pairs: I) -> Result<Self, ThompsonError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut pairs: Vec<(String, String)> = pairs
            .into_iter()
            .map(|(d, r)| (d.into(), r.into()))
            .collect();
        pairs.sort();
        let domain: Vec<String> = pairs.iter().map(|(d, _)| d.clone()).collect();
        let range: Vec<String> = pairs.iter().map(|(_, r)| r.clone()).collect();
        let dc = PrefixCode::new(domain.clone())?;
        let rc = PrefixCode::new(range.clone())?;
        if dc.len() != rc.len() {
            return Err(ThompsonError::SizeMismatch {
                domain: dc.len(),
                range: rc.len(),
            });
        }
        Ok(VElement { domain, range })
    }

    pub fn identity() -> Self {
        VElement {
            domain: vec![String::new()],
            range: vec![String::new()],
        }
    }

    /// The involution exchanging the two halves of the Cantor space.
    pub fn swap() -> Self {
        VElement::new([("0", "1"), ("1", "0")]).unwrap()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.domain
            .iter()
            .zip(self.range.iter())
            .map(|(d, r)| (d.as_str(), r.as_str()))
    }

    pub fn domain(&self) -> PrefixCode {
        PrefixCode::new(self.domain.clone()).expect("domain stays a valid code")
    }

    pub fn range(&self) -> PrefixCode {
        PrefixCode::new(self.range.clone()).expect("range stays a valid code")
    }

    /// Maximum domain word length.
    pub fn depth(&self) -> usize {
        self.domain.iter().map(String::len).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        let r = self.reduce();
        r.domain.len() == 1 && r.domain[0].is_empty() && r.range[0].is_empty()
    }

    /// Refines the element so that its domain becomes `refinement`, which
    /// must be a complete prefix code refining the current domain.
    fn refine_domain_to(&self, refinement: &[String]) -> VElement {
        let mut pairs = Vec::with_capacity(refinement.len());
        for c in refinement {
            let (d, r) = self
                .pairs()
                .find(|(d, _)| c.starts_with(d))
                .expect("refinement must refine the domain");
            let tail = &c[d.len()..];
            pairs.push((c.clone(), format!("{r}{tail}")));
        }
        pairs.sort();
        let (domain, range) = pairs.into_iter().unzip();
        VElement { domain, range }
    }

    /// Refines the element so that its range becomes `refinement`.
    fn refine_range_to(&self, refinement: &[String]) -> VElement {
        let mut pairs = Vec::with_capacity(refinement.len());
        for c in refinement {
            let (d, r) = self
                .pairs()
                .find(|(_, r)| c.starts_with(r))
                .expect("refinement must refine the range");
            let tail = &c[r.len()..];
            pairs.push((format!("{d}{tail}"), c.clone()));
        }
        pairs.sort();
        let (domain, range) = pairs.into_iter().unzip();
        VElement { domain, range }
    }

    /// Expands every domain word to the given uniform depth.
    pub fn expand_to_depth(&self, depth: usize) -> VElement {
        assert!(depth >= self.depth(), "cannot expand below current depth");
        let refinement: Vec<String> = all_words(depth);
        self.refine_domain_to(&refinement)
    }

    /// Canonical form: merges sibling pairs (d0 -> r0, d1 -> r1) into
    /// (d -> r) until none remain. Two elements represent the same group
    /// element iff their reduced forms are structurally equal.
    pub fn reduce(&self) -> VElement {
        let mut map: BTreeMap<String, String> = self
            .pairs()
            .map(|(d, r)| (d.to_string(), r.to_string()))
            .collect();
        loop {
            let mut merged = None;
            for (d, r) in &map {
                if let (Some(ds), Some(rs)) = (d.strip_suffix('0'), r.strip_suffix('0')) {
                    let sibling = format!("{ds}1");
                    if map.get(&sibling).map(String::as_str) == Some(&format!("{rs}1")) {
                        merged = Some((d.clone(), sibling, ds.to_string(), rs.to_string()));
                        break;
                    }
                }
            }
            match merged {
                Some((d0, d1, d, r)) => {
                    map.remove(&d0);
                    map.remove(&d1);
                    map.insert(d, r);
                }
                None => break,
            }
        }
        let (domain, range) = map.into_iter().unzip();
        VElement { domain, range }
    }

    /// Group composition, `other` first: (self ∘ other)(x) = self(other(x)).
    /// The result is in canonical form.
    pub fn compose(&self, other: &VElement) -> VElement {
        let mid = common_refinement(&other.range, &self.domain);
        let h = other.refine_range_to(&mid);
        let g = self.refine_domain_to(&mid);
        let g_map: BTreeMap<&str, &str> = g.pairs().collect();
        let mut pairs: Vec<(String, String)> = h
            .pairs()
            .map(|(d, m)| (d.to_string(), g_map[m].to_string()))
            .collect();
        pairs.sort();
        let (domain, range) = pairs.into_iter().unzip();
        (VElement { domain, range }).reduce()
    }

    /// Inverse element, in canonical form.
    pub fn inverse(&self) -> VElement {
        let mut pairs: Vec<(String, String)> = self
            .pairs()
            .map(|(d, r)| (r.to_string(), d.to_string()))
            .collect();
        pairs.sort();
        let (domain, range) = pairs.into_iter().unzip();
        (VElement { domain, range }).reduce()
    }

    /// The local rule at depth `n`: F with self(ux) = F(u)x for |u| = n.
    pub fn local_rule(&self, n: usize) -> Result<VLocalRule, ThompsonError> {
        if n < self.depth() {
            return Err(ThompsonError::DepthTooSmall {
                required: self.depth(),
                given: n,
            });
        }
        let mut table = BTreeMap::new();
        for u in all_words(n) {
            let (d, r) = self
                .pairs()
                .find(|(d, _)| u.starts_with(d))
                .expect("complete domain covers every word of depth >= element depth");
            table.insert(u.clone(), format!("{r}{}", &u[d.len()..]));
        }
        Ok(VLocalRule { n, table })
    }

    /// Applies the element to a finitely-supported point.
    pub fn apply(&self, x: &EventuallyZero) -> EventuallyZero {
        let head = x.head();
        let (d, r) = self
            .pairs()
            .find(|(d, _)| {
                if head.len() >= d.len() {
                    head.starts_with(d)
                } else {
                    d.starts_with(head) && d[head.len()..].bytes().all(|b| b == b'0')
                }
            })
            .expect("complete domain covers every point");
        let tail = if head.len() > d.len() {
            &head[d.len()..]
        } else {
            ""
        };
        EventuallyZero::new(format!("{r}{tail}")).expect("image of binary words is binary")
    }
}

/// All binary words of length exactly `n`, lexicographically.
pub fn all_words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|w| [format!("{w}0"), format!("{w}1")])
            .collect();
    }
    out
}

/// Named generators used by the command-line relator checker and the test
/// sweeps: `s` is the swap involution, `a`, `b`, `c` are deeper elements.
pub fn generators() -> Vec<(char, VElement)> {
    vec![
        ('s', VElement::swap()),
        (
            'a',
            VElement::new([("0", "00"), ("10", "01"), ("11", "1")]).unwrap(),
        ),
        (
            'b',
            VElement::new([("0", "1"), ("10", "00"), ("11", "01")]).unwrap(),
        ),
        (
            'c',
            VElement::new([("0", "00"), ("100", "01"), ("101", "10"), ("11", "11")]).unwrap(),
        ),
    ]
}
