//! Shift spaces presented by 0/1 adjacency matrices (vertex shifts) or by
//! finite forbidden-word sets (SFTs), with primitivity-based mixing checks,
//! language extraction, and the hull construction turning a regular language
//! into the smallest subshift containing its separator-joined configurations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{Alphabet, LangError, Word};

mod hull;

pub use hull::{cross_validate, CrossValidation, HullSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubshiftError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("matrix must be square of the alphabet size {expected}")]
    MatrixShape { expected: usize },
    #[error("matrix entries must be 0 or 1, found {0}")]
    MatrixEntry(u64),
    #[error("forbidden words must be non-empty")]
    EmptyForbiddenWord,
    #[error("forbidden word of length {0} cannot be presented as a vertex shift")]
    ForbiddenWordLength(usize),
    #[error("separator {0:?} already occurs in the content alphabet")]
    SeparatorClash(String),
    #[error("content alphabets overlap at {0:?}")]
    AlphabetOverlap(String),
    #[error("language is not locally 2-testable: words {0:?} and {1:?} have the same length-2 data but different membership")]
    NotLocallyTestable(String, String),
}

/// A vertex shift: bi-infinite walks on the digraph whose adjacency matrix
/// is given over an ordered alphabet. Row/column order equals symbol order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexShift {
    alphabet: Alphabet,
    matrix: Vec<Vec<u8>>,
}

#[derive(Serialize, Deserialize)]
struct VertexShiftRepr {
    symbols: Vec<String>,
    matrix: Vec<Vec<u64>>,
}

impl Serialize for VertexShift {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        VertexShiftRepr {
            symbols: self.alphabet.symbols().map(String::from).collect(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|&e| u64::from(e)).collect())
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for VertexShift {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = VertexShiftRepr::deserialize(de)?;
        let alphabet = Alphabet::new(repr.symbols).map_err(serde::de::Error::custom)?;
        VertexShift::new(alphabet, repr.matrix).map_err(serde::de::Error::custom)
    }
}

impl VertexShift {
    pub fn new(alphabet: Alphabet, matrix: Vec<Vec<u64>>) -> Result<Self, SubshiftError> {
        let n = alphabet.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(SubshiftError::MatrixShape { expected: n });
        }
        let mut entries = Vec::with_capacity(n);
        for row in matrix {
            let mut r = Vec::with_capacity(n);
            for e in row {
                if e > 1 {
                    return Err(SubshiftError::MatrixEntry(e));
                }
                r.push(e as u8);
            }
            entries.push(r);
        }
        Ok(VertexShift {
            alphabet,
            matrix: entries,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> Vec<Vec<u64>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|&e| u64::from(e)).collect())
            .collect()
    }

    pub fn allows(&self, from: usize, to: usize) -> bool {
        self.matrix[from][to] == 1
    }

    /// Forbidden-bigram presentation: the complement of the allowed edges.
    pub fn to_sft(&self) -> Sft {
        let n = self.dim();
        let mut forbidden = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.matrix[i][j] == 0 {
                    forbidden.push(Word(vec![i, j]));
                }
            }
        }
        Sft {
            alphabet: self.alphabet.clone(),
            forbidden,
        }
    }

    /// Symbols that lie on some bi-infinite walk: repeatedly discards
    /// symbols with no outgoing or no incoming edge among the survivors.
    pub fn core_symbols(&self) -> Vec<bool> {
        let n = self.dim();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if !alive[i] {
                    continue;
                }
                let has_out = (0..n).any(|j| alive[j] && self.matrix[i][j] == 1);
                let has_in = (0..n).any(|j| alive[j] && self.matrix[j][i] == 1);
                if !has_out || !has_in {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    /// Smallest `k ≤ (d-1)² + 1` with every entry of the k-th power of the
    /// core-restricted matrix positive. `Some(0)` when the core is empty
    /// (the shift is at most a single fixed point, trivially mixing).
    pub fn primitivity_exponent(&self) -> Option<usize> {
        let alive = self.core_symbols();
        let core: Vec<usize> = (0..self.dim()).filter(|&i| alive[i]).collect();
        let d = core.len();
        if d == 0 {
            return Some(0);
        }
        let base: Vec<Vec<bool>> = core
            .iter()
            .map(|&i| core.iter().map(|&j| self.matrix[i][j] == 1).collect())
            .collect();
        let mut power = base.clone();
        let bound = (d - 1) * (d - 1) + 1;
        for k in 1..=bound {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return Some(k);
            }
            let mut next = vec![vec![false; d]; d];
            for i in 0..d {
                for j in 0..d {
                    if power[i][j] {
                        for (t, cell) in next[i].iter_mut().enumerate() {
                            *cell = *cell || base[j][t];
                        }
                    }
                }
            }
            power = next;
        }
        None
    }

    /// Mixing test: the matrix restricted to the recurrent core must be
    /// primitive.
    pub fn is_mixing(&self) -> bool {
        self.primitivity_exponent().is_some()
    }

    /// All words of length at most `m` occurring in bi-infinite walks, in
    /// length-then-lexicographic order. The empty word always occurs.
    pub fn language(&self, m: usize) -> Vec<Word> {
        let alive = self.core_symbols();
        let mut out = vec![Word::empty()];
        let mut frontier: Vec<Vec<usize>> = (0..self.dim())
            .filter(|&i| alive[i])
            .map(|i| vec![i])
            .collect();
        let mut len = 1;
        while len <= m && !frontier.is_empty() {
            out.extend(frontier.iter().map(|w| Word(w.clone())));
            let mut next = Vec::new();
            for w in &frontier {
                let last = *w.last().expect("frontier words are non-empty");
                for j in 0..self.dim() {
                    if alive[j] && self.matrix[last][j] == 1 {
                        let mut ext = w.clone();
                        ext.push(j);
                        next.push(ext);
                    }
                }
            }
            frontier = next;
            len += 1;
        }
        out.sort();
        out
    }

    /// True iff `w` occurs in some bi-infinite walk.
    pub fn contains(&self, w: &Word) -> bool {
        let alive = self.core_symbols();
        w.symbols().iter().all(|&s| s < self.dim() && alive[s])
            && w.symbols().windows(2).all(|p| self.matrix[p[0]][p[1]] == 1)
    }

    /// Graphviz rendering of the underlying digraph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph shift {\n");
        for s in self.alphabet.symbols() {
            out.push_str(&format!("  \"{s}\";\n"));
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.matrix[i][j] == 1 {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\";\n",
                        self.alphabet.symbol(i),
                        self.alphabet.symbol(j)
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A subshift of finite type presented by finitely many forbidden words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, mut forbidden: Vec<Word>) -> Result<Self, SubshiftError> {
        if forbidden.iter().any(Word::is_empty) {
            return Err(SubshiftError::EmptyForbiddenWord);
        }
        forbidden.sort();
        forbidden.dedup();
        Ok(Sft {
            alphabet,
            forbidden,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    /// Adjacency-matrix presentation; only valid when every forbidden word
    /// is a bigram (higher-block recoding is out of scope).
    pub fn to_vertex_shift(&self) -> Result<VertexShift, SubshiftError> {
        let n = self.alphabet.len();
        let mut matrix = vec![vec![1u64; n]; n];
        for w in &self.forbidden {
            if w.len() != 2 {
                return Err(SubshiftError::ForbiddenWordLength(w.len()));
            }
            matrix[w.symbols()[0]][w.symbols()[1]] = 0;
        }
        VertexShift::new(self.alphabet.clone(), matrix)
    }
}
