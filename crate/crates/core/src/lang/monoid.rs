//! Syntactic monoids, realized as transition monoids of minimal DFAs.

use std::collections::HashMap;

use super::{Dfa, SymbolId, Word};

/// The transition monoid of the minimal DFA of a language. Elements are
/// transformations of the minimal state set; `compose(i, j)` applies `i`
/// first, so images of words multiply in reading order.
#[derive(Debug, Clone)]
pub struct SyntacticMonoid {
    elements: Vec<Vec<usize>>,
    table: Vec<Vec<usize>>,
    symbol_image: Vec<usize>,
    start: usize,
    accepting: Vec<bool>,
}

impl SyntacticMonoid {
    pub fn of(dfa: &Dfa) -> Self {
        let min = dfa.minimize();
        let n = min.num_states();
        let k = min.alphabet().len();
        let generators: Vec<Vec<usize>> = (0..k)
            .map(|a| (0..n).map(|s| min.step(s, a)).collect())
            .collect();

        let identity: Vec<usize> = (0..n).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for g in &generators {
                let product: Vec<usize> = current.iter().map(|&s| g[s]).collect();
                if !index.contains_key(&product) {
                    index.insert(product.clone(), elements.len());
                    elements.push(product);
                }
            }
            frontier += 1;
        }

        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|f| {
                elements
                    .iter()
                    .map(|g| {
                        let product: Vec<usize> = f.iter().map(|&s| g[s]).collect();
                        index[&product]
                    })
                    .collect()
            })
            .collect();

        let symbol_image = generators.iter().map(|g| index[g]).collect();
        let accepting = (0..n).map(|s| min.is_accepting(s)).collect();
        SyntacticMonoid {
            elements,
            table,
            symbol_image,
            start: min.start(),
            accepting,
        }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Applies element `i` first, then `j`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn transformation(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    pub fn symbol_image(&self, a: SymbolId) -> usize {
        self.symbol_image[a]
    }

    /// Image of a word, computed by folding symbol images in reading order.
    pub fn word_image(&self, w: &Word) -> usize {
        w.symbols()
            .iter()
            .fold(0, |acc, &a| self.table[acc][self.symbol_image[a]])
    }

    pub fn is_idempotent(&self, i: usize) -> bool {
        self.table[i][i] == i
    }

    /// Whether the words with image `i` are accepted by the language.
    pub fn image_accepts(&self, i: usize) -> bool {
        self.accepting[self.elements[i][self.start]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_regex, Alphabet};

    #[test]
    fn full_shift_has_trivial_monoid() {
        let d = Dfa::full_language(Alphabet::binary());
        let m = SyntacticMonoid::of(&d);
        assert_eq!(m.size(), 1);
        assert!(m.is_idempotent(0));
    }

    #[test]
    fn ends_in_one_has_three_elements() {
        let d = parse_regex("eps+(0+1)*1", None).unwrap();
        let m = SyntacticMonoid::of(&d);
        assert_eq!(m.size(), 3);
        let a = d.alphabet().clone();
        let w0 = m.word_image(&a.word_from_str("0").unwrap());
        let w1 = m.word_image(&a.word_from_str("1").unwrap());
        // last symbol wins
        assert_eq!(m.compose(w0, w1), w1);
        assert_eq!(m.compose(w1, w0), w0);
        assert_eq!(m.word_image(&crate::lang::Word::empty()), m.identity());
    }

    #[test]
    fn zeros_language_has_absorbing_one_image() {
        let d = parse_regex("0*", Some(&Alphabet::binary())).unwrap();
        let m = SyntacticMonoid::of(&d);
        let a = d.alphabet().clone();
        let z = m.word_image(&a.word_from_str("1").unwrap());
        for i in 0..m.size() {
            assert_eq!(m.compose(i, z), z);
            assert_eq!(m.compose(z, i), z);
        }
    }

    #[test]
    fn word_image_extends_multiplicatively() {
        let d = parse_regex("eps+(0+1)*1", None).unwrap();
        let m = SyntacticMonoid::of(&d);
        let a = d.alphabet().clone();
        for u in d.enumerate_prefixes(4) {
            for v in d.enumerate_prefixes(4) {
                let uv = u.concat(&v);
                assert_eq!(
                    m.word_image(&uv),
                    m.compose(m.word_image(&u), m.word_image(&v)),
                    "image({}{}) mismatch",
                    a.format(&u),
                    a.format(&v)
                );
            }
        }
    }
}
