//! Complete deterministic finite automata with canonical minimization.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Alphabet, LangError, SymbolId, Word};

/// A complete DFA over an [`Alphabet`]: the transition function is total.
///
/// Minimization renumbers states breadth-first from the start state following
/// symbol order, so two equivalent DFAs minimize to structurally identical
/// values and serialized forms are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct DfaRepr {
    alphabet: Vec<String>,
    states: usize,
    start: usize,
    accepting: Vec<usize>,
    delta: Vec<Vec<usize>>,
}

impl Serialize for Dfa {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let repr = DfaRepr {
            alphabet: self.alphabet.symbols().map(String::from).collect(),
            states: self.num_states(),
            start: self.start,
            accepting: (0..self.num_states()).filter(|&s| self.accepting[s]).collect(),
            delta: self.delta.clone(),
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Dfa {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = DfaRepr::deserialize(de)?;
        let alphabet = Alphabet::new(repr.alphabet).map_err(serde::de::Error::custom)?;
        Dfa::from_parts(alphabet, repr.states, repr.start, &repr.accepting, repr.delta)
            .map_err(serde::de::Error::custom)
    }
}

impl Dfa {
    /// Builds a DFA, validating that the transition table is total and that
    /// every state index is in range.
    pub fn from_parts(
        alphabet: Alphabet,
        states: usize,
        start: usize,
        accepting: &[usize],
        delta: Vec<Vec<usize>>,
    ) -> Result<Self, LangError> {
        if start >= states {
            return Err(LangError::BadStartState { start, states });
        }
        if delta.len() != states || delta.iter().any(|row| row.len() != alphabet.len()) {
            return Err(LangError::BadTransitionShape {
                states,
                symbols: alphabet.len(),
            });
        }
        for row in &delta {
            for &t in row {
                if t >= states {
                    return Err(LangError::BadTransitionTarget { target: t, states });
                }
            }
        }
        let mut acc = vec![false; states];
        for &s in accepting {
            if s >= states {
                return Err(LangError::BadAcceptingState { state: s, states });
            }
            acc[s] = true;
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting: acc,
            delta,
        })
    }

    /// The one-state DFA rejecting every word.
    pub fn empty_language(alphabet: Alphabet) -> Self {
        let delta = vec![vec![0; alphabet.len()]];
        Dfa {
            alphabet,
            start: 0,
            accepting: vec![false],
            delta,
        }
    }

    /// The one-state DFA accepting every word.
    pub fn full_language(alphabet: Alphabet) -> Self {
        let delta = vec![vec![0; alphabet.len()]];
        Dfa {
            alphabet,
            start: 0,
            accepting: vec![true],
            delta,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn step(&self, state: usize, symbol: SymbolId) -> usize {
        self.delta[state][symbol]
    }

    pub fn run(&self, from: usize, w: &Word) -> usize {
        w.symbols().iter().fold(from, |s, &a| self.delta[s][a])
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.accepting[self.run(self.start, w)]
    }

    /// Renames the alphabet symbols in place, keeping the structure.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Self, LangError> {
        Ok(Dfa {
            alphabet: self.alphabet.rename(f)?,
            start: self.start,
            accepting: self.accepting.clone(),
            delta: self.delta.clone(),
        })
    }

    fn reachable_order(&self) -> Vec<usize> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        seen[self.start] = true;
        queue.push_back(self.start);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for a in 0..self.alphabet.len() {
                let t = self.delta[s][a];
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Language-equivalent minimal DFA with canonical state numbering
    /// (breadth-first from the start state, successors in symbol order).
    pub fn minimize(&self) -> Dfa {
        // restrict to reachable states
        let order = self.reachable_order();
        let mut compact = vec![usize::MAX; self.num_states()];
        for (new, &old) in order.iter().enumerate() {
            compact[old] = new;
        }
        let n = order.len();
        let k = self.alphabet.len();
        let delta: Vec<Vec<usize>> = order
            .iter()
            .map(|&old| (0..k).map(|a| compact[self.delta[old][a]]).collect())
            .collect();
        let accepting: Vec<bool> = order.iter().map(|&old| self.accepting[old]).collect();

        // Moore partition refinement: split by acceptance, then by transition
        // signatures until the class count stops growing.
        let mut class = vec![0usize; n];
        let mut num_classes = {
            let mut first: HashMap<bool, usize> = HashMap::new();
            for s in 0..n {
                let fresh = first.len();
                class[s] = *first.entry(accepting[s]).or_insert(fresh);
            }
            first.len()
        };
        loop {
            let mut sig_to_class: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0usize; n];
            for s in 0..n {
                let sig = (class[s], (0..k).map(|a| class[delta[s][a]]).collect::<Vec<_>>());
                let fresh = sig_to_class.len();
                next[s] = *sig_to_class.entry(sig).or_insert(fresh);
            }
            let count = sig_to_class.len();
            class = next;
            if count == num_classes {
                break;
            }
            num_classes = count;
        }

        // quotient, then canonical BFS renumbering
        let num_classes = class.iter().max().map_or(0, |m| m + 1);
        let mut repr = vec![usize::MAX; num_classes];
        for s in 0..n {
            if repr[class[s]] == usize::MAX {
                repr[class[s]] = s;
            }
        }
        let mut renum = vec![usize::MAX; num_classes];
        let mut bfs_order = Vec::new();
        let mut queue = VecDeque::new();
        renum[class[0]] = 0; // state 0 is the (compacted) start
        bfs_order.push(class[0]);
        queue.push_back(class[0]);
        while let Some(c) = queue.pop_front() {
            for a in 0..k {
                let t = class[delta[repr[c]][a]];
                if renum[t] == usize::MAX {
                    renum[t] = bfs_order.len();
                    bfs_order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let m = bfs_order.len();
        let min_delta: Vec<Vec<usize>> = bfs_order
            .iter()
            .map(|&c| (0..k).map(|a| renum[class[delta[repr[c]][a]]]).collect())
            .collect();
        let min_accepting: Vec<bool> = bfs_order.iter().map(|&c| accepting[repr[c]]).collect();
        debug_assert_eq!(m, num_classes);
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting: min_accepting,
            delta: min_delta,
        }
    }

    /// Language equality. Errors if the alphabets differ.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, LangError> {
        if self.alphabet != other.alphabet {
            return Err(LangError::AlphabetMismatch);
        }
        // canonical numbering makes minimal DFAs structurally comparable
        Ok(self.minimize() == other.minimize())
    }

    /// Shortest distance from each state to an accepting state
    /// (`usize::MAX` when none is reachable).
    fn accept_distance(&self) -> Vec<usize> {
        let n = self.num_states();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if self.accepting[s] {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        // reverse edges
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for a in 0..self.alphabet.len() {
                preds[self.delta[s][a]].push(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &preds[s] {
                if dist[p] == usize::MAX {
                    dist[p] = dist[s] + 1;
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    /// All accepted words of length at most `max_len`, in
    /// length-then-lexicographic order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let dist = self.accept_distance();
        let mut out = Vec::new();
        let mut word: Vec<SymbolId> = Vec::new();
        self.enumerate_rec(self.start, &mut word, max_len, &dist, &mut out);
        out.sort();
        out
    }

    fn enumerate_rec(
        &self,
        state: usize,
        word: &mut Vec<SymbolId>,
        remaining: usize,
        dist: &[usize],
        out: &mut Vec<Word>,
    ) {
        if self.accepting[state] {
            out.push(Word(word.clone()));
        }
        if remaining == 0 {
            return;
        }
        for a in 0..self.alphabet.len() {
            let t = self.delta[state][a];
            if dist[t] != usize::MAX && dist[t] <= remaining - 1 {
                word.push(a);
                self.enumerate_rec(t, word, remaining - 1, dist, out);
                word.pop();
            }
        }
    }

    /// Words of length at most `max_len` that are prefixes of some accepted
    /// word (of any length).
    pub fn enumerate_prefixes(&self, max_len: usize) -> Vec<Word> {
        let dist = self.accept_distance();
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.prefixes_rec(self.start, &mut word, max_len, &dist, &mut out);
        out.sort();
        out
    }

    fn prefixes_rec(
        &self,
        state: usize,
        word: &mut Vec<SymbolId>,
        remaining: usize,
        dist: &[usize],
        out: &mut Vec<Word>,
    ) {
        if dist[state] == usize::MAX {
            return;
        }
        out.push(Word(word.clone()));
        if remaining == 0 {
            return;
        }
        for a in 0..self.alphabet.len() {
            word.push(a);
            self.prefixes_rec(self.delta[state][a], word, remaining - 1, dist, out);
            word.pop();
        }
    }

    /// Words of length at most `max_len` that are suffixes of some accepted
    /// word.
    pub fn enumerate_suffixes(&self, max_len: usize) -> Vec<Word> {
        self.enumerate_from_set(max_len, |dfa, states| {
            states.iter().any(|&s| dfa.accepting[s])
        })
    }

    /// Words of length at most `max_len` that occur as factors of accepted
    /// words.
    pub fn enumerate_factors(&self, max_len: usize) -> Vec<Word> {
        let dist = self.accept_distance();
        self.enumerate_from_set(max_len, move |_, states| {
            states.iter().any(|&s| dist[s] != usize::MAX)
        })
    }

    fn enumerate_from_set(
        &self,
        max_len: usize,
        good: impl Fn(&Dfa, &[usize]) -> bool,
    ) -> Vec<Word> {
        let reach = self.reachable_order();
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.set_rec(&reach, &mut word, max_len, &good, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn set_rec(
        &self,
        states: &[usize],
        word: &mut Vec<SymbolId>,
        remaining: usize,
        good: &impl Fn(&Dfa, &[usize]) -> bool,
        out: &mut Vec<Word>,
    ) {
        if good(self, states) {
            out.push(Word(word.clone()));
        }
        if remaining == 0 {
            return;
        }
        for a in 0..self.alphabet.len() {
            let mut next: Vec<usize> = states.iter().map(|&s| self.delta[s][a]).collect();
            next.sort_unstable();
            next.dedup();
            word.push(a);
            self.set_rec(&next, word, remaining - 1, good, out);
            word.pop();
        }
    }
}
