//! Local k-testability: membership of every word of length at least `k`
//! must be determined by its length-`k` prefix, its length-`k` suffix, and
//! its set of length-`k` factors. Shorter words carry no constraint.
//!
//! The decision procedure pairs a profile-tracking automaton with the
//! language DFA and looks for one profile realized by both an accepted and a
//! rejected word. Such a pair is exactly a counterexample; if none is
//! reachable, the language agrees with the coarsest k-testable language that
//! has the same length-k data.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Dfa, SymbolId, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Profile {
    prefix: Vec<SymbolId>,
    suffix: Vec<SymbolId>,
    factors: BTreeSet<Vec<SymbolId>>,
}

impl Profile {
    fn initial() -> Self {
        Profile {
            prefix: Vec::new(),
            suffix: Vec::new(),
            factors: BTreeSet::new(),
        }
    }

    fn step(&self, a: SymbolId, k: usize) -> Self {
        let mut prefix = self.prefix.clone();
        if prefix.len() < k {
            prefix.push(a);
        }
        let mut suffix = self.suffix.clone();
        suffix.push(a);
        let mut factors = self.factors.clone();
        if suffix.len() >= k {
            factors.insert(suffix[suffix.len() - k..].to_vec());
        }
        if suffix.len() > k {
            suffix.remove(0);
        }
        Profile {
            prefix,
            suffix,
            factors,
        }
    }

    fn saturated(&self, k: usize) -> bool {
        self.prefix.len() == k
    }
}

/// Two words of length ≥ k with identical length-k data but different
/// membership, if the language is not k-testable.
pub fn local_testability_counterexample(d: &Dfa, k: usize) -> Option<(Word, Word)> {
    assert!(k >= 1, "local testability requires k >= 1");
    let min = d.minimize();
    let alpha = min.alphabet().len();

    fn intern(
        p: Profile,
        ids: &mut HashMap<Profile, usize>,
        profiles: &mut Vec<Profile>,
    ) -> usize {
        if let Some(&id) = ids.get(&p) {
            return id;
        }
        let id = profiles.len();
        ids.insert(p.clone(), id);
        profiles.push(p);
        id
    }

    let mut profile_ids: HashMap<Profile, usize> = HashMap::new();
    let mut profiles: Vec<Profile> = Vec::new();

    // witnesses per saturated profile: accepted and rejected word, if seen
    let mut accepted: HashMap<usize, Word> = HashMap::new();
    let mut rejected: HashMap<usize, Word> = HashMap::new();

    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue: VecDeque<(usize, usize, Word)> = VecDeque::new();
    let p0 = intern(Profile::initial(), &mut profile_ids, &mut profiles);
    visited.insert((p0, min.start()));
    queue.push_back((p0, min.start(), Word::empty()));

    while let Some((pid, state, word)) = queue.pop_front() {
        if profiles[pid].saturated(k) {
            let bucket = if min.is_accepting(state) {
                &mut accepted
            } else {
                &mut rejected
            };
            bucket.entry(pid).or_insert_with(|| word.clone());
            if let (Some(w1), Some(w2)) = (accepted.get(&pid), rejected.get(&pid)) {
                return Some((w1.clone(), w2.clone()));
            }
        }
        for a in 0..alpha {
            let next_profile = profiles[pid].step(a, k);
            let next_state = min.step(state, a);
            let next_pid = intern(next_profile, &mut profile_ids, &mut profiles);
            if visited.insert((next_pid, next_state)) {
                let mut next_word = word.clone();
                next_word.0.push(a);
                queue.push_back((next_pid, next_state, next_word));
            }
        }
    }
    None
}

/// True iff membership of every word of length ≥ k depends only on its
/// prefix, suffix, and factor set of length k.
pub fn is_locally_testable(d: &Dfa, k: usize) -> bool {
    local_testability_counterexample(d, k).is_none()
}

/// Words over {0,1} containing an even number of "01" factors. Not locally
/// 2-testable; used as a refusal fixture in hull tests.
#[cfg(test)]
pub(crate) fn even_zero_one_count() -> Dfa {
    // state = (parity of 01-count, last symbol was 0)
    Dfa::from_parts(
        crate::lang::Alphabet::binary(),
        4,
        0,
        &[0, 1],
        vec![
            vec![1, 0], // even, fresh
            vec![1, 2], // even, after 0  (reading 1 completes an occurrence)
            vec![3, 2], // odd, fresh
            vec![3, 0], // odd, after 0
        ],
    )
    .unwrap()
}
