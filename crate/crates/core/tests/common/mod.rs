//! Oracles shared by the integration tests. Each one works on explicit words
//! by free reduction and exhaustive comparison only.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use concc_core::word::{Letter, ShortLex};
use concc_core::Word;
use num_rational::Ratio;

/// All rotations of the relators and their inverses, written out.
pub fn explicit_closure(relators: &[Word]) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        for w in [r.clone(), r.inverse()] {
            for k in 0..w.len() {
                let rot = w.rotate(k);
                if seen.insert(rot.clone()) {
                    out.push(rot);
                }
            }
        }
    }
    out
}

pub fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Longest common prefix over all pairs of distinct members, per member length.
pub fn brute_pieces(closure: &[Word]) -> (usize, Vec<(usize, usize)>) {
    let mut best = 0;
    let mut per = Vec::new();
    for (i, a) in closure.iter().enumerate() {
        let mut m = 0;
        for (j, b) in closure.iter().enumerate() {
            if i != j {
                m = m.max(common_prefix(a.letters(), b.letters()));
            }
        }
        best = best.max(m);
        per.push((m, a.len()));
    }
    (best, per)
}

pub fn brute_metric(closure: &[Word], lambda: Ratio<u64>) -> bool {
    brute_pieces(closure)
        .1
        .iter()
        .all(|&(p, n)| Ratio::from_integer(p as u64) < lambda * Ratio::from_integer(n as u64))
}

pub fn is_primitive(w: &Word) -> bool {
    (1..w.len()).all(|k| w.len() % k != 0 || w.rotate(k) != *w)
}

/// Trivial words of the one-relator group, by inserting closure members at
/// every position and freely reducing, never exceeding `cap` letters.
pub fn bfs_trivial(closure: &[Word], cap: usize) -> HashSet<Word> {
    let mut seen = HashSet::from([Word::identity()]);
    let mut queue = VecDeque::from([Word::identity()]);
    while let Some(w) = queue.pop_front() {
        for i in 0..=w.len() {
            for r in closure {
                let next = Word::product(&[w.slice(0, i), r.clone(), w.slice(i, w.len())]);
                if next.len() <= cap && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// First length-`len` relator over `rank` generators whose closure is `C'(lambda)`.
pub fn first_metric_relator(rank: usize, len: usize, lambda: Ratio<u64>) -> Word {
    ShortLex::new(rank)
        .skip_while(|w| w.len() < len)
        .take_while(|w| w.len() == len)
        .find(|w| w.is_cyclically_reduced() && is_primitive(w) && brute_metric(&explicit_closure(&[w.clone()]), lambda))
        .expect("a small cancellation relator")
}
