use num_rational::Ratio;

use super::SymmetrizedSet;
use crate::word::Word;

/// A closure member: the rotation of cyclic word `word` by `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Member {
    pub word: usize,
    pub offset: usize,
}

/// A common prefix of two distinct closure members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceWitness {
    pub piece: Word,
    pub first: Member,
    pub second: Member,
}

impl PieceWitness {
    pub fn verify(&self, set: &SymmetrizedSet) -> bool {
        let (a, b) = (set.member(self.first), set.member(self.second));
        let n = self.piece.len();
        self.first != self.second
            && a.len() >= n
            && b.len() >= n
            && a.letters()[..n] == *self.piece.letters()
            && b.letters()[..n] == *self.piece.letters()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorPieces {
    pub word: usize,
    pub length: usize,
    pub max_piece: usize,
    pub ratio: Ratio<u64>,
    pub witness: Option<PieceWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceReport {
    pub max_piece_length: usize,
    pub witness: Option<PieceWitness>,
    /// One entry per cyclic word of the closure.
    pub per_relator: Vec<RelatorPieces>,
}

impl PieceReport {
    pub fn max_ratio(&self) -> Ratio<u64> {
        self.per_relator
            .iter()
            .map(|r| r.ratio)
            .max()
            .unwrap_or_else(|| Ratio::from_integer(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricVerdict {
    pub holds: bool,
    pub witness: Option<PieceWitness>,
}

/// Suffix array by prefix doubling.
pub fn suffix_array(s: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    if n == 0 {
        return sa;
    }
    let mut rank: Vec<u64> = s.iter().map(|&c| c as u64).collect();
    let mut tmp = vec![0u64; n];
    let mut k = 1usize;
    loop {
        let key = |i: u32, rank: &[u64]| {
            let i = i as usize;
            (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 })
        };
        sa.sort_unstable_by_key(|&i| key(i, &rank));
        tmp[sa[0] as usize] = 0;
        for j in 1..n {
            let bump = (key(sa[j - 1], &rank) != key(sa[j], &rank)) as u64;
            tmp[sa[j] as usize] = tmp[sa[j - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            return sa;
        }
        k *= 2;
    }
}

/// Kasai: `lcp[i]` is the common prefix length of suffixes `sa[i-1]` and `sa[i]`.
pub fn lcp_array(s: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p as usize] = i;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1] as usize;
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h as u32;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

const SEPARATOR: u32 = u32::MAX;

/// Every cyclic word is doubled so that each rotation is a prefix of a
/// suffix starting in the first copy; only those suffixes are members.
pub(crate) fn compute(set: &SymmetrizedSet) -> PieceReport {
    let words = set.words();
    let mut text = Vec::new();
    let mut owner = Vec::new();
    for (w, word) in words.iter().enumerate() {
        for rep in 0..2 {
            for (off, l) in word.letters().iter().enumerate() {
                text.push(l.code());
                owner.push((w as u32, if rep == 0 { off as u32 } else { u32::MAX }));
            }
        }
        text.push(SEPARATOR);
        owner.push((w as u32, u32::MAX));
    }
    let sa = suffix_array(&text);
    let lcp = lcp_array(&text, &sa);

    // valid suffixes in suffix order with the lcp to the previous valid one
    let mut valid: Vec<Member> = Vec::new();
    let mut vlcp: Vec<u32> = Vec::new();
    let mut run = u32::MAX;
    for (i, &p) in sa.iter().enumerate() {
        if i > 0 {
            run = run.min(lcp[i]);
        }
        let (w, off) = owner[p as usize];
        if off != u32::MAX {
            vlcp.push(if valid.is_empty() { 0 } else { run });
            valid.push(Member {
                word: w as usize,
                offset: off as usize,
            });
            run = u32::MAX;
        }
    }

    let len = |m: &Member| words[m.word].len();
    let mut best: Vec<(usize, Option<(Member, Member)>)> = vec![(0, None); words.len()];
    for k in 0..valid.len() {
        let a = valid[k];
        // forward
        let mut run = usize::MAX;
        for m in k + 1..valid.len() {
            run = run.min(vlcp[m] as usize);
            if run <= best[a.word].0 {
                break;
            }
            let v = run.min(len(&a)).min(len(&valid[m]));
            if v > best[a.word].0 {
                best[a.word] = (v, Some((a, valid[m])));
            }
        }
        // backward
        let mut run = usize::MAX;
        for m in (0..k).rev() {
            run = run.min(vlcp[m + 1] as usize);
            if run <= best[a.word].0 {
                break;
            }
            let v = run.min(len(&a)).min(len(&valid[m]));
            if v > best[a.word].0 {
                best[a.word] = (v, Some((a, valid[m])));
            }
        }
    }
    let witness_of = |pair: &Option<(Member, Member)>, n: usize| {
        pair.map(|(a, b)| PieceWitness {
            piece: set.member(a).slice(0, n),
            first: a,
            second: b,
        })
    };
    let per_relator: Vec<RelatorPieces> = best
        .iter()
        .enumerate()
        .map(|(w, (n, pair))| RelatorPieces {
            word: w,
            length: words[w].len(),
            max_piece: *n,
            ratio: Ratio::new(*n as u64, words[w].len() as u64),
            witness: witness_of(pair, *n),
        })
        .collect();
    let top = per_relator.iter().min_by_key(|r| std::cmp::Reverse(r.max_piece));
    PieceReport {
        max_piece_length: top.map_or(0, |r| r.max_piece),
        witness: top.and_then(|r| r.witness.clone()),
        per_relator,
    }
}

pub(crate) fn check_metric(set: &SymmetrizedSet, lambda: Ratio<u64>) -> MetricVerdict {
    let report = set.max_pieces();
    let fail = report
        .per_relator
        .iter()
        .filter(|r| Ratio::from_integer(r.max_piece as u64) >= lambda * Ratio::from_integer(r.length as u64))
        .min_by_key(|r| std::cmp::Reverse(r.ratio));
    MetricVerdict {
        holds: fail.is_none(),
        witness: fail.and_then(|r| r.witness.clone()),
    }
}
