//! Metric small cancellation over free groups.
//!
//! A [`SymmetrizedSet`] keeps its closure implicitly: the distinct cyclic
//! words of the relators and their inverses. A closure member is a pair
//! `(word, offset)` read as the rotation of that cyclic word by `offset`, so
//! the closure of three relators of length 20100 costs 6 words, not 120600.

mod dehn;
mod families;
mod pieces;

use std::collections::HashMap;
use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::SmallCancellationError;
use crate::word::cyclic::primitive_period;
use crate::word::{CyclicWord, Word};

pub use dehn::DehnIndex;
pub use families::{
    metric_threshold, r_family, r_family_relators, substitute_pattern, verify_hyp_spec_gen, w_family, w_family_pattern,
    FamilyVar, HypSpecReport, ThresholdRow,
};
pub use pieces::{lcp_array, suffix_array, Member, MetricVerdict, PieceReport, PieceWitness, RelatorPieces};

/// All cyclic permutations of a set of relators and of their inverses.
#[derive(Debug)]
pub struct SymmetrizedSet {
    relators: Vec<Word>,
    words: Vec<Word>,
    index: HashMap<CyclicWord, usize>,
    pieces: OnceLock<PieceReport>,
    dehn: OnceLock<DehnIndex>,
}

impl Clone for SymmetrizedSet {
    fn clone(&self) -> Self {
        SymmetrizedSet {
            relators: self.relators.clone(),
            words: self.words.clone(),
            index: self.index.clone(),
            pieces: OnceLock::new(),
            dehn: OnceLock::new(),
        }
    }
}

impl PartialEq for SymmetrizedSet {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl SymmetrizedSet {
    /// Rejects identities, words that are not cyclically reduced, and proper powers.
    pub fn new(relators: &[Word]) -> Result<SymmetrizedSet, SmallCancellationError> {
        let mut words = Vec::new();
        let mut index = HashMap::new();
        for (i, r) in relators.iter().enumerate() {
            if r.is_identity() {
                return Err(SmallCancellationError::Identity { index: i });
            }
            if !r.is_cyclically_reduced() {
                return Err(SmallCancellationError::NotCyclicallyReduced { index: i });
            }
            let p = primitive_period(r.letters());
            if p < r.len() {
                return Err(SmallCancellationError::ProperPower {
                    index: i,
                    exponent: r.len() / p,
                });
            }
            for w in [r.clone(), r.inverse()] {
                let c = CyclicWord::from_cyclically_reduced(&w).expect("checked");
                if !index.contains_key(&c) {
                    index.insert(c.clone(), words.len());
                    words.push(c.to_word());
                }
            }
        }
        Ok(SymmetrizedSet {
            relators: relators.to_vec(),
            words,
            index,
            pieces: OnceLock::new(),
            dehn: OnceLock::new(),
        })
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Distinct cyclic words (least rotations) generating the closure.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn closure_size(&self) -> usize {
        self.words.iter().map(Word::len).sum()
    }

    pub fn member(&self, m: Member) -> Word {
        self.words[m.word].rotate(m.offset)
    }

    pub fn members(&self) -> impl Iterator<Item = Member> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(w, word)| (0..word.len()).map(move |offset| Member { word: w, offset }))
    }

    pub fn contains(&self, w: &Word) -> bool {
        CyclicWord::from_cyclically_reduced(w)
            .is_some_and(|c| self.index.get(&c).is_some_and(|&i| self.words[i].len() == w.len()))
    }

    pub fn max_relator_length(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn min_relator_length(&self) -> usize {
        self.words.iter().map(Word::len).min().unwrap_or(0)
    }

    /// Exact maximal pieces, computed once from a suffix array.
    pub fn max_pieces(&self) -> &PieceReport {
        self.pieces.get_or_init(|| pieces::compute(self))
    }

    /// Whether every piece `p` satisfies `|p| < λ|r|` for every member `r`
    /// having `p` as a prefix.
    pub fn check_metric(&self, lambda: Ratio<u64>) -> MetricVerdict {
        pieces::check_metric(self, lambda)
    }

    pub fn dehn_index(&self) -> &DehnIndex {
        self.dehn.get_or_init(|| DehnIndex::new(self))
    }

    /// Dehn's algorithm; see [`DehnIndex::reduce`].
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        self.dehn_index().reduce(w)
    }

    /// Dehn's algorithm after confirming `C'(1/6)`, so an empty result is
    /// equivalent to triviality.
    pub fn dehn_reduce_checked(&self, w: &Word) -> Result<Word, SmallCancellationError> {
        let v = self.check_metric(Ratio::new(1, 6));
        if let Some(wit) = v.witness {
            return Err(SmallCancellationError::MetricFails {
                lambda: "1/6".into(),
                piece: wit.piece.len(),
                relator: self.words[wit.first.word].len(),
            });
        }
        Ok(self.dehn_reduce(w))
    }
}

/// The symmetrized closure of `relators`.
pub fn symmetrize(relators: &[Word]) -> Result<SymmetrizedSet, SmallCancellationError> {
    SymmetrizedSet::new(relators)
}

/// `dehn_reduce(w, S)`.
pub fn dehn_reduce(w: &Word, set: &SymmetrizedSet) -> Word {
    set.dehn_reduce(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    #[test]
    fn commutator_closure_has_eight_members() {
        let al = Alphabet::of(&["a", "b"]);
        let r = crate::presentation::parse_word(&al, "a b a^-1 b^-1").unwrap();
        let s = symmetrize(&[r]).unwrap();
        assert_eq!(s.closure_size(), 8);
        let explicit: std::collections::HashSet<Word> = s.members().map(|m| s.member(m)).collect();
        assert_eq!(explicit.len(), 8);
    }

    #[test]
    fn proper_powers_are_rejected() {
        let a3 = Word::generator(0).pow(3);
        assert_eq!(
            symmetrize(&[a3]).unwrap_err(),
            SmallCancellationError::ProperPower { index: 0, exponent: 3 }
        );
        let not_cyc = Word::from_letters([crate::word::Letter::pos(0), crate::word::Letter::pos(1), crate::word::Letter::neg(0)]);
        assert!(matches!(symmetrize(&[not_cyc]), Err(SmallCancellationError::NotCyclicallyReduced { .. })));
    }

    #[test]
    fn closure_is_a_fixed_point() {
        let al = Alphabet::of(&["a", "b"]);
        let r = crate::presentation::parse_word(&al, "a a b a b^-1 b^-1").unwrap();
        let s = symmetrize(&[r]).unwrap();
        let all: Vec<Word> = s.members().map(|m| s.member(m)).collect();
        let again = symmetrize(&all).unwrap();
        assert_eq!(again, s);
        assert!(all.iter().all(|w| s.contains(w)));
    }
}
