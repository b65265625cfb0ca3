use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{symmetrize, SymmetrizedSet};
use crate::word::{Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyVar {
    X,
    Y,
}

/// Syllables of `x^k y^k x^{k+1} y^{k+1} ... x^{k+n-1} y^{k+n-1}`.
pub fn w_family_pattern(k: u64, n: u64) -> Vec<(FamilyVar, u64)> {
    (k..k + n).flat_map(|e| [(FamilyVar::X, e), (FamilyVar::Y, e)]).collect()
}

/// Evaluates a syllable pattern with any substitution for `x` and `y`.
pub fn substitute_pattern<T, F>(pattern: &[(FamilyVar, u64)], mut image: F) -> Vec<T>
where
    F: FnMut(FamilyVar, u64) -> T,
{
    pattern.iter().map(|&(v, e)| image(v, e)).collect()
}

pub fn w_family(k: u64, n: u64, x: &Word, y: &Word) -> Word {
    let parts = substitute_pattern(&w_family_pattern(k, n), |v, e| match v {
        FamilyVar::X => x.pow(e as i64),
        FamilyVar::Y => y.pow(e as i64),
    });
    Word::product(&parts)
}

/// `R(x, y) = x y^{s+1} x^2 y^{s+2} ... x^s y^{2s}`.
pub fn r_family(s: u64, x: &Word, y: &Word) -> Word {
    let parts: Vec<Word> = (1..=s)
        .flat_map(|i| [x.pow(i as i64), y.pow((s + i) as i64)])
        .collect();
    Word::product(&parts)
}

fn ab() -> (Alphabet, Word, Word) {
    (Alphabet::of(&["a", "b"]), Word::generator(0), Word::generator(1))
}

/// `{R(a^-1, b^-1), R(b, a), R(b^-1, a^-1)}`.
pub fn r_family_relators(s: u64) -> Vec<Word> {
    let (_, a, b) = ab();
    vec![
        r_family(s, &a.inverse(), &b.inverse()),
        r_family(s, &b, &a),
        r_family(s, &b.inverse(), &a.inverse()),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypSpecReport {
    pub scale: u64,
    pub relator_length: usize,
    pub closure_size: usize,
    pub lambda: Ratio<u64>,
    pub max_piece: usize,
    pub max_ratio: Ratio<u64>,
    pub metric_holds: bool,
    /// The longest failing piece, when the metric condition fails.
    pub metric_witness: Option<String>,
    pub relators_trivial: Vec<bool>,
    pub r_ab_reduced_length: usize,
    pub r_ab_irreducible: bool,
}

impl HypSpecReport {
    pub fn passed(&self) -> bool {
        self.metric_holds && self.relators_trivial.iter().all(|&t| t) && self.r_ab_irreducible
    }
}

/// Builds the relator family at scale `s` and checks `C'(1/8)`, that each
/// relator Dehn-reduces to the empty word, and that `R(a, b)` does not.
pub fn verify_hyp_spec_gen(s: u64) -> HypSpecReport {
    let (al, a, b) = ab();
    let rels = r_family_relators(s.max(1));
    let set = symmetrize(&rels).expect("family relators are cyclically reduced and primitive");
    let lambda = Ratio::new(1, 8);
    let verdict = set.check_metric(lambda);
    let pieces = set.max_pieces();
    let r_ab = r_family(s.max(1), &a, &b);
    let reduced = set.dehn_reduce(&r_ab);
    HypSpecReport {
        scale: s,
        relator_length: rels[0].len(),
        closure_size: set.closure_size(),
        lambda,
        max_piece: pieces.max_piece_length,
        max_ratio: pieces.max_ratio(),
        metric_holds: verdict.holds,
        metric_witness: verdict.witness.map(|w| al.format(&w.piece)),
        relators_trivial: rels.iter().map(|r| set.dehn_reduce(r).is_empty()).collect(),
        r_ab_reduced_length: reduced.len(),
        r_ab_irreducible: reduced.len() == r_ab.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub scale: u64,
    pub relator_length: usize,
    pub max_piece: usize,
    pub ratio: Ratio<u64>,
    pub holds: bool,
}

/// `C'(λ)` for the three-relator family at each scale in `scales`.
pub fn metric_threshold(scales: impl IntoIterator<Item = u64>, lambda: Ratio<u64>) -> Vec<ThresholdRow> {
    scales
        .into_iter()
        .map(|s| {
            let set: SymmetrizedSet = symmetrize(&r_family_relators(s)).expect("valid family");
            let rep = set.max_pieces();
            ThresholdRow {
                scale: s,
                relator_length: set.max_relator_length(),
                max_piece: rep.max_piece_length,
                ratio: rep.max_ratio(),
                holds: set.check_metric(lambda).holds,
            }
        })
        .collect()
}
