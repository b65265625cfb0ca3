use serde::{Deserialize, Serialize};

use crate::error::{HnnError, ParseError};
use crate::presentation::{parse_word, FinitePresentation};
use crate::word::{Alphabet, Letter, Word};

/// `t c t^-1 = d`, extended to `t c^m t^-1 = d^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAssociation {
    pub stable_letter: usize,
    pub source: Word,
    pub target: Word,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GenKind {
    Base,
    Stable(usize),
}

pub const DEFAULT_BOUND: u64 = 64;

/// A free group extended by successive HNN extensions with infinite cyclic
/// associated subgroups.
///
/// Every generator has a depth: base generators have depth 0 and a stable
/// letter sits one above the deepest letter of its associated elements. The
/// group generated by letters of depth `<= d` is a multiple HNN extension of
/// the group of depth `<= d - 1`, which is what Britton reduction walks.
#[derive(Clone, Debug)]
pub struct HnnTower {
    alphabet: Alphabet,
    kinds: Vec<GenKind>,
    depths: Vec<u32>,
    associations: Vec<CyclicAssociation>,
    bound: u64,
}

impl HnnTower {
    pub fn free(alphabet: Alphabet) -> HnnTower {
        let n = alphabet.len();
        HnnTower {
            alphabet,
            kinds: vec![GenKind::Base; n],
            depths: vec![0; n],
            associations: Vec::new(),
            bound: DEFAULT_BOUND,
        }
    }

    /// Reads each relator as an HNN relation `t c t^-1 d^-1`, choosing for
    /// `t` a generator that occurs exactly twice in it with opposite signs
    /// and in no other relator.
    pub fn from_presentation(pres: &FinitePresentation) -> Result<HnnTower, HnnError> {
        let al = pres.alphabet();
        let rels = pres.relators();
        let mut chosen: Vec<Option<usize>> = vec![None; rels.len()];
        for (i, r) in rels.iter().enumerate() {
            let candidates: Vec<usize> = (0..al.len())
                .filter(|&g| {
                    let occ: Vec<&Letter> = r.letters().iter().filter(|l| l.generator() == g).collect();
                    occ.len() == 2
                        && occ[0].is_inverse() != occ[1].is_inverse()
                        && rels.iter().enumerate().all(|(j, o)| j == i || !o.contains_generator(g))
                })
                .collect();
            let Some(&g) = candidates.iter().rev().find(|&&g| split_relator(r, g).is_some()) else {
                return Err(HnnError::NotHnnRelator(al.format(r)));
            };
            chosen[i] = Some(g);
        }
        let mut kinds = vec![GenKind::Base; al.len()];
        let mut assoc = Vec::new();
        for (i, r) in rels.iter().enumerate() {
            let g = chosen[i].expect("every relator has a stable letter");
            let (c, d) = split_relator(r, g).expect("checked above");
            kinds[g] = GenKind::Stable(assoc.len());
            assoc.push(CyclicAssociation {
                stable_letter: g,
                source: c,
                target: d,
            });
        }
        // depths by fixed point; a cycle of dependencies never settles
        let mut depths: Vec<Option<u32>> = kinds
            .iter()
            .map(|k| matches!(k, GenKind::Base).then_some(0))
            .collect();
        for _ in 0..=assoc.len() {
            for a in &assoc {
                let ds: Option<Vec<u32>> = a
                    .source
                    .letters()
                    .iter()
                    .chain(a.target.letters())
                    .map(|l| depths[l.generator()])
                    .collect();
                if let Some(ds) = ds {
                    depths[a.stable_letter] = Some(1 + ds.into_iter().max().unwrap_or(0));
                }
            }
        }
        let depths = depths
            .into_iter()
            .enumerate()
            .map(|(g, d)| d.ok_or_else(|| HnnError::SelfReferentialAssociation(al.name(g).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HnnTower {
            alphabet: al.clone(),
            kinds,
            depths,
            associations: assoc,
            bound: DEFAULT_BOUND,
        })
    }

    pub fn with_bound(mut self, bound: u64) -> HnnTower {
        self.bound = bound.max(1);
        self
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn associations(&self) -> &[CyclicAssociation] {
        &self.associations
    }

    pub fn association_of(&self, stable_letter: usize) -> Option<&CyclicAssociation> {
        match self.kinds.get(stable_letter)? {
            GenKind::Stable(i) => Some(&self.associations[*i]),
            GenKind::Base => None,
        }
    }

    pub fn is_stable(&self, g: usize) -> bool {
        matches!(self.kinds[g], GenKind::Stable(_))
    }

    pub fn depth(&self, g: usize) -> u32 {
        self.depths[g]
    }

    pub fn max_depth(&self) -> u32 {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    pub fn word_level(&self, w: &Word) -> u32 {
        w.letters().iter().map(|l| self.depths[l.generator()]).max().unwrap_or(0)
    }

    pub fn base_generators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kinds.len()).filter(|&g| self.kinds[g] == GenKind::Base)
    }

    pub fn stable_letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.associations.iter().map(|a| a.stable_letter)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.alphabet.contains_word(w)
    }

    pub fn word(&self, text: &str) -> Result<Word, ParseError> {
        parse_word(&self.alphabet, text)
    }

    pub fn format(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    /// Attaches a new stable letter `name` with `name source name^-1 = target`.
    pub fn attach(&mut self, name: &str, source: Word, target: Word) -> Result<usize, HnnError> {
        if !self.contains(&source) || !self.contains(&target) {
            return Err(HnnError::NotInTower);
        }
        if self.is_trivial(&source)?.is_yes() || self.is_trivial(&target)?.is_yes() {
            return Err(HnnError::IdentityAssociation(name.to_string()));
        }
        let depth = 1 + self.word_level(&source).max(self.word_level(&target));
        let g = self.alphabet.push(name)?;
        self.kinds.push(GenKind::Stable(self.associations.len()));
        self.depths.push(depth);
        self.associations.push(CyclicAssociation {
            stable_letter: g,
            source,
            target,
        });
        Ok(g)
    }

    /// Serializable description: base generators and `(letter, source, target)` triples.
    pub fn to_spec(&self) -> TowerSpec {
        TowerSpec {
            base: self.base_generators().map(|g| self.alphabet.name(g).to_string()).collect(),
            associations: self
                .associations
                .iter()
                .map(|a| AssociationSpec {
                    stable_letter: self.alphabet.name(a.stable_letter).to_string(),
                    source: self.format(&a.source),
                    target: self.format(&a.target),
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<HnnTower, HnnError> {
        let mut t = HnnTower::free(Alphabet::new(&spec.base)?);
        for a in &spec.associations {
            // associations may only mention earlier letters
            let src = t.word(&a.source).map_err(|_| HnnError::NotInTower)?;
            let tgt = t.word(&a.target).map_err(|_| HnnError::NotInTower)?;
            t.attach(&a.stable_letter, src, tgt)?;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociationSpec {
    pub stable_letter: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub base: Vec<String>,
    pub associations: Vec<AssociationSpec>,
}

/// Splits a relator containing `g` once with each sign as `g c g^-1 d^-1`.
fn split_relator(r: &Word, g: usize) -> Option<(Word, Word)> {
    let ls = r.letters();
    let start = ls.iter().position(|l| l.generator() == g && !l.is_inverse())?;
    let rot = r.rotate(start);
    if rot.len() != r.len() {
        return None;
    }
    let rl = rot.letters();
    let end = rl.iter().position(|l| l.generator() == g && l.is_inverse())?;
    let c = Word::from_letters(rl[1..end].iter().copied());
    let e = Word::from_letters(rl[end + 1..].iter().copied());
    if c.is_identity() || e.is_identity() {
        return None;
    }
    Some((c, e.inverse()))
}
