//! Finite prefixes of conjugating towers.
//!
//! Nontrivial base elements are enumerated in shortlex order. Each one
//! either already has a verifiable conjugator onto a representative (and is
//! skipped when the skip rule is on) or receives a fresh stable letter `t_k`
//! with `t_k g t_k^-1 = x_j`. In coset mode the target is instead the fixed
//! representative `z` of the coset of `g` modulo the kernel of a quotient.

mod certificate;
mod report;
mod witness;

use std::collections::HashMap;

use crate::error::TowerError;
use crate::hnn::HnnTower;
use crate::presentation::{FinitePresentation, Quotient, QuotientSpec, TargetElement};
use crate::word::{
    commensurability_key, commensurable, conjugator, cyclic_reduce, Alphabet, CyclicWord, ShortLex, Word,
};

pub use certificate::{independence_certificate, BaseFact, ClassBasis, IndependenceCertificate, PairStep, StageDerivation};
pub use report::{
    quotient_check, ConfigRecord, QuotientEntry, QuotientReport, ReverifyOutcome, SkipRecord, StageJson, TowerReport,
    REPORT_VERSION,
};
pub use witness::{bounded_simple_witness, ConjugatorWitness, SimplicityWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Enumeration {
    #[default]
    Shortlex,
}

/// Coset representatives `Z`, one per coset of the kernel, never the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepSet {
    Explicit(Vec<Word>),
    /// For a kill spec: the image word itself, or `kernel_rep` for the kernel coset.
    ImageLift { kernel_rep: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerMode {
    Ncc,
    Coset { reps: RepSet, spec: QuotientSpec },
}

#[derive(Clone, Debug)]
pub struct TowerConfig {
    pub classes: usize,
    pub base: FinitePresentation,
    pub representatives: Vec<Word>,
    /// `X_i`, each containing its representative; defaults to `{x_i}`.
    pub independent_sets: Vec<Vec<Word>>,
    pub stages: usize,
    pub enumeration: Enumeration,
    pub mode: TowerMode,
    pub skip_rule: bool,
    pub gadget: bool,
}

fn x_names(n: usize) -> Vec<String> {
    (1..n).map(|i| format!("x{i}")).collect()
}

impl TowerConfig {
    /// `n` classes over `F(x_1, ..., x_{n-1})` with representatives `x_i`.
    pub fn ncc(classes: usize, stages: usize) -> TowerConfig {
        let names = x_names(classes.max(2));
        let al = Alphabet::new(&names).expect("distinct names");
        let reps: Vec<Word> = (0..names.len()).map(Word::generator).collect();
        TowerConfig {
            classes,
            base: FinitePresentation::new(al, Vec::new()).expect("free"),
            independent_sets: reps.iter().map(|r| vec![r.clone()]).collect(),
            representatives: reps,
            stages,
            enumeration: Enumeration::Shortlex,
            mode: TowerMode::Ncc,
            skip_rule: true,
            gadget: false,
        }
    }

    /// The ncc tower over `F(x_i) * F(a_i, b_i)` with
    /// `X_i = {x_i, a_i, a_i^-1} ∪ {[a_j, b_i] : j != i}`.
    pub fn gadget(classes: usize, stages: usize) -> TowerConfig {
        let m = classes.max(2) - 1;
        let mut names = x_names(classes.max(2));
        names.extend((1..=m).map(|i| format!("a{i}")));
        names.extend((1..=m).map(|i| format!("b{i}")));
        let al = Alphabet::new(&names).expect("distinct names");
        let reps: Vec<Word> = (0..m).map(Word::generator).collect();
        let a = |i: usize| Word::generator(m + i);
        let b = |i: usize| Word::generator(2 * m + i);
        let sets = (0..m)
            .map(|i| {
                let mut s = vec![reps[i].clone(), a(i), a(i).inverse()];
                for j in (0..m).filter(|&j| j != i) {
                    s.push(Word::product([&a(j), &b(i), &a(j).inverse(), &b(i).inverse()]));
                }
                s
            })
            .collect();
        TowerConfig {
            classes,
            base: FinitePresentation::new(al, Vec::new()).expect("free"),
            representatives: reps,
            independent_sets: sets,
            stages,
            enumeration: Enumeration::Shortlex,
            mode: TowerMode::Ncc,
            skip_rule: true,
            gadget: true,
        }
    }

    /// Coset mode over a base presentation that is itself an HNN tower.
    pub fn coset(base: FinitePresentation, reps: RepSet, spec: QuotientSpec, stages: usize) -> TowerConfig {
        TowerConfig {
            classes: 2,
            base,
            representatives: Vec::new(),
            independent_sets: Vec::new(),
            stages,
            enumeration: Enumeration::Shortlex,
            mode: TowerMode::Coset { reps, spec },
            skip_rule: true,
            gadget: false,
        }
    }

    pub fn with_skip_rule(mut self, on: bool) -> TowerConfig {
        self.skip_rule = on;
        self
    }

    pub fn is_coset(&self) -> bool {
        matches!(self.mode, TowerMode::Coset { .. })
    }

    /// Checks the structural invariants, including pairwise
    /// non-commensurability of the independent sets in the free base.
    pub fn validate(&self) -> Result<(), TowerError> {
        if self.stages == 0 {
            return Err(TowerError::InvalidConfig("stages must be positive".into()));
        }
        let al = self.base.alphabet();
        match &self.mode {
            TowerMode::Ncc => {
                if self.classes < 2 {
                    return Err(TowerError::InvalidConfig("need at least 2 classes".into()));
                }
                if !self.base.is_free() {
                    return Err(TowerError::InvalidConfig("ncc mode needs a free base".into()));
                }
                if self.representatives.len() != self.classes - 1 {
                    return Err(TowerError::InvalidConfig(format!(
                        "expected {} representatives, got {}",
                        self.classes - 1,
                        self.representatives.len()
                    )));
                }
                if self.independent_sets.len() != self.representatives.len() {
                    return Err(TowerError::InvalidConfig("one independent set per representative".into()));
                }
                for (i, set) in self.independent_sets.iter().enumerate() {
                    if !set.contains(&self.representatives[i]) {
                        return Err(TowerError::InvalidConfig(format!("X_{} must contain x_{}", i + 1, i + 1)));
                    }
                    for w in set {
                        if w.is_identity() || !al.contains_word(w) {
                            return Err(TowerError::InvalidConfig(format!(
                                "X_{} has an identity or foreign element",
                                i + 1
                            )));
                        }
                    }
                }
                for (i, si) in self.independent_sets.iter().enumerate() {
                    for sj in &self.independent_sets[i + 1..] {
                        for u in si {
                            for v in sj {
                                if commensurable(u, v)?.related {
                                    return Err(TowerError::InvalidConfig(format!(
                                        "`{}` and `{}` are commensurable",
                                        al.format(u),
                                        al.format(v)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
            TowerMode::Coset { reps, spec } => {
                let base = HnnTower::from_presentation(&self.base)?;
                let q = Quotient::new(&self.base, spec.clone())?;
                match reps {
                    RepSet::Explicit(list) => {
                        let mut seen: Vec<TargetElement> = Vec::new();
                        for z in list {
                            if !al.contains_word(z) || base.is_trivial(z)?.is_yes() {
                                return Err(TowerError::InvalidConfig("representatives must be nontrivial base elements".into()));
                            }
                            let img = q.image(z)?;
                            if seen.contains(&img) {
                                return Err(TowerError::InvalidConfig(format!(
                                    "two representatives share the image {}",
                                    q.format(&img)
                                )));
                            }
                            seen.push(img);
                        }
                        if let Some(m) = q.modulus() {
                            if seen.len() as u64 != m {
                                return Err(TowerError::InvalidConfig(format!("need {m} representatives, got {}", seen.len())));
                            }
                        }
                    }
                    RepSet::ImageLift { kernel_rep } => {
                        if q.modulus().is_some() {
                            return Err(TowerError::InvalidConfig("image lifting needs a kill spec".into()));
                        }
                        if base.is_trivial(kernel_rep)?.is_yes() || !q.is_identity(&q.image(kernel_rep)?) {
                            return Err(TowerError::InvalidConfig("kernel representative must be a nontrivial kernel element".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip {
    pub reason: String,
    pub witness: Word,
}

/// One enumerated element and what happened to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub index: usize,
    pub element: Word,
    /// `j` of the target `x_j` (ncc), or the position of `z` in an explicit rep list.
    pub class: Option<usize>,
    pub target: Word,
    pub stable_letter: Option<usize>,
    pub skipped: Option<Skip>,
}

impl StageRecord {
    /// `w` with `w g w^-1 = target`.
    pub fn witness(&self) -> Word {
        match (&self.skipped, self.stable_letter) {
            (Some(s), _) => s.witness.clone(),
            (None, Some(t)) => Word::generator(t),
            (None, None) => unreachable!("attached stages carry a stable letter"),
        }
    }
}

#[derive(Clone, Debug)]
struct ConjEntry {
    reference: Word,
    witness: Word,
    class: usize,
    origin: String,
}

/// A built tower prefix with its stage records.
#[derive(Clone, Debug)]
pub struct BuiltTower {
    config: TowerConfig,
    tower: HnnTower,
    stages: Vec<StageRecord>,
    conj_index: HashMap<CyclicWord, ConjEntry>,
    base_rank: usize,
}

impl BuiltTower {
    pub fn config(&self) -> &TowerConfig {
        &self.config
    }

    pub fn tower(&self) -> &HnnTower {
        &self.tower
    }

    pub fn stages(&self) -> &[StageRecord] {
        &self.stages
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn attached(&self) -> impl Iterator<Item = &StageRecord> {
        self.stages.iter().filter(|s| s.skipped.is_none())
    }

    pub fn is_base_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| l.generator() < self.base_rank)
    }

    /// Attaches `t g t^-1 = x_class` without any classification. For
    /// constructing adversarial towers; the independence certificate is
    /// expected to reject them.
    pub fn push_relation(&mut self, element: Word, class: usize) -> Result<usize, TowerError> {
        let target = self
            .config
            .representatives
            .get(class.wrapping_sub(1))
            .cloned()
            .ok_or_else(|| TowerError::InvalidConfig(format!("no representative x_{class}")))?;
        let index = self.stages.len() + 1;
        let name = format!("t{}", self.attached().count() + 1);
        let t = self.tower.attach(&name, element.clone(), target.clone())?;
        self.stages.push(StageRecord {
            index,
            element,
            class: Some(class),
            target,
            stable_letter: Some(t),
            skipped: None,
        });
        Ok(index)
    }
}

/// Processes the first `cfg.stages` nontrivial base elements in shortlex order.
pub fn build_tower(cfg: TowerConfig) -> Result<BuiltTower, TowerError> {
    cfg.validate()?;
    let tower = match cfg.mode {
        TowerMode::Ncc => HnnTower::free(cfg.base.alphabet().clone()),
        TowerMode::Coset { .. } => HnnTower::from_presentation(&cfg.base)?,
    };
    let base_rank = cfg.base.alphabet().len();
    let mut built = BuiltTower {
        config: cfg,
        tower,
        stages: Vec::new(),
        conj_index: HashMap::new(),
        base_rank,
    };
    if built.config.is_coset() {
        build_coset(&mut built)?;
    } else {
        build_ncc(&mut built)?;
    }
    Ok(built)
}

fn conj_key(w: &Word) -> CyclicWord {
    cyclic_reduce(w).0
}

fn build_ncc(b: &mut BuiltTower) -> Result<(), TowerError> {
    let mut labels: HashMap<CyclicWord, usize> = HashMap::new();
    for (i, set) in b.config.independent_sets.iter().enumerate() {
        for w in set {
            labels.insert(commensurability_key(w)?, i + 1);
        }
    }
    for (i, x) in b.config.representatives.iter().enumerate() {
        b.conj_index.insert(
            conj_key(x),
            ConjEntry {
                reference: x.clone(),
                witness: Word::identity(),
                class: i + 1,
                origin: format!("x{}", i + 1),
            },
        );
    }
    let enumeration = ShortLex::new(b.base_rank).take(b.config.stages);
    let mut attached = 0usize;
    for (k, g) in enumeration.enumerate() {
        let index = k + 1;
        let key = conj_key(&g);
        if b.config.skip_rule {
            if let Some(e) = b.conj_index.get(&key) {
                let c = conjugator(&g, &e.reference).expect("same cyclic word");
                let witness = e.witness.concat(&c);
                let target = b.config.representatives[e.class - 1].clone();
                if !b.tower.verify_conjugator(&g, &witness, &target)? {
                    return Err(TowerError::Stage {
                        stage: index,
                        message: "composed witness failed to verify".into(),
                    });
                }
                let reason = format!("conjugate to {} in the base", e.origin);
                let class = e.class;
                b.stages.push(StageRecord {
                    index,
                    element: g,
                    class: Some(class),
                    target,
                    stable_letter: None,
                    skipped: Some(Skip { reason, witness }),
                });
                continue;
            }
        }
        let ck = commensurability_key(&g)?;
        let class = *labels.entry(ck).or_insert(1);
        let target = b.config.representatives[class - 1].clone();
        attached += 1;
        let t = b.tower.attach(&format!("t{attached}"), g.clone(), target.clone())?;
        let tw = Word::generator(t);
        if !b.tower.verify_conjugator(&g, &tw, &target)? {
            return Err(TowerError::Stage {
                stage: index,
                message: "fresh relation failed to verify".into(),
            });
        }
        b.conj_index.entry(key).or_insert(ConjEntry {
            reference: g.clone(),
            witness: tw,
            class,
            origin: format!("stage {index}"),
        });
        b.stages.push(StageRecord {
            index,
            element: g,
            class: Some(class),
            target,
            stable_letter: Some(t),
            skipped: None,
        });
    }
    Ok(())
}

/// The representative of the coset of `g`, with its position in an explicit list.
pub(crate) fn coset_rep(q: &Quotient, reps: &RepSet, g: &Word) -> Result<Option<(Word, Option<usize>)>, TowerError> {
    let img = q.image(g)?;
    Ok(match reps {
        RepSet::Explicit(list) => list
            .iter()
            .enumerate()
            .find(|(_, z)| q.image(z).map(|i| i == img).unwrap_or(false))
            .map(|(i, z)| (z.clone(), Some(i + 1))),
        RepSet::ImageLift { kernel_rep } => match img {
            TargetElement::Free(w) if w.is_identity() => Some((kernel_rep.clone(), None)),
            TargetElement::Free(w) => Some((w, None)),
            TargetElement::Residue { .. } => None,
        },
    })
}

fn build_coset(b: &mut BuiltTower) -> Result<(), TowerError> {
    let TowerMode::Coset { reps, spec } = b.config.mode.clone() else {
        unreachable!()
    };
    let q = Quotient::new(&b.config.base, spec)?;
    let base = b.tower.clone();
    let mut seen: Vec<(Word, usize)> = Vec::new();
    let mut attached = 0usize;
    let mut index = 0usize;
    for g in ShortLex::new(b.base_rank) {
        if index == b.config.stages {
            break;
        }
        if base.is_trivial(&g)?.is_yes() {
            continue;
        }
        index += 1;
        let Some((z, class)) = coset_rep(&q, &reps, &g)? else {
            return Err(TowerError::MissingRepresentative {
                stage: index,
                image: q.format(&q.image(&g)?),
            });
        };
        if b.config.skip_rule {
            let mut skip = None;
            if base.equal(&g, &z)?.is_yes() {
                skip = Some(Skip {
                    reason: "equal to its representative".into(),
                    witness: Word::identity(),
                });
            } else {
                for (e, si) in &seen {
                    if base.equal(&g, e)?.is_yes() {
                        skip = Some(Skip {
                            reason: format!("equal to the element of stage {si}"),
                            witness: b.stages[si - 1].witness(),
                        });
                        break;
                    }
                }
            }
            if let Some(s) = skip {
                if !b.tower.verify_conjugator(&g, &s.witness, &z)? {
                    return Err(TowerError::Stage {
                        stage: index,
                        message: "skip witness failed to verify".into(),
                    });
                }
                b.stages.push(StageRecord {
                    index,
                    element: g,
                    class,
                    target: z,
                    stable_letter: None,
                    skipped: Some(s),
                });
                continue;
            }
        }
        attached += 1;
        let t = b.tower.attach(&format!("t{attached}"), g.clone(), z.clone())?;
        if !b.tower.verify_conjugator(&g, &Word::generator(t), &z)? {
            return Err(TowerError::Stage {
                stage: index,
                message: "fresh relation failed to verify".into(),
            });
        }
        seen.push((g.clone(), index));
        b.stages.push(StageRecord {
            index,
            element: g,
            class,
            target: z,
            stable_letter: Some(t),
            skipped: None,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_attached_letter_conjugates_x1_inverse() {
        let b = build_tower(TowerConfig::ncc(3, 10)).unwrap();
        let s = &b.stages()[0];
        assert!(s.skipped.is_some());
        assert!(s.witness().is_identity());
        let first = b.attached().next().unwrap();
        assert_eq!(b.tower().format(&first.element), "x1^-1");
        assert_eq!(b.tower().format(&first.target), "x1");
        assert_eq!(b.tower().alphabet().name(first.stable_letter.unwrap()), "t1");
        let rel = Word::product([
            &Word::generator(first.stable_letter.unwrap()),
            &first.element,
            &Word::generator(first.stable_letter.unwrap()).inverse(),
        ]);
        assert_eq!(b.tower().britton_reduce(&rel).unwrap(), first.target);
    }

    #[test]
    fn rank_one_base_uses_a_single_class() {
        let b = build_tower(TowerConfig::ncc(2, 12)).unwrap();
        for s in b.stages() {
            assert_eq!(s.class, Some(1));
            assert!(b.tower().verify_conjugator(&s.element, &s.witness(), &s.target).unwrap());
        }
    }

    #[test]
    fn skip_rule_off_attaches_everything() {
        let b = build_tower(TowerConfig::ncc(3, 6).with_skip_rule(false)).unwrap();
        assert_eq!(b.attached().count(), 6);
    }

    #[test]
    fn commensurable_representatives_are_rejected() {
        let mut cfg = TowerConfig::ncc(3, 4);
        cfg.representatives[1] = Word::generator(0).pow(2);
        cfg.independent_sets[1] = vec![cfg.representatives[1].clone()];
        assert!(matches!(build_tower(cfg), Err(TowerError::InvalidConfig(_))));
    }

    #[test]
    fn coset_relations_target_representatives() {
        let base = FinitePresentation::klein_bottle();
        let a = base.word("a").unwrap();
        let cfg = TowerConfig::coset(base, RepSet::ImageLift { kernel_rep: a }, QuotientSpec::kill(&["a"]), 12);
        let b = build_tower(cfg).unwrap();
        let t = b.tower().alphabet().index_of("t").unwrap();
        for s in b.attached() {
            let z = &s.target;
            assert!(z.letters().iter().all(|l| l.generator() == t) || b.tower().format(z) == "a");
            assert!(b.tower().verify_conjugator(&s.element, &s.witness(), z).unwrap());
        }
    }
}
