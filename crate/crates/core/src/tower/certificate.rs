use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{BuiltTower, StageRecord, TowerConfig};
use crate::error::CertificationError;
use crate::presentation::parse_word;
use crate::word::{commensurability_key, commensurable, Alphabet, CommensurabilityWitness, CyclicWord, Word};

/// `left` (in `X_i`) and `right` (in `X_j`) are not commensurable in the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFact {
    pub left: String,
    pub right: String,
    pub classes: [usize; 2],
}

/// Why the element of a stage lies in its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassBasis {
    /// `conjugator · element^k · conjugator^-1 = reference^l` in the base.
    Commensurable {
        reference: String,
        k: i64,
        l: i64,
        conjugator: String,
    },
    /// Commensurable with nothing labelled so far.
    Fresh,
}

/// For the pair `{x_p, x_q}` the conjugacy lemma is applied with `x_pivot`
/// in the first slot; this needs `pivot != class`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStep {
    pub pair: [usize; 2],
    pub pivot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDerivation {
    pub stage: usize,
    pub stable_letter: String,
    pub element: String,
    pub class: usize,
    pub basis: ClassBasis,
    pub pairs: Vec<PairStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceCertificate {
    pub classes: usize,
    pub base_facts: Vec<BaseFact>,
    pub stages: Vec<StageDerivation>,
}

fn fail(stage: usize, reason: impl Into<String>) -> CertificationError {
    CertificationError {
        stage,
        reason: reason.into(),
    }
}

fn pair_steps(classes: usize, class: usize) -> Vec<PairStep> {
    let mut out = Vec::new();
    for p in 1..classes {
        for q in p + 1..classes {
            out.push(PairStep {
                pair: [p, q],
                pivot: if p != class { p } else { q },
            });
        }
    }
    out
}

fn initial_labels(cfg: &TowerConfig) -> Result<HashMap<CyclicWord, (usize, Word)>, CertificationError> {
    let mut labels = HashMap::new();
    for (i, set) in cfg.independent_sets.iter().enumerate() {
        for w in set {
            let key = commensurability_key(w).map_err(|e| fail(0, e.to_string()))?;
            labels.entry(key).or_insert((i + 1, w.clone()));
        }
    }
    Ok(labels)
}

fn base_pairs(cfg: &TowerConfig) -> Vec<(Word, Word, [usize; 2])> {
    let sets = &cfg.independent_sets;
    let mut out = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            for u in &sets[i] {
                for v in &sets[j] {
                    out.push((u.clone(), v.clone(), [i + 1, j + 1]));
                }
            }
        }
    }
    out
}

/// Replays the class bookkeeping of an ncc tower and emits the facts each
/// stage's appeal to the conjugacy lemma relies on.
pub fn independence_certificate(built: &BuiltTower) -> Result<IndependenceCertificate, CertificationError> {
    let cfg = built.config();
    if cfg.is_coset() {
        return Err(fail(0, "independence certificates are for ncc towers"));
    }
    let al = built.tower().alphabet();
    let mut base_facts = Vec::new();
    for (u, v, classes) in base_pairs(cfg) {
        let related = commensurable(&u, &v).map_err(|e| fail(0, e.to_string()))?.related;
        if related {
            return Err(fail(0, format!("`{}` and `{}` are commensurable", al.format(&u), al.format(&v))));
        }
        base_facts.push(BaseFact {
            left: al.format(&u),
            right: al.format(&v),
            classes,
        });
    }
    let mut labels = initial_labels(cfg)?;
    let mut stages = Vec::new();
    for s in built.attached() {
        let j = s.class.ok_or_else(|| fail(s.index, "stage has no class"))?;
        if cfg.representatives.get(j.wrapping_sub(1)) != Some(&s.target) {
            return Err(fail(s.index, format!("target is not x{j}")));
        }
        let key = commensurability_key(&s.element).map_err(|e| fail(s.index, e.to_string()))?;
        let basis = match labels.get(&key) {
            Some((c, _)) if *c != j => {
                return Err(fail(
                    s.index,
                    format!(
                        "`{}` is commensurable with X_{c} but is conjugated to x{j}; classes {c} and {j} merge",
                        al.format(&s.element)
                    ),
                ))
            }
            Some((_, r)) => {
                let w = commensurable(&s.element, r)
                    .map_err(|e| fail(s.index, e.to_string()))?
                    .witness
                    .ok_or_else(|| fail(s.index, "label without commensurability witness"))?;
                ClassBasis::Commensurable {
                    reference: al.format(r),
                    k: w.k,
                    l: w.l,
                    conjugator: al.format(&w.conjugator),
                }
            }
            None => {
                labels.insert(key, (j, s.element.clone()));
                ClassBasis::Fresh
            }
        };
        stages.push(StageDerivation {
            stage: s.index,
            stable_letter: al.name(s.stable_letter.expect("attached")).to_string(),
            element: al.format(&s.element),
            class: j,
            basis,
            pairs: pair_steps(cfg.classes, j),
        });
    }
    Ok(IndependenceCertificate {
        classes: cfg.classes,
        base_facts,
        stages,
    })
}

impl IndependenceCertificate {
    /// Re-checks every base fact through free-group commensurability and
    /// replays the class labels stage by stage against `records`.
    pub fn verify(&self, cfg: &TowerConfig, records: &[StageRecord], alphabet: &Alphabet) -> Result<(), CertificationError> {
        let parse = |stage: usize, s: &str| parse_word(alphabet, s).map_err(|e| fail(stage, format!("bad word `{s}`: {e}")));
        if self.classes != cfg.classes {
            return Err(fail(0, "class count differs from the configuration"));
        }
        let expected = base_pairs(cfg);
        if self.base_facts.len() != expected.len() {
            return Err(fail(0, format!("{} base facts, expected {}", self.base_facts.len(), expected.len())));
        }
        for (f, (u, v, classes)) in self.base_facts.iter().zip(&expected) {
            let (fu, fv) = (parse(0, &f.left)?, parse(0, &f.right)?);
            if (&fu, &fv, f.classes) != (u, v, *classes) {
                return Err(fail(0, format!("base fact `{}` vs `{}` does not match the independent sets", f.left, f.right)));
            }
            if commensurable(&fu, &fv).map_err(|e| fail(0, e.to_string()))?.related {
                return Err(fail(0, format!("`{}` and `{}` are commensurable", f.left, f.right)));
            }
        }
        let mut labels = initial_labels(cfg)?;
        let attached: Vec<&StageRecord> = records.iter().filter(|r| r.skipped.is_none()).collect();
        for (i, r) in attached.iter().enumerate() {
            let Some(d) = self.stages.get(i) else {
                return Err(fail(r.index, "no derivation for this stage"));
            };
            if d.stage != r.index || parse(r.index, &d.element)? != r.element || Some(d.class) != r.class {
                return Err(fail(r.index, "derivation does not match the stage record"));
            }
            let g = &r.element;
            let key = commensurability_key(g).map_err(|e| fail(r.index, e.to_string()))?;
            match &d.basis {
                ClassBasis::Commensurable { reference, k, l, conjugator } => {
                    let rw = parse(r.index, reference)?;
                    let witness = CommensurabilityWitness {
                        k: *k,
                        l: *l,
                        conjugator: parse(r.index, conjugator)?,
                    };
                    if !witness.verify(g, &rw) {
                        return Err(fail(r.index, "commensurability witness does not verify"));
                    }
                    let rk = commensurability_key(&rw).map_err(|e| fail(r.index, e.to_string()))?;
                    match labels.get(&rk) {
                        Some((c, _)) if *c == d.class => {}
                        _ => return Err(fail(r.index, format!("reference `{reference}` is not labelled {}", d.class))),
                    }
                }
                ClassBasis::Fresh => {
                    if let Some((c, _)) = labels.get(&key) {
                        return Err(fail(r.index, format!("element claimed fresh but lies in class {c}")));
                    }
                    labels.insert(key, (d.class, g.clone()));
                }
            }
            let want = pair_steps(cfg.classes, d.class);
            if d.pairs.len() != want.len() {
                return Err(fail(r.index, "not every pair of classes is covered"));
            }
            for (p, w) in d.pairs.iter().zip(&want) {
                if p.pair != w.pair || !p.pair.contains(&p.pivot) || p.pivot == d.class {
                    return Err(fail(r.index, format!("pair {:?} uses an invalid pivot {}", p.pair, p.pivot)));
                }
            }
        }
        if self.stages.len() != attached.len() {
            return Err(fail(
                self.stages.get(attached.len()).map_or(0, |d| d.stage),
                "derivation for a stage that attached no letter",
            ));
        }
        Ok(())
    }
}
