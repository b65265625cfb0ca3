use serde::{Deserialize, Serialize};

use super::certificate::{independence_certificate, IndependenceCertificate};
use super::{BuiltTower, RepSet, Skip, StageRecord, TowerConfig, TowerMode};
use crate::error::TowerError;
use crate::hnn::{HnnTower, TowerSpec};
use crate::presentation::{parse_presentation, parse_word, Quotient, QuotientSpec};
use crate::word::{ShortLex, Word};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RepRecord {
    Explicit { reps: Vec<String> },
    ImageLift { kernel_rep: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRecord {
    pub spec: QuotientSpec,
    pub reps: RepRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub classes: usize,
    pub base: String,
    pub representatives: Vec<String>,
    pub independent_sets: Vec<Vec<String>>,
    pub stages: usize,
    pub enumeration: String,
    pub mode: String,
    pub skip_rule: bool,
    pub gadget: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coset: Option<CosetRecord>,
}

impl ConfigRecord {
    pub fn from_config(cfg: &TowerConfig) -> ConfigRecord {
        let al = cfg.base.alphabet();
        let f = |w: &Word| al.format(w);
        ConfigRecord {
            classes: cfg.classes,
            base: cfg.base.to_string(),
            representatives: cfg.representatives.iter().map(f).collect(),
            independent_sets: cfg.independent_sets.iter().map(|s| s.iter().map(f).collect()).collect(),
            stages: cfg.stages,
            enumeration: "shortlex".into(),
            mode: if cfg.is_coset() { "coset" } else { "ncc" }.into(),
            skip_rule: cfg.skip_rule,
            gadget: cfg.gadget,
            coset: match &cfg.mode {
                TowerMode::Ncc => None,
                TowerMode::Coset { reps, spec } => Some(CosetRecord {
                    spec: spec.clone(),
                    reps: match reps {
                        RepSet::Explicit(list) => RepRecord::Explicit {
                            reps: list.iter().map(f).collect(),
                        },
                        RepSet::ImageLift { kernel_rep } => RepRecord::ImageLift {
                            kernel_rep: f(kernel_rep),
                        },
                    },
                }),
            },
        }
    }

    pub fn to_config(&self) -> Result<TowerConfig, TowerError> {
        let base = parse_presentation(&self.base)?;
        let al = base.alphabet().clone();
        let w = |s: &String| parse_word(&al, s);
        if self.enumeration != "shortlex" {
            return Err(TowerError::InvalidConfig(format!("unknown enumeration `{}`", self.enumeration)));
        }
        let mode = match (self.mode.as_str(), &self.coset) {
            ("ncc", None) => TowerMode::Ncc,
            ("coset", Some(c)) => TowerMode::Coset {
                spec: c.spec.clone(),
                reps: match &c.reps {
                    RepRecord::Explicit { reps } => RepSet::Explicit(reps.iter().map(w).collect::<Result<_, _>>()?),
                    RepRecord::ImageLift { kernel_rep } => RepSet::ImageLift {
                        kernel_rep: w(kernel_rep)?,
                    },
                },
            },
            (m, _) => return Err(TowerError::InvalidConfig(format!("inconsistent mode `{m}`"))),
        };
        Ok(TowerConfig {
            classes: self.classes,
            representatives: self.representatives.iter().map(w).collect::<Result<_, _>>()?,
            independent_sets: self
                .independent_sets
                .iter()
                .map(|s| s.iter().map(w).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()?,
            base,
            stages: self.stages,
            enumeration: super::Enumeration::Shortlex,
            mode,
            skip_rule: self.skip_rule,
            gadget: self.gadget,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub reason: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageJson {
    pub index: usize,
    pub element: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_letter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<SkipRecord>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientEntry {
    pub stage: usize,
    pub relation: String,
    pub lhs_image: String,
    pub rhs_image: String,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub spec: QuotientSpec,
    pub consistent: bool,
    pub entries: Vec<QuotientEntry>,
}

/// Checks that each relation `t g t^-1 = z` survives the quotient with every
/// stable letter sent to the identity, i.e. `φ(g) = φ(z)`.
pub fn quotient_check(built: &BuiltTower, spec: &QuotientSpec) -> Result<QuotientReport, TowerError> {
    let q = Quotient::new(&built.config().base, spec.clone())?;
    let qt = q.extend_trivially(built.tower().alphabet())?;
    let t = built.tower();
    let mut entries = Vec::new();
    for s in built.stages() {
        let w = s.witness();
        let lhs = Word::product([&w, &s.element, &w.inverse()]);
        let (li, ri) = (qt.image(&lhs)?, qt.image(&s.target)?);
        entries.push(QuotientEntry {
            stage: s.index,
            relation: format!("{} = {}", t.format(&lhs), t.format(&s.target)),
            lhs_image: qt.format(&li),
            rhs_image: qt.format(&ri),
            consistent: li == ri,
        });
    }
    Ok(QuotientReport {
        spec: spec.clone(),
        consistent: entries.iter().all(|e| e.consistent),
        entries,
    })
}

/// Versioned, self-contained record of a built tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub version: u32,
    pub config: ConfigRecord,
    pub tower: TowerSpec,
    pub stages: Vec<StageJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independence: Option<IndependenceCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientReport>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReverifyOutcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ReverifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn stage_json(t: &HnnTower, s: &StageRecord) -> Result<StageJson, TowerError> {
    Ok(StageJson {
        index: s.index,
        element: t.format(&s.element),
        class: s.class,
        target: t.format(&s.target),
        stable_letter: s.stable_letter.map(|g| t.alphabet().name(g).to_string()),
        skipped: s.skipped.as_ref().map(|k| SkipRecord {
            reason: k.reason.clone(),
            witness: t.format(&k.witness),
        }),
        verified: t.verify_conjugator(&s.element, &s.witness(), &s.target)?,
    })
}

impl TowerReport {
    pub fn from_built(built: &BuiltTower) -> Result<TowerReport, TowerError> {
        let t = built.tower();
        let stages = built.stages().iter().map(|s| stage_json(t, s)).collect::<Result<Vec<_>, _>>()?;
        let (independence, certification_error, quotient) = match &built.config().mode {
            TowerMode::Ncc => match independence_certificate(built) {
                Ok(c) => (Some(c), None, None),
                Err(e) => (None, Some(e.to_string()), None),
            },
            TowerMode::Coset { spec, .. } => (None, None, Some(quotient_check(built, spec)?)),
        };
        let verified = stages.iter().all(|s| s.verified)
            && certification_error.is_none()
            && quotient.as_ref().is_none_or(|q| q.consistent);
        Ok(TowerReport {
            version: REPORT_VERSION,
            config: ConfigRecord::from_config(built.config()),
            tower: t.to_spec(),
            stages,
            independence,
            certification_error,
            quotient,
            verified,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<TowerReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Rebuilds the tower letter by letter from the recorded associations and
    /// re-checks every stage, the independence derivation or the quotient
    /// compatibility. Nothing recorded as a verdict is trusted.
    pub fn reverify(&self) -> ReverifyOutcome {
        let mut out = ReverifyOutcome {
            checked: 0,
            failures: Vec::new(),
        };
        if let Err(e) = self.reverify_into(&mut out) {
            out.failures.push(e);
        }
        out
    }

    fn reverify_into(&self, out: &mut ReverifyOutcome) -> Result<(), String> {
        if self.version != REPORT_VERSION {
            return Err(format!("unsupported report version {}", self.version));
        }
        let cfg = self.config.to_config().map_err(|e| format!("config: {e}"))?;
        cfg.validate().map_err(|e| format!("config: {e}"))?;
        let mut tower = match cfg.mode {
            TowerMode::Ncc => HnnTower::free(cfg.base.alphabet().clone()),
            TowerMode::Coset { .. } => HnnTower::from_presentation(&cfg.base).map_err(|e| format!("base: {e}"))?,
        };
        let base = tower.clone();
        let base_rank = base.alphabet().len();
        let expected_base: Vec<String> = base.base_generators().map(|g| base.alphabet().name(g).to_string()).collect();
        if self.tower.base != expected_base {
            return Err("tower base does not match the configured presentation".into());
        }
        let mut enumeration = ShortLex::new(base_rank).filter(|g| !base.is_trivial(g).map(|v| v.is_yes()).unwrap_or(false));
        let mut next_assoc = self
            .tower
            .associations
            .iter()
            .skip(base.associations().len());
        let mut records = Vec::new();
        for (i, s) in self.stages.iter().enumerate() {
            let stage = i + 1;
            let fail = |m: String| format!("stage {stage}: {m}");
            if s.index != stage {
                return Err(fail(format!("recorded index {}", s.index)));
            }
            let word = |tw: &HnnTower, text: &str| parse_word(tw.alphabet(), text).map_err(|e| fail(format!("`{text}`: {e}")));
            let g = word(&tower, &s.element)?;
            if enumeration.next().as_ref() != Some(&g) {
                out.failures.push(fail("element out of enumeration order".into()));
            }
            let target = word(&tower, &s.target)?;
            let (letter, witness) = match (&s.stable_letter, &s.skipped) {
                (Some(name), None) => {
                    let a = next_assoc.next().ok_or_else(|| fail("stable letter missing from the tower".into()))?;
                    if &a.stable_letter != name {
                        return Err(fail(format!("expected letter `{}`, tower attaches `{}`", name, a.stable_letter)));
                    }
                    if word(&tower, &a.source)? != g || word(&tower, &a.target)? != target {
                        out.failures.push(fail(format!("relation for `{name}` differs from the stage record")));
                    }
                    let src = word(&tower, &a.source)?;
                    let tgt = word(&tower, &a.target)?;
                    let t = tower.attach(name, src, tgt).map_err(|e| fail(e.to_string()))?;
                    (Some(t), Word::generator(t))
                }
                (None, Some(k)) => (None, word(&tower, &k.witness)?),
                _ => return Err(fail("stage is neither attached nor skipped".into())),
            };
            out.checked += 1;
            match tower.verify_conjugator(&g, &witness, &target) {
                Ok(true) => {}
                Ok(false) => out.failures.push(fail("conjugator does not verify".into())),
                Err(e) => out.failures.push(fail(e.to_string())),
            }
            records.push(StageRecord {
                index: stage,
                element: g,
                class: s.class,
                target,
                stable_letter: letter,
                skipped: s.skipped.as_ref().map(|k| Skip {
                    reason: k.reason.clone(),
                    witness: witness.clone(),
                }),
            });
        }
        if next_assoc.next().is_some() {
            out.failures.push("tower has stable letters no stage accounts for".into());
        }
        // stage groups embed: every relation still holds at the top
        for r in &records {
            if !tower.verify_conjugator(&r.element, &r.witness(), &r.target).unwrap_or(false) {
                out.failures.push(format!("stage {}: relation fails in the final tower", r.index));
            }
        }
        match &cfg.mode {
            TowerMode::Ncc => match &self.independence {
                None => out.failures.push("independence certificate missing".into()),
                Some(c) => {
                    out.checked += c.base_facts.len() + c.stages.len();
                    if let Err(e) = c.verify(&cfg, &records, tower.alphabet()) {
                        out.failures.push(format!("stage {}: independence: {}", e.stage, e.reason));
                    }
                }
            },
            TowerMode::Coset { spec, .. } => {
                let built = BuiltTower {
                    config: cfg.clone(),
                    tower: tower.clone(),
                    stages: records,
                    conj_index: Default::default(),
                    base_rank,
                };
                let q = quotient_check(&built, spec).map_err(|e| e.to_string())?;
                out.checked += q.entries.len();
                for e in q.entries.iter().filter(|e| !e.consistent) {
                    out.failures.push(format!("stage {}: quotient images {} and {} differ", e.stage, e.lhs_image, e.rhs_image));
                }
                if self.quotient.as_ref() != Some(&q) {
                    out.failures.push("recorded quotient check differs from recomputation".into());
                }
            }
        }
        Ok(())
    }
}

impl BuiltTower {
    /// Attaches `t g t^-1 = target` unchecked (for negative tests).
    pub fn push_target(&mut self, element: Word, target: Word) -> Result<usize, TowerError> {
        let index = self.stages.len() + 1;
        let name = format!("t{}", self.attached().count() + 1);
        let t = self.tower.attach(&name, element.clone(), target.clone())?;
        self.stages.push(StageRecord {
            index,
            element,
            class: None,
            target,
            stable_letter: Some(t),
            skipped: None,
        });
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_tower, TowerConfig};
    use super::*;
    use crate::presentation::FinitePresentation;

    #[test]
    fn ncc_report_round_trips_and_reverifies() {
        let b = build_tower(TowerConfig::ncc(3, 25)).unwrap();
        let r = TowerReport::from_built(&b).unwrap();
        assert!(r.verified);
        let back = TowerReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let o = back.reverify();
        assert!(o.passed(), "{:?}", o.failures);
    }

    #[test]
    fn tampered_skip_witness_names_the_stage() {
        let b = build_tower(TowerConfig::ncc(3, 25)).unwrap();
        let mut r = TowerReport::from_built(&b).unwrap();
        let s = r.stages.iter_mut().find(|s| s.skipped.is_some() && s.index > 1).unwrap();
        let idx = s.index;
        s.skipped.as_mut().unwrap().witness = "t1".into();
        let o = r.reverify();
        assert!(o.failures.iter().any(|f| f.starts_with(&format!("stage {idx}:"))), "{:?}", o.failures);
    }

    #[test]
    fn mod3_coset_tower_is_consistent() {
        let base = FinitePresentation::klein_bottle();
        let reps = RepSet::Explicit(vec![base.word("a").unwrap(), base.word("t").unwrap(), base.word("t^2").unwrap()]);
        let spec = QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)]);
        let b = build_tower(TowerConfig::coset(base, reps, spec.clone(), 20)).unwrap();
        let q = quotient_check(&b, &spec).unwrap();
        assert!(q.consistent);
        let r = TowerReport::from_built(&b).unwrap();
        let o = TowerReport::from_json(&r.to_json()).unwrap().reverify();
        assert!(o.passed(), "{:?}", o.failures);
    }

    #[test]
    fn wrong_representative_is_inconsistent() {
        let base = FinitePresentation::klein_bottle();
        let a = base.word("a").unwrap();
        let spec = QuotientSpec::kill(&["a"]);
        let mut b = build_tower(TowerConfig::coset(base.clone(), RepSet::ImageLift { kernel_rep: a }, spec.clone(), 8)).unwrap();
        assert!(quotient_check(&b, &spec).unwrap().consistent);
        let g = base.word("t a").unwrap();
        let z = base.word("t^2").unwrap();
        let stage = b.push_target(g, z).unwrap();
        let q = quotient_check(&b, &spec).unwrap();
        assert!(!q.consistent);
        assert_eq!(q.entries.iter().filter(|e| !e.consistent).map(|e| e.stage).collect::<Vec<_>>(), vec![stage]);
    }
}
