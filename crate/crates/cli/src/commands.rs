use std::collections::BTreeSet;

use concc_core::hnn::{HnnTower, Verdict3};
use concc_core::presentation::{conjugacy_obstruction, parse_word, CertificateRecord, FinitePresentation, Obstruction, Quotient, QuotientSpec};
use concc_core::relpath::{isolation_audit, random_regularity_audit, Factor, FreeProductCtx};
use concc_core::smallcanc::{r_family_relators, symmetrize, verify_hyp_spec_gen};
use concc_core::tower::{build_tower, RepSet, TowerConfig, TowerReport};
use concc_core::word::{Alphabet, Word};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::report::{Certificate, RunReport, Status};

type Outcome = (Status, String, Option<Certificate>);

fn fail(detail: impl Into<String>) -> Outcome {
    (Status::Fail, detail.into(), None)
}

pub fn hyp_spec_gen(report: &mut RunReport, scale: u64) {
    let r = verify_hyp_spec_gen(scale);
    let params = Some(Certificate::Recompute {
        params: json!({ "family": "hyp-spec-gen", "scale": scale }),
    });
    report.check("metric C'(1/8)", || {
        let detail = match &r.metric_witness {
            None => format!(
                "max piece {} over relator length {}: {} < {}, closure size {}",
                r.max_piece, r.relator_length, r.max_ratio, r.lambda, r.closure_size
            ),
            Some(w) => format!("piece `{w}` of length {} reaches {}", r.max_piece, r.lambda),
        };
        (Status::of(r.metric_holds), detail, None)
    });
    for (i, name) in ["R(a^-1, b^-1)", "R(b, a)", "R(b^-1, a^-1)"].iter().enumerate() {
        report.check(&format!("{name} Dehn-reduces to 1"), || {
            (Status::of(r.relators_trivial[i]), format!("relator length {}", r.relator_length), None)
        });
    }
    report.check("R(a, b) Dehn-irreducible", || {
        (
            Status::of(r.r_ab_irreducible),
            format!("reduced length {} of {}", r.r_ab_reduced_length, r.relator_length),
            params,
        )
    });
}

fn verdict_status(v: Verdict3) -> Status {
    match v {
        Verdict3::Yes => Status::Pass,
        Verdict3::No => Status::Fail,
        Verdict3::Unknown { .. } => Status::Unknown,
    }
}

fn britton_check(report: &mut RunReport, pres: &FinitePresentation, bound: u64, lhs: &str, rhs: &str) {
    report.check(&format!("{lhs} = {rhs}"), || {
        let tower = match HnnTower::from_presentation(pres) {
            Ok(t) => t.with_bound(bound),
            Err(e) => return fail(e.to_string()),
        };
        let (u, v) = match (pres.word(lhs), pres.word(rhs)) {
            (Ok(u), Ok(v)) => (u, v),
            _ => return fail("bad word"),
        };
        match tower.equal(&u, &v) {
            Ok(v) => (verdict_status(v), format!("Britton reduction: {v}"), None),
            Err(e) => fail(e.to_string()),
        }
    });
}

fn non_conjugacy(report: &mut RunReport, name: &str, pres: &FinitePresentation, u: &str, v: &str) {
    report.check(&format!("{u} not conjugate to {v}"), || {
        let q = match Quotient::new(pres, QuotientSpec::kill(&["a"])) {
            Ok(q) => q,
            Err(e) => return fail(e.to_string()),
        };
        let (Ok(uw), Ok(vw)) = (pres.word(u), pres.word(v)) else {
            return fail("bad word");
        };
        match conjugacy_obstruction(&uw, &vw, &q) {
            Ok(Obstruction::Certified(c)) => {
                let record = c.to_record(&q);
                let ok = c.verify(&q) && record.reverify(pres).unwrap_or(false);
                let cert = Certificate::NonConjugacy {
                    presentation: name.to_string(),
                    record: serde_json::to_value(&record).expect("record serializes"),
                };
                (Status::of(ok), c.reason, Some(cert))
            }
            Ok(Obstruction::Inconclusive { .. }) => (Status::Unknown, "images conjugate in the quotient".into(), None),
            Err(e) => fail(e.to_string()),
        }
    });
}

pub fn klein_bottle(report: &mut RunReport, bound: u64) {
    let pres = FinitePresentation::klein_bottle();
    non_conjugacy(report, "klein-bottle", &pres, "t", "t^-1");
    report.check("t a t^-1 a = 1", || {
        let tower = match HnnTower::from_presentation(&pres) {
            Ok(t) => t.with_bound(bound),
            Err(e) => return fail(e.to_string()),
        };
        match tower.is_trivial(&pres.word("t a t^-1 a").expect("word")) {
            Ok(v) => (verdict_status(v), format!("Britton reduction: {v}"), None),
            Err(e) => fail(e.to_string()),
        }
    });
}

pub fn bs12(report: &mut RunReport, bound: u64) {
    let pres = FinitePresentation::bs12();
    for (u, v) in [("t^2", "t^4"), ("t^2", "t^8"), ("t^4", "t^8")] {
        non_conjugacy(report, "bs12", &pres, u, v);
    }
    britton_check(report, &pres, bound, "t a t^-1", "a^2");
    britton_check(report, &pres, bound, "t^-1 a^2 t", "a");
}

pub enum TowerMode {
    Ncc { classes: usize },
    Coset,
}

fn tower_config(mode: &TowerMode, stages: usize) -> TowerConfig {
    match mode {
        TowerMode::Ncc { classes } => TowerConfig::ncc(*classes, stages),
        TowerMode::Coset => {
            let base = FinitePresentation::klein_bottle();
            let w = |s: &str| base.word(s).expect("word");
            let reps = RepSet::Explicit(vec![w("a"), w("t"), w("t^-1")]);
            TowerConfig::coset(base.clone(), reps, QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)]), stages)
        }
    }
}

/// Builds the tower and returns its certificate file contents.
pub fn tower_build(report: &mut RunReport, mode: &TowerMode, stages: usize) -> Option<TowerReport> {
    let built = match build_tower(tower_config(mode, stages)) {
        Ok(b) => b,
        Err(e) => {
            report.check("build", || fail(e.to_string()));
            return None;
        }
    };
    let tr = match TowerReport::from_built(&built) {
        Ok(t) => t,
        Err(e) => {
            report.check("build", || fail(e.to_string()));
            return None;
        }
    };
    report.check("stage relations verify", || {
        let bad: Vec<usize> = tr.stages.iter().filter(|s| !s.verified).map(|s| s.index).collect();
        let attached = tr.stages.iter().filter(|s| s.stable_letter.is_some()).count();
        if bad.is_empty() {
            (Status::Pass, format!("{attached} attached, {} skipped", tr.stages.len() - attached), None)
        } else {
            fail(format!("stages {bad:?} do not verify"))
        }
    });
    match mode {
        TowerMode::Ncc { classes } => {
            report.check("class assignment", || {
                let used: BTreeSet<usize> = tr.stages.iter().filter_map(|s| s.class).collect();
                let ok = used.len() < *classes && used.iter().all(|c| (1..*classes).contains(c));
                (Status::of(ok), format!("classes used {used:?} of {}", classes - 1), None)
            });
            report.check("independence certificate", || match (&tr.independence, &tr.certification_error) {
                (Some(c), _) => (
                    Status::Pass,
                    format!("{} base facts, {} stage derivations", c.base_facts.len(), c.stages.len()),
                    None,
                ),
                (None, Some(e)) => fail(e.clone()),
                (None, None) => fail("no certificate"),
            });
        }
        TowerMode::Coset => {
            report.check("quotient check", || match &tr.quotient {
                Some(q) => (Status::of(q.consistent), format!("{} relations, {}", q.entries.len(), q.spec.describe()), None),
                None => fail("no quotient check"),
            });
            report.check("t and t^-1 stay distinct", || {
                let base = FinitePresentation::klein_bottle();
                let q = match Quotient::new(&base, QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)])) {
                    Ok(q) => q,
                    Err(e) => return fail(e.to_string()),
                };
                let (Ok(x), Ok(y)) = (q.image(&base.word("t").expect("word")), q.image(&base.word("t^-1").expect("word"))) else {
                    return fail("image");
                };
                (Status::of(x != y), format!("images {} and {}", q.format(&x), q.format(&y)), None)
            });
        }
    }
    report.check("reverify", || {
        let out = tr.reverify();
        let cert = Certificate::Tower {
            report: serde_json::to_value(&tr).expect("tower report serializes"),
        };
        if out.passed() {
            (Status::Pass, format!("{} items re-checked", out.checked), Some(cert))
        } else {
            (Status::Fail, out.failures.join("; "), Some(cert))
        }
    });
    Some(tr)
}

fn replay_tower(report: &mut RunReport, name: &str, tr: &TowerReport) {
    report.check(name, || {
        let out = tr.reverify();
        if out.passed() {
            (Status::Pass, format!("{} items re-checked", out.checked), None)
        } else {
            (Status::Fail, out.failures.join("; "), None)
        }
    });
}

fn presentation(name: &str) -> Option<FinitePresentation> {
    match name {
        "klein-bottle" => Some(FinitePresentation::klein_bottle()),
        "bs12" => Some(FinitePresentation::bs12()),
        _ => None,
    }
}

/// Replays a tower certificate file or every certificate embedded in a run report.
pub fn reverify_file(report: &mut RunReport, text: &str) {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return report.check("parse", || fail(format!("malformed file: {e}"))),
    };
    if value.get("checks").is_none() {
        match serde_json::from_value::<TowerReport>(value) {
            Ok(tr) => replay_tower(report, "tower certificate", &tr),
            Err(e) => report.check("parse", || fail(format!("malformed tower certificate: {e}"))),
        }
        return;
    }
    let run: RunReport = match serde_json::from_value(value) {
        Ok(r) => r,
        Err(e) => return report.check("parse", || fail(format!("malformed run report: {e}"))),
    };
    if run.version != crate::report::RUN_REPORT_VERSION {
        return report.check("parse", || fail(format!("unsupported report version {}", run.version)));
    }
    let mut replayed = 0;
    for c in &run.checks {
        let Some(cert) = &c.certificate else { continue };
        replayed += 1;
        match cert {
            Certificate::Tower { report: v } => match serde_json::from_value::<TowerReport>(v.clone()) {
                Ok(tr) => replay_tower(report, &c.name, &tr),
                Err(e) => report.check(&c.name, || fail(format!("malformed tower certificate: {e}"))),
            },
            Certificate::NonConjugacy { presentation: p, record } => report.check(&c.name, || {
                let Some(pres) = presentation(p) else {
                    return fail(format!("unknown presentation `{p}`"));
                };
                match serde_json::from_value::<CertificateRecord>(record.clone()).map(|r| r.reverify(&pres)) {
                    Ok(Ok(true)) => (Status::Pass, "certificate re-verified".into(), None),
                    Ok(Ok(false)) => fail("certificate does not verify"),
                    Ok(Err(e)) => fail(e.to_string()),
                    Err(e) => fail(format!("malformed certificate: {e}")),
                }
            }),
            Certificate::Recompute { params } => report.check(&c.name, || recompute(params)),
        }
    }
    if replayed == 0 {
        report.check("certificates", || (Status::Unknown, "report embeds no certificates".into(), None));
    }
}

fn recompute(params: &Value) -> Outcome {
    let num = |k: &str| params.get(k).and_then(Value::as_u64);
    let kind = (params.get("family").or(params.get("audit"))).and_then(Value::as_str);
    match (kind, num("scale"), num("seed"), num("instances")) {
        (Some("hyp-spec-gen"), Some(s), _, _) => {
            let r = verify_hyp_spec_gen(s);
            (Status::of(r.passed()), format!("recomputed at scale {s}"), None)
        }
        (Some("isolation"), _, Some(seed), Some(n)) => match isolation_audit(&audit_ctx(), seed, n as usize) {
            Ok(a) => (Status::of(a.passed()), format!("recomputed {n} instances from seed {seed}"), None),
            Err(e) => fail(e.to_string()),
        },
        _ => fail("unknown recomputation"),
    }
}

pub struct AuditParams {
    pub seed: u64,
    pub instances: usize,
    pub regularity: usize,
}

/// `A * C4 * Z^2 * K * F(x, y)` with `K` the Klein bottle group.
pub fn audit_ctx() -> FreeProductCtx {
    FreeProductCtx::new(
        vec![
            ("A", Factor::Free(Alphabet::of(&["a"]))),
            ("C", Factor::Cyclic(4)),
            ("Z", Factor::FreeAbelian(2)),
            ("K", Factor::klein_bottle()),
        ],
        Alphabet::of(&["x", "y"]),
    )
    .expect("distinct labels")
}

pub fn relpaths_audit(report: &mut RunReport, p: &AuditParams) {
    let ctx = audit_ctx();
    report.check("isolated components", || match isolation_audit(&ctx, p.seed, p.instances) {
        Ok(a) => (
            Status::of(a.passed()),
            format!(
                "{} trivial cycles, {} components, {} isolated, {} isolated with nonidentity label",
                a.instances, a.components, a.isolated, a.isolated_nonidentity
            ),
            Some(Certificate::Recompute {
                params: json!({ "audit": "isolation", "seed": p.seed, "instances": p.instances }),
            }),
        ),
        Err(e) => fail(e.to_string()),
    });
    let regularity = random_regularity_audit(&ctx, p.seed, p.regularity, 1);
    report.check("regular components (C <= 1)", || match &regularity {
        Ok(a) => (
            Status::of(a.part_a_failures == 0 && a.irregular_total == 0),
            format!("{} instances, {} irregular components", a.instances, a.irregular_total),
            None,
        ),
        Err(e) => fail(e.to_string()),
    });
    report.check("pairing", || match &regularity {
        Ok(a) => (
            Status::of(a.pairing_violations == 0 && a.backtracking == 0),
            format!("{} pairing violations, {} backtracking", a.pairing_violations, a.backtracking),
            None,
        ),
        Err(e) => fail(e.to_string()),
    });
}

pub enum PieceInput {
    Family { scale: u64 },
    Relators { generators: Vec<String>, relators: Vec<String> },
}

pub fn smallcanc_pieces(report: &mut RunReport, input: &PieceInput, lambda: Ratio<u64>) {
    let (al, rels): (Alphabet, Vec<Word>) = match input {
        PieceInput::Family { scale } => (Alphabet::of(&["a", "b"]), r_family_relators(*scale)),
        PieceInput::Relators { generators, relators } => {
            let al = match Alphabet::new(generators) {
                Ok(a) => a,
                Err(e) => return report.check("parse", || fail(e.to_string())),
            };
            let mut rels = Vec::new();
            for r in relators {
                match parse_word(&al, r) {
                    Ok(w) => rels.push(w),
                    Err(e) => return report.check("parse", || fail(format!("`{r}`: {e}"))),
                }
            }
            (al, rels)
        }
    };
    let set = match symmetrize(&rels) {
        Ok(s) => s,
        Err(e) => return report.check("symmetrize", || fail(e.to_string())),
    };
    report.check("max piece", || {
        let p = set.max_pieces();
        let witness = p.witness.as_ref().map(|w| al.format(&w.piece)).unwrap_or_else(|| "none".into());
        let ok = p.witness.as_ref().is_none_or(|w| w.verify(&set));
        (
            Status::of(ok),
            format!(
                "closure size {}, max piece {} (`{witness}`), max ratio {}",
                set.closure_size(),
                p.max_piece_length,
                p.max_ratio()
            ),
            None,
        )
    });
    report.check(&format!("metric C'({lambda})"), || {
        let v = set.check_metric(lambda);
        let detail = match &v.witness {
            Some(w) => format!("piece `{}` of length {} violates", al.format(&w.piece), w.piece.len()),
            None => "every piece is shorter than lambda times its relator".into(),
        };
        (Status::of(v.holds), detail, None)
    });
}
