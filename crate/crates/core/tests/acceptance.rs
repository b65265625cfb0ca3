//! The nine acceptance criteria, one line each. Runs without the libtest
//! harness so the lines show up regardless of output capture.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{bfs_trivial, brute_metric, brute_pieces, explicit_closure, first_metric_relator, is_primitive};
use concc_core::hnn::HnnTower;
use concc_core::presentation::{conjugacy_obstruction, FinitePresentation, Obstruction, Quotient, QuotientSpec};
use concc_core::relpath::{
    commensuration_probe, hyperbolicity, isolation_audit, random_regularity_audit, Factor, FreeProductCtx, Twist,
};
use concc_core::smallcanc::{r_family_relators, symmetrize, verify_hyp_spec_gen};
use concc_core::tower::{build_tower, RepSet, TowerConfig, TowerReport};
use concc_core::word::enumerate::all_words;
use concc_core::word::{commensurable, cyclic_reduce, Alphabet, Letter};
use concc_core::Word;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn hyp_spec_gen_at_scale() -> Outcome {
    let start = Instant::now();
    let r = verify_hyp_spec_gen(100);
    within(start, Duration::from_secs(60))?;
    // |R| = sum over i of i + (s + i) = 2s^2 + s
    ensure(r.relator_length == 20_100, format!("relator length {}", r.relator_length))?;
    ensure(r.lambda == Ratio::new(1, 8), "lambda")?;
    ensure(r.metric_holds && r.max_ratio < r.lambda, format!("max piece {} ratio {}", r.max_piece, r.max_ratio))?;
    ensure(r.relators_trivial == [true, true, true], format!("{:?}", r.relators_trivial))?;
    ensure(r.r_ab_irreducible, format!("R(a,b) reduces to length {}", r.r_ab_reduced_length))?;
    Ok(format!("max piece {} / {}, ratio {}, {:.1?}", r.max_piece, r.relator_length, r.max_ratio, start.elapsed()))
}

fn certified_pair(pres: &FinitePresentation, u: &str, v: &str) -> Result<(), String> {
    let q = Quotient::new(pres, QuotientSpec::kill(&["a"])).map_err(|e| e.to_string())?;
    let (u, v) = (pres.word(u).unwrap(), pres.word(v).unwrap());
    match conjugacy_obstruction(&u, &v, &q).map_err(|e| e.to_string())? {
        Obstruction::Certified(c) => {
            let rec = c.to_record(&q);
            ensure(c.verify(&q) && rec.reverify(pres) == Ok(true), "certificate does not re-verify")
        }
        Obstruction::Inconclusive { .. } => Err("inconclusive".into()),
    }
}

fn klein_bottle() -> Outcome {
    let start = Instant::now();
    let pres = FinitePresentation::klein_bottle();
    certified_pair(&pres, "t", "t^-1")?;
    let tower = HnnTower::from_presentation(&pres).map_err(|e| e.to_string())?;
    let v = tower.is_trivial(&pres.word("t a t^-1 a").unwrap()).map_err(|e| e.to_string())?;
    ensure(v.is_yes(), format!("t a t^-1 a: {v}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{:.1?}", start.elapsed()))
}

fn bs12() -> Outcome {
    let start = Instant::now();
    let pres = FinitePresentation::bs12();
    for (u, v) in [("t^2", "t^4"), ("t^2", "t^8"), ("t^4", "t^8")] {
        certified_pair(&pres, u, v).map_err(|e| format!("{u} vs {v}: {e}"))?;
    }
    let tower = HnnTower::from_presentation(&pres).map_err(|e| e.to_string())?;
    let w = |s: &str| pres.word(s).unwrap();
    for (l, r) in [("t a t^-1", "a^2"), ("t^-1 a^2 t", "a")] {
        let v = tower.equal(&w(l), &w(r)).map_err(|e| e.to_string())?;
        ensure(v.is_yes(), format!("{l} = {r}: {v}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{:.1?}", start.elapsed()))
}

fn ncc_tower() -> Outcome {
    let start = Instant::now();
    let built = build_tower(TowerConfig::ncc(3, 50)).map_err(|e| e.to_string())?;
    let report = TowerReport::from_built(&built).map_err(|e| e.to_string())?;
    let t = built.tower();
    for s in built.attached() {
        ensure(t.verify_conjugator(&s.element, &s.witness(), &s.target).unwrap_or(false), format!("stage {}", s.index))?;
    }
    let classes: BTreeSet<usize> = built.stages().iter().filter_map(|s| s.class).collect();
    ensure(classes.len() <= 2 && classes.iter().all(|c| (1..=2).contains(c)), format!("classes {classes:?}"))?;
    let cert = report.independence.as_ref().ok_or("no independence certificate")?;
    cert.verify(built.config(), built.stages(), t.alphabet()).map_err(|e| e.to_string())?;
    let reread = TowerReport::from_json(&report.to_json()).map_err(|e| e.to_string())?;
    let out = reread.reverify();
    ensure(out.passed(), out.failures.join("; "))?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} attached, classes {classes:?}, {} items re-verified", built.attached().count(), out.checked))
}

fn klein_coset_tower() -> Outcome {
    let base = FinitePresentation::klein_bottle();
    let spec = QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)]);
    let w = |s: &str| base.word(s).unwrap();
    let reps = RepSet::Explicit(vec![w("a"), w("t"), w("t^-1")]);
    let built = build_tower(TowerConfig::coset(base.clone(), reps, spec.clone(), 50)).map_err(|e| e.to_string())?;
    let report = TowerReport::from_built(&built).map_err(|e| e.to_string())?;
    let q = report.quotient.as_ref().ok_or("no quotient check")?;
    ensure(q.consistent && q.entries.len() == built.stages().len(), "quotient check")?;
    let out = report.reverify();
    ensure(out.passed(), out.failures.join("; "))?;
    // images of t and t^-1 in the top stage, via the quotient of the base
    let phi = Quotient::new(&base, spec).map_err(|e| e.to_string())?;
    let (it, iti) = (phi.image(&w("t")).unwrap(), phi.image(&w("t^-1")).unwrap());
    ensure(it != iti, "t and t^-1 have equal images")?;
    let tower = built.tower();
    ensure(!tower.equal(&w("t"), &w("t^-1")).map_err(|e| e.to_string())?.is_yes(), "t = t^-1 in the tower")?;
    Ok(format!(
        "{} relations, images {} and {}",
        q.entries.len(),
        phi.format(&it),
        phi.format(&iti)
    ))
}

fn path_suite() -> Outcome {
    let start = Instant::now();
    let ctx = FreeProductCtx::new(
        vec![
            ("A", Factor::Free(Alphabet::of(&["a"]))),
            ("C", Factor::Cyclic(4)),
            ("Z", Factor::FreeAbelian(2)),
            ("K", Factor::klein_bottle()),
        ],
        Alphabet::of(&["x", "y"]),
    )
    .unwrap();
    let iso = isolation_audit(&ctx, 0x5eed, 10_000).map_err(|e| e.to_string())?;
    ensure(iso.isolated_nonidentity == 0, format!("{} isolated: {:?}", iso.isolated_nonidentity, iso.examples))?;
    let reg = random_regularity_audit(&ctx, 0x5eed, 1_000, 1).map_err(|e| e.to_string())?;
    ensure(reg.instances >= 1_000 && reg.irregular_total == 0 && reg.part_a_failures == 0, format!("{reg:?}"))?;
    ensure(reg.pairing_violations == 0, format!("{} pairing violations", reg.pairing_violations))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} cycles / {} components, {} regularity instances, {:.1?}",
        iso.instances,
        iso.components,
        reg.instances,
        start.elapsed()
    ))
}

/// `u ~ v` commensurable iff some `v^q` lies among the reduced conjugates
/// `c u^p c^-1`, with `|c| <= 6` and `1 <= p, |q| <= 4`.
fn commensurable_oracle() -> Result<usize, String> {
    let words: Vec<Word> = all_words(2, 4).into_iter().filter(|w| !w.is_empty()).collect();
    let conjugators = all_words(2, 6);
    let orbits: Vec<Vec<HashSet<Word>>> = words
        .iter()
        .map(|u| (1..=4).map(|p| conjugators.iter().map(|c| u.pow(p).conjugate_by(c)).collect()).collect())
        .collect();
    let mut pairs = 0;
    for (i, u) in words.iter().enumerate() {
        for v in &words {
            let brute = (1..=4i64).any(|p| {
                (1..=4i64).any(|q| [q, -q].iter().any(|&q| orbits[i][p as usize - 1].contains(&v.pow(q))))
            });
            let verdict = commensurable(u, v).map_err(|e| e.to_string())?;
            ensure(verdict.related == brute, format!("{u:?} vs {v:?}: {} vs oracle {brute}", verdict.related))?;
            if let Some(w) = verdict.witness {
                ensure(w.verify(u, v), format!("{u:?} vs {v:?}: witness"))?;
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn dehn_oracle() -> Result<usize, String> {
    let r = first_metric_relator(3, 7, Ratio::new(1, 6));
    let set = symmetrize(std::slice::from_ref(&r)).map_err(|e| e.to_string())?;
    ensure(set.check_metric(Ratio::new(1, 6)).holds, "test relator is not C'(1/6)")?;
    let oracle = bfs_trivial(&explicit_closure(&[r]), 10);
    let words = all_words(3, 8);
    for w in &words {
        ensure(set.dehn_reduce(w).is_empty() == oracle.contains(w), format!("{w:?}"))?;
    }
    Ok(words.len())
}

fn random_relator(rng: &mut ChaCha8Rng, rank: usize) -> Option<Word> {
    let len = rng.gen_range(1..=30);
    let w = Word::from_letters((0..len).map(|_| Letter::from_code(rng.gen_range(0..2 * rank as u32))));
    let w = cyclic_reduce(&w).0.to_word();
    (!w.is_empty() && is_primitive(&w)).then_some(w)
}

fn pieces_oracle() -> Result<usize, String> {
    let mut sets: Vec<Vec<Word>> = (1..=20).map(r_family_relators).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x91ec);
    while sets.len() < 220 {
        let rank = rng.gen_range(2..=3);
        let rels: Vec<Word> = (0..rng.gen_range(1..=3)).filter_map(|_| random_relator(&mut rng, rank)).collect();
        if !rels.is_empty() {
            sets.push(rels);
        }
    }
    let mut checked = 0;
    for rels in sets {
        let closure = explicit_closure(&rels);
        if closure.len() > 2000 {
            continue;
        }
        let set = symmetrize(&rels).map_err(|e| e.to_string())?;
        ensure(set.closure_size() == closure.len(), "closure size")?;
        let (best, _) = brute_pieces(&closure);
        ensure(set.max_pieces().max_piece_length == best, format!("{rels:?}: max piece"))?;
        for lambda in [Ratio::new(1, 8), Ratio::new(1, 6)] {
            ensure(set.check_metric(lambda).holds == brute_metric(&closure, lambda), format!("{rels:?}: metric {lambda}"))?;
        }
        checked += 1;
    }
    Ok(checked)
}

fn oracle_equivalence() -> Outcome {
    let pairs = commensurable_oracle()?;
    let words = dehn_oracle()?;
    let sets = pieces_oracle()?;
    Ok(format!("{pairs} commensurability pairs, {words} Dehn words, {sets} piece sets"))
}

fn hyperbolic_products() -> Outcome {
    let ctx = FreeProductCtx::cyclic_model();
    for k1 in 1..=10 {
        for k2 in 1..=10 {
            let g = ctx.element(&format!("[H: a^{k1}] x1 [H: a^{k2}] x2")).map_err(|e| e.to_string())?;
            let h = hyperbolicity(&ctx, &g).map_err(|e| e.to_string())?;
            ensure(h.hyperbolic && h.infinite_order, format!("k1 = {k1}, k2 = {k2}"))?;
        }
    }
    Ok("100 elements".into())
}

fn commensuration_identity() -> Outcome {
    let ctx = FreeProductCtx::new(vec![("Z", Factor::FreeAbelian(2))], Alphabet::of(&["t"])).unwrap();
    let z = ctx.factor(0);
    let twist = Twist {
        gamma: z.parse("0 1").unwrap(),
        beta: z.parse("0 2").unwrap(),
        xi: 1,
        epsilon: 1,
    };
    let u = ctx.element("[Z: 0 1] t [Z: 0 2]").unwrap();
    let t = ctx.element("t").unwrap();
    let plus = commensuration_probe(&ctx, 0, &z.parse("1 0").unwrap(), &t, &u, 1..=20, 2, Some(&twist))
        .map_err(|e| e.to_string())?;
    ensure(plus.rows.len() == 20 && plus.all_identities_verified(), "epsilon = +1")?;

    let ctx = FreeProductCtx::new(vec![("K", Factor::klein_bottle())], Alphabet::of(&["s"])).unwrap();
    let k = ctx.factor(0);
    let twist = Twist {
        gamma: k.parse("t").unwrap(),
        beta: k.parse("t").unwrap(),
        xi: 1,
        epsilon: -1,
    };
    let u = ctx.element("[K: t] s [K: t]").unwrap();
    let s = ctx.element("s").unwrap();
    let minus = commensuration_probe(&ctx, 0, &k.parse("a").unwrap(), &s, &u, 1..=20, 2, Some(&twist))
        .map_err(|e| e.to_string())?;
    ensure(minus.rows.len() == 20 && minus.all_identities_verified(), "epsilon = -1")?;
    Ok("k = 1..20, both signs".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("hyp-spec-gen at scale 100", hyp_spec_gen_at_scale),
        ("Klein bottle t vs t^-1", klein_bottle),
        ("BS(1,2) powers of t", bs12),
        ("ncc tower, 3 classes, 50 stages", ncc_tower),
        ("Klein bottle coset tower mod 3", klein_coset_tower),
        ("free-product path suite", path_suite),
        ("oracle equivalence", oracle_equivalence),
        ("hyperbolic peripheral products", hyperbolic_products),
        ("commensuration identity", commensuration_identity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
