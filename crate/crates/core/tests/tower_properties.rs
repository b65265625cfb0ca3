use std::collections::BTreeSet;

use concc_core::presentation::{FinitePresentation, Quotient, QuotientSpec};
use concc_core::tower::{
    bounded_simple_witness, build_tower, independence_certificate, quotient_check, RepSet, TowerConfig, TowerReport,
};
use concc_core::word::{cyclic_reduce, ShortLex};

#[test]
fn every_relation_holds_at_every_later_stage() {
    let built = build_tower(TowerConfig::ncc(3, 60)).unwrap();
    let mut prefix = concc_core::hnn::HnnTower::free(built.config().base.alphabet().clone());
    let mut recorded = Vec::new();
    for s in built.stages() {
        if let Some(t) = s.stable_letter {
            let name = built.tower().alphabet().name(t).to_string();
            prefix.attach(&name, s.element.clone(), s.target.clone()).unwrap();
        }
        recorded.push(s.clone());
        for r in &recorded {
            assert!(prefix.verify_conjugator(&r.element, &r.witness(), &r.target).unwrap(), "stage {}", r.index);
        }
    }
}

#[test]
fn classes_stay_within_representatives() {
    for n in 2..=4 {
        let built = build_tower(TowerConfig::ncc(n, 80)).unwrap();
        let classes: BTreeSet<usize> = built.stages().iter().filter_map(|s| s.class).collect();
        assert!(classes.len() < n, "{classes:?}");
        assert!(classes.iter().all(|&c| (1..n).contains(&c)));
    }
}

#[test]
fn certificate_replays_through_commensurability() {
    let built = build_tower(TowerConfig::ncc(4, 120)).unwrap();
    let cert = independence_certificate(&built).unwrap();
    cert.verify(built.config(), built.stages(), built.tower().alphabet()).unwrap();
    assert_eq!(cert.stages.len(), built.attached().count());
    // three classes: three pairs per stage
    assert!(cert.stages.iter().all(|d| d.pairs.len() == 3));
}

#[test]
fn coset_retractions_agree() {
    let base = FinitePresentation::klein_bottle();
    let spec = QuotientSpec::cyclic(3, &[("a", 0), ("t", 1)]);
    let reps = RepSet::Explicit(vec![base.word("a").unwrap(), base.word("t").unwrap(), base.word("t^-1").unwrap()]);
    let built = build_tower(TowerConfig::coset(base.clone(), reps, spec.clone(), 40)).unwrap();
    let q = Quotient::new(&base, spec.clone()).unwrap();
    for s in built.stages() {
        assert_eq!(q.image(&s.element).unwrap(), q.image(&s.target).unwrap());
    }
    assert!(quotient_check(&built, &spec).unwrap().consistent);

    let kill = QuotientSpec::kill(&["a"]);
    let lift = RepSet::ImageLift {
        kernel_rep: base.word("a").unwrap(),
    };
    let built = build_tower(TowerConfig::coset(base, lift, kill.clone(), 40)).unwrap();
    let report = TowerReport::from_built(&built).unwrap();
    assert!(report.verified);
    assert!(report.quotient.unwrap().consistent);
}

#[test]
fn gadget_tower_gives_two_conjugate_witnesses() {
    let cfg = TowerConfig::gadget(3, 1);
    let al = cfg.base.alphabet().clone();
    let w = |s: &str| concc_core::presentation::parse_word(&al, s).unwrap();
    let x = w("a2 b1 a2^-1 b1^-1");
    let y = w("a2");
    // enough stages to reach a cyclic conjugate of [a2, b1]
    let key = cyclic_reduce(&x).0;
    let needed = 1 + ShortLex::new(al.len()).position(|g| cyclic_reduce(&g).0 == key).unwrap();
    assert!(needed > 1000);
    let built = build_tower(TowerConfig::gadget(3, needed)).unwrap();
    let t = built.tower();

    let wit = bounded_simple_witness(&built, &x, &y).unwrap();
    assert_eq!(wit.conjugates(), 2);
    assert!(wit.g1.is_identity());
    // g2 = b1 w with w a2 w^-1 = a2^-1
    let g2 = wit.g2.clone().unwrap();
    let b1 = w("b1");
    let rest = b1.inverse().concat(&g2);
    assert!(t.verify_conjugator(&y, &rest, &y.inverse()).unwrap());
    assert!(wit.verify(t).unwrap());

    let single = bounded_simple_witness(&built, &x, &x).unwrap();
    assert_eq!((single.conjugates(), single.g1.is_identity()), (1, true));

    // a stage element against its target: the recorded conjugator, inverted
    let s = built.attached().find(|s| s.class == Some(2)).unwrap();
    let wit = bounded_simple_witness(&built, &s.element, &s.target).unwrap();
    assert_eq!(wit.g1, s.witness().inverse());

    // arbitrary pairs across classes
    for (a, b) in [("x1", "x2"), ("a1 b2", "x2^-1"), ("x1 x2", "a2^-1")] {
        let wit = bounded_simple_witness(&built, &w(a), &w(b)).unwrap();
        assert!(wit.conjugates() <= 2);
        assert!(wit.verify(t).unwrap());
    }
    assert!(bounded_simple_witness(&built, &w("b1 b2 b1 b2 b1 b2"), &y).is_none());
}
