//! Hand-transcribed embeddings of worked examples, checked against the
//! search and the complement and Kervaire-Milnor conditions.

use std::collections::BTreeSet;

use obstruct_core::lattice::{
    canonical_form, complement_check, km_check, parse_fixture, smooth_battery, Embedding,
    DEFAULT_BUDGET, SearchStatus,
};
use obstruct_core::singtypes::{plumbing_of, Orientation, Plumbing, SingularityType};

struct Golden {
    ty: &'static str,
    fixtures: &'static [&'static str],
}

const KM_2_3_11_13: Golden = Golden {
    ty: "2/1,3/2,11/2,13/1",
    fixtures: &[include_str!("../fixtures/2-1_3-2_11-2_13-1.emb")],
};
const T9409: Golden = Golden {
    ty: "2/1,3/2,5/1,9409/5519",
    fixtures: &[include_str!("../fixtures/2-1_3-2_5-1_9409-5519.emb")],
};
const T3529: Golden = Golden {
    ty: "2/1,3/2,5/1,3529/1880",
    fixtures: &[include_str!("../fixtures/2-1_3-2_5-1_3529-1880.emb")],
};
const T4771: Golden = Golden {
    ty: "2/1,3/2,5/1,4771/634",
    fixtures: &[include_str!("../fixtures/2-1_3-2_5-1_4771-634.emb")],
};
const T13: Golden = Golden {
    ty: "2/1,3/1,7/3,13/1",
    fixtures: &[include_str!("../fixtures/2-1_3-1_7-3_13-1.emb")],
};
const T25: Golden = Golden {
    ty: "2/1,3/1,7/2,25/3",
    fixtures: &[
        include_str!("../fixtures/2-1_3-1_7-2_25-3_a.emb"),
        include_str!("../fixtures/2-1_3-1_7-2_25-3_b.emb"),
    ],
};

fn load(g: &Golden) -> (SingularityType, Plumbing, Vec<Embedding>) {
    let ty: SingularityType = g.ty.parse().unwrap();
    let pl = plumbing_of(&ty, Orientation::Standard);
    let embs: Vec<Embedding> = g.fixtures.iter().map(|f| parse_fixture(f).unwrap()).collect();
    for e in &embs {
        assert_eq!(e.ambient_rank, pl.vertex_count() + 1);
        e.verify(&pl).unwrap();
    }
    (ty, pl, embs)
}

/// The fixtures are exactly the classes found by the search.
fn assert_classes_match(g: &Golden) {
    let (ty, pl, embs) = load(g);
    let report = smooth_battery(&ty, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.status, SearchStatus::Complete);
    let found: BTreeSet<_> = report
        .classes
        .iter()
        .map(|c| canonical_form(&c.embedding, &pl))
        .collect();
    let expected: BTreeSet<_> = embs.iter().map(|e| canonical_form(e, &pl)).collect();
    assert_eq!(expected.len(), embs.len(), "fixtures of {} are not distinct", g.ty);
    assert_eq!(found, expected, "classes of {}", g.ty);
}

#[test]
fn fixtures_are_the_search_classes() {
    for g in [&KM_2_3_11_13, &T9409, &T3529, &T4771, &T13, &T25] {
        assert_classes_match(g);
    }
}

#[test]
fn km_violation_with_square_minus_fifteen() {
    let (ty, pl, embs) = load(&KM_2_3_11_13);
    let km = km_check(&embs[0], &pl);
    assert_eq!(km.signature, -7);
    assert!(!km.pass);
    // The (-2) sphere of the first point and the (-13) sphere.
    assert!(km.violations.iter().any(|v| v.subset == vec![0, 5] && v.square == -15));
    let report = smooth_battery(&ty, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.obstructed(), Some(true));
    assert!(report.obstructed_by().contains(&"km"));
}

#[test]
fn complement_of_index_9409() {
    let (ty, pl, embs) = load(&T9409);
    let c = complement_check(&embs[0], ty.order_product()).unwrap();
    let mut want = vec![0i128; 15];
    want[10..15].copy_from_slice(&[2, 2, -2, 3, -3]);
    assert_eq!(c.generator, want);
    assert_eq!(c.norm, -30);
    assert!(!c.pass);
    assert_eq!(ty.order_product(), 282_270);
    assert_eq!(ty.order_product() / 30, 9409);
    assert!(km_check(&embs[0], &pl).pass);
    let report = smooth_battery(&ty, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.obstructed_by(), vec!["complement"]);
}

#[test]
fn complement_of_3529_type() {
    let (ty, pl, embs) = load(&T3529);
    let c = complement_check(&embs[0], ty.order_product()).unwrap();
    let mut want: Vec<i128> = vec![15, 15, -16, -16, 16, -24, 24, 30, 30, -30];
    want.extend([120; 6]);
    want.push(-120);
    assert_eq!(c.generator, want);
    assert_eq!(c.norm, -105_870);
    assert!(c.pass);
    assert!(km_check(&embs[0], &pl).pass);
}

#[test]
fn complement_and_km_of_4771_type() {
    let (ty, pl, embs) = load(&T4771);
    let c = complement_check(&embs[0], ty.order_product()).unwrap();
    let mut want: Vec<i128> = vec![8, 8, -8, 30, -30, -45, -45, 48, 72];
    want.extend([120; 8]);
    want.push(-120);
    assert_eq!(c.generator, want);
    assert_eq!(c.norm, -143_130);
    assert!(c.pass);
    let km = km_check(&embs[0], &pl);
    assert_eq!(km.signature, -18);
    assert!(!km.pass);
    assert!(km.violations.iter().all(|v| v.square == -26));
}

#[test]
fn km_passes_for_13_1_type() {
    let (ty, pl, embs) = load(&T13);
    let km = km_check(&embs[0], &pl);
    assert!(km.pass);
    assert!(!km.consistent.is_empty());
    let c = complement_check(&embs[0], ty.order_product()).unwrap();
    assert_eq!(c.norm, -546);
    assert!(c.pass);
}

#[test]
fn both_25_3_classes_violate_km() {
    let (ty, pl, embs) = load(&T25);
    for e in &embs {
        let km = km_check(e, &pl);
        assert_eq!(km.signature, -8);
        assert!(!km.pass);
        assert!(km.violations.iter().any(|v| v.square == -16));
    }
    let report = smooth_battery(&ty, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.classes.len(), 2);
    assert_eq!(report.obstructed(), Some(true));
}
