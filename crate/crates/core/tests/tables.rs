use obstruct_core::pipeline::{
    analyze, case2_funnel, reproduce_table, table_expected, AnalyzeConfig, Check, TableId, TableOptions,
};
use obstruct_core::singtypes::SingularityType;

#[test]
fn table_one_matches() {
    // Two published rows carry (7,6) where D is only a square with (7,3):
    // D = 7380 and 5364 against 54^2 and 30^2.
    let t = reproduce_table(TableId::T1, &TableOptions::default()).unwrap();
    assert_eq!(t.found.len(), 24);
    let rows = |v: &[SingularityType]| v.iter().map(|t| t.table_row()).collect::<Vec<_>>();
    assert_eq!(
        rows(&t.missing),
        ["(2,1), (3,1), (7,6), (31,5)", "(2,1), (3,1), (7,6), (31,7)"]
    );
    assert_eq!(
        rows(&t.extra),
        ["(2,1), (3,1), (7,3), (31,5)", "(2,1), (3,1), (7,3), (31,7)"]
    );
    assert!(t.inconclusive.is_empty());
    assert_eq!(t.counters.enumerated, 1008 + 84);
}

#[test]
fn case_two_funnel() {
    let f = case2_funnel(&TableOptions::default()).unwrap();
    assert_eq!(
        (f.enumerated, f.linking, f.donaldson, f.km_complement, f.spin_d),
        (1008, 128, 35, 20, 13)
    );
    // The one type passing KM but failing the complement test is also the
    // only one of those 15 that spin-d would not have removed.
    let odd: SingularityType = "2/1,3/1,7/2,25/7".parse().unwrap();
    let cfg = AnalyzeConfig {
        checks: vec![Check::Linking, Check::Smooth, Check::SpinD],
        short_circuit: false,
        ..AnalyzeConfig::default()
    };
    let r = analyze(&odd, &cfg);
    assert_eq!(r.verdict.obstructed_by(), ["complement"]);
    assert!(f.inconclusive.is_empty());
    let mut got = f.survivors.clone();
    let mut want = table_expected(TableId::T2);
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn table_three_prefix() {
    let opts = TableOptions {
        p4_below: 3000,
        ..TableOptions::default()
    };
    let t = reproduce_table(TableId::T3, &opts).unwrap();
    assert!(t.matches(), "{}", t.diff());
    assert_eq!(t.found.len(), 2);
}

#[test]
fn table_ids_parse() {
    assert_eq!("1".parse::<TableId>().unwrap(), TableId::T1);
    assert_eq!("t3".parse::<TableId>().unwrap(), TableId::T3);
    assert!("4".parse::<TableId>().is_err());
}
