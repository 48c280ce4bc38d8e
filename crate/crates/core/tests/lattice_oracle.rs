//! Class counts from the symmetry-reduced search against a brute-force
//! enumeration with orbit partitioning.

mod common;

use common::compare;

#[test]
fn class_counts_match_orbit_oracle() {
    let (checked, nonempty) = compare(14, 5, 5);
    assert!(checked > 300, "only {checked} cases");
    assert!(nonempty > 60, "only {nonempty} cases with embeddings");
}

#[test]
fn class_counts_match_orbit_oracle_rank_six() {
    let (checked, nonempty) = compare(8, 6, 6);
    assert!(checked > 50, "only {checked} cases");
    assert!(nonempty > 10, "only {nonempty} cases with embeddings");
}

/// Full sweep through rank six; about a quarter of an hour on one core.
#[test]
#[ignore]
fn class_counts_match_orbit_oracle_full() {
    let (checked, _) = compare(14, 6, 6);
    assert!(checked > 500);
}
