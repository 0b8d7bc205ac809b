mod common;

#[test]
fn ring_axioms() {
    common::ring_axioms(256).unwrap();
}

#[test]
fn leibniz_rule() {
    common::leibniz(256).unwrap();
}

#[test]
fn substitution_commutes_with_evaluation() {
    common::substitution_commutes_with_evaluation(256).unwrap();
}

#[test]
fn sturm_counts_match_constructed_roots() {
    common::sturm_matches_factorization(128).unwrap();
}

#[test]
fn resultant_specializes_at_rational_points() {
    common::resultant_specializes(128).unwrap();
}
