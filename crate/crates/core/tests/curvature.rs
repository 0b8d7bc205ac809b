mod common;

use cclab::catalogue::{Catalogue, CatalogueKey};
use cclab::curvature::{curvature, metric_components, numeric_r_check, rational_equal, RationalFunction, ROutcome};
use cclab::{Poly2, Rational, Vars};
use common::{poly, rat, system};

#[test]
fn values_at_origin_are_exact() {
    let expected = [
        (CatalogueKey::S1, rat(-1, 1)),
        (CatalogueKey::S1a, rat(-80, 289)),
        (CatalogueKey::S2, rat(6, 5)),
        (CatalogueKey::Center, rat(1, 1)),
    ];
    let origin = [Rational::from_integer(0.into()), Rational::from_integer(0.into())];
    for (key, v) in expected {
        let c = curvature(&system(key)).unwrap();
        assert_eq!(c.evaluate(&origin), ROutcome::Value(v.clone()), "{key}");
        assert_eq!(cclab::curvature::evaluate_r(&c.r, &origin), ROutcome::Value(v), "{key} unreduced");
    }
}

#[test]
fn transcriptions_agree_by_cross_multiplication() {
    let cat = Catalogue::embedded().unwrap();
    assert_eq!(cat.transcriptions.keys().map(String::as_str).collect::<Vec<_>>(), ["center", "s1", "s2"]);
    for (name, t) in &cat.transcriptions {
        let key: CatalogueKey = name.parse().unwrap();
        let c = curvature(&cat.system(key).unwrap()).unwrap();
        let (r1, r2) = t.parse().unwrap();
        let shown = RationalFunction::new(r1, r2);
        assert!(rational_equal(&c.r, &shown), "{name}");
        assert!(rational_equal(&c.reduced, &shown), "{name} reduced");
    }
}

#[test]
fn center_matches_closed_form() {
    let xy = Vars::xy();
    let shown = RationalFunction::new(poly("1", &xy), poly("(x^2 + 1)^2*(4*x^2 + (y + 1)^2)", &xy));
    let c = curvature(&system(CatalogueKey::Center)).unwrap();
    assert!(rational_equal(&c.r, &shown));
    let off_by_one = RationalFunction::new(poly("1", &xy), poly("(x^2 + 1)^2*(4*x^2 + (y + 1)^2) + 1", &xy));
    assert!(!rational_equal(&c.r, &off_by_one));
}

#[test]
fn denominator_is_twice_g_squared() {
    for key in CatalogueKey::ALL {
        let sys = system(key);
        let m = metric_components(&sys);
        let c = curvature(&sys).unwrap();
        let two: Rational = rat(2, 1);
        assert_eq!(c.r.denominator, m.g.square().scale(&two), "{key}");
        assert_eq!(c.r.denominator.degree(), 2 * m.g.degree());
        let (a, b) = c.reduced_exponents;
        let expect: Poly2 = m.g11.pow(a).try_mul(&m.g22.pow(b)).unwrap().scale(&two);
        assert_eq!(c.reduced.denominator, expect, "{key}");
    }
}

#[test]
fn finite_differences_agree_at_random_points() {
    for (i, key) in CatalogueKey::ALL.into_iter().enumerate() {
        let worst = common::finite_difference_agreement(key, 100, 7 + i as u64).unwrap();
        assert!(worst <= 1e-5, "{key}: {worst}");
    }
}

#[test]
fn finite_difference_reference_values() {
    for (key, v) in [(CatalogueKey::S1, -1.0), (CatalogueKey::Center, 1.0), (CatalogueKey::S2, 1.2)] {
        let got = numeric_r_check(&system(key), (0.0, 0.0)).unwrap();
        assert!((got - v).abs() < 1e-6, "{key}: {got}");
    }
}
