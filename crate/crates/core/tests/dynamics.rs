mod common;

use std::f64::consts::PI;

use cclab::dynamics::{
    detect_radial_form, exact_radial_cycles, find_cycles_numeric, poincare_return, CycleSource,
    Stability,
};
use cclab::parser::parse_polynomial;
use cclab::{PlanarSystem, Vars};

fn system(p: &str, q: &str) -> PlanarSystem {
    let v = Vars::xy();
    PlanarSystem::new(parse_polynomial(p, &v).unwrap(), parse_polynomial(q, &v).unwrap()).unwrap()
}

fn s1() -> PlanarSystem {
    system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)")
}

fn s1a() -> PlanarSystem {
    system("-y + x*(x^2 + y^2 - 1)*(x^2 + y^2 - 4)", "x + y*(x^2 + y^2 - 1)*(x^2 + y^2 - 4)")
}

fn center() -> PlanarSystem {
    system("-y + x^2", "x + x*y")
}

#[test]
fn fixed_step_error_is_fourth_order_or_better() {
    common::integrator_fourth_order().unwrap();
}

#[test]
fn numeric_scan_matches_exact_radial_analysis() {
    for sys in [s1(), s1a()] {
        let exact = exact_radial_cycles(&detect_radial_form(&sys)).unwrap();
        let numeric = find_cycles_numeric(&sys, (0.2, 3.0), 40).unwrap();
        assert_eq!(exact.cycle_count, numeric.cycle_count);
        assert_eq!(exact.stabilities(), numeric.stabilities());
        for (a, b) in exact.cycles.iter().zip(&numeric.cycles) {
            assert!((a.radius - b.radius).abs() < 1e-6, "{} vs {}", a.radius, b.radius);
            assert!((b.period - 2.0 * PI).abs() < 1e-6);
            assert_eq!(a.source, CycleSource::ExactRadial);
            assert_eq!(b.source, CycleSource::NumericPoincare);
        }
    }
}

#[test]
fn two_nested_cycles() {
    let rep = find_cycles_numeric(&s1a(), (0.2, 3.0), 40).unwrap();
    assert_eq!(rep.cycle_count, 2);
    assert!((rep.cycles[0].radius - 1.0).abs() < 1e-6);
    assert!((rep.cycles[1].radius - 2.0).abs() < 1e-6);
    assert_eq!(rep.stabilities(), vec![Stability::Stable, Stability::Unstable]);
}

#[test]
fn scan_direction_does_not_matter() {
    for sys in [s1(), s1a()] {
        let up = find_cycles_numeric(&sys, (0.2, 3.0), 40).unwrap();
        let down = find_cycles_numeric(&sys, (3.0, 0.2), 40).unwrap();
        assert_eq!(up.cycles, down.cycles);
    }
}

#[test]
fn center_has_no_isolated_cycle() {
    let rep = find_cycles_numeric(&center(), (0.2, 3.0), 40).unwrap();
    assert_eq!(rep.cycle_count, 0);
    assert!(rep.center_flag, "{rep:?}");
    assert!(rep.annulus.is_some());
    assert!(!detect_radial_form(&center()).matched);
}

#[test]
fn return_map_on_invariant_circle() {
    assert!((poincare_return(&s1(), 1.0).unwrap() - 1.0).abs() < 1e-8);
    assert!(poincare_return(&s1(), 0.9).unwrap() < 0.9);
    let rot = system("-y", "x");
    assert!((poincare_return(&rot, 0.7).unwrap() - 0.7).abs() < 1e-8);
}
