//! Shared oracles and property suites. Each suite returns `Err` with a readable message so
//! it can back both a `#[test]` and the acceptance gate.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cclab::algebra::poly2::Exponent;
use cclab::algebra::resultant::resultant_uni;
use cclab::algebra::sturm::SturmSequence;
use cclab::algebra::{resultant, sturm_real_root_count, FloatPoly2, Interval, LinearMap, Poly2, Rational, UniPoly, Vars};
use cclab::catalogue::{Catalogue, CatalogueKey};
use cclab::curvature::{curvature, metric_components, numeric_r_check, ROutcome};
use cclab::dynamics::integrate_fixed;
use cclab::parser::parse_polynomial;
use cclab::parser::system_file::parse_system_bytes;
use cclab::PlanarSystem;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn system(key: CatalogueKey) -> PlanarSystem {
    Catalogue::embedded().unwrap().system(key).unwrap()
}

pub fn poly(text: &str, vars: &Vars) -> Poly2 {
    parse_polynomial(text, vars).unwrap()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

// ---------------------------------------------------------------------------
// Strategies

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

pub fn arb_poly_in(vars: Vars, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec(((0..=max_exp, 0..=max_exp), arb_rational()), 0..=max_terms)
        .prop_map(move |terms| Poly2::from_terms(terms.into_iter().map(|(e, c): (Exponent, Rational)| (e, c)), vars.clone()))
}

pub fn arb_poly() -> impl Strategy<Value = Poly2> {
    arb_poly_in(Vars::xy(), 3, 5)
}

pub fn arb_point() -> impl Strategy<Value = [Rational; 2]> {
    (arb_rational(), arb_rational()).prop_map(|(a, b)| [a, b])
}

fn run<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

// ---------------------------------------------------------------------------
// Exact algebra

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    run("ring axioms", cases, (arb_poly(), arb_poly(), arb_poly(), arb_point()), |(f, g, h, pt)| {
        let add = |a: &Poly2, b: &Poly2| a.try_add(b).unwrap();
        let mul = |a: &Poly2, b: &Poly2| a.try_mul(b).unwrap();
        let zero = Poly2::zero(Vars::xy());
        let one = Poly2::constant(Rational::one(), Vars::xy());
        prop_assert_eq!(add(&f, &g), add(&g, &f));
        prop_assert_eq!(mul(&f, &g), mul(&g, &f));
        prop_assert_eq!(add(&add(&f, &g), &h), add(&f, &add(&g, &h)));
        prop_assert_eq!(mul(&mul(&f, &g), &h), mul(&f, &mul(&g, &h)));
        prop_assert_eq!(mul(&f, &add(&g, &h)), add(&mul(&f, &g), &mul(&f, &h)));
        prop_assert_eq!(add(&f, &zero), f.clone());
        prop_assert_eq!(mul(&f, &one), f.clone());
        prop_assert!(add(&f, &f.neg()).is_zero());
        prop_assert_eq!(f.try_sub(&g).unwrap(), add(&f, &g.neg()));
        // Evaluation is a ring homomorphism.
        prop_assert_eq!(mul(&f, &g).evaluate(&pt), f.evaluate(&pt) * g.evaluate(&pt));
        prop_assert_eq!(add(&f, &g).evaluate(&pt), f.evaluate(&pt) + g.evaluate(&pt));
        prop_assert_eq!(f.pow(3), mul(&f, &mul(&f, &f)));
        Ok(())
    })
}

pub fn leibniz(cases: u32) -> Result<(), String> {
    run("Leibniz rule", cases, (arb_poly(), arb_poly()), |(f, g)| {
        for idx in 0..2 {
            let lhs = f.try_mul(&g).unwrap().partial_idx(idx);
            let rhs = f.partial_idx(idx).try_mul(&g).unwrap().try_add(&f.try_mul(&g.partial_idx(idx)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        Ok(())
    })
}

pub fn substitution_commutes_with_evaluation(cases: u32) -> Result<(), String> {
    let map = (arb_rational(), arb_rational(), arb_rational(), arb_rational(), arb_rational(), arb_rational());
    run("substitution vs evaluation", cases, (arb_poly(), map, arb_point()), |(f, (a, b, c, d, e, g), pt)| {
        let m = LinearMap { matrix: [[a, b], [c, d]], offset: [e, g] };
        let sub = f.substitute_linear(&m, Vars::new("u", "v"));
        prop_assert_eq!(sub.evaluate(&pt), f.evaluate(&m.apply(&pt)));
        Ok(())
    })
}

/// Builds `c * prod (x - r_i)^{m_i} * prod (x^2 + k_j)` so the distinct real roots are known.
fn factored(roots: &[(Rational, u32)], quadratics: &[i64], c: &Rational) -> UniPoly {
    let mut p = UniPoly::constant(c.clone(), "x");
    for (r, m) in roots {
        let lin = UniPoly::new(vec![-r.clone(), Rational::one()], "x");
        p = &p * &lin.pow(*m);
    }
    for &k in quadratics {
        p = &p * &UniPoly::from_ints(&[k, 0, 1], "x");
    }
    p
}

pub fn sturm_matches_factorization(cases: u32) -> Result<(), String> {
    let roots = prop::collection::btree_set((-30i64..=30, 1i64..=4), 0..=5);
    let strategy = (roots, prop::collection::vec(1u32..=3, 5), prop::collection::vec(1i64..=9, 0..=2), 1i64..=7);
    run("Sturm vs factorization", cases, strategy, |(roots, mults, quads, c)| {
        let distinct: BTreeSet<Rational> = roots.iter().map(|&(n, d)| rat(n, d)).collect();
        let with_mult: Vec<(Rational, u32)> = distinct.iter().cloned().zip(mults.iter().copied()).collect();
        let p = factored(&with_mult, &quads, &rat(c, 3));
        if p.degree() < 1 {
            return Ok(());
        }
        let seq = SturmSequence::new(&p).unwrap();
        prop_assert_eq!(seq.count_all(), distinct.len());
        let report = sturm_real_root_count(&p, &Interval::Full).unwrap();
        prop_assert_eq!(report.count, distinct.len());
        for r in &distinct {
            let hits = report.isolating_intervals.iter().filter(|iv| iv.contains(r)).count();
            prop_assert_eq!(hits, 1, "root {} not isolated exactly once", r);
        }
        let lo = rat(-1, 1);
        let hi = rat(2, 1);
        let inside = distinct.iter().filter(|r| **r >= lo && **r <= hi).count();
        prop_assert_eq!(seq.count_closed(&lo, &hi), inside);
        Ok(())
    })
}

pub fn resultant_specializes(cases: u32) -> Result<(), String> {
    let strategy = (arb_poly_in(Vars::xy(), 2, 4), arb_poly_in(Vars::xy(), 2, 4), arb_rational());
    run("resultant specialization", cases, strategy, |(f, g, a)| {
        if f.degree_in(1) < 1 || g.degree_in(1) < 1 {
            return Ok(());
        }
        let lc = |p: &Poly2| p.as_univariate_in(1).last().unwrap().eval(&a);
        if lc(&f).is_zero() || lc(&g).is_zero() {
            return Ok(());
        }
        let res = resultant(&f, &g, "y").unwrap();
        let direct = resultant_uni(&f.specialize(0, &a), &g.specialize(0, &a));
        prop_assert_eq!(res.eval(&a), direct);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Parser

pub fn parser_round_trip(cases: u32) -> Result<(), String> {
    let vars = prop_oneof![Just(Vars::xy()), Just(Vars::new("u", "v")), Just(Vars::new("alpha", "b2"))];
    let strategy = vars.prop_flat_map(|v| arb_poly_in(v, 6, 8));
    run("parser round trip", cases, strategy, |p| {
        let text = p.to_string();
        let back = parse_polynomial(&text, p.vars()).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, p);
        Ok(())
    })
}

const GRAMMAR_ALPHABET: &[&str] =
    &["x", "y", "z", "+", "-", "*", "/", "^", "(", ")", " ", "0", "1", "2", "7", "13/6", "3/0", "99999999999", "."];

pub fn parser_fuzz(cases: u32) -> Result<(), String> {
    let bytes = prop::collection::vec(any::<u8>(), 0..=64 * 1024);
    run("parser fuzz (bytes)", cases, bytes, |b| {
        let text = String::from_utf8_lossy(&b);
        let _ = parse_polynomial(&text, &Vars::xy());
        let _ = parse_system_bytes(&b);
        Ok(())
    })?;
    let tokens = prop::collection::vec(prop::sample::select(GRAMMAR_ALPHABET), 0..=16 * 1024);
    run("parser fuzz (tokens)", cases, tokens, |t| {
        let text: String = t.concat();
        let text = &text[..text.len().min(64 * 1024)];
        if let Ok(p) = parse_polynomial(text, &Vars::xy()) {
            prop_assert_eq!(parse_polynomial(&p.to_string(), &Vars::xy()).unwrap(), p);
        }
        Ok(())
    })?;
    // Deep nesting and long exponent towers must fail gracefully, not overflow the stack.
    for n in [100usize, 10_000, 60_000] {
        let _ = parse_polynomial(&format!("{}x{}", "(".repeat(n), ")".repeat(n)), &Vars::xy());
        let _ = parse_polynomial(&format!("x{}", "^2".repeat(n)), &Vars::xy());
        let _ = parse_polynomial(&"-".repeat(n), &Vars::xy());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Integrator

/// Closed-form orbit of `r' = r (r^2 - 1)`, `theta' = 1` from `(r0, 0)`.
pub fn s1_exact(r0: f64, t: f64) -> (f64, f64) {
    let c = 1.0 / (r0 * r0) - 1.0;
    let r = 1.0 / (1.0 + c * (2.0 * t).exp()).sqrt();
    (r * t.cos(), r * t.sin())
}

/// Global error of the fixed-step scheme on the s1 orbit from `r0 = 0.5` must drop by at
/// least `0.8 * 16` per halving of `h`.
pub fn integrator_fourth_order() -> Result<Vec<f64>, String> {
    let sys = system(CatalogueKey::S1);
    let errs: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&h| {
            integrate_fixed(&sys, (0.5, 0.0), 5.0, h)
                .into_iter()
                .map(|(t, x, y)| {
                    let (ex, ey) = s1_exact(0.5, t);
                    (x - ex).hypot(y - ey)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        if ratio < 16.0 * 0.8 {
            return Err(format!("error ratio {ratio} below fourth order: {errs:?}"));
        }
    }
    Ok(errs)
}

// ---------------------------------------------------------------------------
// Curvature against the square-root form

/// Compares exact `R` with the finite-difference evaluation at `n` random rational points
/// in `[-2, 2]^2`; returns the largest scaled error.
pub fn finite_difference_agreement(key: CatalogueKey, n: usize, seed: u64) -> Result<f64, String> {
    let sys = system(key);
    let c = curvature(&sys).map_err(|e| e.to_string())?;
    let m = metric_components(&sys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    while accepted < n {
        let pt = [rat(rng.gen_range(-2000..=2000), 1000), rat(rng.gen_range(-2000..=2000), 1000)];
        if m.g11.evaluate(&pt) < Rational::zero() || m.g22.evaluate(&pt) < Rational::zero() {
            return Err(format!("{key}: negative metric component at {pt:?}"));
        }
        if !(m.g.evaluate(&pt) > Rational::zero()) {
            continue;
        }
        let ROutcome::Value(v) = c.evaluate(&pt) else { continue };
        let exact = cclab::algebra::rational::to_f64(&v);
        let approx = numeric_r_check(&sys, (cclab::algebra::rational::to_f64(&pt[0]), cclab::algebra::rational::to_f64(&pt[1])))
            .map_err(|e| e.to_string())?;
        let scaled = (approx - exact).abs() / (1.0 + exact.abs());
        if scaled > 1e-5 {
            return Err(format!("{key}: at {pt:?} exact {exact} vs finite difference {approx}"));
        }
        worst = worst.max(scaled);
        accepted += 1;
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Brute-force grid oracle for the zero set of a 2x2 system

/// Cells of the `n x n` node grid over `[-half, half]^2` in which both `f` and `g` take
/// both signs (or zero) at the corners. Returns cell centres.
pub fn sign_grid_cells(f: &Poly2, g: &Poly2, n: usize, half: f64) -> Vec<(f64, f64)> {
    let (ff, gf) = (FloatPoly2::from(f), FloatPoly2::from(g));
    let step = 2.0 * half / (n - 1) as f64;
    let coord = |i: usize| -half + i as f64 * step;
    let sign = |v: f64| if v > 0.0 { 1i8 } else if v < 0.0 { -1 } else { 0 };
    let mut fs = vec![0i8; n * n];
    let mut gs = vec![0i8; n * n];
    for i in 0..n {
        let x = coord(i);
        for j in 0..n {
            let y = coord(j);
            fs[i * n + j] = sign(ff.eval(x, y));
            gs[i * n + j] = sign(gf.eval(x, y));
        }
    }
    let changes = |s: &[i8], i: usize, j: usize| {
        let c = [s[i * n + j], s[(i + 1) * n + j], s[i * n + j + 1], s[(i + 1) * n + j + 1]];
        c.contains(&0) || (c.contains(&1) && c.contains(&-1))
    };
    let mut cells = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            if changes(&fs, i, j) && changes(&gs, i, j) {
                cells.push((coord(i) + step / 2.0, coord(j) + step / 2.0));
            }
        }
    }
    cells
}
