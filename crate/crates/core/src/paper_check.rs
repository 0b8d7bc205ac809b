//! Regression harness over every recorded fact of the catalogue.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::rational::{parse_rational, to_f64};
use crate::algebra::{LinearMap, Rational, Vars};
use crate::catalogue::{Catalogue, CatalogueKey, Claim, KnownFact, Provenance};
use crate::curvature::{curvature, rational_equal, ROutcome, RationalFunction};
use crate::dynamics::{LimitCycleReport, Stability};
use crate::hilbert::{claimed_at_power, claimed_h, threshold_report};
use crate::report::{analyze, AnalysisReport, ScanConfig};
use crate::singularity::AssertionA;

/// Tolerance on cycle radii between the expected value and either method.
pub const RADIUS_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub pass: bool,
    pub detail: String,
    pub citation: String,
    pub tag: Provenance,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaperCheckReport {
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl PaperCheckReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn render(&self) -> String {
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{}  {:<w$}  {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.detail);
        }
        let _ = writeln!(out, "{} passed, {} failed", self.passed, self.failed);
        out
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn run(&mut self, id: String, citation: &str, tag: Provenance, f: impl FnOnce() -> Result<String, String>) {
        let t = Instant::now();
        let (pass, detail) = match f() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            id,
            pass,
            detail,
            citation: citation.to_string(),
            tag,
            millis: t.elapsed().as_millis(),
        });
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational"))
}

fn ensure(cond: bool, ok: String, bad: String) -> Result<String, String> {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

/// Runs every check against the given catalogue.
pub fn paper_check(cat: &Catalogue) -> PaperCheckReport {
    let mut rec = Recorder { checks: Vec::new() };
    let mut analyses: Vec<(CatalogueKey, Result<AnalysisReport, String>)> = Vec::new();
    for (&key, entry) in &cat.entries {
        let a = entry
            .system()
            .map_err(|e| e.to_string())
            .and_then(|s| analyze(&s, Some(ScanConfig::default())).map_err(|e| e.to_string()));
        analyses.push((key, a));
    }
    for (key, analysis) in &analyses {
        let entry = cat.entry(*key);
        for fact in &entry.facts {
            let id = format!("{key}.{}", fact.id);
            rec.run(id, &fact.citation, fact.tag, || check_fact(cat, *key, fact, analysis.as_ref().map_err(Clone::clone)));
        }
    }
    for (name, t) in &cat.transcriptions {
        let id = format!("{name}.transcription");
        rec.run(id, "displayed R = R1 / R2", Provenance::Paper, || {
            let key: CatalogueKey = name.parse().map_err(|e: crate::catalogue::CatalogueError| e.to_string())?;
            let sys = cat.system(key).map_err(|e| e.to_string())?;
            let c = curvature(&sys).map_err(|e| e.to_string())?;
            let (r1, r2) = t.parse().map_err(|e| e.to_string())?;
            if r1.vars() != &sys.vars {
                return Err(format!("transcription variables {:?} differ from the system's", r1.vars()));
            }
            let ok = rational_equal(&c.r, &RationalFunction::new(r1, r2));
            ensure(ok, "N * R2 == R1 * 2 G^2 exactly".into(), "cross-multiplication identity fails".into())
        });
    }
    rec.run("s2.transform".into(), "s2 is s1 under (x, y) = (u, u + v/2)", Provenance::Paper, || {
        check_transform(cat)
    });
    rec.run("hilbert.threshold".into(), "S_k exceeds the claimed H(2^k - 1) for k >= 35", Provenance::Paper, || {
        let r = threshold_report().map_err(|e| e.to_string())?;
        let identity = (2..=64u32).all(|k| {
            claimed_h(&((BigInt::from(1) << k as usize) - 1)).map(|h| h == claimed_at_power(k)).unwrap_or(false)
        });
        ensure(
            r.threshold == 35 && !r.before.contradiction && identity,
            format!("minimal k = {}, S_34 <= claimed, closed form identity for k = 2..64", r.threshold),
            format!("threshold {} (identity holds: {identity})", r.threshold),
        )
    });
    let passed = rec.checks.iter().filter(|c| c.pass).count();
    let failed = rec.checks.len() - passed;
    PaperCheckReport { checks: rec.checks, passed, failed }
}

fn check_transform(cat: &Catalogue) -> Result<String, String> {
    let s1 = cat.system(CatalogueKey::S1).map_err(|e| e.to_string())?;
    let s2 = cat.system(CatalogueKey::S2).map_err(|e| e.to_string())?;
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::from_integer(1.into());
    let zero = Rational::zero();
    let map = LinearMap { matrix: [[one.clone(), zero.clone()], [one, half]], offset: [zero.clone(), zero] };
    let t = s1.transform(&map, Vars::new("u", "v")).ok_or("singular map")?;
    ensure(
        t.p == s2.p && t.q == s2.q,
        "transformed s1 equals the catalogue s2 coefficient for coefficient".into(),
        format!("transformed s1 is\n  du = {}\n  dv = {}", t.p, t.q),
    )
}

fn check_fact(
    cat: &Catalogue,
    key: CatalogueKey,
    fact: &KnownFact,
    analysis: Result<&AnalysisReport, String>,
) -> Result<String, String> {
    let a = analysis?;
    match &fact.claim {
        Claim::RAtEquilibrium { point, value } => {
            let sys = cat.system(key).map_err(|e| e.to_string())?;
            let pt = [rational(&point[0])?, rational(&point[1])?];
            let expected = rational(value)?;
            let c = curvature(&sys).map_err(|e| e.to_string())?;
            match c.evaluate(&pt) {
                ROutcome::Value(v) => ensure(v == expected, format!("R = {value} exactly"), format!("R = {v}, expected {value}")),
                other => Err(format!("R is {other:?} at the point")),
            }
        }
        Claim::RadialForm { f } => {
            let form = &a.cycles.as_ref().ok_or("no cycle analysis")?.radial_form;
            let expected: Vec<Rational> = f.iter().map(|&c| Rational::from_integer(c.into())).collect();
            ensure(
                form.matched && form.f.coeffs() == expected.as_slice(),
                format!("f(s) = {}", form.f),
                format!("detected {:?}, expected coefficients {f:?}", form.matched.then(|| form.f.to_string())),
            )
        }
        Claim::Cycles { count, radii, stability, center } => {
            let sec = a.cycles.as_ref().ok_or("no cycle analysis")?;
            check_cycles(&sec.ground_truth, *count, radii, stability, *center)?;
            if let Some(n) = &sec.numeric {
                check_cycles(n, *count, radii, stability, *center).map_err(|e| format!("numeric scan: {e}"))?;
                if sec.radial_form.matched {
                    let close = n.radii().iter().zip(sec.ground_truth.radii()).all(|(x, y)| (x - y).abs() < RADIUS_TOL);
                    if !close || n.stabilities() != sec.ground_truth.stabilities() {
                        return Err("numeric scan and exact radial analysis disagree".into());
                    }
                }
            }
            Ok(format!("{count} cycle(s) {:?}, both methods agree", sec.ground_truth.radii()))
        }
        Claim::SingularPoints { points } => {
            let locus = &a.singular_locus;
            let expected: Vec<[Rational; 2]> =
                points.iter().map(|p| Ok([rational(&p[0])?, rational(&p[1])?])).collect::<Result<_, String>>()?;
            let got: Vec<[Rational; 2]> = locus.certified().filter_map(|p| p.algebraic.exact()).collect();
            let all_exact = got.len() == locus.certified_divergences;
            let same = all_exact && got.len() == expected.len() && expected.iter().all(|e| got.contains(e));
            if points.is_empty() && !(locus.all_empty() && locus.fully_resolved) {
                return Err("zero set of G not certified empty".into());
            }
            ensure(
                same,
                format!("{} certified divergence point(s)", got.len()),
                format!("certified {:?}, expected {points:?}", locus.certified().map(|p| p.point.approx).collect::<Vec<_>>()),
            )
        }
        Claim::AssertionA { holds } => {
            let got = a.assertion.assertion_a;
            let decided = got != AssertionA::FailsIndeterminate;
            ensure(
                decided && got.holds() == *holds,
                format!("assertion (A): {got:?}"),
                format!("assertion (A): {got:?}, expected holds = {holds}"),
            )
        }
    }
}

fn check_cycles(
    rep: &LimitCycleReport,
    count: usize,
    radii: &[String],
    stability: &[Stability],
    center: bool,
) -> Result<(), String> {
    if rep.cycle_count != count {
        return Err(format!("{} cycles, expected {count}", rep.cycle_count));
    }
    if rep.center_flag != center {
        return Err(format!("center flag {}, expected {center}", rep.center_flag));
    }
    if !stability.is_empty() && rep.stabilities() != stability {
        return Err(format!("stabilities {:?}, expected {stability:?}", rep.stabilities()));
    }
    for (c, r) in rep.cycles.iter().zip(radii) {
        let r = rational(r)?;
        let exact_match = c.s_interval.as_ref().map(|iv| iv.is_exact() && iv.lo == &r * &r);
        let ok = match exact_match {
            Some(m) => m,
            None => (c.radius - to_f64(&r)).abs() < RADIUS_TOL,
        };
        if !ok {
            return Err(format!("radius {} does not match {}", c.radius, to_f64(&r)));
        }
    }
    Ok(())
}
