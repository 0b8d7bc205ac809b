//! Whole-system analysis: curvature, singular locus, criteria (A)/(B) and limit cycles, with
//! a verdict derived only from those parts.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::fmt_rational;
use crate::algebra::Rational;
use crate::curvature::{curvature, CurvatureError, ROutcome};
use crate::dynamics::{
    detect_radial_form, exact_radial_cycles, find_cycles_numeric, DynamicsError, LimitCycleReport, RadialForm,
};
use crate::singularity::{
    assertion_ab, find_equilibria, sign_near_point, singular_locus, verify_equilibrium, AssertionA, AssertionReport,
    EquilibriumCertificate, NeighborhoodSign, PointSummary, SingularLocusReport, SingularityError,
};
use crate::system::PlanarSystem;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("curvature: {0}")]
    Curvature(#[from] CurvatureError),
    #[error("singularity: {0}")]
    Singularity(#[from] SingularityError),
    #[error("dynamics: {0}")]
    Dynamics(#[from] DynamicsError),
}

/// Scan settings for the numeric cycle search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub r_range: (f64, f64),
    pub n_scan: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { r_range: (0.2, 3.0), n_scan: 40 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquilibriumEntry {
    pub point: PointSummary,
    /// Present for rational equilibria.
    pub certificate: Option<EquilibriumCertificate>,
    pub r_value: Option<String>,
    pub sign: NeighborhoodSign,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSummary {
    pub numerator_terms: usize,
    pub numerator_degree: i64,
    /// Exponents `(a, b)` of the reduced denominator `2 G11^a G22^b`.
    pub reduced_exponents: (u32, u32),
    pub reduced_numerator: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleSection {
    /// Ground truth: exact radial analysis when the system is rigid, otherwise the scan.
    pub ground_truth: LimitCycleReport,
    pub numeric: Option<LimitCycleReport>,
    pub radial_form: RadialForm,
    /// Equilibrium the section was anchored at (the system is translated there).
    pub anchor: Option<[String; 2]>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub label: String,
    pub vars: [String; 2],
    pub degree: i64,
    pub p: String,
    pub q: String,
    pub equilibria: Vec<EquilibriumEntry>,
    pub equilibria_complete: bool,
    pub curvature: CurvatureSummary,
    pub singular_locus: SingularLocusReport,
    pub assertion: AssertionReport,
    pub cycles: Option<CycleSection>,
    pub verdict: String,
    pub notes: Vec<String>,
}

/// Builds the verdict line from the criterion report and the cycle count.
pub fn verdict(assertion: &AssertionReport, cycles: Option<&LimitCycleReport>) -> String {
    let a = match assertion.assertion_a {
        AssertionA::Holds => format!("assertion (A) holds with B = {}", assertion.assertion_b_count),
        AssertionA::FailsRNegative => "assertion (A) fails (R < 0 near an equilibrium)".to_string(),
        AssertionA::FailsNoSingularity => "assertion (A) fails (|R| has no real singularity)".to_string(),
        AssertionA::FailsIndeterminate => "assertion (A) is not decided".to_string(),
    };
    let Some(c) = cycles else {
        return format!("{a}; limit cycles not analysed");
    };
    let n = c.cycle_count;
    let plural = if n == 1 { "" } else { "s" };
    let mut cyc = format!("{n} limit cycle{plural} detected");
    if c.center_flag {
        cyc.push_str(" (continuum of periodic orbits)");
    }
    let agrees = match assertion.assertion_a {
        AssertionA::Holds => n > 0 && n == assertion.assertion_b_count,
        AssertionA::FailsRNegative | AssertionA::FailsNoSingularity => n == 0,
        AssertionA::FailsIndeterminate => return format!("{a}; {cyc}"),
    };
    let tail = if agrees {
        "criterion outcome agrees with detected cycles"
    } else {
        "criterion outcome differs from detected cycles"
    };
    format!("{a}; {cyc}; {tail}")
}

fn label_of(sys: &PlanarSystem) -> String {
    sys.label_or_default()
}

/// Runs every stage. `scan` of `None` skips the limit-cycle stage.
pub fn analyze(sys: &PlanarSystem, scan: Option<ScanConfig>) -> Result<AnalysisReport, AnalysisError> {
    let c = curvature(sys)?;
    let mut notes = Vec::new();
    let eq = find_equilibria(sys)?;
    notes.extend(eq.notes.iter().cloned());
    let mut equilibria = Vec::new();
    let mut signs = Vec::new();
    for mut pt in eq.points.iter().cloned() {
        let exact = pt.exact();
        let certificate = exact.as_ref().map(|e| verify_equilibrium(sys, e));
        let r_value = exact.as_ref().and_then(|e| match c.evaluate(e) {
            ROutcome::Value(v) => Some(fmt_rational(&v)),
            _ => None,
        });
        let sign = sign_near_point(&c, &mut pt);
        signs.push(sign);
        equilibria.push(EquilibriumEntry { point: PointSummary::from(&pt), certificate, r_value, sign });
    }
    let locus = singular_locus(sys)?;
    let assertion = assertion_ab(&c, &signs, &locus);
    let rational_eq: Vec<[Rational; 2]> = eq.points.iter().filter_map(|p| p.exact()).collect();
    let cycles = match scan {
        Some(cfg) => Some(cycle_section(sys, &rational_eq, cfg)?),
        None => None,
    };
    let v = verdict(&assertion, cycles.as_ref().map(|s| &s.ground_truth));
    Ok(AnalysisReport {
        label: label_of(sys),
        vars: [sys.vars.0.clone(), sys.vars.1.clone()],
        degree: sys.degree(),
        p: sys.p.to_string(),
        q: sys.q.to_string(),
        equilibria,
        equilibria_complete: eq.complete,
        curvature: CurvatureSummary {
            numerator_terms: c.r.numerator.num_terms(),
            numerator_degree: c.r.numerator.degree(),
            reduced_exponents: c.reduced_exponents,
            reduced_numerator: c.reduced.numerator.to_string(),
        },
        singular_locus: locus,
        assertion,
        cycles,
        verdict: v,
        notes,
    })
}

/// Exact radial analysis when rigid; the numeric scan always runs around a rational
/// equilibrium (the origin when it is one).
pub fn cycle_section(
    sys: &PlanarSystem,
    rational_equilibria: &[[Rational; 2]],
    scan: ScanConfig,
) -> Result<CycleSection, AnalysisError> {
    let mut notes = Vec::new();
    let radial_form = detect_radial_form(sys);
    let origin = [Rational::from_integer(0.into()), Rational::from_integer(0.into())];
    let anchor = if rational_equilibria.contains(&origin) {
        Some(origin.clone())
    } else {
        rational_equilibria.first().cloned()
    };
    let numeric = match &anchor {
        Some(a) => {
            let shifted = if *a == origin {
                sys.clone()
            } else {
                notes.push(format!("section anchored at ({}, {}) after translation", fmt_rational(&a[0]), fmt_rational(&a[1])));
                sys.translate_to_origin(a)
            };
            Some(find_cycles_numeric(&shifted, scan.r_range, scan.n_scan)?)
        }
        None => {
            notes.push("no rational equilibrium to anchor the return-map section".into());
            None
        }
    };
    let ground_truth = if radial_form.matched {
        exact_radial_cycles(&radial_form)?
    } else if let Some(n) = &numeric {
        n.clone()
    } else {
        return Err(DynamicsError::InvalidInput("no cycle analysis possible".into()).into());
    };
    Ok(CycleSection {
        ground_truth,
        numeric,
        radial_form,
        anchor: anchor.map(|a| [fmt_rational(&a[0]), fmt_rational(&a[1])]),
        notes,
    })
}

/// Serializes with sorted object keys and every float printed with 17 significant digits,
/// so identical inputs give byte-identical output.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(f)) => out.push_str(&format!("{f:.16e}")),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_sorts_and_formats() {
        #[derive(Serialize)]
        struct T {
            zeta: f64,
            alpha: Vec<i32>,
            mid: Option<String>,
        }
        let s = to_canonical_json(&T { zeta: 0.1, alpha: vec![1, 2], mid: None }).unwrap();
        assert_eq!(s, "{\n  \"alpha\": [\n    1,\n    2\n  ],\n  \"mid\": null,\n  \"zeta\": 1.0000000000000001e-1\n}\n");
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["zeta"].as_f64(), Some(0.1));
    }
}
