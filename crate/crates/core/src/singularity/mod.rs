//! Equilibrium certificates, the sign of `R` near equilibria, the real singular locus of
//! `|R|`, and the two criteria built on them.
//!
//! Criterion (A): `R` is positive near every equilibrium and `|R|` diverges somewhere.
//! Criterion (B): the number of distinct divergence points of `|R|`.

pub mod solve;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::{fmt_rational, int, ser};
use crate::algebra::{AlgebraError, LinearMap, Poly2, Rational};
use crate::curvature::{curvature, Curvature, CurvatureError, ROutcome};
use crate::system::PlanarSystem;

pub use solve::{real_solutions_2x2, AlgebraicPoint, Eliminant, PointSummary, Solutions, SolveReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularityError {
    #[error("({0}, {1}) is not an equilibrium of the system")]
    NotEquilibrium(String, String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumCertificate {
    #[serde(serialize_with = "ser::pair")]
    pub point: [Rational; 2],
    #[serde(serialize_with = "ser::one")]
    pub p_value: Rational,
    #[serde(serialize_with = "ser::one")]
    pub q_value: Rational,
    /// `None` when the metric is degenerate and `R` is undefined.
    pub r_at_point: Option<ROutcome>,
    pub valid: bool,
}

pub fn verify_equilibrium(sys: &PlanarSystem, point: &[Rational; 2]) -> EquilibriumCertificate {
    let p_value = sys.p.evaluate(point);
    let q_value = sys.q.evaluate(point);
    let valid = p_value.is_zero() && q_value.is_zero();
    EquilibriumCertificate {
        point: point.clone(),
        p_value,
        q_value,
        r_at_point: curvature(sys).ok().map(|c| c.evaluate(point)),
        valid,
    }
}

/// Sign of `R` on a small neighborhood of a point, as implied by continuity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborhoodSign {
    PositiveNeighborhood,
    NegativeNeighborhood,
    /// The reduced denominator vanishes at the point.
    NotContinuousHere,
    /// `R` is continuous but equal to zero, so continuity fixes no sign.
    ZeroAtPoint,
}

impl NeighborhoodSign {
    fn from_outcome(o: &ROutcome) -> Self {
        match o {
            ROutcome::Value(v) if v.is_zero() => NeighborhoodSign::ZeroAtPoint,
            ROutcome::Value(v) if v > &Rational::zero() => NeighborhoodSign::PositiveNeighborhood,
            ROutcome::Value(_) => NeighborhoodSign::NegativeNeighborhood,
            _ => NeighborhoodSign::NotContinuousHere,
        }
    }
}

pub fn sign_of_r_near_equilibrium(
    sys: &PlanarSystem,
    point: &[Rational; 2],
) -> Result<NeighborhoodSign, SingularityError> {
    let cert = verify_equilibrium(sys, point);
    if !cert.valid {
        return Err(SingularityError::NotEquilibrium(fmt_rational(&point[0]), fmt_rational(&point[1])));
    }
    let c = curvature(sys)?;
    Ok(NeighborhoodSign::from_outcome(&c.evaluate(point)))
}

/// Same verdict at a possibly irrational point; the reduced denominator is nonnegative, so
/// wherever it does not vanish the sign of `R` is the sign of the reduced numerator.
pub fn sign_near_point(c: &Curvature, point: &mut AlgebraicPoint) -> NeighborhoodSign {
    if point.is_zero_of(&c.reduced.denominator) {
        return NeighborhoodSign::NotContinuousHere;
    }
    match point.sign_of(&c.reduced.numerator) {
        0 => NeighborhoodSign::ZeroAtPoint,
        s if s > 0 => NeighborhoodSign::PositiveNeighborhood,
        _ => NeighborhoodSign::NegativeNeighborhood,
    }
}

/// How `|R|` behaves at a real zero of `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceStatus {
    /// Reduced denominator vanishes, numerator does not.
    Certified,
    /// Both vanish; no claim.
    Indeterminate,
    /// `G` vanishes but the metric factor cancels and `R` stays finite.
    Removable,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusPoint {
    /// Index of the first subsystem the point was found in.
    pub subsystem: usize,
    pub point: PointSummary,
    pub status: DivergenceStatus,
    /// Exact sign of the reduced numerator at the point.
    pub numerator_sign: i8,
    /// Whether the reduced denominator vanishes exactly at the point.
    pub denominator_vanishes: bool,
    #[serde(skip)]
    pub algebraic: AlgebraicPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsystemReport {
    pub index: usize,
    pub f: String,
    pub g: String,
    pub outcome: &'static str,
    pub degenerate_reason: Option<String>,
    pub eliminants: Vec<Eliminant>,
    pub points: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularLocusReport {
    pub subsystems: Vec<SubsystemReport>,
    pub points: Vec<LocusPoint>,
    pub certified_divergences: usize,
    /// False when some subsystem ended in a degenerate branch.
    pub fully_resolved: bool,
}

impl SingularLocusReport {
    pub fn certified(&self) -> impl Iterator<Item = &LocusPoint> {
        self.points.iter().filter(|p| p.status == DivergenceStatus::Certified)
    }

    pub fn all_empty(&self) -> bool {
        self.subsystems.iter().all(|s| s.outcome == "empty_certified")
    }
}

/// The two systems whose common real zeros are the real zeros of `G`:
/// `{P_x = Q_x = 0}` (zeros of `G11`) and `{P_y = Q_y = 0}` (zeros of `G22`).
pub fn metric_subsystems(c: &Curvature) -> [(Poly2, Poly2); 2] {
    let m = &c.metric;
    [(m.x_factor.a.clone(), m.x_factor.b.clone()), (m.y_factor.a.clone(), m.y_factor.b.clone())]
}

pub fn singular_locus(sys: &PlanarSystem) -> Result<SingularLocusReport, SingularityError> {
    let c = curvature(sys)?;
    let subs = metric_subsystems(&c);
    singular_locus_of(&c, &[(0, &subs[0]), (1, &subs[1])])
}

/// Runs the locus analysis over the given `(index, subsystem)` pairs in the given order.
/// Points shared by several subsystems are reported once.
pub fn singular_locus_of(
    c: &Curvature,
    subsystems: &[(usize, &(Poly2, Poly2))],
) -> Result<SingularLocusReport, SingularityError> {
    let mut reports = Vec::new();
    let mut points: Vec<LocusPoint> = Vec::new();
    let mut seen: Vec<&(Poly2, Poly2)> = Vec::new();
    for &(index, sub) in subsystems {
        let (f, g) = sub;
        let solved = real_solutions_2x2(f, g)?;
        let mut found = 0;
        for p in solved.solutions.points() {
            found += 1;
            if seen.iter().any(|(a, b)| p.is_zero_of(a) && p.is_zero_of(b)) {
                continue;
            }
            points.push(classify_point(c, index, p.clone()));
        }
        seen.push(sub);
        reports.push(SubsystemReport {
            index,
            f: f.to_string(),
            g: g.to_string(),
            outcome: solved.solutions.kind(),
            degenerate_reason: match &solved.solutions {
                Solutions::DegenerateBranch(r) => Some(r.clone()),
                _ => None,
            },
            eliminants: solved.eliminants,
            points: found,
            notes: solved.notes,
        });
    }
    reports.sort_by_key(|r| r.index);
    points.sort_by(|a, b| {
        a.point.approx.0.total_cmp(&b.point.approx.0).then(a.point.approx.1.total_cmp(&b.point.approx.1))
    });
    let fully_resolved = reports.iter().all(|r| r.degenerate_reason.is_none());
    let certified_divergences = points.iter().filter(|p| p.status == DivergenceStatus::Certified).count();
    Ok(SingularLocusReport { subsystems: reports, points, certified_divergences, fully_resolved })
}

fn classify_point(c: &Curvature, subsystem: usize, mut p: AlgebraicPoint) -> LocusPoint {
    let n = &c.reduced.numerator;
    // The reduced denominator is 2 G11^a G22^b with each factor a sum of two squares.
    let (a, b) = c.reduced_exponents;
    let m = &c.metric;
    let d_zero = (a > 0 && p.is_zero_of(&m.x_factor.a) && p.is_zero_of(&m.x_factor.b))
        || (b > 0 && p.is_zero_of(&m.y_factor.a) && p.is_zero_of(&m.y_factor.b));
    let numerator_sign = p.sign_of(n);
    let status = match (d_zero, numerator_sign == 0) {
        (false, _) => DivergenceStatus::Removable,
        (true, false) => DivergenceStatus::Certified,
        (true, true) => DivergenceStatus::Indeterminate,
    };
    LocusPoint {
        subsystem,
        point: PointSummary::from(&p),
        status,
        numerator_sign,
        denominator_vanishes: d_zero,
        algebraic: p,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AssertionA {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "fails_R_negative")]
    FailsRNegative,
    #[serde(rename = "fails_no_singularity")]
    FailsNoSingularity,
    #[serde(rename = "fails_indeterminate")]
    FailsIndeterminate,
}

impl AssertionA {
    pub fn holds(self) -> bool {
        self == AssertionA::Holds
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AssertionReport {
    pub assertion_a: AssertionA,
    pub equilibrium_signs: Vec<NeighborhoodSign>,
    pub assertion_b_count: usize,
    /// Certified divergence points `p != 0` for which `-p` is also a certified divergence.
    pub symmetric_pairs: usize,
    pub notes: Vec<String>,
}

/// Combines per-equilibrium signs with a singular locus.
pub fn assertion_ab(c: &Curvature, signs: &[NeighborhoodSign], locus: &SingularLocusReport) -> AssertionReport {
    let mut notes = Vec::new();
    let b = locus.certified_divergences;
    let assertion_a = if signs.contains(&NeighborhoodSign::NegativeNeighborhood) {
        AssertionA::FailsRNegative
    } else if signs.iter().any(|s| *s != NeighborhoodSign::PositiveNeighborhood) {
        AssertionA::FailsIndeterminate
    } else if b == 0 {
        let unresolved =
            !locus.fully_resolved || locus.points.iter().any(|p| p.status == DivergenceStatus::Indeterminate);
        if unresolved {
            notes.push("no divergence certified, but absence of divergences is not certified either".into());
            AssertionA::FailsIndeterminate
        } else {
            AssertionA::FailsNoSingularity
        }
    } else {
        AssertionA::Holds
    };
    if signs.is_empty() {
        notes.push("no equilibria supplied; the sign condition holds vacuously".into());
    }
    if locus.points.iter().any(|p| p.status == DivergenceStatus::Indeterminate) {
        notes.push("some zeros of G have vanishing numerator and are not counted".into());
    }
    if !locus.fully_resolved {
        notes.push("B count is a lower bound: a subsystem ended in a degenerate branch".into());
    }
    let symmetric_pairs = count_symmetric(c, locus);
    if symmetric_pairs > 0 {
        notes.push(format!("{symmetric_pairs} divergence points have their reflection p -> -p also divergent"));
    }
    AssertionReport { assertion_a, equilibrium_signs: signs.to_vec(), assertion_b_count: b, symmetric_pairs, notes }
}

fn count_symmetric(c: &Curvature, locus: &SingularLocusReport) -> usize {
    let vars = c.r.numerator.vars().clone();
    let minus = LinearMap { matrix: [[int(-1), int(0)], [int(0), int(-1)]], offset: [int(0), int(0)] };
    let n_ref = c.reduced.numerator.substitute_linear(&minus, vars.clone());
    let d_ref = c.reduced.denominator.substitute_linear(&minus, vars.clone());
    let x = Poly2::var(&vars.0, vars.clone()).expect("declared");
    let y = Poly2::var(&vars.1, vars.clone()).expect("declared");
    locus
        .certified()
        .filter(|p| {
            let a = &p.algebraic;
            let origin = a.is_zero_of(&x) && a.is_zero_of(&y);
            !origin && a.is_zero_of(&d_ref) && !a.is_zero_of(&n_ref)
        })
        .count()
}

/// Full (A)/(B) evaluation for rational equilibria.
pub fn assertion_ab_report(
    sys: &PlanarSystem,
    equilibria: &[[Rational; 2]],
) -> Result<AssertionReport, SingularityError> {
    let c = curvature(sys)?;
    let signs = equilibria
        .iter()
        .map(|e| sign_of_r_near_equilibrium(sys, e))
        .collect::<Result<Vec<_>, _>>()?;
    let locus = singular_locus(sys)?;
    Ok(assertion_ab(&c, &signs, &locus))
}

/// Real equilibria found by solving `P = Q = 0`.
#[derive(Clone, Debug)]
pub struct EquilibriumSet {
    pub points: Vec<AlgebraicPoint>,
    /// False when the solver could not establish a finite set.
    pub complete: bool,
    pub notes: Vec<String>,
}

pub fn find_equilibria(sys: &PlanarSystem) -> Result<EquilibriumSet, SingularityError> {
    if sys.p.is_zero() && sys.q.is_zero() {
        return Ok(EquilibriumSet {
            points: Vec::new(),
            complete: false,
            notes: vec!["every point is an equilibrium".into()],
        });
    }
    let report = real_solutions_2x2(&sys.p, &sys.q)?;
    let mut notes = report.notes;
    let complete = match &report.solutions {
        Solutions::DegenerateBranch(r) => {
            notes.push(format!("equilibria not zero-dimensional: {r}"));
            false
        }
        _ => true,
    };
    Ok(EquilibriumSet { points: report.solutions.points().to_vec(), complete, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vars;
    use crate::curvature::RationalFunction;
    use crate::parser::parse_polynomial;

    fn system(p: &str, q: &str) -> PlanarSystem {
        let v = Vars::xy();
        PlanarSystem::new(parse_polynomial(p, &v).unwrap(), parse_polynomial(q, &v).unwrap()).unwrap()
    }

    fn s1() -> PlanarSystem {
        system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)")
    }

    fn center() -> PlanarSystem {
        system("-y + x^2", "x + x*y")
    }

    const ORIGIN: fn() -> [Rational; 2] = || [int(0), int(0)];

    #[test]
    fn equilibrium_certificates() {
        let c = verify_equilibrium(&s1(), &ORIGIN());
        assert!(c.valid);
        assert_eq!(c.r_at_point, Some(ROutcome::Value(int(-1))));
        let c = verify_equilibrium(&center(), &ORIGIN());
        assert!(c.valid);
        assert_eq!(c.r_at_point, Some(ROutcome::Value(int(1))));
        let bad = verify_equilibrium(&s1(), &[int(1), int(0)]);
        assert!(!bad.valid);
        assert_eq!(bad.p_value, int(0));
        assert_eq!(bad.q_value, int(1));
    }

    #[test]
    fn neighborhood_signs() {
        assert_eq!(sign_of_r_near_equilibrium(&s1(), &ORIGIN()).unwrap(), NeighborhoodSign::NegativeNeighborhood);
        assert_eq!(
            sign_of_r_near_equilibrium(&center(), &ORIGIN()).unwrap(),
            NeighborhoodSign::PositiveNeighborhood
        );
        assert!(matches!(
            sign_of_r_near_equilibrium(&s1(), &[int(1), int(0)]),
            Err(SingularityError::NotEquilibrium(..))
        ));
    }

    #[test]
    fn center_locus_has_one_divergence() {
        let locus = singular_locus(&center()).unwrap();
        assert_eq!(locus.certified_divergences, 1);
        let p = locus.certified().next().unwrap();
        assert_eq!(p.point.exact, Some(["0".to_string(), "-1".to_string()]));
        assert!(p.denominator_vanishes && p.numerator_sign != 0);
        let report = assertion_ab_report(&center(), &[ORIGIN()]).unwrap();
        assert_eq!(report.assertion_a, AssertionA::Holds);
        assert_eq!(report.assertion_b_count, 1);
        assert_eq!(report.symmetric_pairs, 0);
    }

    #[test]
    fn s1_has_no_singularities_and_fails_a() {
        let locus = singular_locus(&s1()).unwrap();
        assert!(locus.all_empty());
        let report = assertion_ab_report(&s1(), &[ORIGIN()]).unwrap();
        assert_eq!(report.assertion_a, AssertionA::FailsRNegative);
        assert_eq!(report.assertion_b_count, 0);
    }

    #[test]
    fn symmetric_pairs_are_detected() {
        // A stand-in curvature 1 / (2 ((x^2 - 2)^2 + (y - x)^2)) with poles at +-(sqrt 2, sqrt 2).
        let v = Vars::xy();
        let p = |s: &str| parse_polynomial(s, &v).unwrap();
        let mut c = curvature(&center()).unwrap();
        c.metric.x_factor = crate::curvature::SosFactor { a: p("x^2 - 2"), b: p("y - x"), multiplicity: 1 };
        c.reduced_exponents = (1, 0);
        c.reduced = RationalFunction::new(p("1"), p("2*((x^2 - 2)^2 + (y - x)^2)"));
        let sub = (p("x^2 - 2"), p("y - x"));
        let locus = singular_locus_of(&c, &[(0, &sub)]).unwrap();
        assert_eq!(locus.certified_divergences, 2);
        for pt in locus.certified() {
            assert!(pt.point.exact.is_none());
            assert!(pt.denominator_vanishes && pt.numerator_sign != 0);
        }
        assert_eq!(assertion_ab(&c, &[], &locus).symmetric_pairs, 2);
    }

    #[test]
    fn generic_metric_zero_is_indeterminate() {
        // N vanishes wherever P_x = Q_x = 0 unless the factor G11 cancels, so no divergence
        // is claimed here.
        let sys = system("-y + x^3/3 - x", "x + x*(y^2 - 2)");
        let locus = singular_locus(&sys).unwrap();
        assert_eq!(locus.points.len(), 4);
        assert!(locus.points.iter().all(|p| p.status == DivergenceStatus::Indeterminate));
        assert_eq!(locus.certified_divergences, 0);
        let c = curvature(&sys).unwrap();
        let report = assertion_ab(&c, &[NeighborhoodSign::PositiveNeighborhood], &locus);
        assert_eq!(report.assertion_a, AssertionA::FailsIndeterminate);
        assert!(report.notes.iter().any(|n| n.contains("vanishing numerator")));
    }

    #[test]
    fn order_of_subsystems_does_not_matter() {
        for sys in [center(), s1(), system("x^2 - y^2 + y", "x*y - 1/2*x + y^3/3 - y")] {
            let c = curvature(&sys).unwrap();
            let subs = metric_subsystems(&c);
            let a = singular_locus_of(&c, &[(0, &subs[0]), (1, &subs[1])]).unwrap();
            let b = singular_locus_of(&c, &[(1, &subs[1]), (0, &subs[0])]).unwrap();
            assert_eq!(a.certified_divergences, b.certified_divergences);
            assert_eq!(a.points.len(), b.points.len());
        }
    }

    #[test]
    fn equilibria_of_s1() {
        let eq = find_equilibria(&s1()).unwrap();
        assert!(eq.complete);
        assert_eq!(eq.points.len(), 1);
        assert_eq!(eq.points[0].exact(), Some(ORIGIN()));
        let eq = find_equilibria(&system("x^2 - 2", "y - x")).unwrap();
        assert_eq!(eq.points.len(), 2);
    }
}
