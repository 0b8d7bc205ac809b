//! Metric components `G11`, `G22`, `G` and the scalar curvature `R` as an exact rational
//! function of the field's variables.
//!
//! With `G11 = 2(P_x^2 + Q_x^2)`, `G22 = 2(P_y^2 + Q_y^2)` and `G = G11 G22`,
//!
//! ```text
//! R = 1/sqrt(G) * [ d/dx( G22_x / sqrt(G) ) + d/dy( G11_y / sqrt(G) ) ]
//! ```
//!
//! Expanding the derivatives of `G^{-1/2}` removes every square root:
//!
//! ```text
//! d/dx( G22_x G^{-1/2} ) = G22_xx G^{-1/2} - 1/2 G22_x G_x G^{-3/2}
//! R = [ 2G (G22_xx + G11_yy) - (G_x G22_x + G_y G11_y) ] / (2 G^2)
//! ```
//!
//! The result is stored unreduced as `N / (2 G^2)`; no multivariate gcd is taken. The only
//! cancellation performed is trial division of `N` by the known factors `G11` and `G22`
//! (see [`Curvature::reduced`]), which is what point evaluation uses.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::{fmt_rational, int};
use crate::algebra::{FloatPoly2, Poly2, Rational};
use crate::system::PlanarSystem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("metric is degenerate: G vanishes identically")]
    DegenerateMetric,
    #[error("G = {0} is not positive at the requested point")]
    Domain(f64),
}

/// `(A^2 + B^2)^multiplicity`; its real zeros are the common real zeros of `A` and `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosFactor {
    pub a: Poly2,
    pub b: Poly2,
    pub multiplicity: u32,
}

impl SosFactor {
    pub fn expand(&self) -> Poly2 {
        self.a
            .square()
            .try_add(&self.b.square())
            .expect("same vars")
            .pow(self.multiplicity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricComponents {
    pub g11: Poly2,
    pub g22: Poly2,
    pub g: Poly2,
    /// `(P_x, Q_x)`: `G11 = 2 (P_x^2 + Q_x^2)`.
    pub x_factor: SosFactor,
    /// `(P_y, Q_y)`: `G22 = 2 (P_y^2 + Q_y^2)`.
    pub y_factor: SosFactor,
}

pub fn metric_components(sys: &PlanarSystem) -> MetricComponents {
    let px = sys.p.partial_idx(0);
    let qx = sys.q.partial_idx(0);
    let py = sys.p.partial_idx(1);
    let qy = sys.q.partial_idx(1);
    let x_factor = SosFactor { a: px, b: qx, multiplicity: 1 };
    let y_factor = SosFactor { a: py, b: qy, multiplicity: 1 };
    let two = int(2);
    let g11 = x_factor.expand().scale(&two);
    let g22 = y_factor.expand().scale(&two);
    let g = g11.try_mul(&g22).expect("same vars");
    MetricComponents { g11, g22, g, x_factor, y_factor }
}

/// Numerator/denominator pair; not required to be in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Poly2,
    pub denominator: Poly2,
}

impl RationalFunction {
    pub fn new(numerator: Poly2, denominator: Poly2) -> Self {
        debug_assert!(!denominator.is_zero());
        RationalFunction { numerator, denominator }
    }
}

/// The curvature together with the metric it came from.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub metric: MetricComponents,
    /// `N / (2 G^2)` exactly as derived.
    pub r: RationalFunction,
    /// Same function with every power of `G11`, `G22` dividing both sides cancelled.
    pub reduced: RationalFunction,
    /// Exponents `(a, b)` in the reduced denominator `2 G11^a G22^b`.
    pub reduced_exponents: (u32, u32),
}

impl Curvature {
    /// Evaluates through [`Curvature::reduced`], so `0/0` caused only by a shared metric
    /// factor does not hide a genuine pole.
    pub fn evaluate(&self, point: &[Rational; 2]) -> ROutcome {
        evaluate_r(&self.reduced, point)
    }
}

fn cancel_metric_factors(numerator: &Poly2, metric: &MetricComponents) -> (RationalFunction, (u32, u32)) {
    let mut n = numerator.clone();
    let mut strip = |f: &Poly2| {
        let mut left = 2u32;
        while left > 0 && !n.is_zero() {
            match n.exact_div(f).expect("same vars") {
                Some(q) => {
                    n = q;
                    left -= 1;
                }
                None => break,
            }
        }
        left
    };
    let a = strip(&metric.g11);
    let b = strip(&metric.g22);
    let d = metric.g11.pow(a).try_mul(&metric.g22.pow(b)).expect("same vars").scale(&int(2));
    (RationalFunction::new(n, d), (a, b))
}

/// Builds `R = N / (2 G^2)`.
pub fn scalar_curvature(sys: &PlanarSystem) -> Result<RationalFunction, CurvatureError> {
    Ok(curvature(sys)?.r)
}

pub fn curvature(sys: &PlanarSystem) -> Result<Curvature, CurvatureError> {
    let metric = metric_components(sys);
    let MetricComponents { g11, g22, g, .. } = &metric;
    if g.is_zero() {
        return Err(CurvatureError::DegenerateMetric);
    }
    let g22_x = g22.partial_idx(0);
    let g11_y = g11.partial_idx(1);
    let lap = g22_x.partial_idx(0).try_add(&g11_y.partial_idx(1)).expect("same vars");
    let first = g.try_mul(&lap).expect("same vars").scale(&int(2));
    let second = g
        .partial_idx(0)
        .try_mul(&g22_x)
        .and_then(|a| a.try_add(&g.partial_idx(1).try_mul(&g11_y)?))
        .expect("same vars");
    let numerator = first.try_sub(&second).expect("same vars");
    let denominator = g.square().scale(&int(2));
    let (reduced, reduced_exponents) = cancel_metric_factors(&numerator, &metric);
    Ok(Curvature { metric, r: RationalFunction::new(numerator, denominator), reduced, reduced_exponents })
}

/// Outcome of evaluating `R` at a rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ROutcome {
    Value(Rational),
    /// Denominator vanishes, numerator does not: `|R|` diverges.
    SingularDenominator,
    /// Both vanish; divergence is not certified.
    Indeterminate,
}

impl ROutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            ROutcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl Serialize for ROutcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ROutcome::Value(v) => s.serialize_str(&fmt_rational(v)),
            ROutcome::SingularDenominator => s.serialize_str("singular"),
            ROutcome::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

pub fn evaluate_r(r: &RationalFunction, point: &[Rational; 2]) -> ROutcome {
    let d = r.denominator.evaluate(point);
    let n = r.numerator.evaluate(point);
    match (d.is_zero(), n.is_zero()) {
        (false, _) => ROutcome::Value(n / d),
        (true, false) => ROutcome::SingularDenominator,
        (true, true) => ROutcome::Indeterminate,
    }
}

/// Cross-multiplication identity `a.num * b.den == b.num * a.den`.
pub fn rational_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    match (a.numerator.try_mul(&b.denominator), b.numerator.try_mul(&a.denominator)) {
        (Ok(l), Ok(r)) => l == r,
        _ => false,
    }
}

/// Step used for the outer finite differences in [`numeric_r_check`].
pub const FD_STEP: f64 = 1e-5;

/// Evaluates `R` in floating point directly from its square-root form, differentiating the
/// inner expressions symbolically and the outer `d/dx`, `d/dy` by central differences.
pub fn numeric_r_check(sys: &PlanarSystem, point: (f64, f64)) -> Result<f64, CurvatureError> {
    let m = metric_components(sys);
    let g = FloatPoly2::from(&m.g);
    let g22_x = FloatPoly2::from(&m.g22.partial_idx(0));
    let g11_y = FloatPoly2::from(&m.g11.partial_idx(1));
    let (x, y) = point;
    let g0 = g.eval(x, y);
    if g0.is_nan() || g0 <= 0.0 {
        return Err(CurvatureError::Domain(g0));
    }
    let h = FD_STEP;
    let inner_x = |x: f64, y: f64| g22_x.eval(x, y) / g.eval(x, y).sqrt();
    let inner_y = |x: f64, y: f64| g11_y.eval(x, y) / g.eval(x, y).sqrt();
    let dx = (inner_x(x + h, y) - inner_x(x - h, y)) / (2.0 * h);
    let dy = (inner_y(x, y + h) - inner_y(x, y - h)) / (2.0 * h);
    Ok((dx + dy) / g0.sqrt())
}

/// Sign of a rational as a word.
pub fn sign_word(v: &Rational) -> &'static str {
    if v.is_zero() {
        "zero"
    } else if v.is_positive() {
        "positive"
    } else {
        "negative"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::Vars;
    use crate::parser::parse_polynomial;

    fn system(p: &str, q: &str, vars: Vars) -> PlanarSystem {
        PlanarSystem::new(parse_polynomial(p, &vars).unwrap(), parse_polynomial(q, &vars).unwrap()).unwrap()
    }

    fn origin() -> [Rational; 2] {
        [int(0), int(0)]
    }

    #[test]
    fn s1_metric_and_origin_value() {
        let s1 = system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)", Vars::xy());
        let m = metric_components(&s1);
        let expected = parse_polynomial("2*((3*x^2 + y^2 - 1)^2 + (2*x*y + 1)^2)", &Vars::xy()).unwrap();
        assert_eq!(m.g11, expected);
        assert_eq!(m.g, m.g11.try_mul(&m.g22).unwrap());
        let r = scalar_curvature(&s1).unwrap();
        assert_eq!(evaluate_r(&r, &origin()), ROutcome::Value(int(-1)));
    }

    #[test]
    fn center_metric_and_singular_point() {
        let c = system("-y + x^2", "x + x*y", Vars::xy());
        let m = metric_components(&c);
        assert_eq!(m.g22, parse_polynomial("2*(x^2 + 1)", &Vars::xy()).unwrap());
        let cv = curvature(&c).unwrap();
        let r = cv.r.clone();
        assert_eq!(cv.evaluate(&origin()), ROutcome::Value(int(1)));
        assert_eq!(cv.evaluate(&[int(0), int(-1)]), ROutcome::SingularDenominator);
        // The unreduced form shares one factor G11 between numerator and denominator.
        assert_eq!(evaluate_r(&r, &[int(0), int(-1)]), ROutcome::Indeterminate);
        assert_eq!(cv.reduced_exponents, (1, 2));
        assert!(rational_equal(&r, &cv.reduced));
        let displayed = RationalFunction::new(
            parse_polynomial("1", &Vars::xy()).unwrap(),
            parse_polynomial("(x^2 + 1)^2*(4*x^2 + (y + 1)^2)", &Vars::xy()).unwrap(),
        );
        assert!(rational_equal(&r, &displayed));
    }

    #[test]
    fn constant_field_is_degenerate() {
        let c = system("1", "1", Vars::xy());
        let m = metric_components(&c);
        assert!(m.g11.is_zero() && m.g22.is_zero() && m.g.is_zero());
        assert_eq!(scalar_curvature(&c).unwrap_err(), CurvatureError::DegenerateMetric);
    }

    #[test]
    fn indeterminate_when_both_vanish() {
        let vars = Vars::xy();
        let r = RationalFunction::new(
            parse_polynomial("x", &vars).unwrap(),
            parse_polynomial("x*y", &vars).unwrap(),
        );
        assert_eq!(evaluate_r(&r, &origin()), ROutcome::Indeterminate);
        assert_eq!(evaluate_r(&r, &[int(0), int(1)]), ROutcome::Indeterminate);
        assert_eq!(evaluate_r(&r, &[int(1), int(0)]), ROutcome::SingularDenominator);
        assert_eq!(evaluate_r(&r, &[int(2), int(3)]), ROutcome::Value(rat(1, 3)));
    }

    #[test]
    fn rational_equality_by_cross_multiplication() {
        let vars = Vars::xy();
        let p = |s: &str| parse_polynomial(s, &vars).unwrap();
        let a = RationalFunction::new(p("x"), p("y"));
        assert!(rational_equal(&a, &RationalFunction::new(p("2*x"), p("2*y"))));
        assert!(!rational_equal(&a, &RationalFunction::new(p("y"), p("x"))));
    }

    #[test]
    fn finite_difference_agrees_at_origin() {
        let s1 = system("-y + x*(x^2 + y^2 - 1)", "x + y*(x^2 + y^2 - 1)", Vars::xy());
        assert!((numeric_r_check(&s1, (0.0, 0.0)).unwrap() + 1.0).abs() < 1e-6);
        let c = system("-y + x^2", "x + x*y", Vars::xy());
        assert!((numeric_r_check(&c, (0.0, 0.0)).unwrap() - 1.0).abs() < 1e-6);
        assert!(matches!(numeric_r_check(&c, (0.0, -1.0)), Err(CurvatureError::Domain(_))));
    }

    #[test]
    fn denominator_is_twice_g_squared() {
        let c = system("-y + x^2", "x + x*y", Vars::xy());
        let cv = curvature(&c).unwrap();
        assert_eq!(cv.r.denominator, cv.metric.g.square().scale(&int(2)));
    }
}
