//! Rigid systems `x' = -y + x f(x^2 + y^2)`, `y' = x + y f(x^2 + y^2)`, whose polar form is
//! `r' = r f(r^2)`, `theta' = 1`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::rational::{pow2_inv, to_f64, Rational};
use crate::algebra::sturm::{positive_real_roots, SturmSequence};
use crate::algebra::{Poly2, RootInterval, UniPoly, Vars};
use crate::system::PlanarSystem;

use super::{CycleInfo, CycleSource, DynamicsError, LimitCycleReport, Stability};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialForm {
    /// `f(s)` with `s = r^2`; zero when unmatched.
    pub f: UniPoly,
    pub matched: bool,
}

impl Serialize for RadialForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RadialForm", 2)?;
        st.serialize_field("matched", &self.matched)?;
        st.serialize_field("f", &self.matched.then(|| self.f.to_string()))?;
        st.end()
    }
}

fn unmatched() -> RadialForm {
    RadialForm { f: UniPoly::zero("s"), matched: false }
}

/// `f(x^2 + y^2)` as a bivariate polynomial.
fn lift(f: &UniPoly, vars: &Vars) -> Poly2 {
    let s = Poly2::from_terms([((2, 0), Rational::one()), ((0, 2), Rational::one())], vars.clone());
    let mut acc = Poly2::zero(vars.clone());
    for c in f.coeffs().iter().rev() {
        acc = acc.try_mul(&s).expect("same vars").try_add(&Poly2::constant(c.clone(), vars.clone())).expect("same vars");
    }
    acc
}

/// Matches the rigid form by exact polynomial identity.
///
/// `x P + y Q = (x^2 + y^2) f` determines `f`; the match is then confirmed by rebuilding
/// both components.
pub fn detect_radial_form(sys: &PlanarSystem) -> RadialForm {
    let vars = sys.vars.clone();
    let x = Poly2::var(&vars.0, vars.clone()).expect("declared");
    let y = Poly2::var(&vars.1, vars.clone()).expect("declared");
    let s = x.square().try_add(&y.square()).expect("same vars");
    let h = x.try_mul(&sys.p).and_then(|a| a.try_add(&y.try_mul(&sys.q)?)).expect("same vars");
    let Ok(Some(q)) = h.exact_div(&s) else {
        return unmatched();
    };
    // q(x, 0) = f(x^2): only even powers may appear.
    let on_axis = q.specialize(1, &Rational::zero());
    if on_axis.coeffs().iter().enumerate().any(|(k, c)| k % 2 == 1 && !c.is_zero()) {
        return unmatched();
    }
    let f = UniPoly::new(on_axis.coeffs().iter().step_by(2).cloned().collect(), "s");
    let ff = lift(&f, &vars);
    let p = y.neg().try_add(&x.try_mul(&ff).expect("same vars")).expect("same vars");
    let qq = x.try_add(&y.try_mul(&ff).expect("same vars")).expect("same vars");
    if p == sys.p && qq == sys.q {
        RadialForm { f, matched: true }
    } else {
        unmatched()
    }
}

/// Points just left and right of an isolated root with no other root of `f` in between.
fn straddle(seq: &SturmSequence, iv: &RootInterval) -> (Rational, Rational) {
    if !iv.is_exact() {
        return (iv.lo.clone(), iv.hi.clone());
    }
    let mut d = Rational::new(1.into(), 1_000_000.into());
    loop {
        let a = &iv.lo - &d;
        let b = &iv.hi + &d;
        if seq.count_closed(&a, &b) == 1 && !seq.poly().eval(&a).is_zero() && !seq.poly().eval(&b).is_zero() {
            return (a, b);
        }
        d /= Rational::from_integer(2.into());
    }
}

/// Cycles at `r = sqrt(s*)` for every positive root `s*` of `f`.
pub fn exact_radial_cycles(form: &RadialForm) -> Result<LimitCycleReport, DynamicsError> {
    if !form.matched {
        return Err(DynamicsError::NotRadial);
    }
    let period = 2.0 * std::f64::consts::PI;
    if form.f.is_zero() {
        return Ok(LimitCycleReport {
            cycles: Vec::new(),
            cycle_count: 0,
            center_flag: true,
            annulus: None,
            scanned_cells: 0,
            invalid_cells: Vec::new(),
            notes: vec!["f vanishes identically: every circle is periodic".into()],
        });
    }
    let report = positive_real_roots(&form.f).expect("nonzero");
    let seq = SturmSequence::new(&form.f).expect("nonzero");
    let repeated = form.f.gcd(&form.f.derivative());
    let mut notes = Vec::new();
    let mut cycles = Vec::new();
    for iv in report.isolating_intervals {
        let iv = seq.refine(seq.exactify(iv), &pow2_inv(64), None);
        let (l, r) = straddle(&seq, &iv);
        let stability = match (form.f.sign_at(&l), form.f.sign_at(&r)) {
            (a, b) if a < 0 && b > 0 => Stability::Unstable,
            (a, b) if a > 0 && b < 0 => Stability::Stable,
            _ => Stability::SemiStable,
        };
        let multiple = repeated.degree() > 0
            && SturmSequence::new(&repeated).expect("nonzero").count_closed(&iv.lo, &iv.hi) > 0;
        if multiple {
            notes.push(format!("root of f near s = {} is multiple; cycle reported once", iv.midpoint_f64()));
        }
        let radius = if iv.is_exact() { to_f64(&iv.lo).sqrt() } else { iv.midpoint_f64().sqrt() };
        cycles.push(CycleInfo {
            radius,
            representative_point: (radius, 0.0),
            period,
            stability,
            source: CycleSource::ExactRadial,
            s_interval: Some(iv),
        });
    }
    Ok(LimitCycleReport {
        cycle_count: cycles.len(),
        cycles,
        center_flag: false,
        annulus: None,
        scanned_cells: 0,
        invalid_cells: Vec::new(),
        notes,
    })
}
