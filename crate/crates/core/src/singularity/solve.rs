//! Real solutions of a pair of bivariate polynomial equations by elimination.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::interval::{eval_poly2, eval_uni, RInterval};
use crate::algebra::rational::{to_f64, Rational};
use crate::algebra::resultant::first_subresultant;
use crate::algebra::sturm::{default_width, SturmSequence};
use crate::algebra::{resultant, AlgebraError, Poly2, RootInterval, UniPoly, Vars};

/// A real point of `R^2` whose coordinate `t_idx` is the unique root of a square-free
/// polynomial inside an isolating interval, and whose other coordinate is `num(t) / den(t)`.
///
/// Rational points are the special case `minpoly = t - a`, `den = 1`.
#[derive(Clone, Debug)]
pub struct AlgebraicPoint {
    t_idx: usize,
    seq: SturmSequence,
    iv: RootInterval,
    num: UniPoly,
    den: UniPoly,
    vars: Vars,
}

impl AlgebraicPoint {
    pub fn rational(point: [Rational; 2], vars: Vars) -> Self {
        let tv = vars.name(0).to_string();
        let [a, b] = point;
        let minpoly = UniPoly::new(vec![-&a, Rational::one()], tv.clone());
        AlgebraicPoint {
            t_idx: 0,
            seq: SturmSequence::new(&minpoly).expect("nonzero"),
            iv: RootInterval { lo: a.clone(), hi: a },
            num: UniPoly::constant(b, tv.clone()),
            den: UniPoly::constant(Rational::one(), tv),
            vars,
        }
    }

    fn algebraic(t_idx: usize, seq: SturmSequence, iv: RootInterval, num: UniPoly, den: UniPoly, vars: Vars) -> Self {
        let tv = vars.name(t_idx).to_string();
        let mut p = AlgebraicPoint {
            t_idx,
            seq,
            iv,
            num: num.with_var(tv.clone()),
            den: den.with_var(tv),
            vars,
        };
        if !p.iv.is_exact() && p.seq.poly().degree() == 1 {
            // A linear minimal polynomial pins the root down exactly.
            let m = p.seq.poly();
            let r = -m.coeff(0) / m.coeff(1);
            p.iv = RootInterval { lo: r.clone(), hi: r };
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Exact coordinates when both are rational and known.
    pub fn exact(&self) -> Option<[Rational; 2]> {
        if !self.iv.is_exact() {
            return None;
        }
        let t = self.iv.lo.clone();
        let o = self.num.eval(&t) / self.den.eval(&t);
        Some(if self.t_idx == 0 { [t, o] } else { [o, t] })
    }

    /// Enclosing box `(x, y)`; the denominator is refined away from zero first.
    pub fn enclosure(&mut self) -> (RInterval, RInterval) {
        loop {
            let t = RInterval::new(self.iv.lo.clone(), self.iv.hi.clone());
            if let Some(inv) = eval_uni(&self.den, &t).recip() {
                let o = &eval_uni(&self.num, &t) * &inv;
                return if self.t_idx == 0 { (t, o) } else { (o, t) };
            }
            self.halve();
        }
    }

    pub fn approx(&mut self) -> (f64, f64) {
        let (x, y) = self.enclosure();
        let mid = |i: &RInterval| to_f64(&((&i.lo + &i.hi) / Rational::from_integer(2.into())));
        (mid(&x), mid(&y))
    }

    fn halve(&mut self) {
        if self.iv.is_exact() {
            return;
        }
        let w = self.iv.width() / Rational::from_integer(2.into());
        self.iv = self.seq.refine(self.iv.clone(), &w, None);
    }

    /// Shrinks the box until both sides are narrower than `width`.
    pub fn refine_to(&mut self, width: &Rational) {
        loop {
            let (x, y) = self.enclosure();
            if &x.width() < width && &y.width() < width {
                return;
            }
            self.halve();
        }
    }

    /// `p(t, num(t)/den(t)) * den(t)^d` reduced modulo the minimal polynomial, with `d` the
    /// degree of `p` in the other coordinate. It vanishes at the root exactly when `p`
    /// vanishes at the point, and has the sign of `p * den^d` there.
    fn cleared(&self, p: &Poly2) -> (UniPoly, u32) {
        let m = self.seq.poly();
        let tv = self.vars.name(self.t_idx);
        let coeffs: Vec<UniPoly> =
            p.as_univariate_in(1 - self.t_idx).into_iter().map(|c| c.with_var(tv).rem(m)).collect();
        let d = coeffs.len().saturating_sub(1);
        let num = self.num.rem(m);
        let den = self.den.rem(m);
        // Horner on the homogenised form: acc <- acc * num + c_k * den^(d - k).
        let mut den_pow = UniPoly::constant(Rational::one(), tv);
        let mut acc = coeffs.last().cloned().unwrap_or_else(|| UniPoly::zero(tv));
        for c in coeffs.iter().rev().skip(1) {
            den_pow = (&den_pow * &den).rem(m);
            acc = (&(&acc * &num) + &(c * &den_pow)).rem(m);
        }
        (acc, d as u32)
    }

    /// Exact test `p(point) == 0`.
    pub fn is_zero_of(&self, p: &Poly2) -> bool {
        if let Some(pt) = self.exact() {
            return p.evaluate(&pt).is_zero();
        }
        let (c, _) = self.cleared(p);
        if c.is_zero() {
            return true;
        }
        let g = c.gcd(self.seq.poly());
        if g.degree() <= 0 {
            return false;
        }
        SturmSequence::new(&g).expect("nonzero").count_closed(&self.iv.lo, &self.iv.hi) > 0
    }

    /// Exact sign of `p` at the point: zero by [`Self::is_zero_of`], otherwise by refining
    /// until the interval enclosure of `p` excludes zero.
    pub fn sign_of(&mut self, p: &Poly2) -> i8 {
        if self.is_zero_of(p) {
            return 0;
        }
        if let Some(pt) = self.exact() {
            return p.evaluate(&pt).cmp(&Rational::zero()) as i8;
        }
        let (c, d) = self.cleared(p);
        loop {
            let t = RInterval::new(self.iv.lo.clone(), self.iv.hi.clone());
            let (ce, de) = (eval_uni(&c, &t), eval_uni(&self.den, &t));
            if ce.excludes_zero() && de.excludes_zero() {
                let s = if ce.lo > Rational::zero() { 1 } else { -1 };
                let sd = if de.lo > Rational::zero() || d % 2 == 0 { 1 } else { -1 };
                return s * sd;
            }
            self.halve();
        }
    }

    /// Refines until the enclosure of `p` over the box excludes zero. The caller must know
    /// `p` does not vanish at the point, otherwise this does not terminate.
    pub fn enclosure_excluding_zero(&mut self, p: &Poly2) -> RInterval {
        loop {
            let (x, y) = self.enclosure();
            let e = eval_poly2(p, &x, &y);
            if e.excludes_zero() {
                return e;
            }
            self.halve();
        }
    }

    /// Interval enclosure of `p` over the current box.
    pub fn eval_box(&mut self, p: &Poly2) -> RInterval {
        let (x, y) = self.enclosure();
        eval_poly2(p, &x, &y)
    }
}

/// Serializable view of an isolated point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSummary {
    pub x_box: RInterval,
    pub y_box: RInterval,
    pub approx: (f64, f64),
    /// Exact coordinates as strings when rational.
    pub exact: Option<[String; 2]>,
}

impl From<&AlgebraicPoint> for PointSummary {
    fn from(p: &AlgebraicPoint) -> Self {
        let mut p = p.clone();
        let (x_box, y_box) = p.enclosure();
        PointSummary {
            approx: p.approx(),
            exact: p.exact().map(|[a, b]| [crate::algebra::rational::fmt_rational(&a), crate::algebra::rational::fmt_rational(&b)]),
            x_box,
            y_box,
        }
    }
}

/// Real zero set of a 2x2 system.
#[derive(Clone, Debug)]
pub enum Solutions {
    /// Certified to have no real solution.
    EmptyCertified,
    /// Finitely many isolated real solutions, each verified exactly.
    Points(Vec<AlgebraicPoint>),
    /// Zero-dimensionality or separation could not be established; nothing is claimed.
    DegenerateBranch(String),
}

impl Solutions {
    pub fn points(&self) -> &[AlgebraicPoint] {
        match self {
            Solutions::Points(v) => v,
            _ => &[],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Solutions::EmptyCertified => "empty_certified",
            Solutions::Points(_) => "isolated_points",
            Solutions::DegenerateBranch(_) => "degenerate_branch",
        }
    }
}

/// One elimination direction: the resultant with respect to `eliminated` and its real roots.
#[derive(Clone, Debug, Serialize)]
pub struct Eliminant {
    pub eliminated: String,
    pub polynomial: String,
    pub real_roots: usize,
    /// Distinct real values of the surviving variable where both leading coefficients in
    /// the eliminated variable vanish.
    pub degenerate_leading_roots: usize,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solutions: Solutions,
    pub eliminants: Vec<Eliminant>,
    pub notes: Vec<String>,
}

fn real_root_count(p: &UniPoly) -> usize {
    if p.degree() <= 0 {
        return 0;
    }
    SturmSequence::new(p).expect("nonzero").count_all()
}

fn leading(p: &Poly2, idx: usize) -> UniPoly {
    p.as_univariate_in(idx).pop().expect("nonzero polynomial")
}

/// Solves `f = g = 0` over the reals.
///
/// Emptiness is certified when the resultant in either direction has no real root: with
/// formal degrees the resultant vanishes at every coordinate of a common zero, including
/// those where leading coefficients drop. Nonempty sets are isolated through the first
/// subresultant (irrational coordinates) or exact specialization (rational coordinates) and
/// every point is re-verified exactly.
pub fn real_solutions_2x2(f: &Poly2, g: &Poly2) -> Result<SolveReport, AlgebraError> {
    if f.vars() != g.vars() {
        return Err(AlgebraError::VarMismatch { left: f.vars().clone(), right: g.vars().clone() });
    }
    let vars = f.vars().clone();
    let mut notes = Vec::new();
    let done = |solutions, eliminants, notes| Ok(SolveReport { solutions, eliminants, notes });
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(AlgebraError::BothZero),
        (true, false) | (false, true) => {
            let other = if f.is_zero() { g } else { f };
            if other.as_constant().is_some() {
                notes.push("one equation is a nonzero constant".to_string());
                return done(Solutions::EmptyCertified, Vec::new(), notes);
            }
            return done(
                Solutions::DegenerateBranch("one equation vanishes identically; the zero set is a curve".into()),
                Vec::new(),
                notes,
            );
        }
        _ => {}
    }
    if f.as_constant().is_some() || g.as_constant().is_some() {
        notes.push("one equation is a nonzero constant".to_string());
        return done(Solutions::EmptyCertified, Vec::new(), notes);
    }

    let mut eliminants = Vec::new();
    let mut polys = Vec::new();
    for e in 0..2 {
        let res = resultant(f, g, vars.name(e))?;
        if res.is_zero() {
            return done(
                Solutions::DegenerateBranch(format!(
                    "resultant in {} vanishes identically: the equations share a common factor",
                    vars.name(e)
                )),
                eliminants,
                notes,
            );
        }
        let lc = leading(f, e).gcd(&leading(g, e));
        eliminants.push(Eliminant {
            eliminated: vars.name(e).to_string(),
            polynomial: res.primitive().to_string(),
            real_roots: real_root_count(&res),
            degenerate_leading_roots: real_root_count(&lc),
        });
        polys.push(res);
    }

    for el in &eliminants {
        if el.real_roots == 0 {
            // Points where both leading coefficients vanish are roots of the formal
            // resultant, so there cannot be any here.
            debug_assert_eq!(el.degenerate_leading_roots, 0);
            notes.push(format!(
                "eliminant in {} has no real roots; leading-coefficient degenerate locus has {} real points",
                if el.eliminated == vars.0 { &vars.1 } else { &vars.0 },
                el.degenerate_leading_roots
            ));
            return done(Solutions::EmptyCertified, eliminants, notes);
        }
    }

    let mut failure = String::new();
    for (e, eliminant) in polys.iter().enumerate() {
        match solve_direction(f, g, e, eliminant) {
            Ok(points) => {
                for p in &points {
                    if !(p.is_zero_of(f) && p.is_zero_of(g)) {
                        return done(
                            Solutions::DegenerateBranch("candidate point failed exact verification".into()),
                            eliminants,
                            notes,
                        );
                    }
                }
                if e == 1 {
                    notes.push(format!("isolated by eliminating {}", vars.name(1)));
                }
                return done(Solutions::Points(points), eliminants, notes);
            }
            Err(reason) => failure = reason,
        }
    }
    done(Solutions::DegenerateBranch(failure), eliminants, notes)
}

/// Eliminates variable `e`; the surviving coordinate `t` ranges over the real roots of `res`.
fn solve_direction(f: &Poly2, g: &Poly2, e: usize, res: &UniPoly) -> Result<Vec<AlgebraicPoint>, String> {
    let vars = f.vars().clone();
    let t_idx = 1 - e;
    let tv = vars.name(t_idx).to_string();
    let seq = SturmSequence::new(res).expect("nonzero");
    let sf = seq.poly().clone();
    let bound = seq.root_bound();
    let roots: Vec<RootInterval> =
        seq.isolate(&-&bound, &bound, &default_width(), None).into_iter().map(|iv| seq.exactify(iv)).collect();
    let fc = f.as_univariate_in(e);
    let gc = g.as_univariate_in(e);
    let lc_common = leading(f, e).gcd(&leading(g, e)).gcd(&sf);
    let sub = first_subresultant(&fc, &gc, &tv);
    let vanishes_in = |p: &UniPoly, iv: &RootInterval| -> bool {
        if p.is_zero() {
            return true;
        }
        let h = p.gcd(&sf);
        h.degree() > 0 && SturmSequence::new(&h).expect("nonzero").count_closed(&iv.lo, &iv.hi) > 0
    };

    let mut out = Vec::new();
    for iv in roots {
        if iv.is_exact() {
            let t0 = iv.lo.clone();
            let fs = f.specialize(t_idx, &t0);
            let gs = g.specialize(t_idx, &t0);
            if fs.is_zero() && gs.is_zero() {
                return Err(format!("both equations vanish on the line {tv} = {t0}"));
            }
            let h = fs.gcd(&gs);
            if h.degree() <= 0 {
                continue;
            }
            let hseq = SturmSequence::new(&h).expect("nonzero");
            let b = hseq.root_bound();
            for r in hseq.isolate(&-&b, &b, &default_width(), None) {
                let r = hseq.exactify(r);
                out.push(AlgebraicPoint::algebraic(
                    e,
                    hseq.clone(),
                    r,
                    UniPoly::constant(t0.clone(), vars.name(e)),
                    UniPoly::constant(Rational::one(), vars.name(e)),
                    vars.clone(),
                ));
            }
            continue;
        }
        if vanishes_in(&lc_common, &iv) {
            return Err(format!("both leading coefficients in {} vanish at an irrational root", vars.name(e)));
        }
        let Some((s11, s10)) = &sub else {
            return Err(format!("no linear subresultant in {}", vars.name(e)));
        };
        if vanishes_in(s11, &iv) {
            return Err(format!("first subresultant degenerates at an irrational {tv}-root"));
        }
        out.push(AlgebraicPoint::algebraic(t_idx, seq.clone(), iv, -s10, s11.clone(), vars.clone()));
    }
    Ok(out)
}
