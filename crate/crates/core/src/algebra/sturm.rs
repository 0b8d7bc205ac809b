//! Real-root counting and isolation with Sturm sequences.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::{fmt_rational, to_f64, Rational};
use super::unipoly::UniPoly;
use super::AlgebraError;

/// Default width below which isolating intervals stop being refined (`1e-9`).
pub fn default_width() -> Rational {
    Rational::new(1.into(), 1_000_000_000.into())
}

/// Where to look for roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    /// The whole real line.
    Full,
    /// The closed interval `[lo, hi]`.
    Closed(Rational, Rational),
}

/// A closed interval with rational endpoints containing exactly one real root.
/// `lo == hi` means the root is known exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl Serialize for RootInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rational(&self.lo), fmt_rational(&self.hi)].serialize(s)
    }
}

/// Outcome of counting and isolating the real roots of a univariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealRootReport {
    pub count: usize,
    pub isolating_intervals: Vec<RootInterval>,
    /// True when repeated roots were present and the square-free part was used.
    pub square_free_applied: bool,
}

/// Signed remainder sequence `p, p', -rem(p, p'), ...` of the square-free part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<UniPoly>,
    square_free_applied: bool,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let (sf, applied) = p.square_free();
        let mut seq = vec![sf.clone(), sf.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            seq.push(-&r);
        }
        seq.pop();
        Ok(SturmSequence { seq, square_free_applied: applied })
    }

    /// The square-free polynomial the sequence was built from.
    pub fn poly(&self) -> &UniPoly {
        &self.seq[0]
    }

    pub fn square_free_applied(&self) -> bool {
        self.square_free_applied
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    fn var_at(&self, x: &Rational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    fn var_at_infinity(&self, negative: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at_infinity(negative)))
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_half_open(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.var_at(lo).saturating_sub(self.var_at(hi))
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.var_at_infinity(true).saturating_sub(self.var_at_infinity(false))
    }

    /// Number of distinct real roots in the closed interval `[lo, hi]`.
    pub fn count_closed(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo > hi {
            return 0;
        }
        let at_lo = usize::from(self.poly().eval(lo).is_zero());
        at_lo + self.count_half_open(lo, hi)
    }

    /// An integer `B` with every real root strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let p = self.poly();
        let lc = p.leading();
        let max = p
            .coeffs()
            .iter()
            .take(p.coeffs().len() - 1)
            .map(|c| (c / &lc).abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        (max + Rational::one()).ceil() + Rational::one()
    }

    /// Isolating intervals for every root in `(lo, hi]`, each refined below `width`, with
    /// lower endpoints kept strictly above `floor` when given.
    pub fn isolate(
        &self,
        lo: &Rational,
        hi: &Rational,
        width: &Rational,
        floor: Option<&Rational>,
    ) -> Vec<RootInterval> {
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        let two = Rational::from_integer(2.into());
        while let Some((a, b)) = stack.pop() {
            let c = self.count_half_open(&a, &b);
            match c {
                0 => {}
                1 => out.push(self.refine(RootInterval { lo: a, hi: b }, width, floor)),
                _ => {
                    let m = (&a + &b) / &two;
                    stack.push((m.clone(), b));
                    stack.push((a, m));
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }

    /// Shrinks an interval known to hold exactly one root in `(lo, hi]` until it is narrower
    /// than `width`, its lower endpoint is not itself a root, and it lies above `floor`.
    pub fn refine(&self, iv: RootInterval, width: &Rational, floor: Option<&Rational>) -> RootInterval {
        let p = self.poly();
        let two = Rational::from_integer(2.into());
        let RootInterval { mut lo, mut hi } = iv;
        if lo == hi {
            return RootInterval { lo, hi };
        }
        loop {
            if p.eval(&hi).is_zero() {
                return RootInterval { lo: hi.clone(), hi };
            }
            let wide = &hi - &lo >= *width;
            let lo_is_root = p.eval(&lo).is_zero();
            let below_floor = floor.is_some_and(|f| &lo <= f);
            if !wide && !lo_is_root && !below_floor {
                return RootInterval { lo, hi };
            }
            let m = (&lo + &hi) / &two;
            if self.count_half_open(&lo, &m) == 1 {
                hi = m;
            } else {
                lo = m;
            }
        }
    }

    /// Replaces an isolating interval by the exact root when that root is rational.
    ///
    /// A rational root `p/q` of the primitive integer polynomial has `q <= |lc|`. Once the
    /// interval is narrower than `1/lc^2` it holds at most one such fraction, which is then
    /// the simplest rational in it.
    pub fn exactify(&self, iv: RootInterval) -> RootInterval {
        if iv.is_exact() {
            return iv;
        }
        let prim = self.poly().primitive();
        let lc = prim.leading().abs();
        let width = Rational::one() / (&lc * &lc) / Rational::from_integer(2.into());
        let iv = self.refine(iv, &width, None);
        if iv.is_exact() {
            return iv;
        }
        let c = simplest_between(&iv.lo, &iv.hi);
        if prim.eval(&c).is_zero() {
            RootInterval { lo: c.clone(), hi: c }
        } else {
            iv
        }
    }

    /// Sign of the square-free polynomial strictly inside an isolating interval, away from the
    /// root: used to determine on which side of the root the polynomial is positive.
    pub fn sign_left_right(&self, iv: &RootInterval) -> (i8, i8) {
        let p = self.poly();
        let eps = Rational::new(1.into(), 1_000_000_000_000i64.into());
        let (l, r) = if iv.is_exact() {
            // Step away until no other root interferes.
            let mut d = eps;
            loop {
                let a = &iv.lo - &d;
                let b = &iv.hi + &d;
                if self.count_closed(&a, &b) == 1 {
                    break (a, b);
                }
                d /= Rational::from_integer(2.into());
            }
        } else {
            (iv.lo.clone(), iv.hi.clone())
        };
        (p.sign_at(&l), p.sign_at(&r))
    }
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(Rational::one() / (hi - &fl)), &(Rational::one() / (lo - &fl)));
    fl + Rational::one() / inner
}

/// Counts and isolates the distinct real roots of `p` in `interval` with the default width.
pub fn sturm_real_root_count(p: &UniPoly, interval: &Interval) -> Result<RealRootReport, AlgebraError> {
    sturm_real_roots_with(p, interval, &default_width())
}

pub fn sturm_real_roots_with(
    p: &UniPoly,
    interval: &Interval,
    width: &Rational,
) -> Result<RealRootReport, AlgebraError> {
    let seq = SturmSequence::new(p)?;
    let intervals = match interval {
        Interval::Full => {
            let b = seq.root_bound();
            seq.isolate(&-&b, &b, width, None)
        }
        Interval::Closed(lo, hi) => {
            let mut v = Vec::new();
            if lo <= hi && seq.poly().eval(lo).is_zero() {
                v.push(RootInterval { lo: lo.clone(), hi: lo.clone() });
            }
            v.extend(seq.isolate(lo, hi, width, None));
            v
        }
    };
    Ok(RealRootReport {
        count: intervals.len(),
        isolating_intervals: intervals,
        square_free_applied: seq.square_free_applied(),
    })
}

/// Roots restricted to `(0, inf)`; every isolating interval has positive endpoints.
pub fn positive_real_roots(p: &UniPoly) -> Result<RealRootReport, AlgebraError> {
    positive_real_roots_with(p, &default_width())
}

pub fn positive_real_roots_with(p: &UniPoly, width: &Rational) -> Result<RealRootReport, AlgebraError> {
    let seq = SturmSequence::new(p)?;
    let b = seq.root_bound();
    let zero = Rational::zero();
    let intervals = seq.isolate(&zero, &b, width, Some(&zero));
    Ok(RealRootReport {
        count: intervals.len(),
        isolating_intervals: intervals,
        square_free_applied: seq.square_free_applied(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&Rational::new(3.into(), 10.into()), &Rational::new(2.into(), 5.into())), Rational::new(1.into(), 3.into()));
        assert_eq!(simplest_between(&int(-7), &int(-7)), int(-7));
        assert_eq!(simplest_between(&Rational::new((-31).into(), 25.into()), &Rational::new((-11).into(), 10.into())), Rational::new((-6).into(), 5.into()));
    }

    #[test]
    fn exactify_recovers_rational_roots() {
        let p = UniPoly::from_ints(&[-2, 3, 9], "t");
        // 9t^2 + 3t - 2 = (3t + 2)(3t - 1)
        let seq = SturmSequence::new(&p).unwrap();
        let b = seq.root_bound();
        let roots: Vec<_> = seq.isolate(&-&b, &b, &default_width(), None).into_iter().map(|iv| seq.exactify(iv)).collect();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(RootInterval::is_exact));
        assert_eq!(roots[0].lo, Rational::new((-2).into(), 3.into()));
        assert_eq!(roots[1].lo, Rational::new(1.into(), 3.into()));
        let q = UniPoly::from_ints(&[-2, 0, 1], "t");
        let seq = SturmSequence::new(&q).unwrap();
        let iv = seq.isolate(&int(0), &int(2), &default_width(), None).pop().unwrap();
        assert!(!seq.exactify(iv).is_exact());
    }

    #[test]
    fn displayed_eliminants_have_no_real_roots() {
        for coeffs in [[384, 0, 152, 0, 17], [3, 0, -4, 0, 4], [48, 0, -8, 0, 1]] {
            let p = UniPoly::from_ints(&coeffs, "v");
            let r = sturm_real_root_count(&p, &Interval::Full).unwrap();
            assert_eq!(r.count, 0, "{p}");
            assert!(r.isolating_intervals.is_empty());
        }
    }

    /// `v^4 - 8v^2 + 48` is a quadratic in `v^2` with discriminant `64 - 192 < 0`; a sampling
    /// oracle confirms it stays positive.
    #[test]
    fn s1_eliminant_positive_by_sampling() {
        let p = UniPoly::from_ints(&[48, 0, -8, 0, 1], "v");
        for k in -4000..=4000 {
            assert!(p.eval_f64(k as f64 / 100.0) > 0.0);
        }
        assert_eq!(sturm_real_root_count(&p, &Interval::Full).unwrap().count, 0);
    }

    #[test]
    fn known_roots_isolated() {
        let p = UniPoly::from_ints(&[-1, 0, 1], "x");
        let r = sturm_real_root_count(&p, &Interval::Full).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.isolating_intervals[0].contains(&int(-1)));
        assert!(r.isolating_intervals[1].contains(&int(1)));
        assert!(!r.square_free_applied);
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x - 1)^3 (x + 2)
        let p = UniPoly::from_ints(&[-2, 7, -9, 5, -1], "x").scale(&int(-1));
        let r = sturm_real_root_count(&p, &Interval::Full).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.square_free_applied);
    }

    #[test]
    fn closed_interval_includes_endpoints() {
        let p = UniPoly::from_ints(&[-1, 0, 1], "x");
        let r = sturm_real_root_count(&p, &Interval::Closed(int(-1), int(1))).unwrap();
        assert_eq!(r.count, 2);
        let r = sturm_real_root_count(&p, &Interval::Closed(int(0), int(5))).unwrap();
        assert_eq!(r.count, 1);
    }

    #[test]
    fn isolating_intervals_are_disjoint_and_narrow() {
        // (x - 1)(x - 2)(x - 1/2)(x + 3) has roots on bisection midpoints
        let p = &(&UniPoly::from_ints(&[-1, 1], "x") * &UniPoly::from_ints(&[-2, 1], "x"))
            * &(&UniPoly::from_ints(&[-1, 2], "x") * &UniPoly::from_ints(&[3, 1], "x"));
        let r = sturm_real_root_count(&p, &Interval::Full).unwrap();
        assert_eq!(r.count, 4);
        for w in r.isolating_intervals.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
        for iv in &r.isolating_intervals {
            assert!(iv.width() < default_width());
        }
    }

    #[test]
    fn positive_roots() {
        let r = positive_real_roots(&UniPoly::from_ints(&[-1, 1], "s")).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.isolating_intervals[0].contains(&int(1)));
        // (s - 1)(s - 4)
        let r = positive_real_roots(&UniPoly::from_ints(&[4, -5, 1], "s")).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.isolating_intervals[0].contains(&int(1)));
        assert!(r.isolating_intervals[1].contains(&int(4)));
        assert_eq!(positive_real_roots(&UniPoly::from_ints(&[1, 1], "s")).unwrap().count, 0);
        // a root at zero is not positive; a tiny positive one still gets a positive floor
        let r = positive_real_roots(&UniPoly::new(vec![int(0), Rational::new((-1).into(), 10i64.pow(12).into()), int(1)], "s")).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.isolating_intervals[0].lo > int(0));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            sturm_real_root_count(&UniPoly::zero("x"), &Interval::Full),
            Err(AlgebraError::ZeroPolynomial)
        ));
        assert!(positive_real_roots(&UniPoly::zero("x")).is_err());
    }
}
