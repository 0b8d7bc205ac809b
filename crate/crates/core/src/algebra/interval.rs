//! Closed intervals with exact rational endpoints.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly2::Poly2;
use super::rational::{fmt_rational, Rational};
use super::unipoly::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RInterval { lo: x.clone(), hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= Rational::zero() && self.hi >= Rational::zero()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn scale(&self, c: &Rational) -> RInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            RInterval::new(a, b)
        } else {
            RInterval::new(b, a)
        }
    }

    pub fn pow(&self, e: u32) -> RInterval {
        if e == 0 {
            return RInterval::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            RInterval::new(a, b)
        } else if self.contains_zero() {
            RInterval::new(Rational::zero(), if a > b { a } else { b })
        } else if a <= b {
            RInterval::new(a, b)
        } else {
            RInterval::new(b, a)
        }
    }

    /// `1 / self`; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<RInterval> {
        if self.contains_zero() {
            return None;
        }
        Some(RInterval::new(Rational::one() / &self.hi, Rational::one() / &self.lo))
    }
}

impl Add for &RInterval {
    type Output = RInterval;
    fn add(self, rhs: &RInterval) -> RInterval {
        RInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Mul for &RInterval {
    type Output = RInterval;
    fn mul(self, rhs: &RInterval) -> RInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RInterval::new(lo, hi)
    }
}

impl Serialize for RInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rational(&self.lo), fmt_rational(&self.hi)].serialize(s)
    }
}

/// Encloses the range of `p` over the box `x_box × y_box` by term-wise interval arithmetic.
pub fn eval_poly2(p: &Poly2, x_box: &RInterval, y_box: &RInterval) -> RInterval {
    let mx = p.degree_in(0).max(0) as usize;
    let my = p.degree_in(1).max(0) as usize;
    let xp: Vec<RInterval> = (0..=mx).map(|k| x_box.pow(k as u32)).collect();
    let yp: Vec<RInterval> = (0..=my).map(|k| y_box.pow(k as u32)).collect();
    let mut acc = RInterval::point(Rational::zero());
    for (&(i, j), c) in p.terms() {
        let t = (&xp[i as usize] * &yp[j as usize]).scale(c);
        acc = &acc + &t;
    }
    acc
}

/// Encloses the range of a univariate polynomial over an interval.
pub fn eval_uni(p: &UniPoly, x: &RInterval) -> RInterval {
    let mut acc = RInterval::point(Rational::zero());
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &x.pow(k as u32).scale(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly2::Vars;
    use crate::algebra::rational::{int, rat};
    use crate::parser::parse_polynomial;

    #[test]
    fn enclosure_contains_sampled_values() {
        let p = parse_polynomial("x^3 - 2*x*y + y^2 - 1/3", &Vars::xy()).unwrap();
        let bx = RInterval::new(rat(-1, 2), rat(3, 4));
        let by = RInterval::new(int(-1), rat(1, 5));
        let enc = eval_poly2(&p, &bx, &by);
        for i in 0..=10 {
            for j in 0..=10 {
                let x = &bx.lo + bx.width() * rat(i, 10);
                let y = &by.lo + by.width() * rat(j, 10);
                let v = p.evaluate(&[x, y]);
                assert!(enc.lo <= v && v <= enc.hi);
            }
        }
    }

    #[test]
    fn even_powers_straddling_zero() {
        let iv = RInterval::new(int(-2), int(1));
        assert_eq!(iv.pow(2), RInterval::new(int(0), int(4)));
        assert_eq!(iv.pow(3), RInterval::new(int(-8), int(1)));
        assert!(iv.recip().is_none());
    }
}
