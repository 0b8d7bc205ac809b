//! Sparse bivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, Rational};
use super::unipoly::UniPoly;
use super::AlgebraError;

/// An ordered pair of distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vars(pub String, pub String);

impl Vars {
    pub fn new(x: impl Into<String>, y: impl Into<String>) -> Self {
        Vars(x.into(), y.into())
    }

    pub fn xy() -> Self {
        Vars::new("x", "y")
    }

    /// 0 for the first variable, 1 for the second.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if name == self.0 {
            Some(0)
        } else if name == self.1 {
            Some(1)
        } else {
            None
        }
    }

    pub fn name(&self, idx: usize) -> &str {
        if idx == 0 {
            &self.0
        } else {
            &self.1
        }
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Exponent pair `(i, j)` for the monomial `x^i y^j`.
pub type Exponent = (u32, u32);

/// Sparse polynomial in two variables.
///
/// Zero coefficients are never stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<Exponent, Rational>,
    vars: Vars,
}

/// Affine change of variables `(x, y) = M (u, v) + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: [[Rational; 2]; 2],
    pub offset: [Rational; 2],
}

impl LinearMap {
    pub fn identity() -> Self {
        LinearMap {
            matrix: [
                [Rational::one(), Rational::zero()],
                [Rational::zero(), Rational::one()],
            ],
            offset: [Rational::zero(), Rational::zero()],
        }
    }

    pub fn translation(dx: Rational, dy: Rational) -> Self {
        LinearMap { offset: [dx, dy], ..Self::identity() }
    }

    pub fn determinant(&self) -> Rational {
        let m = &self.matrix;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn apply(&self, p: &[Rational; 2]) -> [Rational; 2] {
        let m = &self.matrix;
        [
            &m[0][0] * &p[0] + &m[0][1] * &p[1] + &self.offset[0],
            &m[1][0] * &p[0] + &m[1][1] * &p[1] + &self.offset[1],
        ]
    }

    /// Inverse map, `None` when the matrix is singular.
    pub fn inverse(&self) -> Option<LinearMap> {
        let det = self.determinant();
        if det.is_zero() {
            return None;
        }
        let m = &self.matrix;
        let inv = [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ];
        let offset = [
            -(&inv[0][0] * &self.offset[0] + &inv[0][1] * &self.offset[1]),
            -(&inv[1][0] * &self.offset[0] + &inv[1][1] * &self.offset[1]),
        ];
        Some(LinearMap { matrix: inv, offset })
    }
}

impl Poly2 {
    pub fn zero(vars: Vars) -> Self {
        Poly2 { terms: BTreeMap::new(), vars }
    }

    pub fn constant(c: Rational, vars: Vars) -> Self {
        Self::monomial(c, (0, 0), vars)
    }

    pub fn monomial(c: Rational, exp: Exponent, vars: Vars) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exp, c);
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(name: &str, vars: Vars) -> Result<Self, AlgebraError> {
        match vars.index_of(name) {
            Some(0) => Ok(Self::monomial(Rational::one(), (1, 0), vars)),
            Some(_) => Ok(Self::monomial(Rational::one(), (0, 1), vars)),
            None => Err(AlgebraError::UnknownVariable(name.to_string())),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rational)>, vars: Vars) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: Exponent) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|&(i, j)| (i + j) as i64).max().unwrap_or(-1)
    }

    /// Degree in one variable (by index); `-1` for the zero polynomial.
    pub fn degree_in(&self, idx: usize) -> i64 {
        self.terms
            .keys()
            .map(|&(i, j)| if idx == 0 { i } else { j } as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Renames the variables without touching the terms.
    pub fn with_vars(mut self, vars: Vars) -> Self {
        self.vars = vars;
        self
    }

    fn check_vars(&self, other: &Poly2) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VarMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly2) -> Result<Poly2, AlgebraError> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Poly2) -> Result<Poly2, AlgebraError> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn try_mul(&self, other: &Poly2) -> Result<Poly2, AlgebraError> {
        self.check_vars(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    fn mul_unchecked(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.vars.clone());
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    ///
    /// Uses lexicographic leading terms; for an exact product the leading term of the
    /// dividend is always the product of the leading terms, so the loop never stalls wrongly.
    pub fn exact_div(&self, divisor: &Poly2) -> Result<Option<Poly2>, AlgebraError> {
        self.check_vars(divisor)?;
        let Some((&(di, dj), dc)) = divisor.terms.iter().next_back() else {
            return Err(AlgebraError::ZeroPolynomial);
        };
        let mut rem = self.clone();
        let mut quot = Poly2::zero(self.vars.clone());
        while let Some((&(ri, rj), rc)) = rem.terms.iter().next_back() {
            if ri < di || rj < dj {
                return Ok(None);
            }
            let t = Poly2::monomial(rc / dc, (ri - di, rj - dj), self.vars.clone());
            rem = rem.add_unchecked(&t.mul_unchecked(divisor).neg());
            quot = quot.add_unchecked(&t);
        }
        Ok(Some(quot))
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
            vars: self.vars.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero(self.vars.clone());
        }
        Poly2 {
            terms: self.terms.iter().map(|(&e, a)| (e, a * c)).collect(),
            vars: self.vars.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut acc = Poly2::constant(Rational::one(), self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn square(&self) -> Poly2 {
        self.mul_unchecked(self)
    }

    /// Formal partial derivative with respect to the variable called `var`.
    pub fn partial(&self, var: &str) -> Result<Poly2, AlgebraError> {
        let idx = self
            .vars
            .index_of(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
        Ok(self.partial_idx(idx))
    }

    pub fn partial_idx(&self, idx: usize) -> Poly2 {
        let mut out = Poly2::zero(self.vars.clone());
        for (&(i, j), c) in &self.terms {
            let k = if idx == 0 { i } else { j };
            if k == 0 {
                continue;
            }
            let e = if idx == 0 { (i - 1, j) } else { (i, j - 1) };
            out.add_term(e, c * Rational::from_integer(k.into()));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational; 2]) -> Rational {
        let mx = self.degree_in(0).max(0) as usize;
        let my = self.degree_in(1).max(0) as usize;
        let xp = powers(&point[0], mx);
        let yp = powers(&point[1], my);
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (&(i, j), c)| acc + c * &xp[i as usize] * &yp[j as usize])
    }

    pub fn evaluate_f64(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().fold(0.0, |acc, (&(i, j), c)| {
            acc + super::rational::to_f64(c) * x.powi(i as i32) * y.powi(j as i32)
        })
    }

    /// Composition `p(L(u, v))` with the new variable names.
    pub fn substitute_linear(&self, map: &LinearMap, new_vars: Vars) -> Poly2 {
        let m = &map.matrix;
        let xs = Poly2::from_terms(
            [
                ((1, 0), m[0][0].clone()),
                ((0, 1), m[0][1].clone()),
                ((0, 0), map.offset[0].clone()),
            ],
            new_vars.clone(),
        );
        let ys = Poly2::from_terms(
            [
                ((1, 0), m[1][0].clone()),
                ((0, 1), m[1][1].clone()),
                ((0, 0), map.offset[1].clone()),
            ],
            new_vars.clone(),
        );
        let xp = poly_powers(&xs, self.degree_in(0).max(0) as usize);
        let yp = poly_powers(&ys, self.degree_in(1).max(0) as usize);
        let mut out = Poly2::zero(new_vars);
        for (&(i, j), c) in &self.terms {
            let t = xp[i as usize].mul_unchecked(&yp[j as usize]).scale(c);
            out = out.add_unchecked(&t);
        }
        out
    }

    /// Views the polynomial as univariate in variable `idx` with coefficients in the other
    /// variable: entry `k` is the coefficient of `var_idx^k`.
    pub fn as_univariate_in(&self, idx: usize) -> Vec<UniPoly> {
        let other = self.vars.name(1 - idx).to_string();
        let deg = self.degree_in(idx);
        if deg < 0 {
            return Vec::new();
        }
        let mut dense: Vec<Vec<Rational>> = vec![Vec::new(); deg as usize + 1];
        for (&(i, j), c) in &self.terms {
            let (k, r) = if idx == 0 { (i, j) } else { (j, i) };
            let row = &mut dense[k as usize];
            if row.len() <= r as usize {
                row.resize(r as usize + 1, Rational::zero());
            }
            row[r as usize] = c.clone();
        }
        dense.into_iter().map(|row| UniPoly::new(row, other.clone())).collect()
    }

    /// Substitutes `value` for variable `idx`, leaving a univariate polynomial in the other one.
    pub fn specialize(&self, idx: usize, value: &Rational) -> UniPoly {
        let other = self.vars.name(1 - idx).to_string();
        let deg = self.degree_in(idx).max(0) as usize;
        let vp = powers(value, deg);
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (k, r) = if idx == 0 { (i, j) } else { (j, i) };
            if coeffs.len() <= r as usize {
                coeffs.resize(r as usize + 1, Rational::zero());
            }
            coeffs[r as usize] += c * &vp[k as usize];
        }
        UniPoly::new(coeffs, other)
    }

    /// Builds a polynomial from a univariate one in the named variable.
    pub fn from_univariate(p: &UniPoly, idx: usize, vars: Vars) -> Poly2 {
        Poly2::from_terms(
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let k = k as u32;
                (if idx == 0 { (k, 0) } else { (0, k) }, c.clone())
            }),
            vars,
        )
    }

    /// Terms in canonical print order: total degree descending, then by the first
    /// variable's exponent descending.
    pub fn canonical_terms(&self) -> Vec<(Exponent, Rational)> {
        let mut v: Vec<(Exponent, Rational)> =
            self.terms.iter().map(|(&e, c)| (e, c.clone())).collect();
        v.sort_by(|a, b| {
            let (da, db) = (a.0 .0 + a.0 .1, b.0 .0 + b.0 .1);
            db.cmp(&da).then(b.0 .0.cmp(&a.0 .0))
        });
        v
    }
}

/// Floating-point copy of a polynomial for fast numerical evaluation.
#[derive(Clone, Debug)]
pub struct FloatPoly2 {
    terms: Vec<(i32, i32, f64)>,
}

impl FloatPoly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| c * x.powi(i) * y.powi(j))
            .sum()
    }
}

impl From<&Poly2> for FloatPoly2 {
    fn from(p: &Poly2) -> Self {
        FloatPoly2 {
            terms: p
                .terms
                .iter()
                .map(|(&(i, j), c)| (i as i32, j as i32, super::rational::to_f64(c)))
                .collect(),
        }
    }
}

fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::one());
    for k in 0..n {
        let next = &out[k] * x;
        out.push(next);
    }
    out
}

fn poly_powers(p: &Poly2, n: usize) -> Vec<Poly2> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly2::constant(Rational::one(), p.vars.clone()));
    for k in 0..n {
        let next = out[k].mul_unchecked(p);
        out.push(next);
    }
    out
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in self.canonical_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            for (name, e) in [(&self.vars.0, i), (&self.vars.1, j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
