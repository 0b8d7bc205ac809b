//! Growth-rate comparison between the lower bound `S_k` on `H(2^k - 1)` and the quadratic
//! closed form `H(n) = 2 (n - 1) (4 (n - 1) - 2)`, plus the crossover against the
//! `(n + 2)^2 log(n + 2) / (2 log 2)` asymptotic bound.

use std::fmt::Write as _;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::rational::{fmt_rational, Rational};

/// Default binary precision of the crossover scan.
pub const DEFAULT_PRECISION_BITS: usize = 80;
/// Environment variable overriding [`DEFAULT_PRECISION_BITS`].
pub const PRECISION_ENV: &str = "CCLAB_PRECISION_BITS";
/// Largest `k` the ascending threshold scan visits before giving up.
const SCAN_LIMIT: u32 = 10_000;
/// Largest linear stretch examined below the monotone region of the crossover search.
const LINEAR_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("H(n) is only defined for n >= 2, got {0}")]
    BelowDomain(BigInt),
    #[error("S_k requires k >= 2, got {0}")]
    IndexTooSmall(u32),
    #[error("S_{0} is not an integer; the closed form is inconsistent")]
    NotIntegral(u32),
    #[error("no contradiction found for k <= {0}")]
    NoThreshold(u32),
    #[error("{0}")]
    InvalidInput(String),
}

fn ser_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// `2 (n - 1) (4 (n - 1) - 2)`.
pub fn claimed_h(n: &BigInt) -> Result<BigInt, HilbertError> {
    if *n < BigInt::from(2) {
        return Err(HilbertError::BelowDomain(n.clone()));
    }
    let m = n - 1;
    Ok(2 * &m * (4 * &m - 2))
}

/// `4 (2^k - 2) (2^{k+1} - 5)`, the closed form at `n = 2^k - 1`.
pub fn claimed_at_power(k: u32) -> BigInt {
    4 * (pow2(k) - 2) * (pow2(k + 1) - 5)
}

/// `S_k = 4^{k-1} (k - 13/6) + 2^k - 1/3`, evaluated exactly.
pub fn s_k(k: u32) -> Result<BigInt, HilbertError> {
    if k < 2 {
        return Err(HilbertError::IndexTooSmall(k));
    }
    let r = Rational::from_integer(pow2(2 * (k - 1))) * (Rational::from_integer(k.into()) - Rational::new(13.into(), 6.into()))
        + Rational::from_integer(pow2(k))
        - Rational::new(1.into(), 3.into());
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(HilbertError::NotIntegral(k))
    }
}

/// One row of the comparison table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthComparison {
    pub k: u32,
    #[serde(serialize_with = "ser_big")]
    pub n: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub s_k: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub claimed: BigInt,
    pub contradiction: bool,
}

pub fn compare(k: u32) -> Result<GrowthComparison, HilbertError> {
    let s = s_k(k)?;
    let claimed = claimed_at_power(k);
    Ok(GrowthComparison { k, n: pow2(k) - 1, contradiction: s > claimed, s_k: s, claimed })
}

/// Rows `k = 2..=k_max`.
pub fn comparison_table(k_max: u32) -> Result<Vec<GrowthComparison>, HilbertError> {
    (2..=k_max).map(compare).collect()
}

pub fn render_table(rows: &[GrowthComparison]) -> String {
    let headers = ["k", "2^k-1", "S_k", "claimed", "contradiction"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| [r.k.to_string(), r.n.to_string(), r.s_k.to_string(), r.claimed.to_string(), r.contradiction.to_string()])
        .collect();
    let widths: Vec<usize> =
        (0..5).map(|i| cells.iter().map(|c| c[i].len()).chain([headers[i].len()]).max().unwrap_or(0)).collect();
    let mut out = String::new();
    let line = |out: &mut String, row: [&str; 5]| {
        let parts: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, headers);
    for c in &cells {
        line(&mut out, [&c[0], &c[1], &c[2], &c[3], &c[4]]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    /// Minimal `k >= 2` with `S_k > H(2^k - 1)`.
    pub threshold: u32,
    /// The contradiction was re-checked for every `k` from the threshold up to this value.
    pub verified_through: u32,
    pub before: GrowthComparison,
    pub at: GrowthComparison,
}

fn contradicts(k: u32) -> bool {
    compare(k).map(|c| c.contradiction).unwrap_or(false)
}

/// Ascending exact scan for the first contradiction, then a check that it persists up to
/// twice the threshold.
pub fn threshold_report() -> Result<ThresholdReport, HilbertError> {
    let threshold = (2..=SCAN_LIMIT).find(|&k| contradicts(k)).ok_or(HilbertError::NoThreshold(SCAN_LIMIT))?;
    let verified_through = 2 * threshold;
    if let Some(k) = (threshold..=verified_through).find(|&k| !contradicts(k)) {
        return Err(HilbertError::InvalidInput(format!("contradiction does not persist at k = {k}")));
    }
    let before = compare(threshold.saturating_sub(1).max(2))?;
    Ok(ThresholdReport { threshold, verified_through, before, at: compare(threshold)? })
}

pub fn contradiction_threshold() -> Result<u32, HilbertError> {
    threshold_report().map(|r| r.threshold)
}

/// Same threshold by doubling until the comparison flips, then binary search on the bracket.
pub fn contradiction_threshold_bisect() -> Result<u32, HilbertError> {
    if contradicts(2) {
        return Ok(2);
    }
    let mut hi = 4;
    while !contradicts(hi) {
        if hi > SCAN_LIMIT {
            return Err(HilbertError::NoThreshold(SCAN_LIMIT));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if contradicts(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Precision from [`PRECISION_ENV`], or the default when unset or unparsable.
pub fn precision_bits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&b| b >= 16)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// `q(n) = a n^2 + b n + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Quadratic {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Quadratic { a, b, c }
    }

    /// The closed form `2 (n - 1) (4 (n - 1) - 2) = 8 n^2 - 20 n + 12`.
    pub fn claimed() -> Self {
        let i = |v: i64| Rational::from_integer(v.into());
        Quadratic::new(i(8), i(-20), i(12))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossover {
    /// First `n` from which the asymptotic bound exceeds `q(n)` for every larger `n`.
    #[serde(serialize_with = "ser_big")]
    pub n: BigInt,
    pub precision_bits: usize,
    /// Same `n` recomputed at twice the precision.
    pub stable_under_doubling: bool,
    /// `bound(n) - q(n)` (positive) and `bound(n - 1) - q(n - 1)` (non-positive when `n > 0`).
    pub margin_at: String,
    pub margin_before: Option<String>,
    pub notes: Vec<String>,
}

struct Ctx {
    p: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl Ctx {
    fn new(p: usize) -> Self {
        Ctx { p, rm: RoundingMode::ToEven, cc: Consts::new().expect("constants cache") }
    }

    fn int(&mut self, v: &BigInt) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, self.p, self.rm, &mut self.cc)
    }

    fn rat(&mut self, r: &Rational) -> BigFloat {
        let n = self.int(r.numer());
        let d = self.int(r.denom());
        n.div(&d, self.p, self.rm)
    }

    /// `m^2 log2(m) / 2 - q(m - 2)` for `m = n + 2`.
    fn gap(&mut self, q: &Quadratic, m: &BigInt) -> BigFloat {
        if let Some(g) = exact_gap(q, m) {
            return self.rat(&g);
        }
        let (p, rm) = (self.p, self.rm);
        let mf = self.int(m);
        let bound = mf.mul(&mf, p, rm).mul(&mf.log2(p, rm, &mut self.cc), p, rm).div(&BigFloat::from_u8(2, p), p, rm);
        let n: BigInt = m - 2;
        let qv = self.rat(&(&q.a * Rational::from_integer(&n * &n) + &q.b * Rational::from_integer(n.clone()) + &q.c));
        bound.sub(&qv, p, rm)
    }

    fn positive(&mut self, q: &Quadratic, m: &BigInt) -> bool {
        match exact_gap(q, m) {
            Some(g) => g.is_positive(),
            None => self.gap(q, m).is_positive(),
        }
    }

    fn show(&mut self, v: &BigFloat) -> String {
        v.format(Radix::Dec, self.rm, &mut self.cc).unwrap_or_else(|_| "NaN".into())
    }
}

/// The gap is rational exactly when `m` is a power of two, and only then can it be zero.
fn exact_gap(q: &Quadratic, m: &BigInt) -> Option<Rational> {
    if !m.is_positive() || !(m & (m - 1u32)).is_zero() {
        return None;
    }
    let k = m.bits() - 1;
    let bound = Rational::new(m * m * BigInt::from(k), BigInt::from(2));
    let n: BigInt = m - 2;
    Some(bound - (&q.a * Rational::from_integer(&n * &n) + &q.b * Rational::from_integer(n) + &q.c))
}

/// Smallest power of two `m >= 2` from which `gap(m) / m^2` is strictly increasing.
///
/// With `m = n + 2`, `q / m^2 = a + beta / m + gamma / m^2`; the derivative of
/// `log2(m) / 2 - q / m^2` is `(1/m) (1 / (2 ln 2) + beta / m + 2 gamma / m^2)`, positive once
/// `|beta| / m + 2 |gamma| / m^2 <= 7/10 < 1 / (2 ln 2)`.
fn monotone_start(q: &Quadratic) -> BigInt {
    let beta = (&q.b - &q.a * Rational::from_integer(4.into())).abs();
    let gamma = (&q.a * Rational::from_integer(4.into()) - &q.b * Rational::from_integer(2.into()) + &q.c).abs();
    let limit = Rational::new(7.into(), 10.into());
    let mut m = BigInt::from(2);
    loop {
        let mr = Rational::from_integer(m.clone());
        if &beta / &mr + Rational::from_integer(2.into()) * &gamma / (&mr * &mr) <= limit {
            return m;
        }
        m *= 2;
    }
}

fn crossover_at(q: &Quadratic, bits: usize) -> Result<(BigInt, Ctx), HilbertError> {
    let mut ctx = Ctx::new(bits);
    let m0 = monotone_start(q);
    // On [m0, inf) the sign of the gap changes at most once, from non-positive to positive.
    let m_star = if ctx.positive(q, &m0) {
        let span = (&m0 - BigInt::from(2)).to_u64().filter(|&s| s <= LINEAR_LIMIT).ok_or_else(|| {
            HilbertError::InvalidInput("coefficients too large for the linear part of the scan".into())
        })?;
        let mut last_bad = None;
        for i in 1..=span {
            let m = &m0 - i;
            if !ctx.positive(q, &m) {
                last_bad = Some(m);
                break;
            }
        }
        last_bad.map(|m| m + 1).unwrap_or_else(|| BigInt::from(2))
    } else {
        let mut lo = m0.clone();
        let mut hi = &m0 * 2;
        while !ctx.positive(q, &hi) {
            lo = hi.clone();
            hi *= 2;
        }
        while &hi - &lo > BigInt::one() {
            let mid = (&lo + &hi) >> 1;
            if ctx.positive(q, &mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok((m_star - 2, ctx))
}

/// Eventual crossover of `(n + 2)^2 log(n + 2) / (2 log 2)` over `q(n)`.
pub fn hanli_crossover(q: &Quadratic) -> Result<Crossover, HilbertError> {
    hanli_crossover_with(q, precision_bits())
}

pub fn hanli_crossover_with(q: &Quadratic, bits: usize) -> Result<Crossover, HilbertError> {
    if q.a.is_negative() {
        return Err(HilbertError::InvalidInput(format!("leading coefficient must be >= 0, got {}", fmt_rational(&q.a))));
    }
    let (n, mut ctx) = crossover_at(q, bits)?;
    let (n2, _) = crossover_at(q, bits * 2)?;
    let margin = ctx.gap(q, &(&n + 2));
    let margin_at = ctx.show(&margin);
    let margin_before = (!n.is_zero()).then(|| {
        let g = ctx.gap(q, &(&n + 1));
        ctx.show(&g)
    });
    let mut notes = Vec::new();
    if n != n2 {
        notes.push(format!("crossover moved to {n2} at {} bits; the reported value is not reliable", bits * 2));
    }
    let log2n = n.to_f64().map(|v| (v + 1.0).log2()).unwrap_or(f64::INFINITY);
    notes.push(format!("log2(n + 1) = {log2n:.6} at the crossover"));
    Ok(Crossover { stable_under_doubling: n == n2, n, precision_bits: bits, margin_at, margin_before, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(claimed_h(&BigInt::from(2)).unwrap(), BigInt::from(4));
        assert_eq!(claimed_h(&BigInt::from(3)).unwrap(), BigInt::from(24));
        assert!(matches!(claimed_h(&BigInt::from(1)), Err(HilbertError::BelowDomain(_))));
        assert_eq!(s_k(2).unwrap(), BigInt::from(3));
        assert_eq!(s_k(3).unwrap(), BigInt::from(21));
        assert!(s_k(1).is_err());
    }

    #[test]
    fn table_text_has_header_and_rows() {
        let text = render_table(&comparison_table(5).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].split_whitespace().eq(["k", "2^k-1", "S_k", "claimed", "contradiction"]));
        assert!(lines[1].split_whitespace().eq(["2", "3", "3", "24", "false"]));
    }

    #[test]
    fn zero_quadratic_crosses_immediately() {
        let z = Rational::zero();
        let c = hanli_crossover_with(&Quadratic::new(z.clone(), z.clone(), z), 80).unwrap();
        assert_eq!(c.n, BigInt::zero());
        assert!(c.stable_under_doubling && c.margin_before.is_none());
    }

    #[test]
    fn exact_tie_is_not_a_crossing() {
        // (0 + 2)^2 log2(2) / 2 = 2 exactly, so q = 2 is only overtaken from n = 1.
        let z = Rational::zero();
        let q = Quadratic::new(z.clone(), z, Rational::from_integer(2.into()));
        let c = hanli_crossover_with(&q, 80).unwrap();
        assert_eq!(c.n, BigInt::one());
        assert_eq!(c.margin_before.as_deref(), Some("0.0"));
    }

    #[test]
    fn negative_leading_coefficient_rejected() {
        let q = Quadratic::new(Rational::from_integer((-1).into()), Rational::zero(), Rational::zero());
        assert!(hanli_crossover_with(&q, 80).is_err());
    }
}
