//! Sylvester resultants and first subresultants by fraction-free elimination.

use num_traits::One;

use super::poly2::Poly2;
use super::rational::Rational;
use super::unipoly::UniPoly;
use super::AlgebraError;

/// Determinant of a square matrix over `Q[t]` by Bareiss elimination.
///
/// Every intermediate division is exact, so entries stay polynomial.
pub fn det(mut m: Vec<Vec<UniPoly>>, var: &str) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::constant(Rational::one(), var);
    }
    let mut negate = false;
    let mut prev = UniPoly::constant(Rational::one(), var);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UniPoly::zero(var);
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Sylvester matrix of two polynomials given by coefficient lists (lowest power first)
/// with the given formal degrees.
fn sylvester(f: &[UniPoly], m: usize, g: &[UniPoly], n: usize, var: &str) -> Vec<Vec<UniPoly>> {
    let size = m + n;
    let zero = UniPoly::zero(var);
    let coeff = |c: &[UniPoly], k: usize| c.get(k).cloned().unwrap_or_else(|| zero.clone());
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![zero.clone(); size];
        for k in 0..=m {
            row[r + k] = coeff(f, m - k);
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![zero.clone(); size];
        for k in 0..=n {
            row[r + k] = coeff(g, n - k);
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two polynomials given as coefficient lists over `Q[var]`, using their
/// formal degrees `len - 1`.
pub fn resultant_coeffs(f: &[UniPoly], g: &[UniPoly], var: &str) -> UniPoly {
    let m = f.len().saturating_sub(1);
    let n = g.len().saturating_sub(1);
    det(sylvester(f, m, g, n, var), var)
}

/// Eliminates `eliminate` from `f` and `g`; the result is a polynomial in the other variable.
///
/// Degrees in the eliminated variable are used as formal degrees, so the result specializes
/// correctly at every value of the surviving variable: it vanishes wherever the specialized
/// pair has a common root.
pub fn resultant(f: &Poly2, g: &Poly2, eliminate: &str) -> Result<UniPoly, AlgebraError> {
    if f.vars() != g.vars() {
        return Err(AlgebraError::VarMismatch { left: f.vars().clone(), right: g.vars().clone() });
    }
    let idx = f
        .vars()
        .index_of(eliminate)
        .ok_or_else(|| AlgebraError::UnknownVariable(eliminate.to_string()))?;
    let survivor = f.vars().name(1 - idx).to_string();
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(AlgebraError::BothZero),
        (true, false) | (false, true) => {
            let other = if f.is_zero() { g } else { f };
            // The zero polynomial shares every root of a non-constant partner.
            return Ok(if other.degree_in(idx) > 0 {
                UniPoly::zero(survivor)
            } else {
                UniPoly::constant(Rational::one(), survivor)
            });
        }
        _ => {}
    }
    Ok(resultant_coeffs(&f.as_univariate_in(idx), &g.as_univariate_in(idx), &survivor))
}

/// Resultant of two univariate polynomials with rational coefficients.
pub fn resultant_uni(a: &UniPoly, b: &UniPoly) -> Rational {
    let lift = |p: &UniPoly| -> Vec<UniPoly> {
        p.coeffs().iter().map(|c| UniPoly::constant(c.clone(), "_")).collect()
    };
    resultant_coeffs(&lift(a), &lift(b), "_").coeff(0)
}

/// First subresultant `S1 = s11 * X + s10` of two polynomials in `X` with coefficients
/// in `Q[var]`.
///
/// Wherever `s11` does not vanish at a common root `t0` of the resultant (and the leading
/// coefficients do not both vanish), the specialized pair has exactly one common root,
/// namely `X = -s10(t0) / s11(t0)`. Returns `None` if one polynomial is constant in `X` and
/// the other is not linear.
pub fn first_subresultant(f: &[UniPoly], g: &[UniPoly], var: &str) -> Option<(UniPoly, UniPoly)> {
    let (mut f, mut g) = (f, g);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let m = f.len().checked_sub(1)?;
    let n = g.len().checked_sub(1)?;
    if n == 0 {
        // `g` is free of `X`; wherever it vanishes the common roots are the roots of `f`,
        // so a linear `f` plays the role of S1.
        return (m == 1).then(|| (f[1].clone(), f[0].clone()));
    }
    if n == 1 {
        // Lower-degree partner is already linear; S1 agrees with it up to a power of its
        // leading coefficient.
        return Some((g[1].clone(), g[0].clone()));
    }
    let zero = UniPoly::zero(var);
    let coeff = |c: &[UniPoly], k: usize| c.get(k).cloned().unwrap_or_else(|| zero.clone());
    let cols = m + n - 1;
    let mut rows = Vec::with_capacity(m + n - 2);
    for r in 0..n - 1 {
        let mut row = vec![zero.clone(); cols];
        for k in 0..=m {
            row[r + k] = coeff(f, m - k);
        }
        rows.push(row);
    }
    for r in 0..m - 1 {
        let mut row = vec![zero.clone(); cols];
        for k in 0..=n {
            row[r + k] = coeff(g, n - k);
        }
        rows.push(row);
    }
    let square = |last: usize| -> Vec<Vec<UniPoly>> {
        rows.iter()
            .map(|row| {
                let mut r: Vec<UniPoly> = row[..cols - 2].to_vec();
                r.push(row[last].clone());
                r
            })
            .collect()
    };
    let s11 = det(square(cols - 2), var);
    let s10 = det(square(cols - 1), var);
    Some((s11, s10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly2::Vars;
    use crate::algebra::rational::{int, rat};
    use crate::parser::parse_polynomial;

    fn p(s: &str, vars: &Vars) -> Poly2 {
        parse_polynomial(s, vars).unwrap()
    }

    #[test]
    fn linear_sylvester() {
        let vars = Vars::xy();
        let r = resultant(&p("x - 1", &vars), &p("x - 2", &vars), "x").unwrap();
        assert_eq!(r, UniPoly::constant(int(-1), "y"));
        let r = resultant(&p("x - y", &vars), &p("x - 2*y", &vars), "x").unwrap();
        assert_eq!(r, UniPoly::from_ints(&[0, -1], "y"));
    }

    #[test]
    fn shared_root_gives_zero() {
        let vars = Vars::xy();
        let r = resultant(&p("x^2 - 1", &vars), &p("x - 1", &vars), "x").unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn both_zero_rejected() {
        let vars = Vars::xy();
        let z = Poly2::zero(vars.clone());
        assert!(matches!(resultant(&z, &z, "x"), Err(AlgebraError::BothZero)));
        assert!(matches!(
            resultant(&p("x", &vars), &p("y", &vars), "z"),
            Err(AlgebraError::UnknownVariable(_))
        ));
    }

    /// Solving `4uv + v^2 + 4 = 0` for `u` and substituting into the quadratic, scaled by
    /// `lc(g)^deg(f) = (4v)^2`, must reproduce the resultant at every rational `v != 0`.
    #[test]
    fn s1_eliminant_matches_substitution_oracle() {
        let uv = Vars::new("u", "v");
        let f = p("24*u^2 + 8*u*v + v^2 - 8", &uv);
        let g = p("4*u*v + v^2 + 4", &uv);
        let res = resultant(&f, &g, "u").unwrap();
        for k in [-7i64, -3, -1, 1, 2, 5, 11] {
            for d in [1i64, 3, 4] {
                let v0 = rat(k, d);
                let u_star = -(&v0 * &v0 + int(4)) / (int(4) * &v0);
                let lc = int(4) * &v0;
                let oracle = &lc * &lc * f.evaluate(&[u_star, v0.clone()]);
                assert_eq!(res.eval(&v0), oracle, "v = {v0}");
            }
        }
        // Frozen from the oracle: 8 (v^4 - 8 v^2 + 48).
        assert_eq!(res, UniPoly::from_ints(&[48, 0, -8, 0, 1], "v").scale(&int(8)));
    }

    #[test]
    fn s2_eliminant_in_u() {
        let uv = Vars::new("u", "v");
        let f = p("8*u^2 + 8*u*v + 3*v^2", &uv);
        let g = p("2*u^2 + u*v - 1", &uv);
        let res = resultant(&f, &g, "v").unwrap();
        assert_eq!(res.primitive(), UniPoly::from_ints(&[3, 0, -4, 0, 4], "u"));
    }

    #[test]
    fn constant_in_eliminated_variable() {
        let vars = Vars::xy();
        // Res_x(2x, y + 1) = y + 1 (Sylvester matrix is 1x1 with entry y + 1).
        let r = resultant(&p("2*x", &vars), &p("y + 1", &vars), "x").unwrap();
        assert_eq!(r, UniPoly::from_ints(&[1, 1], "y"));
    }

    #[test]
    fn subresultant_recovers_common_root() {
        // f = (x - y)(x + 1), g = (x - y)(x - 2): common root x = y for generic y.
        let vars = Vars::xy();
        let f = p("(x - y)*(x + 1)", &vars);
        let g = p("(x - y)*(x - 2)", &vars);
        let (s11, s10) =
            first_subresultant(&f.as_univariate_in(0), &g.as_univariate_in(0), "y").unwrap();
        for y0 in [int(3), rat(-5, 2), int(7)] {
            let x0 = -s10.eval(&y0) / s11.eval(&y0);
            assert_eq!(x0, y0);
        }
    }

    #[test]
    fn univariate_resultant() {
        let a = UniPoly::from_ints(&[-1, 0, 1], "x");
        let b = UniPoly::from_ints(&[-2, 1], "x");
        // Res(x^2 - 1, x - 2) = (2^2 - 1) = 3
        assert_eq!(resultant_uni(&a, &b), int(3));
    }
}
