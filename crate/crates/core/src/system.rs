//! The planar polynomial vector field `x' = P(x, y)`, `y' = Q(x, y)`.

use std::fmt;

use crate::algebra::{AlgebraError, LinearMap, Poly2, Rational, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarSystem {
    pub p: Poly2,
    pub q: Poly2,
    pub vars: Vars,
    pub label: Option<String>,
}

impl PlanarSystem {
    pub fn new(p: Poly2, q: Poly2) -> Result<Self, AlgebraError> {
        if p.vars() != q.vars() {
            return Err(AlgebraError::VarMismatch { left: p.vars().clone(), right: q.vars().clone() });
        }
        let vars = p.vars().clone();
        Ok(PlanarSystem { p, q, vars, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `max(deg P, deg Q)`, at least 0.
    pub fn degree(&self) -> i64 {
        self.p.degree().max(self.q.degree()).max(0)
    }

    pub fn label_or_default(&self) -> String {
        self.label.clone().unwrap_or_else(|| "unnamed".to_string())
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> (f64, f64) {
        (self.p.evaluate_f64(x, y), self.q.evaluate_f64(x, y))
    }

    /// Pulls the field back along `(x, y) = M (u, v) + offset`: the new field is
    /// `M^{-1} (P, Q)(L(u, v))`. Returns `None` when `M` is singular.
    pub fn transform(&self, map: &LinearMap, new_vars: Vars) -> Option<PlanarSystem> {
        let inv = map.inverse()?;
        let p = self.p.substitute_linear(map, new_vars.clone());
        let q = self.q.substitute_linear(map, new_vars.clone());
        let m = &inv.matrix;
        let comb = |a: &Rational, b: &Rational| p.scale(a).try_add(&q.scale(b)).expect("same vars");
        Some(PlanarSystem {
            p: comb(&m[0][0], &m[0][1]),
            q: comb(&m[1][0], &m[1][1]),
            vars: new_vars,
            label: self.label.as_ref().map(|l| format!("{l} (transformed)")),
        })
    }

    /// Moves `point` to the origin by an exact translation, keeping the variable names.
    pub fn translate_to_origin(&self, point: &[Rational; 2]) -> PlanarSystem {
        let map = LinearMap::translation(point[0].clone(), point[1].clone());
        PlanarSystem {
            p: self.p.substitute_linear(&map, self.vars.clone()),
            q: self.q.substitute_linear(&map, self.vars.clone()),
            vars: self.vars.clone(),
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for PlanarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d{}/dt = {}", self.vars.0, self.p)?;
        write!(f, "d{}/dt = {}", self.vars.1, self.q)
    }
}
