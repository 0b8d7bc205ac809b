//! Exact arithmetic kernel: rationals, bivariate and univariate polynomials, resultants,
//! Sturm sequences and rational interval arithmetic.

pub mod interval;
pub mod poly2;
pub mod rational;
pub mod resultant;
pub mod sturm;
pub mod unipoly;

use thiserror::Error;

pub use poly2::{FloatPoly2, LinearMap, Poly2, Vars};
pub use rational::Rational;
pub use resultant::resultant;
pub use sturm::{positive_real_roots, sturm_real_root_count, Interval, RealRootReport, RootInterval};
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable names differ: {left} vs {right}")]
    VarMismatch { left: Vars, right: Vars },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("both polynomials are identically zero")]
    BothZero,
}

/// Ring operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(p: &Poly2, q: &Poly2, op: RingOp) -> Result<Poly2, AlgebraError> {
    match op {
        RingOp::Add => p.try_add(q),
        RingOp::Sub => p.try_sub(q),
        RingOp::Mul => p.try_mul(q),
    }
}
