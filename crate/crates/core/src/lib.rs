//! Exact Fisher-metric curvature of planar polynomial vector fields, certified singular
//! loci, independent limit-cycle detection and Hilbert-number growth comparisons.

pub mod algebra;
pub mod catalogue;
pub mod curvature;
pub mod dynamics;
pub mod hilbert;
pub mod paper_check;
pub mod parser;
pub mod report;
pub mod singularity;
pub mod system;

pub use algebra::{Poly2, Rational, UniPoly, Vars};
pub use system::PlanarSystem;
