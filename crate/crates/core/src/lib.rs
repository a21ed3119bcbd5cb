//! Levi-Civita connections and curvature for pseudo-Riemannian calculi over
//! the noncommutative torus and the noncommutative 3-sphere.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod connection;
pub mod curvature;
pub mod derivations;
pub mod error;
pub mod expr;
pub mod localization;
pub mod metric_module;
pub mod models;
pub mod oracle;
pub mod random;
pub mod scalars;
pub mod tangent;

pub use algebra::{AlgebraElement, AlgebraId, Generator, Monomial, StarRing};
pub use derivations::{Derivation, LieAlgebra};
pub use error::{Error, Result};
pub use localization::{certify_regular, LocalizedElement, RegularElement};
pub use metric_module::{HermitianForm, ModuleElement, PseudoInverse, RealMetricCalculus};
pub use scalars::{GaussianRational, Rational, Scalar};
pub use connection::{solve_connection, Connection, Verdict};
pub use curvature::{CurvatureTable, ScalarCurvature};
