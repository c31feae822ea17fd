//! Explicit, numerically checkable certificates of quantum nullhomotopy.
//!
//! A loop `f: S¹ → T` is quantum nullhomotopic when `ι ∘ f` extends over the
//! disk as a map into `Hom(C(T), M₂(ℂ))`. This crate models that space through
//! the parameter triples `(x, t₁, t₂) ∈ S² × T × T`, builds disk grids of such
//! triples for loops in ℝP² and in the wedge of two circles, verifies them
//! independently, and computes the determinant-winding obstruction that rules
//! out any finite-dimensional certificate for the identity loop of S¹.
//!
//! Module map:
//!
//! - [`cxmat`]: small dense complex matrices, the reflection matrix `h(x)`.
//! - [`spaces`]: the model spaces, sampled loops, paths and disk grids.
//! - [`homspace`]: homomorphism parameters, evaluation and the evaluation metric.
//! - [`obstruction`]: determinant loops and winding numbers.
//! - [`freegroup`]: reduced words in the free group on `a`, `b`.
//! - [`constructor`]: homotopy strips and certificate builders.
//! - [`verifier`]: certificate validation, independent of the constructor.

// Tolerance checks are written `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructor;
pub mod cxmat;
mod error;
pub mod freegroup;
pub mod homspace;
pub mod obstruction;
pub mod spaces;
pub mod verifier;

pub use error::{Error, Result};

pub use num_complex::Complex64;

use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Distance from the unit circle / unit sphere accepted for a point.
    pub point: f64,
    /// Allowed deviation of a projection from `P² = P = P*`.
    pub proj: f64,
    /// Allowed deviation of a unitary from `U*U = I`.
    pub unitary: f64,
    /// Boundary and basepoint tolerance used by the verifier.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            point: 1e-9,
            proj: 1e-10,
            unitary: 1e-10,
            verify: 1e-9,
        }
    }
}
