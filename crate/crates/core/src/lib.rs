//! Numerical toolkit for the elliptic dynamical quantum group of sl2.
//!
//! Layers, bottom to top:
//!
//! - [`jet`]: truncated power series in a formal parameter ħ and constant
//!   coefficient operator symbols g(ħ∂).
//! - [`theta`]: the odd theta function normalized by θ'(0) = 1, its Taylor
//!   data and logarithmic derivative.
//! - [`spaces`]: Laurent data at the origin, the residue pairing and the
//!   dual bases of O and L_λ.
//! - [`rmatrix`]: the dynamical R-matrices, weight-graded operators on
//!   (ℂ²)^⊗n and the gauge function φ.
//! - [`rep`]: the two-dimensional evaluation representation, currents,
//!   half-currents and L-operators.
//! - [`verify`]: seeded verification suites producing a JSON report.

pub mod error;
pub mod exec;
pub mod jet;
pub mod linalg;
pub mod rep;
pub mod rmatrix;
pub mod spaces;
pub mod theta;
pub mod verify;

pub use error::{EqgError, Result};
pub use jet::{DiffOpSymbol, HbarJet, PointGerm};
pub use num_complex::Complex64;
pub use theta::ThetaEngine;

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
