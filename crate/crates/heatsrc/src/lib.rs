//! Recovery of the spatial factor `f(x,y)` of a separable heat source
//! `φ(t)·f(x,y)` on the unit square from the initial temperature `g` and the
//! given time factor `φ`.
//!
//! The data enter through two integral transforms,
//!
//! ```text
//! G(w)(α,β) = ∫_Ω w(x,y) cosh(αx) cos(βy) dx dy        (Ω = (0,1)²)
//! D(φ)(α,β) = ∫_0^T e^{-(α²-β²)t} φ(t) dt
//! ```
//!
//! whose quotient `H = -G(g)/D(φ)` approximates the cosine-mode coefficients
//! of `f` at large real abscissae. A stable Lagrange interpolation over the
//! symmetric node set `±(4r+j)` carries those samples to the imaginary mode
//! points `imπ`, and a truncated double cosine series synthesizes the
//! regularized source. The [`regularizer`] module wires the full pipeline;
//! [`problems`] provides two closed-form benchmark cases with disturbed data
//! that exhibit the ill-posedness of the inversion.
//!
//! ```
//! use heatsrc::problems::{make_case, ExampleId};
//! use heatsrc::regularizer::regularize;
//!
//! // data disturbed at frequency k = 100, i.e. noise level 1/k
//! let case = make_case(ExampleId::Example1, 100)?;
//! let report = regularize(&case.phi, &case.g, 1e-2, Some(&case.f0))?;
//! assert_eq!(report.r, 1);
//! assert!(report.l2_error_vs_exact.unwrap() < 5e-3);
//! assert!(report.l2_error_vs_exact.unwrap() <= report.bound_value.unwrap());
//! # Ok::<(), heatsrc::Error>(())
//! ```

pub mod interpolation;
pub mod model;
pub mod numerics;
pub mod problems;
pub mod regularizer;
pub mod spectral;
pub mod transforms;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An integrand evaluated to NaN or ±∞ at a quadrature node.
    #[error("non-finite integrand value at x = {x}{}", match .y { Some(y) => format!(", y = {y}"), None => String::new() })]
    NonFiniteEvaluation { x: f64, y: Option<f64> },

    /// cosh(αx) would overflow the double range.
    #[error("|alpha| = {alpha} exceeds the cosh overflow guard (700)")]
    AlphaOverflow { alpha: f64 },

    /// A value violated a documented precondition or type invariant.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A parameter fell outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A CSV input file failed to parse; `line` is 1-based and counts the header.
    #[error("{path}:{line}: {message}")]
    Csv {
        path: String,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
