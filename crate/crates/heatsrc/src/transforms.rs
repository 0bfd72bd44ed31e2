//! The three integral transforms coupling the data to the source modes, and
//! the residual of the variational identity every solution tuple satisfies.
//!
//! ```text
//! G(w)(α,nπ)   = ∫_Ω w(x,y) cosh(αx) cos(nπy) dx dy
//! D(φ)(α,nπ)   = ∫_0^T e^{-(α²-n²π²)t} φ(t) dt
//! H(φ,w)(α,nπ) = -G(w)/D(φ)   (0 where D vanishes)
//! ```

use std::f64::consts::PI;

use crate::model::{SpatialField, TimeProfile};
use crate::numerics::{integrate_1d, integrate_2d, QuadratureSpec};
use crate::{Error, Result};

/// |α| beyond this makes cosh(α·1) overflow a double.
pub const ALPHA_OVERFLOW_GUARD: f64 = 700.0;

/// |D| below this is treated as an exact zero of the weight, switching H to
/// its zero branch. Far below any value the pipeline abscissae can produce,
/// so it only catches true analytic zeros and underflow.
pub const D_ZERO_THRESHOLD: f64 = 1e-250;

/// `G(w)(α, nπ)`; even in α.
pub fn g_transform(w: &SpatialField, alpha: f64, n: usize) -> Result<f64> {
    g_transform_with(w, alpha, n, &QuadratureSpec::omega_default())
}

pub fn g_transform_with(
    w: &SpatialField,
    alpha: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if alpha.abs() > ALPHA_OVERFLOW_GUARD || alpha.is_nan() {
        return Err(Error::AlphaOverflow { alpha });
    }
    let beta = n as f64 * PI;
    integrate_2d(
        |x, y| w.eval(x, y) * (alpha * x).cosh() * (beta * y).cos(),
        spec,
    )
}

/// `G(w)` at the imaginary abscissa `imπ`, i.e. the cosine-mode coefficient
/// `∫_Ω w cos(mπx) cos(nπy)`. Coefficient-backed fields return the stored
/// entry exactly.
pub fn g_transform_mode(w: &SpatialField, m: usize, n: usize) -> Result<f64> {
    g_transform_mode_with(w, m, n, &QuadratureSpec::omega_default())
}

pub fn g_transform_mode_with(
    w: &SpatialField,
    m: usize,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if let Some(c) = w.as_coefficients() {
        return Ok(if m <= c.max_degree() && n <= c.max_degree() {
            c.get(m, n)
        } else {
            0.0
        });
    }
    let (am, bn) = (m as f64 * PI, n as f64 * PI);
    integrate_2d(|x, y| w.eval(x, y) * (am * x).cos() * (bn * y).cos(), spec)
}

/// `D(φ)(α, nπ) = ∫_0^T e^{-(α²-n²π²)t} φ(t) dt` on the graded time rule.
pub fn d_transform(phi: &TimeProfile, alpha: f64, n: usize) -> Result<f64> {
    d_transform_with(phi, alpha, n, &QuadratureSpec::time_default())
}

pub fn d_transform_with(
    phi: &TimeProfile,
    alpha: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let lambda = alpha * alpha - (n as f64 * PI).powi(2);
    d_transform_lambda(phi, lambda, spec)
}

/// `∫_0^T e^{-λt} φ(t) dt` for an explicit decay rate λ. This is D(φ)(α,β)
/// with λ = α² - β², which is how the imaginary abscissae α = imπ enter.
pub fn d_transform_lambda(phi: &TimeProfile, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate_1d(
        |t| (-lambda * t).exp() * phi.eval(t),
        0.0,
        phi.horizon(),
        spec,
    )
}

/// `H(φ,w)(α,nπ) = -G(w)/D(φ)`, with the zero branch when |D| drops below
/// [`D_ZERO_THRESHOLD`].
pub fn h_transform(phi: &TimeProfile, w: &SpatialField, alpha: f64, n: usize) -> Result<f64> {
    h_transform_with(
        phi,
        w,
        alpha,
        n,
        &QuadratureSpec::omega_default(),
        &QuadratureSpec::time_default(),
        D_ZERO_THRESHOLD,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn h_transform_with(
    phi: &TimeProfile,
    w: &SpatialField,
    alpha: f64,
    n: usize,
    omega_spec: &QuadratureSpec,
    time_spec: &QuadratureSpec,
    d_zero_threshold: f64,
) -> Result<f64> {
    let d = d_transform_with(phi, alpha, n, time_spec)?;
    if d.abs() < d_zero_threshold {
        return Ok(0.0);
    }
    Ok(-g_transform_with(w, alpha, n, omega_spec)? / d)
}

/// Residual of the variational identity at real abscissa α:
///
/// ```text
/// e^{-(α²-n²π²)T} G(u(·,·,T)) - G(g) - D(φ)·G(f)
/// ```
///
/// Near zero exactly when (u,f) solves the problem with data (g,φ).
pub fn solution_residual(
    u_final: &SpatialField,
    g: &SpatialField,
    phi: &TimeProfile,
    f: &SpatialField,
    alpha: f64,
    n: usize,
) -> Result<f64> {
    let lambda = alpha * alpha - (n as f64 * PI).powi(2);
    let gut = g_transform(u_final, alpha, n)?;
    let gg = g_transform(g, alpha, n)?;
    let d = d_transform(phi, alpha, n)?;
    let gf = g_transform(f, alpha, n)?;
    Ok((-lambda * phi.horizon()).exp() * gut - gg - d * gf)
}

/// Same residual at the imaginary mode abscissa `α = imπ`, where the G
/// transforms become plain cosine coefficients and `α² = -(mπ)²`.
pub fn solution_residual_mode(
    u_final: &SpatialField,
    g: &SpatialField,
    phi: &TimeProfile,
    f: &SpatialField,
    m: usize,
    n: usize,
) -> Result<f64> {
    let lambda = -((m as f64 * PI).powi(2)) - (n as f64 * PI).powi(2);
    let gut = g_transform_mode(u_final, m, n)?;
    let gg = g_transform_mode(g, m, n)?;
    let d = d_transform_lambda(phi, lambda, &QuadratureSpec::time_default())?;
    let gf = g_transform_mode(f, m, n)?;
    Ok((-lambda * phi.horizon()).exp() * gut - gg - d * gf)
}
