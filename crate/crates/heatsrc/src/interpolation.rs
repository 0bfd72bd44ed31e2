//! Stable Lagrange recovery of an even entire function from samples at the
//! node set `±(4r+j), j = 1..20r`, with certified remainder bounds.
//!
//! Because the node set is symmetric and the sampled functions are even, the
//! interpolating polynomial is a polynomial in `s = z²` of degree 20r−1, and
//! evaluation at the imaginary mode points `z = imπ` means `s = -(mπ)²`. The
//! basis products run through [`LogSigned`] so that node spreads up to
//! `(24r)²` never overflow.

use crate::numerics::{Accumulator, LogSigned};
use crate::{Error, Result};

/// Largest admissible r: cosh(24r) must stay inside the double range.
pub const MAX_R: usize = 29;

/// The positive half of the interpolation node set: `z_j = 4r + j` for
/// `j = 1..20r`; the full set is `±z_j` by symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    r: usize,
    positive_nodes: Vec<f64>,
}

impl NodeSet {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn positive_nodes(&self) -> &[f64] {
        &self.positive_nodes
    }

    pub fn len(&self) -> usize {
        self.positive_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive_nodes.is_empty()
    }
}

/// Build the node set for level `r ∈ [1, 29]`.
pub fn node_set(r: usize) -> Result<NodeSet> {
    if !(1..=MAX_R).contains(&r) {
        return Err(Error::OutOfRange(format!(
            "node-set level r must lie in [1, {MAX_R}], got {r}"
        )));
    }
    let positive_nodes = (1..=20 * r).map(|j| (4 * r + j) as f64).collect();
    Ok(NodeSet { r, positive_nodes })
}

/// Evaluate the even Lagrange interpolant at `s = z²`:
///
/// ```text
/// L(s) = Σ_j [ Π_{l≠j} (s - z_l²)/(z_j² - z_l²) ] · w(z_j)
/// ```
///
/// Exact (to rounding) for values sampled from any polynomial in `s` of
/// degree ≤ 20r−1. Each basis product is formed in log space; the terms are
/// summed in ascending j with compensation, so the result is independent of
/// any parallel caller's schedule.
pub fn interpolate_even(nodes: &NodeSet, values: &[f64], target_s: f64) -> Result<f64> {
    if values.len() != nodes.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} node values, got {}",
            nodes.len(),
            values.len()
        )));
    }
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "node value at index {bad} is not finite"
        )));
    }
    if !target_s.is_finite() {
        return Err(Error::InvalidArgument("target_s must be finite".into()));
    }
    let squares: Vec<f64> = nodes.positive_nodes.iter().map(|z| z * z).collect();
    let mut acc = Accumulator::new();
    for (j, sj) in squares.iter().enumerate() {
        let mut basis = LogSigned::one();
        for (l, sl) in squares.iter().enumerate() {
            if l == j {
                continue;
            }
            basis = basis * LogSigned::from_value(target_s - sl)
                / LogSigned::from_value(sj - sl);
        }
        acc.add(basis.value() * values[j]);
    }
    Ok(acc.total())
}

/// The certified interpolation error cap `A·e^{-r} + 20r·e^{25r}·σ` for an
/// even entire function with `|w(z)| ≤ A e^{|z|}` sampled with node error at
/// most σ. Evaluated in log space; saturates to +∞ when the noise term
/// exceeds the double range.
pub fn interp_error_bound(a: f64, r: usize, sigma: f64) -> f64 {
    let rf = r as f64;
    let clean = a * (-rf).exp();
    // ln(20r) + 25r + ln(sigma); exp(-inf) = 0 covers sigma = 0
    let noise = ((20.0 * rf).ln() + 25.0 * rf + sigma.ln()).exp();
    clean + noise
}

/// Outcome of the remainder-product inequality behind the `A e^{-r}` term:
/// whether `Π_{j=1}^{20r} ((πr)² + z_j²)/((45r)² - z_j²)` stays below
/// `(45-π)/45 · e^{-46r}`, both sides in natural log.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductBoundCheck {
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub holds: bool,
}

pub fn remainder_product_check(r: usize) -> ProductBoundCheck {
    assert!(r >= 1, "remainder product check needs r >= 1");
    let rf = r as f64;
    let pi = std::f64::consts::PI;
    let mut acc = Accumulator::new();
    for j in 1..=20 * r {
        let z = (4 * r + j) as f64;
        // denominators (45r)^2 - z^2 are positive since z <= 24r
        acc.add((((pi * rf).powi(2) + z * z) / ((45.0 * rf).powi(2) - z * z)).ln());
    }
    let lhs_log = acc.total();
    let rhs_log = ((45.0 - pi) / 45.0).ln() - 46.0 * rf;
    ProductBoundCheck {
        lhs_log,
        rhs_log,
        holds: lhs_log <= rhs_log,
    }
}

/// Outcome of the basis-growth inequality behind the `20r e^{25r} σ` term:
/// whether `J(r) = (4r+2)(4r+3)···(24r) / ((10r-1)!·(10r)!)`, which caps every
/// Lagrange basis magnitude on the node set, stays below `e^{25r}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBoundCheck {
    pub log_value: f64,
    pub log_bound: f64,
    pub holds: bool,
}

pub fn basis_growth_check(r: usize) -> GrowthBoundCheck {
    assert!(r >= 1, "basis growth check needs r >= 1");
    let mut acc = Accumulator::new();
    for i in 4 * r + 2..=24 * r {
        acc.add((i as f64).ln());
    }
    for i in 2..=10 * r - 1 {
        acc.add(-((i as f64).ln()));
    }
    for i in 2..=10 * r {
        acc.add(-((i as f64).ln()));
    }
    let log_value = acc.total();
    let log_bound = 25.0 * r as f64;
    GrowthBoundCheck {
        log_value,
        log_bound,
        holds: log_value < log_bound,
    }
}
