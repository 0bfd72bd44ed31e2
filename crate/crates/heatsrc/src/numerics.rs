//! Shared double-precision primitives: composite Gauss–Legendre quadrature on
//! intervals and on the unit square, and overflow-safe signed products in
//! log-magnitude form.

use crate::{Error, Result};

/// Panel layout of a composite quadrature rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Equal-width panels.
    Uniform,
    /// Panel widths shrink geometrically toward the left endpoint. The i-th
    /// interior edge sits at `a + (b-a)·ratio^(panels-i)`, so the leftmost
    /// panel is the smallest. Resolves integrands like `e^{-λt}` whose mass
    /// concentrates at `t = 0` for any λ, since every panel then spans a
    /// bounded number of e-foldings.
    GeometricLeft,
}

/// A composite Gauss–Legendre rule: `panels` panels with `points_per_panel`
/// nodes each, laid out per `grading`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub points_per_panel: usize,
    pub panels: usize,
    pub grading: Grading,
    /// Width ratio between consecutive panels; only read for
    /// [`Grading::GeometricLeft`], where it must lie in (0,1).
    pub grading_ratio: f64,
}

impl QuadratureSpec {
    pub fn uniform(points_per_panel: usize, panels: usize) -> Self {
        Self {
            points_per_panel,
            panels,
            grading: Grading::Uniform,
            grading_ratio: 1.0,
        }
    }

    pub fn geometric_left(points_per_panel: usize, panels: usize, ratio: f64) -> Self {
        Self {
            points_per_panel,
            panels,
            grading: Grading::GeometricLeft,
            grading_ratio: ratio,
        }
    }

    /// Default rule for integrals over Ω = (0,1)²: 16-point Gauss on 32
    /// uniform panels per axis. Handles integrands growing like cosh(αx)
    /// with |α| up to several hundred at full double accuracy.
    pub fn omega_default() -> Self {
        Self::uniform(16, 32)
    }

    /// Default rule for time integrals `∫_0^T e^{-λt} φ(t) dt`: 16-point
    /// Gauss on 40 panels graded toward t = 0 with ratio 1/2.
    pub fn time_default() -> Self {
        Self::geometric_left(16, 40, 0.5)
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_panel < 2 {
            return Err(Error::InvalidArgument(format!(
                "points_per_panel must be >= 2, got {}",
                self.points_per_panel
            )));
        }
        if self.panels < 1 {
            return Err(Error::InvalidArgument("panels must be >= 1".into()));
        }
        if self.grading == Grading::GeometricLeft
            && !(self.grading_ratio > 0.0 && self.grading_ratio < 1.0)
        {
            return Err(Error::InvalidArgument(format!(
                "grading_ratio must lie in (0,1), got {}",
                self.grading_ratio
            )));
        }
        Ok(())
    }

    /// Panel edges over [a,b], ascending, `panels + 1` entries.
    fn edges(&self, a: f64, b: f64) -> Vec<f64> {
        let mut edges = Vec::with_capacity(self.panels + 1);
        edges.push(a);
        match self.grading {
            Grading::Uniform => {
                for i in 1..self.panels {
                    edges.push(a + (b - a) * i as f64 / self.panels as f64);
                }
            }
            Grading::GeometricLeft => {
                for i in 1..self.panels {
                    edges.push(a + (b - a) * self.grading_ratio.powi((self.panels - i) as i32));
                }
            }
        }
        edges.push(b);
        edges
    }
}

/// Kahan–Babuška–Neumaier compensated accumulator. Keeps the summation error
/// at a few ulps independent of the number of terms, which the interpolation
/// stage needs: its inputs are quadrature sums whose noise gets amplified by
/// the Lagrange basis.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1,1], nodes
/// ascending. Newton iteration on the three-term Legendre recurrence.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Gauss-Legendre rule needs at least 2 points");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root (descending), then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p = P_n(x), dp = P_n'(x) via the recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                // one polishing step after convergence
                let mut q0 = 1.0;
                let mut q1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let q2 = ((2.0 * kf - 1.0) * x * q1 - (kf - 1.0) * q0) / kf;
                    q0 = q1;
                    q1 = q2;
                }
                dp = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                x -= q1 / dp;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots come out descending; store ascending and mirror
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Abscissae and weights of the composite rule over `[a,b]`.
pub fn composite_nodes(a: f64, b: f64, spec: &QuadratureSpec) -> (Vec<f64>, Vec<f64>) {
    let (gn, gw) = gauss_legendre(spec.points_per_panel);
    let edges = spec.edges(a, b);
    let mut xs = Vec::with_capacity(spec.panels * spec.points_per_panel);
    let mut ws = Vec::with_capacity(xs.capacity());
    for panel in edges.windows(2) {
        let half = 0.5 * (panel[1] - panel[0]);
        let mid = 0.5 * (panel[0] + panel[1]);
        for (t, w) in gn.iter().zip(&gw) {
            xs.push(mid + half * t);
            ws.push(half * w);
        }
    }
    (xs, ws)
}

/// Composite Gauss–Legendre approximation of `∫_a^b f`. Exact for
/// polynomials of degree ≤ 2·points_per_panel − 1 on each panel.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let (xs, ws) = composite_nodes(a, b, spec);
    let mut acc = Accumulator::new();
    for (x, w) in xs.iter().zip(&ws) {
        let v = f(*x);
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { x: *x, y: None });
        }
        acc.add(w * v);
    }
    Ok(acc.total())
}

/// Tensor-product rule over Ω = (0,1)² built from the 1-D rule: the same
/// panel layout is applied on both axes.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let (xs, ws) = composite_nodes(0.0, 1.0, spec);
    let mut outer = Accumulator::new();
    for (x, wx) in xs.iter().zip(&ws) {
        let mut row = Accumulator::new();
        for (y, wy) in xs.iter().zip(&ws) {
            let v = f(*x, *y);
            if !v.is_finite() {
                return Err(Error::NonFiniteEvaluation {
                    x: *x,
                    y: Some(*y),
                });
            }
            row.add(wy * v);
        }
        outer.add(wx * row.total());
    }
    Ok(outer.total())
}

/// A real number stored as `sign · exp(log_magnitude)`. Zero is encoded as
/// `(-∞, 0)`. Keeps products like `∏ (z_j² - z_l²)` representable where the
/// plain double product overflows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogSigned {
    /// Natural log of the magnitude; −∞ encodes zero.
    pub log_magnitude: f64,
    /// −1, 0, or +1; zero iff `log_magnitude` is −∞.
    pub sign: i8,
}

impl LogSigned {
    pub fn zero() -> Self {
        Self {
            log_magnitude: f64::NEG_INFINITY,
            sign: 0,
        }
    }

    pub fn one() -> Self {
        Self {
            log_magnitude: 0.0,
            sign: 1,
        }
    }

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else {
            Self {
                log_magnitude: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    /// Back to a plain double; overflows to ±∞, underflows to ±0.
    pub fn value(self) -> f64 {
        self.sign as f64 * self.log_magnitude.exp()
    }
}

impl std::ops::Mul for LogSigned {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::zero();
        }
        Self {
            log_magnitude: self.log_magnitude + other.log_magnitude,
            sign: self.sign * other.sign,
        }
    }
}

impl std::ops::Div for LogSigned {
    type Output = Self;

    /// Divide by a nonzero value.
    fn div(self, other: Self) -> Self {
        debug_assert!(other.sign != 0, "LogSigned division by zero");
        if self.sign == 0 {
            return Self::zero();
        }
        Self {
            log_magnitude: self.log_magnitude - other.log_magnitude,
            sign: self.sign * other.sign,
        }
    }
}

/// Product of a factor sequence in log-magnitude/sign form. Never overflows
/// for factor magnitudes representable in a double.
pub fn log_product<I: IntoIterator<Item = f64>>(factors: I) -> LogSigned {
    let mut acc = LogSigned::one();
    for f in factors {
        acc = acc * LogSigned::from_value(f);
    }
    acc
}
