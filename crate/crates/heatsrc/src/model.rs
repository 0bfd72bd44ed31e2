//! Problem data model: time profiles `φ` on `[0,T]`, spatial fields on
//! Ω = (0,1)², cosine-coefficient tables, and the norms the error estimates
//! are stated in.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::numerics::{integrate_2d, QuadratureSpec};
use crate::{Error, Result};

/// Multiplicity weight of the cosine mode (m,n): the family
/// `√κ(m,n) cos(mπx) cos(nπy)` is orthonormal on L²(Ω).
///
/// Returns 1 when m = n = 0, 2 when exactly one index is zero, 4 otherwise.
pub fn kappa(m: usize, n: usize) -> u32 {
    match (m, n) {
        (0, 0) => 1,
        (0, _) | (_, 0) => 2,
        _ => 4,
    }
}

/// Admissibility metadata for a time profile: asserts that `|φ(t)| ≥
/// lambda_bound · t^theta` with a fixed sign for a.e. `t ∈ (0, t0)`. This
/// keeps the weight `D(φ)` from decaying faster than polynomially, which is
/// what makes the quotient `-G(g)/D(φ)` usable. User-asserted; never
/// estimated from data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedPowerBound {
    pub theta: f64,
    pub lambda_bound: f64,
    pub t0: f64,
}

/// The closed-form time factors of the two benchmark problems (T = 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinProfile {
    /// `φ(t) = π² e^{-4π² t}`
    Example1Source,
    /// `φ(t) = e^t`
    Example2Source,
}

impl BuiltinProfile {
    fn eval(self, t: f64) -> f64 {
        match self {
            BuiltinProfile::Example1Source => PI * PI * (-4.0 * PI * PI * t).exp(),
            BuiltinProfile::Example2Source => t.exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum TimeSource {
    Builtin(BuiltinProfile),
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

/// The source time factor `φ` on `[0,T]`, closed-form or sampled. Sampled
/// profiles are extended to callables by piecewise-linear interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeProfile {
    source: TimeSource,
    horizon: f64,
    lower_bound: Option<SignedPowerBound>,
}

impl TimeProfile {
    pub fn builtin(profile: BuiltinProfile, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Ok(Self {
            source: TimeSource::Builtin(profile),
            horizon,
            lower_bound: None,
        })
    }

    /// Sample-backed profile; `times` must be strictly increasing, start at 0,
    /// and the horizon is the last sample time.
    pub fn sampled(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::InvalidArgument(
                "sampled profile needs matching times/values with at least 2 samples".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "sample times must start at 0, got {}",
                times[0]
            )));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "sample times must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "sample values must be finite".into(),
            ));
        }
        let horizon = *times.last().unwrap();
        Ok(Self {
            source: TimeSource::Sampled { times, values },
            horizon,
            lower_bound: None,
        })
    }

    pub fn with_lower_bound(mut self, bound: SignedPowerBound) -> Result<Self> {
        let theta_ok = bound.theta >= 0.0;
        let lambda_ok = bound.lambda_bound > 0.0;
        if !theta_ok || !lambda_ok {
            return Err(Error::InvalidArgument(
                "lower bound requires theta >= 0 and lambda_bound > 0".into(),
            ));
        }
        if !(bound.t0 > 0.0 && bound.t0 <= self.horizon) {
            return Err(Error::InvalidArgument(format!(
                "t0 must lie in (0, horizon], got {}",
                bound.t0
            )));
        }
        self.lower_bound = Some(bound);
        Ok(self)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn lower_bound(&self) -> Option<SignedPowerBound> {
        self.lower_bound
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.source {
            TimeSource::Builtin(b) => b.eval(t),
            TimeSource::Sampled { times, values } => {
                piecewise_linear(times, values, t.clamp(0.0, self.horizon))
            }
        }
    }

    /// Load samples from a CSV file with header `t,value`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let rows = read_csv(path, &["t", "value"])?;
        let (times, values) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
        Self::sampled(times, values).map_err(|e| Error::Csv {
            path: path.display().to_string(),
            line: 1,
            message: e.to_string(),
        })
    }

    /// Map the sample values through `f`; builtin profiles are first sampled
    /// at `resolution + 1` uniform times.
    pub fn map_values<F: Fn(f64) -> f64>(&self, resolution: usize, f: F) -> Result<Self> {
        let (times, values): (Vec<f64>, Vec<f64>) = match &self.source {
            TimeSource::Sampled { times, values } => {
                (times.clone(), values.iter().map(|v| f(*v)).collect())
            }
            TimeSource::Builtin(b) => {
                let times: Vec<f64> = (0..=resolution)
                    .map(|i| self.horizon * i as f64 / resolution as f64)
                    .collect();
                let values = times.iter().map(|t| f(b.eval(*t))).collect();
                (times, values)
            }
        };
        let mut out = Self::sampled(times, values)?;
        out.lower_bound = self.lower_bound;
        Ok(out)
    }
}

fn piecewise_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|t| *t <= x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let t = (x - x0) / (x1 - x0);
    ys[i - 1] * (1.0 - t) + ys[i] * t
}

/// The closed-form spatial fields of the two benchmark problems. Disturbed
/// variants carry the perturbation frequency `k ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinField {
    /// `g(x,y) = (1 + cos πx) cos πy`
    Example1Initial,
    /// `f(x,y) = -3 cos πy - 2 cos πx cos πy`
    Example1Source,
    /// `u(x,y,1) = e^{-4π²} (1 + cos πx) cos πy`
    Example1FinalTime,
    Example1InitialDisturbed { k: u32 },
    Example1SourceDisturbed { k: u32 },
    Example1FinalTimeDisturbed { k: u32 },
    /// `g(x,y) = (x cos(1-x) + sin(1-x) - 1)(2y³ - 3y²)`
    Example2Initial,
    /// `f(x,y) = (2x cos(1-x) - 1)(2y³ - 3y²) - (x cos(1-x) + sin(1-x) - 1)(12y - 6)`
    Example2Source,
    /// `u(x,y,1) = e · g(x,y)`
    Example2FinalTime,
    Example2InitialDisturbed { k: u32 },
    Example2SourceDisturbed { k: u32 },
    Example2FinalTimeDisturbed { k: u32 },
}

impl BuiltinField {
    fn disturbance_k(self) -> Option<u32> {
        use BuiltinField::*;
        match self {
            Example1InitialDisturbed { k }
            | Example1SourceDisturbed { k }
            | Example1FinalTimeDisturbed { k }
            | Example2InitialDisturbed { k }
            | Example2SourceDisturbed { k }
            | Example2FinalTimeDisturbed { k } => Some(k),
            _ => None,
        }
    }

    fn eval(self, x: f64, y: f64) -> f64 {
        use BuiltinField::*;
        match self {
            Example1Initial => (1.0 + (PI * x).cos()) * (PI * y).cos(),
            Example1Source => -(3.0 + 2.0 * (PI * x).cos()) * (PI * y).cos(),
            Example1FinalTime => (-4.0 * PI * PI).exp() * Example1Initial.eval(x, y),
            Example1InitialDisturbed { k } => {
                let kf = k as f64;
                Example1Initial.eval(x, y)
                    + PI / kf * (kf * PI * x).sin().powi(2) * (kf * PI * y).cos()
            }
            Example1SourceDisturbed { k } => {
                let kf = k as f64;
                Example1Source.eval(x, y)
                    + PI / kf
                        * ((5.0 * kf * kf - 4.0) * (kf * PI * x).sin().powi(2) - 2.0 * kf * kf)
                        * (kf * PI * y).cos()
            }
            Example1FinalTimeDisturbed { k } => {
                let kf = k as f64;
                Example1FinalTime.eval(x, y)
                    + PI / kf
                        * (-4.0 * PI * PI).exp()
                        * (kf * PI * x).sin().powi(2)
                        * (kf * PI * y).cos()
            }
            Example2Initial => ex2_p(x) * ex2_q(y),
            Example2Source => {
                (2.0 * x * (1.0 - x).cos() - 1.0) * ex2_q(y) - ex2_p(x) * (12.0 * y - 6.0)
            }
            Example2FinalTime => std::f64::consts::E * Example2Initial.eval(x, y),
            Example2InitialDisturbed { k } => {
                let kf = k as f64;
                Example2Initial.eval(x, y)
                    + PI / kf * (kf * PI * x).sin().powi(2) * (2.0 * PI * y).cos()
            }
            Example2SourceDisturbed { k } => {
                let kf = k as f64;
                let a = 4.0 * kf * kf * PI * PI + 4.0 * PI * PI + 1.0;
                Example2Source.eval(x, y)
                    + PI / kf
                        * (a * (kf * PI * x).sin().powi(2) - 2.0 * kf * kf * PI * PI)
                        * (2.0 * PI * y).cos()
            }
            Example2FinalTimeDisturbed { k } => {
                let kf = k as f64;
                Example2FinalTime.eval(x, y)
                    + PI / kf
                        * std::f64::consts::E
                        * (kf * PI * x).sin().powi(2)
                        * (2.0 * PI * y).cos()
            }
        }
    }
}

fn ex2_p(x: f64) -> f64 {
    x * (1.0 - x).cos() + (1.0 - x).sin() - 1.0
}

fn ex2_q(y: f64) -> f64 {
    2.0 * y * y * y - 3.0 * y * y
}

/// Uniform node grid on `[0,1]²` with bilinear interpolation between nodes.
/// `values` is x-major with y varying fastest: index (i,j) = i·(ny+1) + j.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 1 || ny < 1 {
            return Err(Error::InvalidArgument(
                "grid needs at least 2 nodes per axis".into(),
            ));
        }
        if values.len() != (nx + 1) * (ny + 1) {
            return Err(Error::InvalidArgument(format!(
                "grid of {}x{} cells needs {} values, got {}",
                nx,
                ny,
                (nx + 1) * (ny + 1),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid values must be finite".into()));
        }
        Ok(Self { nx, ny, values })
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let fx = x.clamp(0.0, 1.0) * self.nx as f64;
        let fy = y.clamp(0.0, 1.0) * self.ny as f64;
        let i = (fx as usize).min(self.nx - 1);
        let j = (fy as usize).min(self.ny - 1);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let at = |i: usize, j: usize| self.values[i * (self.ny + 1) + j];
        (1.0 - tx) * ((1.0 - ty) * at(i, j) + ty * at(i, j + 1))
            + tx * ((1.0 - ty) * at(i + 1, j) + ty * at(i + 1, j + 1))
    }
}

/// Table of cosine coefficients F(m,n) for 0 ≤ m,n ≤ max_degree. The
/// represented function is `Σ κ(m,n) F(m,n) cos(mπx) cos(nπy)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CosineCoefficients {
    max_degree: usize,
    /// Row-major by m; index (m,n) = m·(max_degree+1) + n.
    table: Vec<f64>,
}

impl CosineCoefficients {
    pub fn zeros(max_degree: usize) -> Self {
        Self {
            max_degree,
            table: vec![0.0; (max_degree + 1) * (max_degree + 1)],
        }
    }

    pub fn from_table(max_degree: usize, table: Vec<f64>) -> Result<Self> {
        let side = max_degree + 1;
        if table.len() != side * side {
            return Err(Error::InvalidArgument(format!(
                "coefficient table for degree {max_degree} needs {} entries, got {}",
                side * side,
                table.len()
            )));
        }
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "coefficient table entries must be finite".into(),
            ));
        }
        Ok(Self { max_degree, table })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.table[m * (self.max_degree + 1) + n]
    }

    pub fn set(&mut self, m: usize, n: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.table[m * (self.max_degree + 1) + n] = value;
    }

    /// Entries in (m, n, value) order, m-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let side = self.max_degree + 1;
        self.table
            .iter()
            .enumerate()
            .map(move |(idx, v)| (idx / side, idx % side, *v))
    }

    /// Pointwise value of the represented cosine polynomial; smooth on the
    /// whole plane.
    pub fn eval_at(&self, x: f64, y: f64) -> f64 {
        let mut sum = 0.0;
        for m in 0..=self.max_degree {
            let cx = (m as f64 * PI * x).cos();
            let mut row = 0.0;
            for n in 0..=self.max_degree {
                row += kappa(m, n) as f64 * self.get(m, n) * (n as f64 * PI * y).cos();
            }
            sum += cx * row;
        }
        sum
    }

    /// L² norm of the represented function via the orthonormal expansion:
    /// `‖w‖² = Σ κ(m,n) F(m,n)²`.
    pub fn l2_parseval(&self) -> f64 {
        self.iter()
            .map(|(m, n, v)| kappa(m, n) as f64 * v * v)
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum SpatialSource {
    Builtin(BuiltinField),
    Grid(GridField),
    Coefficients(CosineCoefficients),
}

/// A function on Ω = (0,1)²: a registered closed form, a uniform grid of
/// samples, or a cosine-coefficient table.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialField {
    source: SpatialSource,
}

impl SpatialField {
    pub fn builtin(field: BuiltinField) -> Result<Self> {
        if let Some(k) = field.disturbance_k() {
            if k < 1 {
                return Err(Error::OutOfRange(
                    "disturbance frequency k must be >= 1".into(),
                ));
            }
        }
        Ok(Self {
            source: SpatialSource::Builtin(field),
        })
    }

    pub fn grid(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            source: SpatialSource::Grid(GridField::new(nx, ny, values)?),
        })
    }

    pub fn coefficients(c: CosineCoefficients) -> Self {
        Self {
            source: SpatialSource::Coefficients(c),
        }
    }

    /// The backing coefficient table, when there is one.
    pub fn as_coefficients(&self) -> Option<&CosineCoefficients> {
        match &self.source {
            SpatialSource::Coefficients(c) => Some(c),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.source {
            SpatialSource::Builtin(b) => b.eval(x, y),
            SpatialSource::Grid(g) => g.eval(x, y),
            SpatialSource::Coefficients(c) => c.eval_at(x, y),
        }
    }

    /// Load a grid from a CSV file with header `x,y,value`, row-major over a
    /// uniform lattice covering `[0,1]²` (x outer, y fastest).
    pub fn from_grid_csv(path: &Path) -> Result<Self> {
        let rows = read_csv(path, &["x", "y", "value"])?;
        let csv_err = |line: usize, message: String| Error::Csv {
            path: path.display().to_string(),
            line,
            message,
        };
        if rows.len() < 4 {
            return Err(csv_err(1, "grid needs at least 2x2 nodes".into()));
        }
        let x0 = rows[0][0];
        let ny1 = rows.iter().take_while(|r| r[0] == x0).count();
        if ny1 < 2 || rows.len() % ny1 != 0 {
            return Err(csv_err(
                1,
                format!(
                    "row count {} is not a multiple of the inferred y-count {ny1}",
                    rows.len()
                ),
            ));
        }
        let nx1 = rows.len() / ny1;
        if nx1 < 2 {
            return Err(csv_err(1, "grid needs at least 2 x-levels".into()));
        }
        let (nx, ny) = (nx1 - 1, ny1 - 1);
        let mut values = Vec::with_capacity(rows.len());
        for (idx, row) in rows.iter().enumerate() {
            let (i, j) = (idx / ny1, idx % ny1);
            let want_x = i as f64 / nx as f64;
            let want_y = j as f64 / ny as f64;
            let line = idx + 2; // 1-based, after the header
            if (row[0] - want_x).abs() > 1e-9 {
                return Err(csv_err(
                    line,
                    format!("expected x = {want_x} on the uniform lattice, got {}", row[0]),
                ));
            }
            if (row[1] - want_y).abs() > 1e-9 {
                return Err(csv_err(
                    line,
                    format!("expected y = {want_y} on the uniform lattice, got {}", row[1]),
                ));
            }
            values.push(row[2]);
        }
        Self::grid(nx, ny, values).map_err(|e| csv_err(1, e.to_string()))
    }
}

/// Parse a small numeric CSV with the given header columns.
fn read_csv(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Csv {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let csv_err = |line: usize, message: String| Error::Csv {
        path: path.display().to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file".into()))?;
    let want = header.join(",");
    if first.trim() != want {
        return Err(csv_err(1, format!("expected header `{want}`, got `{first}`")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(csv_err(
                line_no,
                format!("expected {} fields, got {}", header.len(), fields.len()),
            ));
        }
        let mut row = Vec::with_capacity(fields.len());
        for (name, field) in header.iter().zip(&fields) {
            let v: f64 = field.trim().parse().map_err(|_| {
                csv_err(line_no, format!("field `{name}`: cannot parse `{field}`"))
            })?;
            if !v.is_finite() {
                return Err(csv_err(line_no, format!("field `{name}` is not finite")));
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `∫_Ω |w|` with the default Ω rule.
pub fn l1_norm(w: &SpatialField) -> Result<f64> {
    l1_norm_with(w, &QuadratureSpec::omega_default())
}

pub fn l1_norm_with(w: &SpatialField, spec: &QuadratureSpec) -> Result<f64> {
    integrate_2d(|x, y| w.eval(x, y).abs(), spec)
}

/// L² norm: Parseval for coefficient-backed fields, quadrature otherwise.
pub fn l2_norm(w: &SpatialField) -> Result<f64> {
    l2_norm_with(w, &QuadratureSpec::omega_default())
}

pub fn l2_norm_with(w: &SpatialField, spec: &QuadratureSpec) -> Result<f64> {
    match &w.source {
        SpatialSource::Coefficients(c) => Ok(c.l2_parseval()),
        _ => Ok(integrate_2d(|x, y| w.eval(x, y).powi(2), spec)?.max(0.0).sqrt()),
    }
}

/// `‖a - b‖_{L²(Ω)}` by quadrature of the pointwise difference.
pub fn l2_distance(a: &SpatialField, b: &SpatialField, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integrate_2d(|x, y| (a.eval(x, y) - b.eval(x, y)).powi(2), spec)?
        .max(0.0)
        .sqrt())
}

/// H¹ norm of a coefficient table:
/// `‖w‖² = Σ (1 + π²(m² + n²)) κ(m,n) F(m,n)²`.
pub fn h1_norm(c: &CosineCoefficients) -> f64 {
    c.iter()
        .map(|(m, n, v)| {
            (1.0 + PI * PI * (m * m + n * n) as f64) * kappa(m, n) as f64 * v * v
        })
        .sum::<f64>()
        .max(0.0)
        .sqrt()
}

/// Outcome of one regularization run: recovered coefficients, error norms,
/// parameters, and bookkeeping.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ExperimentReport {
    pub epsilon: f64,
    pub r: usize,
    pub coefficients: CosineCoefficients,
    pub l2_error_vs_exact: Option<f64>,
    pub bound_value: Option<f64>,
    pub norms: BTreeMap<String, f64>,
    /// Wall-clock stage timings in seconds. Excluded from determinism
    /// comparisons.
    pub timings: BTreeMap<String, f64>,
}
