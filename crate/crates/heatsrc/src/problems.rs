//! The two closed-form benchmark problems: exact data, disturbed data
//! parameterized by the frequency k, disturbed solutions, and the closed-form
//! error norms that exhibit the ill-posedness (data error 1/k against a
//! solution error growing like k).

use std::f64::consts::PI;

use crate::model::{
    BuiltinField, BuiltinProfile, SignedPowerBound, SpatialField, TimeProfile,
};
use crate::{Error, Result};

/// Which benchmark problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    /// Time factor `π² e^{-4π²t}`; the exact source is the finite cosine
    /// polynomial `-3 cos πy - 2 cos πx cos πy`.
    Example1,
    /// Time factor `e^t`; the exact source has an infinite cosine series.
    Example2,
}

impl ExampleId {
    pub fn index(self) -> u32 {
        match self {
            ExampleId::Example1 => 1,
            ExampleId::Example2 => 2,
        }
    }

    pub fn from_index(i: u32) -> Option<Self> {
        match i {
            1 => Some(ExampleId::Example1),
            2 => Some(ExampleId::Example2),
            _ => None,
        }
    }
}

/// One benchmark instance: the exact solution tuple, the k-disturbed data,
/// and the k-disturbed solution tuple, all with horizon T = 1. Only the
/// final-time slice of u is stored; that is all the residual checks need.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkCase {
    pub id: ExampleId,
    pub k: u32,
    /// Time factor; identical for the exact and disturbed problems in both
    /// benchmarks.
    pub phi: TimeProfile,
    /// Exact initial temperature g_0.
    pub g_exact: SpatialField,
    /// Disturbed initial temperature g_k (the pipeline input).
    pub g: SpatialField,
    /// Exact source f_0.
    pub f0: SpatialField,
    /// Disturbed source: the exact solution of the problem with data g_k.
    pub f_disturbed: SpatialField,
    /// u_0(·,·,1) for the exact tuple.
    pub u0_at_t: SpatialField,
    /// ũ_k(·,·,1) for the disturbed tuple.
    pub u_disturbed_at_t: SpatialField,
}

/// Build a benchmark case for disturbance frequency `k ≥ 1`.
pub fn make_case(id: ExampleId, k: u32) -> Result<BenchmarkCase> {
    if k < 1 {
        return Err(Error::OutOfRange(format!(
            "disturbance frequency k must be >= 1, got {k}"
        )));
    }
    let (phi_builtin, bound, fields) = match id {
        ExampleId::Example1 => (
            BuiltinProfile::Example1Source,
            // phi(t) = pi^2 e^{-4 pi^2 t} is continuous with phi(0) != 0, so
            // theta = 0 works with the minimum of phi over (0,1]
            SignedPowerBound {
                theta: 0.0,
                lambda_bound: PI * PI * (-4.0 * PI * PI).exp(),
                t0: 1.0,
            },
            [
                BuiltinField::Example1Initial,
                BuiltinField::Example1InitialDisturbed { k },
                BuiltinField::Example1Source,
                BuiltinField::Example1SourceDisturbed { k },
                BuiltinField::Example1FinalTime,
                BuiltinField::Example1FinalTimeDisturbed { k },
            ],
        ),
        ExampleId::Example2 => (
            BuiltinProfile::Example2Source,
            SignedPowerBound {
                theta: 0.0,
                lambda_bound: 1.0,
                t0: 1.0,
            },
            [
                BuiltinField::Example2Initial,
                BuiltinField::Example2InitialDisturbed { k },
                BuiltinField::Example2Source,
                BuiltinField::Example2SourceDisturbed { k },
                BuiltinField::Example2FinalTime,
                BuiltinField::Example2FinalTimeDisturbed { k },
            ],
        ),
    };
    Ok(BenchmarkCase {
        id,
        k,
        phi: TimeProfile::builtin(phi_builtin, 1.0)?.with_lower_bound(bound)?,
        g_exact: SpatialField::builtin(fields[0])?,
        g: SpatialField::builtin(fields[1])?,
        f0: SpatialField::builtin(fields[2])?,
        f_disturbed: SpatialField::builtin(fields[3])?,
        u0_at_t: SpatialField::builtin(fields[4])?,
        u_disturbed_at_t: SpatialField::builtin(fields[5])?,
    })
}

/// `‖g_k - g_0‖_{L¹(Ω)} = 1/k`; both benchmarks share the perturbation
/// structure `(π/k)·sin²(kπx)·cos(jπy)`.
pub fn data_error_l1(_id: ExampleId, k: u32) -> f64 {
    debug_assert!(k >= 1);
    1.0 / k as f64
}

/// Closed form of `‖f̃_k - f_0‖_{L²(Ω)}`: grows like k while the data error
/// shrinks like 1/k.
pub fn solution_error_l2(id: ExampleId, k: u32) -> f64 {
    debug_assert!(k >= 1);
    let kf = k as f64;
    match id {
        ExampleId::Example1 => {
            PI / 4.0 * (27.0 * kf * kf - 56.0 + 48.0 / (kf * kf)).sqrt()
        }
        ExampleId::Example2 => {
            let p2 = PI * PI;
            let p4 = p2 * p2;
            PI / 4.0
                * (16.0 * p4 * kf * kf
                    + 32.0 * p4
                    + 8.0 * p2
                    + (48.0 * p4 + 24.0 * p2 + 3.0) / (kf * kf))
                    .sqrt()
        }
    }
}

/// The documented reference value of `‖f_reg - f_0‖_{L²}` for a benchmark
/// reproduction, where one exists (k = 100 in both benchmarks).
pub fn reference_l2_error(id: ExampleId, k: u32) -> Option<f64> {
    match (id, k) {
        (ExampleId::Example1, 100) => Some(0.001441),
        (ExampleId::Example2, 100) => Some(0.059997),
        _ => None,
    }
}
