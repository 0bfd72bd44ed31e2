//! Cosine-series analysis and synthesis on Ω = (0,1)², and the error cap of
//! truncating the series at degree M.

use std::f64::consts::PI;
use std::io::Write;

use crate::model::{CosineCoefficients, SpatialField};
use crate::numerics::{composite_nodes, Accumulator, QuadratureSpec};
use crate::transforms::g_transform_mode_with;
use crate::Result;

/// Pointwise value of the cosine polynomial represented by a table:
/// `Σ κ(m,n) F(m,n) cos(mπx) cos(nπy)`. Smooth on the whole plane.
pub fn synthesize(c: &CosineCoefficients, x: f64, y: f64) -> f64 {
    c.eval_at(x, y)
}

/// Cosine-mode coefficients of `w` for all `0 ≤ m,n ≤ max_degree`, using the
/// default Ω quadrature rule.
pub fn analyze(w: &SpatialField, max_degree: usize) -> Result<CosineCoefficients> {
    analyze_with(w, max_degree, &QuadratureSpec::omega_default())
}

/// Like [`analyze`], with an explicit quadrature rule. Coefficient-backed
/// fields are restricted exactly; for the rest, `w` is evaluated once on the
/// tensor grid and every mode is reduced against precomputed cosine tables
/// (the same tensor rule as `integrate_2d`, grouped per axis).
pub fn analyze_with(
    w: &SpatialField,
    max_degree: usize,
    spec: &QuadratureSpec,
) -> Result<CosineCoefficients> {
    let mut out = CosineCoefficients::zeros(max_degree);
    if w.as_coefficients().is_some() {
        for m in 0..=max_degree {
            for n in 0..=max_degree {
                out.set(m, n, g_transform_mode_with(w, m, n, spec)?);
            }
        }
        return Ok(out);
    }

    let (xs, ws) = composite_nodes(0.0, 1.0, spec);
    let npts = xs.len();
    let mut values = vec![0.0; npts * npts];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in xs.iter().enumerate() {
            let v = w.eval(*x, *y);
            if !v.is_finite() {
                return Err(crate::Error::NonFiniteEvaluation {
                    x: *x,
                    y: Some(*y),
                });
            }
            values[i * npts + j] = v;
        }
    }
    // cos(k pi t) tables over the quadrature abscissae
    let cos_table: Vec<Vec<f64>> = (0..=max_degree)
        .map(|k| xs.iter().map(|t| (k as f64 * PI * t).cos()).collect())
        .collect();

    // reduce the x axis once per m, then every n reuses the row sums
    for m in 0..=max_degree {
        let cm = &cos_table[m];
        let mut row_reduced = vec![0.0; npts];
        for (j, slot) in row_reduced.iter_mut().enumerate() {
            let mut acc = Accumulator::new();
            for i in 0..npts {
                acc.add(ws[i] * cm[i] * values[i * npts + j]);
            }
            *slot = acc.total();
        }
        for (n, cn) in cos_table.iter().enumerate() {
            let mut acc = Accumulator::new();
            for j in 0..npts {
                acc.add(ws[j] * cn[j] * row_reduced[j]);
            }
            out.set(m, n, acc.total());
        }
    }
    Ok(out)
}

/// L² error cap of truncation at degree M: `h1 / (π (M+1))`, where `h1`
/// bounds the H¹ norm of the function being truncated.
pub fn truncation_error_bound(max_degree: usize, h1: f64) -> f64 {
    h1 / (PI * (max_degree as f64 + 1.0))
}

/// Export a coefficient table as CSV with header `m,n,kappa,value`.
/// Values carry 17 significant digits so they round-trip exactly.
pub fn write_coefficients_csv<W: Write>(c: &CosineCoefficients, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "m,n,kappa,value")?;
    for (m, n, v) in c.iter() {
        writeln!(out, "{m},{n},{},{:.16e}", crate::model::kappa(m, n), v)?;
    }
    Ok(())
}
