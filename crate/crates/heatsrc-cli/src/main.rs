//! Command-line front end: reproduce the benchmark problems, regularize
//! user-supplied data, run convergence studies, and verify the certified
//! inequalities. Outputs are plain CSV/JSON, deterministic byte-for-byte for
//! identical inputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use heatsrc::interpolation::{basis_growth_check, remainder_product_check};
use heatsrc::model::{ExperimentReport, SpatialField, TimeProfile};
use heatsrc::problems::{make_case, reference_l2_error, ExampleId};
use heatsrc::regularizer::{recover_coefficients, regularize_with, RegularizationParams};
use heatsrc::spectral::{synthesize, write_coefficients_csv};

#[derive(Parser)]
#[command(
    name = "heatsrc",
    about = "Recover the spatial factor of a separable heat source on the unit square",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark problem with disturbed data (epsilon = 1/k) and write
    /// coefficients.csv, errors.json, and grid.csv into --out.
    Reproduce {
        /// Benchmark id: 1 or 2
        #[arg(long)]
        example: u32,
        /// Disturbance frequency; the data error is 1/k
        #[arg(long)]
        k: u32,
        /// Nodes per axis of the output lattice (including both boundaries)
        #[arg(long, default_value_t = 101)]
        grid_resolution: usize,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Regularize user-supplied data files and write coefficients.csv and
    /// grid.csv into --out.
    Regularize {
        /// Time-profile samples, CSV with header `t,value`
        #[arg(long)]
        phi: PathBuf,
        /// Initial-temperature grid, CSV with header `x,y,value`
        #[arg(long)]
        g: PathBuf,
        /// Data error level in (0,1)
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 101)]
        grid_resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark across a descending list of epsilons and tabulate
    /// observed error against the a-priori bound.
    Converge {
        /// Benchmark id: 1 or 2
        #[arg(long)]
        example: u32,
        /// Comma-separated descending epsilons in (0,1), e.g. 1e-2,1e-3
        #[arg(long)]
        epsilons: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the certified remainder-product and basis-growth inequalities
    /// for r = 1..r_max and write the table to --out.
    VerifyBounds {
        #[arg(long = "r-max")]
        r_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    /// Bad arguments or malformed input files (exit 2).
    Usage(String),
    /// A verified inequality failed (exit 1).
    BoundCheck(String),
    /// The pipeline failed numerically (exit 3).
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::BoundCheck(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::BoundCheck(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<heatsrc::Error> for CliError {
    fn from(e: heatsrc::Error) -> Self {
        match e {
            heatsrc::Error::Csv { .. } | heatsrc::Error::OutOfRange(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.message());
        return ExitCode::from(e.exit_code());
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// HEATSRC_THREADS caps the rayon pool; unset means the rayon default.
fn configure_threads() -> Result<(), CliError> {
    match std::env::var("HEATSRC_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                CliError::Usage(format!("HEATSRC_THREADS must be a positive integer, got `{raw}`"))
            })?;
            if n == 0 {
                return Err(CliError::Usage(
                    "HEATSRC_THREADS must be a positive integer".into(),
                ));
            }
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Reproduce {
            example,
            k,
            grid_resolution,
            out,
        } => cmd_reproduce(example, k, grid_resolution, &out),
        Command::Regularize {
            phi,
            g,
            epsilon,
            grid_resolution,
            out,
        } => cmd_regularize(&phi, &g, epsilon, grid_resolution, &out),
        Command::Converge {
            example,
            epsilons,
            out,
        } => cmd_converge(example, &epsilons, &out),
        Command::VerifyBounds { r_max, out } => cmd_verify_bounds(r_max, &out),
    }
}

fn parse_example(example: u32) -> Result<ExampleId, CliError> {
    ExampleId::from_index(example)
        .ok_or_else(|| CliError::Usage(format!("--example must be 1 or 2, got {example}")))
}

fn check_resolution(grid_resolution: usize) -> Result<(), CliError> {
    if grid_resolution < 2 {
        return Err(CliError::Usage(format!(
            "--grid-resolution must be >= 2, got {grid_resolution}"
        )));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<(), CliError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::Usage(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct ErrorsJson {
    example: u32,
    k: u32,
    epsilon: f64,
    r: usize,
    observed_l2_error: f64,
    reference_l2_error: Option<f64>,
    error_bound: f64,
}

fn cmd_reproduce(
    example: u32,
    k: u32,
    grid_resolution: usize,
    out: &Path,
) -> Result<(), CliError> {
    let id = parse_example(example)?;
    check_resolution(grid_resolution)?;
    if k < 1 {
        return Err(CliError::Usage("--k must be >= 1".into()));
    }
    let epsilon = 1.0 / k as f64;
    check_epsilon(epsilon).map_err(|_| {
        CliError::Usage(format!(
            "--k {k} implies epsilon = {epsilon}, outside (0,1); use k >= 2"
        ))
    })?;
    let params = RegularizationParams::new(epsilon).map_err(CliError::from)?;
    let case = make_case(id, k)?;
    let report = regularize_with(&case.phi, &case.g, &params, Some(&case.f0))?;

    fs::create_dir_all(out)?;
    write_coefficients(&report, out)?;

    let errors = ErrorsJson {
        example,
        k,
        epsilon,
        r: report.r,
        observed_l2_error: report.l2_error_vs_exact.unwrap_or(f64::NAN),
        reference_l2_error: reference_l2_error(id, k),
        error_bound: report.bound_value.unwrap_or(f64::NAN),
    };
    let json = serde_json::to_string_pretty(&errors)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    fs::write(out.join("errors.json"), json + "\n")?;

    let mut grid = fs::File::create(out.join("grid.csv"))?;
    writeln!(grid, "x,y,f_reg,f_exact,f_disturbed")?;
    let n = grid_resolution - 1;
    for i in 0..=n {
        let x = i as f64 / n as f64;
        for j in 0..=n {
            let y = j as f64 / n as f64;
            writeln!(
                grid,
                "{x:.8e},{y:.8e},{:.8e},{:.8e},{:.8e}",
                synthesize(&report.coefficients, x, y),
                case.f0.eval(x, y),
                case.f_disturbed.eval(x, y),
            )?;
        }
    }

    println!(
        "example {example}, k = {k}: r = {}, observed L2 error = {:.6e}, bound = {:.6e}",
        report.r,
        errors.observed_l2_error,
        errors.error_bound
    );
    Ok(())
}

fn write_coefficients(report: &ExperimentReport, out: &Path) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_coefficients_csv(&report.coefficients, &mut buf)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    fs::write(out.join("coefficients.csv"), buf)?;
    Ok(())
}

fn cmd_regularize(
    phi_file: &Path,
    g_file: &Path,
    epsilon: f64,
    grid_resolution: usize,
    out: &Path,
) -> Result<(), CliError> {
    check_epsilon(epsilon)?;
    check_resolution(grid_resolution)?;
    let phi = TimeProfile::from_csv(phi_file)?;
    let g = SpatialField::from_grid_csv(g_file)?;
    let params = RegularizationParams::new(epsilon).map_err(CliError::from)?;
    let recovery = recover_coefficients(&phi, &g, &params)?;

    println!("r = {}", params.r);
    for row in &recovery.rows {
        println!(
            "row n={}: |D| in [{:.3e}, {:.3e}]{}",
            row.n,
            row.min_abs_d,
            row.max_abs_d,
            if row.degenerate { " (degenerate: all nodes on the zero branch)" } else { "" }
        );
    }

    fs::create_dir_all(out)?;
    let mut buf = Vec::new();
    write_coefficients_csv(&recovery.coefficients, &mut buf)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    fs::write(out.join("coefficients.csv"), buf)?;

    let mut grid = fs::File::create(out.join("grid.csv"))?;
    writeln!(grid, "x,y,f_reg")?;
    let n = grid_resolution - 1;
    for i in 0..=n {
        let x = i as f64 / n as f64;
        for j in 0..=n {
            let y = j as f64 / n as f64;
            writeln!(
                grid,
                "{x:.8e},{y:.8e},{:.8e}",
                synthesize(&recovery.coefficients, x, y)
            )?;
        }
    }

    if recovery.any_degenerate() {
        return Err(CliError::Numerical(
            "at least one row degenerated to the zero branch of H (D vanished at every node)"
                .into(),
        ));
    }
    Ok(())
}

fn cmd_converge(example: u32, epsilons: &str, out: &Path) -> Result<(), CliError> {
    let id = parse_example(example)?;
    let list: Vec<f64> = epsilons
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("cannot parse epsilon `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err(CliError::Usage("--epsilons list is empty".into()));
    }
    for e in &list {
        check_epsilon(*e)?;
    }
    if !list.windows(2).all(|w| w[0] > w[1]) {
        return Err(CliError::Usage(
            "--epsilons must be strictly descending".into(),
        ));
    }

    fs::create_dir_all(out)?;
    let mut table = fs::File::create(out.join("convergence.csv"))?;
    writeln!(table, "epsilon,r,observed_l2_error,error_bound")?;
    for epsilon in list {
        let k = (1.0 / epsilon).round() as u32;
        let params = RegularizationParams::new(epsilon).map_err(CliError::from)?;
        let case = make_case(id, k)?;
        let report = regularize_with(&case.phi, &case.g, &params, Some(&case.f0))?;
        let observed = report.l2_error_vs_exact.unwrap_or(f64::NAN);
        let bound = report.bound_value.unwrap_or(f64::NAN);
        writeln!(table, "{epsilon:.8e},{},{observed:.8e},{bound:.8e}", report.r)?;
        println!(
            "epsilon = {epsilon:.3e} (k = {k}): r = {}, observed = {observed:.6e}, bound = {bound:.6e}",
            report.r
        );
    }
    Ok(())
}

fn cmd_verify_bounds(r_max: usize, out: &Path) -> Result<(), CliError> {
    if !(1..=200).contains(&r_max) {
        return Err(CliError::Usage(format!(
            "--r-max must lie in [1, 200], got {r_max}"
        )));
    }
    fs::create_dir_all(out)?;
    let mut table = fs::File::create(out.join("bounds.csv"))?;
    writeln!(
        table,
        "r,product_lhs_log,product_rhs_log,product_holds,growth_log_value,growth_log_bound,growth_holds"
    )?;
    let mut failures = Vec::new();
    for r in 1..=r_max {
        let p = remainder_product_check(r);
        let g = basis_growth_check(r);
        writeln!(
            table,
            "{r},{:.8e},{:.8e},{},{:.8e},{:.8e},{}",
            p.lhs_log, p.rhs_log, p.holds, g.log_value, g.log_bound, g.holds
        )?;
        if !p.holds {
            failures.push(format!("remainder product at r={r}"));
        }
        if !g.holds {
            failures.push(format!("basis growth at r={r}"));
        }
    }
    if failures.is_empty() {
        println!("all checks hold for r = 1..{r_max}");
        Ok(())
    } else {
        Err(CliError::BoundCheck(format!(
            "{} check(s) failed: {}",
            failures.len(),
            failures.join(", ")
        )))
    }
}
