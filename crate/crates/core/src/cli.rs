//! Command-line front end: `scatter`, `factorize` and `identities`.
//!
//! Exit codes: 0 pass, 1 tolerance failure, 2 input error, 3 numerical fault.
//! Output is fully computed before anything is written, so identical inputs
//! give byte-identical output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jost::{
    conjugate_solution, equation_residual, jost_left, jost_right, wronskian_constancy_check, wronskian_with_magnitude,
    LatticeSolution, Side,
};
use crate::lattice::{fragment, validate_sequence, CoefficientSequence, Coefficients, Fragmentation, RawCoefficients};
use crate::matrix::relative_residual;
use crate::scattering::{check_identities, extract_scattering, scattering_sweep_points};
use crate::spectral::{sample_circle, CircleGrid, SpectralPoint, DEFAULT_EXCLUSION_DELTA};
use crate::transition::{
    factorization_check_fragments, inverse_algebra_check_at, junction_planewave_check, left_fragment_expansion_check,
    right_fragment_expansion_check, transition_matrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    ToleranceFailure = 1,
    InputError = 2,
    NumericalFault = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "jacobi-scatter",
    version,
    about = "Scattering data and transition-matrix factorization for weighted Jacobi systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate T, R, L over a unit-circle grid.
    Scatter(RunArgs),
    /// Compare the transition matrix with the product over fragments.
    Factorize(RunArgs),
    /// Report residuals of the scattering identities and junction relations.
    Identities(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Coefficient file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Number of grid points on the unit circle.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Minimum distance of grid points from z = +1 and z = -1.
    #[arg(long, default_value_t = DEFAULT_EXCLUSION_DELTA)]
    pub delta: f64,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Comma-separated, strictly increasing breakpoints.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub breakpoints: Option<Vec<i64>>,
    /// Write results here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Perturb the padding of the first fragment (negative control).
    #[arg(long, hide = true)]
    pub corrupt_padding: bool,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub grid_count: usize,
    pub exclusion_delta: f64,
    pub tolerance: f64,
    pub breakpoints: Option<Vec<i64>>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub corrupt_padding: bool,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input_path.into(),
            grid_count: 512,
            exclusion_delta: DEFAULT_EXCLUSION_DELTA,
            tolerance: 1e-9,
            breakpoints: None,
            output_path: None,
            format: Format::Csv,
            corrupt_padding: false,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.grid_count < 1 {
            return Err("--grid must be at least 1".into());
        }
        if !(self.exclusion_delta > 0.0 && self.exclusion_delta < 1.0) {
            return Err("--delta must lie in (0, 1)".into());
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err("--tol must be positive".into());
        }
        Ok(())
    }
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        Self {
            input_path: a.input,
            grid_count: a.grid,
            exclusion_delta: a.delta,
            tolerance: a.tol,
            breakpoints: a.breakpoints,
            output_path: a.output,
            format: a.format,
            corrupt_padding: a.corrupt_padding,
        }
    }
}

/// Verification summary line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckSummary {
    fn new(check: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub theta: f64,
    pub lambda: f64,
    pub re_T: f64,
    pub im_T: f64,
    pub re_R: f64,
    pub im_R: f64,
    pub re_L: f64,
    pub im_L: f64,
    pub unitarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizeRow {
    pub theta: f64,
    pub lambda: f64,
    pub residual: f64,
}

#[derive(Serialize)]
struct FactorizeJson<'a> {
    points: &'a [FactorizeRow],
    summary: &'a CheckSummary,
}

/// Parses argv and runs the selected subcommand.
pub fn main_with_args<I, T>(args: I, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitStatus::Pass,
                _ => ExitStatus::InputError,
            };
            let _ = write!(err, "{e}");
            return status;
        }
    };
    match cli.command {
        Command::Scatter(a) => run_scatter(&a.into(), err),
        Command::Factorize(a) => run_factorize(&a.into(), err),
        Command::Identities(a) => run_identities(&a.into(), err),
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses the JSON coefficient-file format.
pub fn parse_coefficients(text: &str) -> std::result::Result<RawCoefficients, String> {
    serde_json::from_str(text).map_err(|e| format!("malformed coefficient file: {e}"))
}

pub fn load_sequence(config: &RunConfig) -> std::result::Result<CoefficientSequence, String> {
    let text = std::fs::read_to_string(&config.input_path)
        .map_err(|e| format!("cannot read {}: {e}", config.input_path.display()))?;
    let raw = parse_coefficients(&text).map_err(|e| format!("{}: {e}", config.input_path.display()))?;
    validate_sequence(&raw).map_err(|e| format!("invalid coefficients: {e}"))
}

fn emit(config: &RunConfig, body: &str, err: &mut dyn Write) -> ExitStatus {
    match &config.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return ExitStatus::InputError;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitStatus::InputError;
            }
        }
    }
    ExitStatus::Pass
}

/// Common prologue: validate config, load the sequence, build the grid.
fn prepare(
    config: &RunConfig,
    err: &mut dyn Write,
) -> std::result::Result<(CoefficientSequence, CircleGrid), ExitStatus> {
    if let Err(msg) = config.validate() {
        let _ = writeln!(err, "error: {msg}");
        return Err(ExitStatus::InputError);
    }
    let seq = match load_sequence(config) {
        Ok(seq) => seq,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return Err(ExitStatus::InputError);
        }
    };
    let grid = match sample_circle(&seq.limits(), config.grid_count, config.exclusion_delta) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return Err(ExitStatus::InputError);
        }
    };
    Ok((seq, grid))
}

fn fragmentation(config: &RunConfig, err: &mut dyn Write) -> std::result::Result<Option<Fragmentation>, ExitStatus> {
    match &config.breakpoints {
        None => Ok(None),
        Some(bp) => match Fragmentation::new(bp.clone()) {
            Ok(f) => Ok(Some(f)),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                Err(ExitStatus::InputError)
            }
        },
    }
}

/// Writes one diagnostic per failed point; returns true if any failed.
fn report_faults<T>(results: &[Result<T>], err: &mut dyn Write) -> bool {
    let mut any = false;
    for e in results.iter().filter_map(|r| r.as_ref().err()) {
        let _ = writeln!(err, "numerical fault: {e}");
        any = true;
    }
    any
}

pub fn run_scatter(config: &RunConfig, err: &mut dyn Write) -> ExitStatus {
    let (seq, grid) = match prepare(config, err) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let results = scattering_sweep_points(&seq, &grid.points);
    if report_faults(&results, err) {
        return ExitStatus::NumericalFault;
    }
    let rows: Vec<ScatterRow> = grid
        .points
        .iter()
        .zip(results)
        .map(|(p, sd)| {
            let sd = sd.expect("faults handled above");
            ScatterRow {
                theta: p.theta(),
                lambda: p.lambda,
                re_T: sd.t.re,
                im_T: sd.t.im,
                re_R: sd.r.re,
                im_R: sd.r.im,
                re_L: sd.l.re,
                im_L: sd.l.im,
                unitarity: sd.unitarity_right(),
            }
        })
        .collect();

    let body = match config.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut out = String::from("theta,lambda,re_T,im_T,re_R,im_R,re_L,im_L,unitarity\n");
            for r in &rows {
                let fields = [
                    r.theta,
                    r.lambda,
                    r.re_T,
                    r.im_T,
                    r.re_R,
                    r.im_R,
                    r.re_L,
                    r.im_L,
                    r.unitarity,
                ];
                let line: Vec<String> = fields.iter().map(|&x| fmt_f64(x)).collect();
                let _ = writeln!(out, "{}", line.join(","));
            }
            out
        }
    };
    emit(config, &body, err)
}

/// Fragments used by `factorize`; the hidden negative control breaks the
/// padding of the first fragment just right of its interval.
fn fragments_for(seq: &CoefficientSequence, frag: &Fragmentation, corrupt: bool) -> Result<Vec<CoefficientSequence>> {
    let mut parts = fragment(seq, frag);
    if corrupt {
        let site = frag.breakpoints()[0] + 1;
        let lim = seq.limits();
        parts[0] = parts[0].with_site(
            site,
            Coefficients {
                a: lim.a_inf,
                b: lim.b_inf + 0.25,
                w: lim.w_inf,
            },
        )?;
    }
    Ok(parts)
}

pub fn run_factorize(config: &RunConfig, err: &mut dyn Write) -> ExitStatus {
    let frag = match fragmentation(config, err) {
        Ok(Some(f)) => f,
        Ok(None) => {
            let _ = writeln!(err, "error: factorize requires --breakpoints");
            return ExitStatus::InputError;
        }
        Err(s) => return s,
    };
    let (seq, grid) = match prepare(config, err) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let parts = match fragments_for(&seq, &frag, config.corrupt_padding) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return ExitStatus::InputError;
        }
    };
    let results: Vec<Result<f64>> = grid
        .points
        .par_iter()
        .map(|p| {
            factorization_check_fragments(&seq, &parts, p.z, config.tolerance)
                .map(|r| r.residual)
                .map_err(|e| e.at_theta(p.theta()))
        })
        .collect();
    if report_faults(&results, err) {
        return ExitStatus::NumericalFault;
    }
    let rows: Vec<FactorizeRow> = grid
        .points
        .iter()
        .zip(&results)
        .map(|(p, r)| FactorizeRow {
            theta: p.theta(),
            lambda: p.lambda,
            residual: *r.as_ref().expect("faults handled above"),
        })
        .collect();
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let summary = CheckSummary::new("factorization", worst, config.tolerance);

    let body = match config.format {
        Format::Json => {
            serde_json::to_string_pretty(&FactorizeJson {
                points: &rows,
                summary: &summary,
            })
            .expect("report serializes")
                + "\n"
        }
        Format::Csv => {
            let _ = writeln!(err, "{}", serde_json::to_string(&summary).expect("summary serializes"));
            let mut out = String::from("theta,lambda,residual\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(r.theta),
                    fmt_f64(r.lambda),
                    fmt_f64(r.residual)
                );
            }
            out
        }
    };
    let status = emit(config, &body, err);
    if status != ExitStatus::Pass {
        return status;
    }
    if summary.pass {
        ExitStatus::Pass
    } else {
        ExitStatus::ToleranceFailure
    }
}

/// Named residual maxima at one spectral point.
type PointChecks = Vec<(String, f64)>;

fn identities_at(
    seq: &CoefficientSequence,
    frag: Option<&Fragmentation>,
    point: &SpectralPoint,
) -> Result<PointChecks> {
    let z = point.z;
    let zi = z.inv();
    let mut out: PointChecks = Vec::new();

    let fl = jost_left(seq, z)?;
    let fr = jost_right(seq, z)?;
    let gl = conjugate_solution(seq, z, Side::Left)?;
    let gr = conjugate_solution(seq, z, Side::Right)?;
    let fl_inv = jost_left(seq, zi)?;
    let fr_inv = jost_right(seq, zi)?;
    let conjugation = |(n, v): (i64, Complex64), other: &LatticeSolution| {
        let w = other.get(n).unwrap_or_default();
        relative_residual((w - v.conj()).norm(), v.norm().max(w.norm()))
    };
    let conj = fl
        .iter()
        .map(|p| conjugation(p, &fl_inv))
        .chain(fr.iter().map(|p| conjugation(p, &fr_inv)))
        .fold(0.0, f64::max);
    out.push(("jost_conjugation".into(), conj));

    let recursion = [&fl, &fr, &gl, &gr]
        .iter()
        .map(|s| equation_residual(seq, s))
        .fold(0.0, f64::max);
    out.push(("recursion_residual".into(), recursion));

    let mut constancy: f64 = 0.0;
    for (p, q) in [(&fl, &fr), (&fl, &gl), (&fr, &gr), (&fl, &gr), (&fr, &gl)] {
        constancy = constancy.max(wronskian_constancy_check(seq, p, q)?);
    }
    out.push(("wronskian_constancy".into(), constancy));
    let free_w = seq.limits().a_inf * (zi - z);
    let n0 = seq.window().n_min;
    let (w, magnitude) = wronskian_with_magnitude(seq, &fl, &gl, n0)?;
    out.push((
        "left_free_wronskian".into(),
        relative_residual((w - free_w).norm(), magnitude),
    ));

    let sd = extract_scattering(seq, z)?;
    let sd_inv = extract_scattering(seq, zi)?;
    let sym = (sd_inv.t - sd.t.conj())
        .norm()
        .max((sd_inv.r - sd.r.conj()).norm())
        .max((sd_inv.l - sd.l.conj()).norm());
    out.push(("coefficient_conjugation".into(), sym));
    let ids = check_identities(&sd, &sd_inv);
    out.push(("left_unitarity".into(), ids.left_unitarity));
    out.push(("right_unitarity".into(), ids.right_unitarity));
    out.push(("reflection_exchange".into(), ids.reflection_exchange));
    out.push(("transmission_square".into(), ids.transmission_square));
    out.push((
        "energy_balance".into(),
        (sd.unitarity_right() - 1.0)
            .abs()
            .max((sd.unitarity_left() - 1.0).abs()),
    ));
    let lambda = transition_matrix(&sd, &sd_inv);
    out.push(("transition_determinant".into(), (lambda.det() - 1.0).norm()));

    if let Some(frag) = frag {
        let parts = fragment(seq, frag);
        let fac = factorization_check_fragments(seq, &parts, z, f64::INFINITY)?;
        out.push(("factorization".into(), fac.residual));
        for &n1 in frag.breakpoints() {
            out.push((
                format!("right_fragment_expansion@{n1}"),
                right_fragment_expansion_check(seq, n1, z)?.max(),
            ));
            out.push((
                format!("left_fragment_expansion@{n1}"),
                left_fragment_expansion_check(seq, n1, z)?.max(),
            ));
            out.push((
                format!("junction_plane_waves@{n1}"),
                junction_planewave_check(seq, n1, z)?.max(),
            ));
            out.push((
                format!("inverse_algebra@{n1}"),
                inverse_algebra_check_at(seq, n1, z)?.max(),
            ));
        }
    }
    Ok(out)
}

pub fn run_identities(config: &RunConfig, err: &mut dyn Write) -> ExitStatus {
    let frag = match fragmentation(config, err) {
        Ok(f) => f,
        Err(s) => return s,
    };
    let (seq, grid) = match prepare(config, err) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let bonds = seq.nonpositive_bonds();
    if !bonds.is_empty() || seq.limits().a_inf < 0.0 {
        let _ = writeln!(
            err,
            "warning: nonpositive bond coefficients present (a_inf = {}, sites {:?}); junction checks use only a(n) != 0",
            seq.limits().a_inf,
            bonds
        );
    }
    let results: Vec<Result<PointChecks>> = grid
        .points
        .par_iter()
        .map(|p| identities_at(&seq, frag.as_ref(), p).map_err(|e: Error| e.at_theta(p.theta())))
        .collect();
    if report_faults(&results, err) {
        return ExitStatus::NumericalFault;
    }

    let mut summaries: Vec<CheckSummary> = Vec::new();
    for checks in results.iter().map(|r| r.as_ref().expect("faults handled above")) {
        for (k, (name, value)) in checks.iter().enumerate() {
            match summaries.get_mut(k) {
                Some(s) => s.max_residual = s.max_residual.max(*value),
                None => summaries.push(CheckSummary::new(name.clone(), *value, config.tolerance)),
            }
        }
    }
    for s in &mut summaries {
        s.pass = s.max_residual <= s.tolerance;
    }

    let body = match config.format {
        Format::Json => serde_json::to_string_pretty(&summaries).expect("report serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("check,max_residual,tolerance,pass\n");
            for s in &summaries {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    s.check,
                    fmt_f64(s.max_residual),
                    fmt_f64(s.tolerance),
                    s.pass
                );
            }
            out
        }
    };
    let status = emit(config, &body, err);
    if status != ExitStatus::Pass {
        return status;
    }
    if summaries.iter().all(|s| s.pass) {
        ExitStatus::Pass
    } else {
        ExitStatus::ToleranceFailure
    }
}
