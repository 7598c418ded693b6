//! Command implementations behind the `elvis` binary.
//!
//! Every command writes its report to the supplied writer and its data to
//! CSV files with a mandatory header, comma separators and `\n` line
//! endings. Floats in CSV files use 17 significant digits.

mod files;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::solver::{self, BisectionTrace, ElvisProblem, SolveResult, SolverError};

pub use files::{Grid, ProblemFile, SweepSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid problem: {0}")]
    Validation(String),
    #[error("solver error: {0}")]
    Solver(#[from] SolverError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

/// Formats a float for CSV output.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_problem(path: &Path, epsilon: Option<f64>) -> Result<ElvisProblem, CliError> {
    ProblemFile::parse(&read(path)?)?.to_problem(epsilon)
}

#[derive(Serialize)]
struct SolveReport {
    y: f64,
    time: f64,
    v0: [f64; 2],
    v1: [f64; 2],
    zeta0: [f64; 2],
    zeta1: [f64; 2],
    delta: [f64; 2],
    iterations: usize,
    status: String,
}

impl From<&SolveResult> for SolveReport {
    fn from(r: &SolveResult) -> Self {
        Self {
            y: r.y,
            time: r.time,
            v0: r.v0.into(),
            v1: r.v1.into(),
            zeta0: r.zeta0.into(),
            zeta1: r.zeta1.into(),
            delta: [r.delta.lo, r.delta.hi],
            iterations: r.iterations,
            status: r.status.to_string(),
        }
    }
}

pub fn write_trace<W: Write>(trace: &BisectionTrace, mut w: W) -> io::Result<()> {
    writeln!(w, "k,l,r,y,d,delta_lo,delta_hi")?;
    for row in &trace.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.k,
            fmt_float(row.l),
            fmt_float(row.r),
            fmt_float(row.y),
            fmt_float(row.d),
            fmt_float(row.delta.lo),
            fmt_float(row.delta.hi)
        )?;
    }
    Ok(())
}

/// `elvis solve <problem> [--trace <csv>]`
pub fn cmd_solve<W: Write>(
    problem_path: &Path,
    trace_path: Option<&Path>,
    epsilon: Option<f64>,
    out: &mut W,
) -> Result<(), CliError> {
    let problem = load_problem(problem_path, epsilon)?;
    let (result, trace) = solver::solve(&problem)?;
    if let Some(path) = trace_path {
        let mut buf = Vec::new();
        write_trace(&trace, &mut buf)?;
        fs::write(path, buf)?;
    }
    let report = serde_json::to_string_pretty(&SolveReport::from(&result)).expect("report serializes");
    writeln!(out, "{report}")?;
    Ok(())
}

#[derive(Serialize)]
struct CurveReport {
    bracket: [f64; 2],
    root_interval: [f64; 2],
    samples: usize,
}

/// `elvis delta-curve <problem> --samples N --out <csv>`
///
/// Samples the residual interval uniformly over the validated bracket and
/// reports the narrowest sampled interval known to contain a zero: from the
/// last sample whose residual is entirely negative to the first sample whose
/// residual is entirely positive.
pub fn cmd_delta_curve<W: Write>(
    problem_path: &Path,
    samples: usize,
    out_csv: &Path,
    epsilon: Option<f64>,
    out: &mut W,
) -> Result<(), CliError> {
    if samples < 2 {
        return Err(CliError::Validation(format!("--samples must be at least 2 (got {samples})")));
    }
    let problem = load_problem(problem_path, epsilon)?;
    let bracket = solver::validated_bracket(&problem)?;
    let (l, r) = (bracket.l, bracket.r);
    let ys: Vec<f64> = (0..samples)
        .map(|i| {
            if i + 1 == samples {
                r
            } else {
                l + (r - l) * i as f64 / (samples - 1) as f64
            }
        })
        .collect();

    let mut csv = String::from("y,delta_lo,delta_hi\n");
    let mut last_negative = 0;
    let mut first_positive = None;
    for (i, &y) in ys.iter().enumerate() {
        let d = problem.delta(y).map_err(SolverError::from)?.interval;
        if d.hi < 0.0 {
            last_negative = i;
        }
        if d.lo > 0.0 && first_positive.is_none() {
            first_positive = Some(i);
        }
        csv.push_str(&format!("{},{},{}\n", fmt_float(y), fmt_float(d.lo), fmt_float(d.hi)));
    }
    fs::write(out_csv, csv)?;

    let report = CurveReport {
        bracket: [l, r],
        root_interval: [ys[last_negative], ys[first_positive.unwrap_or(samples - 1)]],
        samples,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    Ok(())
}

/// Solves every node of a sweep; rows keep the grid's row-major order.
pub fn sweep_rows(spec: &SweepSpec, epsilon: Option<f64>) -> Result<Vec<SweepRow>, CliError> {
    let problems = spec.problems(epsilon)?;
    Ok(problems
        .par_iter()
        .map(|(x1, p)| SweepRow {
            x1: [x1.x, x1.y],
            outcome: solver::solve(p).map(|(r, _)| r),
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub x1: [f64; 2],
    pub outcome: Result<SolveResult, SolverError>,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        let [x, y] = self.x1;
        match &self.outcome {
            Ok(r) => format!(
                "{},{},{},{},{},{}\n",
                fmt_float(x),
                fmt_float(y),
                fmt_float(r.y),
                fmt_float(r.time),
                r.status,
                r.iterations
            ),
            Err(e) => {
                let token = match e {
                    SolverError::BracketExpansionFailed { .. } => "bracket_expansion_failed",
                    SolverError::NotIsotropic => "not_isotropic",
                    SolverError::Geometry(_) => "geometry_error",
                };
                format!(
                    "{},{},{},{},{token},0\n",
                    fmt_float(x),
                    fmt_float(y),
                    fmt_float(f64::NAN),
                    fmt_float(f64::NAN)
                )
            }
        }
    }
}

/// `elvis sweep <spec> --out <csv>`
pub fn cmd_sweep<W: Write>(
    sweep_path: &Path,
    out_csv: &Path,
    epsilon: Option<f64>,
    out: &mut W,
) -> Result<(), CliError> {
    let spec = SweepSpec::parse(&read(sweep_path)?)?;
    let rows = sweep_rows(&spec, epsilon)?;
    let mut csv = String::from("x1x,x1y,y,time,status,iterations\n");
    for row in &rows {
        csv.push_str(&row.csv_line());
    }
    fs::write(out_csv, csv)?;

    let failed: Vec<&SweepRow> = rows.iter().filter(|r| r.outcome.is_err()).collect();
    writeln!(out, "nodes: {}, failed: {}", rows.len(), failed.len())?;
    if failed.len() == rows.len() {
        if let Some(Err(e)) = failed.first().map(|r| r.outcome.clone()) {
            return Err(CliError::Solver(e));
        }
    }
    Ok(())
}

/// `elvis validate <problem>`: one report line per check, failing with the
/// first violated invariant.
pub fn cmd_validate<W: Write>(problem_path: &Path, epsilon: Option<f64>, out: &mut W) -> Result<(), CliError> {
    let file = ProblemFile::parse(&read(problem_path)?)?;
    let mut checks: Vec<(&str, Result<(), String>)> = Vec::new();
    let set_check = |spec| {
        crate::geometry::VelocitySet::validate(spec)
            .map(|_| ())
            .map_err(|e| e.to_string())
    };
    checks.push(("F0", set_check(&file.f0)));
    checks.push(("F1", set_check(&file.f1)));
    checks.push((
        "x0",
        if file.x0[1] < 0.0 && file.x0.iter().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err("x0 must satisfy x0_y < 0".into())
        },
    ));
    checks.push((
        "x1",
        if file.x1[1] > 0.0 && file.x1.iter().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err("x1 must satisfy x1_y > 0".into())
        },
    ));
    let eps = epsilon.or(file.epsilon).unwrap_or(solver::DEFAULT_EPSILON);
    checks.push((
        "epsilon",
        if eps > 0.0 && eps.is_finite() {
            Ok(())
        } else {
            Err(format!("epsilon must be positive and finite (got {eps})"))
        },
    ));
    checks.push((
        "max_iter",
        match file.max_iter {
            Some(0) => Err("max_iter must be positive".into()),
            _ => Ok(()),
        },
    ));

    let mut first_failure = None;
    for (name, check) in &checks {
        match check {
            Ok(()) => writeln!(out, "ok    {name}")?,
            Err(msg) => {
                writeln!(out, "FAIL  {name}: {msg}")?;
                first_failure.get_or_insert_with(|| format!("{name}: {msg}"));
            }
        }
    }
    match first_failure {
        Some(msg) => Err(CliError::Validation(msg)),
        None => Ok(()),
    }
}
