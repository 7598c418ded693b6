//! Problem and sweep files.
//!
//! Both are JSON objects with exactly the keys listed on the structs below;
//! unknown keys are rejected so that typos such as `eps` surface as errors.

use serde::{Deserialize, Serialize};

use crate::geometry::{SetSpec, Vec2, VelocitySet};
use crate::solver::{ElvisProblem, DEFAULT_EPSILON, DEFAULT_MAX_ITER};

use super::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub x0: [f64; 2],
    pub x1: [f64; 2],
    #[serde(rename = "F0")]
    pub f0: SetSpec,
    #[serde(rename = "F1")]
    pub f1: SetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

/// Rectangle of targets `x1`, sampled on an `nx` by `ny` grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    fn axis(min: f64, max: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            min
        } else if i + 1 == n {
            max
        } else {
            min + (max - min) * i as f64 / (n - 1) as f64
        }
    }

    /// Grid nodes in row-major order: rows of constant y, x increasing.
    pub fn nodes(&self) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            let y = Self::axis(self.ymin, self.ymax, self.ny, j);
            for i in 0..self.nx {
                out.push(Vec2::new(Self::axis(self.xmin, self.xmax, self.nx, i), y));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub x0: [f64; 2],
    #[serde(rename = "F0")]
    pub f0: SetSpec,
    #[serde(rename = "F1")]
    pub f1: SetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    pub x1_grid: Grid,
}

fn validate_set(label: &str, spec: &SetSpec) -> Result<VelocitySet, CliError> {
    VelocitySet::validate(spec).map_err(|e| CliError::Validation(format!("{label}: {e}")))
}

fn build(
    x0: [f64; 2],
    x1: [f64; 2],
    f0: VelocitySet,
    f1: VelocitySet,
    epsilon: Option<f64>,
    max_iter: Option<usize>,
) -> Result<ElvisProblem, CliError> {
    let invalid = |e: crate::solver::ProblemError| CliError::Validation(e.to_string());
    ElvisProblem::new(x0.into(), x1.into(), f0, f1)
        .and_then(|p| p.with_epsilon(epsilon.unwrap_or(DEFAULT_EPSILON)))
        .and_then(|p| p.with_max_iter(max_iter.unwrap_or(DEFAULT_MAX_ITER)))
        .map_err(invalid)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    /// Validates into a solver problem. `epsilon` overrides the file value.
    pub fn to_problem(&self, epsilon: Option<f64>) -> Result<ElvisProblem, CliError> {
        let f0 = validate_set("F0", &self.f0)?;
        let f1 = validate_set("F1", &self.f1)?;
        build(self.x0, self.x1, f0, f1, epsilon.or(self.epsilon), self.max_iter)
    }
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let g = spec.x1_grid;
        if !(g.ymin > 0.0) {
            return Err(CliError::Validation(format!(
                "x1_grid.ymin must be positive (got {})",
                g.ymin
            )));
        }
        if g.nx == 0 || g.ny == 0 {
            return Err(CliError::Validation("x1_grid.nx and x1_grid.ny must be at least 1".into()));
        }
        if !(g.xmax >= g.xmin && g.ymax >= g.ymin) {
            return Err(CliError::Validation("x1_grid bounds are reversed".into()));
        }
        Ok(spec)
    }

    /// Validated problems, one per grid node in row-major order.
    pub fn problems(&self, epsilon: Option<f64>) -> Result<Vec<(Vec2, ElvisProblem)>, CliError> {
        let f0 = validate_set("F0", &self.f0)?;
        let f1 = validate_set("F1", &self.f1)?;
        self.x1_grid
            .nodes()
            .into_iter()
            .map(|x1| {
                build(
                    self.x0,
                    x1.into(),
                    f0.clone(),
                    f1.clone(),
                    epsilon.or(self.epsilon),
                    self.max_iter,
                )
                .map(|p| (x1, p))
            })
            .collect()
    }
}
