//! Bisection for the crossing point of the interface.
//!
//! The crossing time through `(y, 0)` is
//! `phi(y) = gauge_F0((y, 0) - x0) + gauge_F1(x1 - (y, 0))`, a convex function
//! of `y`. Its subdifferential at `y` is the set of x-components of
//! `zeta0 + zeta1` with `zeta0` in the exposed face of `F0` at the incoming
//! direction and `-zeta1` in the exposed face of `F1` at the outgoing one.
//! The solver evaluates that whole range as an interval and bisects on its
//! position relative to `[-epsilon, epsilon]`, so a polygon vertex never
//! yields a wrong-signed residual.

use std::fmt;

use thiserror::Error;

use crate::geometry::{GeometryError, NormalFace, Vec2, VelocitySet};

pub const DEFAULT_EPSILON: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Upper bound on bracket doublings per side.
pub const MAX_DOUBLINGS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("x0 must satisfy x0_y < 0 (got {0})")]
    X0NotBelow(Vec2),
    #[error("x1 must satisfy x1_y > 0 (got {0})")]
    X1NotAbove(Vec2),
    #[error("endpoints must be finite")]
    NonFinite,
    #[error("epsilon must be positive and finite (got {0})")]
    BadEpsilon(f64),
    #[error("max_iter must be positive")]
    BadMaxIter,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("BracketExpansionFailed: no sign change after {doublings} doublings toward the {side}")]
    BracketExpansionFailed { side: &'static str, doublings: usize },
    #[error("NotIsotropic: classical Snell angles need two balls")]
    NotIsotropic,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Two-medium crossing problem with the interface on the x-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct ElvisProblem {
    x0: Vec2,
    x1: Vec2,
    f0: VelocitySet,
    f1: VelocitySet,
    epsilon: f64,
    max_iter: usize,
}

impl ElvisProblem {
    /// Builds a problem with the default residual tolerance and iteration cap.
    pub fn new(x0: Vec2, x1: Vec2, f0: VelocitySet, f1: VelocitySet) -> Result<Self, ProblemError> {
        if !x0.is_finite() || !x1.is_finite() {
            return Err(ProblemError::NonFinite);
        }
        if !(x0.y < 0.0) {
            return Err(ProblemError::X0NotBelow(x0));
        }
        if !(x1.y > 0.0) {
            return Err(ProblemError::X1NotAbove(x1));
        }
        Ok(Self {
            x0,
            x1,
            f0,
            f1,
            epsilon: DEFAULT_EPSILON,
            max_iter: DEFAULT_MAX_ITER,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self, ProblemError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(ProblemError::BadEpsilon(epsilon));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Result<Self, ProblemError> {
        if max_iter == 0 {
            return Err(ProblemError::BadMaxIter);
        }
        self.max_iter = max_iter;
        Ok(self)
    }

    pub fn x0(&self) -> Vec2 {
        self.x0
    }

    pub fn x1(&self) -> Vec2 {
        self.x1
    }

    pub fn f0(&self) -> &VelocitySet {
        &self.f0
    }

    pub fn f1(&self) -> &VelocitySet {
        &self.f1
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    /// Displacements travelled in each medium when crossing at `(y, 0)`.
    pub fn legs(&self, y: f64) -> (Vec2, Vec2) {
        let p = Vec2::on_axis(y);
        (p - self.x0, self.x1 - p)
    }

    /// Total travel time when crossing the interface at `(y, 0)`.
    pub fn objective(&self, y: f64) -> f64 {
        let (a, b) = self.legs(y);
        self.f0.gauge(a) + self.f1.gauge(b)
    }

    /// Interval-valued Snell residual at `y`.
    pub fn delta(&self, y: f64) -> Result<DeltaEval, GeometryError> {
        let (a, b) = self.legs(y);
        let face0 = self.f0.normal_face(a)?;
        let face1 = self.f1.normal_face(b)?.negated();
        let (a0, b0) = face0.x_range();
        let (a1, b1) = face1.x_range();
        Ok(DeltaEval {
            interval: DeltaInterval {
                lo: a0 + a1,
                hi: b0 + b1,
            },
            face0,
            face1,
        })
    }
}

/// Range of `x(zeta0 + zeta1)` over all admissible multiplier selections.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DeltaInterval {
    pub fn meets_tolerance(&self, eps: f64) -> bool {
        self.lo <= eps && self.hi >= -eps
    }

    pub fn strictly_contains_zero(&self) -> bool {
        self.lo < 0.0 && 0.0 < self.hi
    }

    /// The point of the interval closest to zero.
    pub fn nearest_to_zero(&self) -> f64 {
        0f64.clamp(self.lo, self.hi)
    }
}

/// Residual interval together with the faces it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaEval {
    pub interval: DeltaInterval,
    /// Candidates for `zeta0`.
    pub face0: NormalFace,
    /// Candidates for `zeta1` (already negated).
    pub face1: NormalFace,
}

impl DeltaEval {
    /// Picks `zeta0`, `zeta1` from the faces with `x(zeta0 + zeta1)` equal to
    /// `target`, which must lie in the interval.
    pub fn select(&self, target: f64) -> (Vec2, Vec2) {
        let DeltaInterval { lo, hi } = self.interval;
        let lambda = if hi > lo {
            ((target - lo) / (hi - lo)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        let (a0, b0) = self.face0.x_range();
        let (a1, b1) = self.face1.x_range();
        (
            self.face0.point_with_x(a0 + lambda * (b0 - a0)),
            self.face1.point_with_x(a1 + lambda * (b1 - a1)),
        )
    }

    /// Midpoints of both faces.
    pub fn midpoint_selection(&self) -> (Vec2, Vec2) {
        (self.face0.midpoint(), self.face1.midpoint())
    }
}

/// Why the iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The residual interval met `[-epsilon, epsilon]`.
    Converged,
    /// The residual vanishes inside a face: either zero lies strictly inside
    /// a non-degenerate residual interval, or both media are polygons seen
    /// through facet interiors, so the objective is locally flat and the
    /// returned crossing is one of many.
    ResidualZeroInFace,
    /// Iteration cap reached or the bracket shrank to a few ulps.
    MaxIterations,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::ResidualZeroInFace => "residual_zero_in_face",
            Termination::MaxIterations => "max_iterations",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Status {
    pub termination: Termination,
    /// The initial projection bracket had to be widened first.
    pub bracket_expanded: bool,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bracket_expanded {
            f.write_str("bracket_expanded+")?;
        }
        f.write_str(self.termination.as_str())
    }
}

/// What the iteration did after evaluating a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// Residual positive: keep the left half.
    Left,
    /// Residual negative: keep the right half.
    Right,
    Stop(Termination),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub l: f64,
    pub r: f64,
    pub y: f64,
    pub d: f64,
    pub delta: DeltaInterval,
    pub step: Step,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BisectionTrace {
    pub rows: Vec<TraceRow>,
    /// Number of doublings applied while validating the bracket.
    pub doublings: usize,
}

impl BisectionTrace {
    /// Bracket width of the first row.
    pub fn initial_width(&self) -> f64 {
        self.rows.first().map_or(0.0, |r| r.d)
    }
}

/// Outcome of a solve. A stop at a polygon vertex reports the exact kink
/// abscissa when that point is in the final bracket and meets the tolerance,
/// so `y` may differ from the last trace row.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub y: f64,
    pub time: f64,
    pub v0: Vec2,
    pub v1: Vec2,
    pub zeta0: Vec2,
    pub zeta1: Vec2,
    /// Faces the multipliers were selected from; `face1` holds `zeta1`
    /// candidates.
    pub face0: NormalFace,
    pub face1: NormalFace,
    pub delta: DeltaInterval,
    pub iterations: usize,
    pub status: Status,
}

/// A bracket `[l, r]` on the interface certified to contain a minimizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub l: f64,
    pub r: f64,
    pub doublings: usize,
}

impl Bracket {
    pub fn expanded(&self) -> bool {
        self.doublings > 0
    }
}

/// Starts from the endpoint projections and widens outward until the
/// residual at `l` is not positive and the residual at `r` is not negative.
pub fn validated_bracket(problem: &ElvisProblem) -> Result<Bracket, SolverError> {
    let (p0, p1) = (problem.x0.x, problem.x1.x);
    let (mut l, mut r) = (p0.min(p1), p0.max(p1));
    let seed = problem.x0.y.abs().max(problem.x1.y);
    let widen = |fixed: f64, moving: f64| {
        let w = (fixed - moving).abs();
        if w > 0.0 {
            2.0 * w
        } else {
            seed
        }
    };

    let mut doublings = 0;
    let mut n = 0;
    while problem.delta(l)?.interval.lo > 0.0 {
        if n == MAX_DOUBLINGS {
            return Err(SolverError::BracketExpansionFailed {
                side: "left",
                doublings: n,
            });
        }
        l = r - widen(r, l);
        n += 1;
    }
    doublings += n;
    n = 0;
    while problem.delta(r)?.interval.hi < 0.0 {
        if n == MAX_DOUBLINGS {
            return Err(SolverError::BracketExpansionFailed {
                side: "right",
                doublings: n,
            });
        }
        r = l + widen(l, r);
        n += 1;
    }
    doublings += n;
    Ok(Bracket { l, r, doublings })
}

fn ulp(y: f64) -> f64 {
    let a = y.abs();
    a.next_up() - a
}

fn is_locally_flat(problem: &ElvisProblem, eval: &DeltaEval) -> bool {
    problem.f0.is_polygon()
        && problem.f1.is_polygon()
        && eval.face0.is_point()
        && eval.face1.is_point()
}

/// Runs the bisection and returns the result with its per-iteration trace.
///
/// The bracket keeps its left end and width; the width is halved exactly on
/// every step and `y` is always the midpoint of the current bracket.
pub fn solve(problem: &ElvisProblem) -> Result<(SolveResult, BisectionTrace), SolverError> {
    let eps = problem.epsilon;
    let (p0, p1) = (problem.x0.x, problem.x1.x);

    // Equal projections: the vertical crossing is the only bracket point.
    let bracket = if p0 == p1 && problem.delta(p0)?.interval.meets_tolerance(eps) {
        Bracket {
            l: p0,
            r: p0,
            doublings: 0,
        }
    } else {
        validated_bracket(problem)?
    };

    let mut trace = BisectionTrace {
        rows: Vec::new(),
        doublings: bracket.doublings,
    };
    let mut l = bracket.l;
    let mut d = bracket.r - bracket.l;
    let mut k = 0;
    loop {
        let y = l + 0.5 * d;
        let eval = problem.delta(y)?;
        let iv = eval.interval;
        let step = if iv.meets_tolerance(eps) {
            if iv.strictly_contains_zero() || is_locally_flat(problem, &eval) {
                Step::Stop(Termination::ResidualZeroInFace)
            } else {
                Step::Stop(Termination::Converged)
            }
        } else if k + 1 >= problem.max_iter || d < 4.0 * ulp(y) {
            Step::Stop(Termination::MaxIterations)
        } else if iv.lo > eps {
            Step::Left
        } else {
            Step::Right
        };
        trace.rows.push(TraceRow {
            k,
            l,
            r: l + d,
            y,
            d,
            delta: iv,
            step,
        });
        match step {
            Step::Left => d *= 0.5,
            Step::Right => {
                l = y;
                d *= 0.5;
            }
            Step::Stop(termination) => {
                let (y, eval) = snap_to_vertex(problem, y, eval, l, l + d)?;
                let result = finish(
                    problem,
                    y,
                    &eval,
                    k + 1,
                    Status {
                        termination,
                        bracket_expanded: bracket.expanded(),
                    },
                );
                return Ok((result, trace));
            }
        }
        k += 1;
    }
}

/// A stop next to a polygon vertex lands up to the vertex tolerance away from
/// the kink it detected. The kink abscissa, where the leg passes exactly
/// through that vertex, is computed directly and taken instead when it lies
/// in the bracket, still meets the residual test and is no slower.
fn snap_to_vertex(
    problem: &ElvisProblem,
    y: f64,
    eval: DeltaEval,
    l: f64,
    r: f64,
) -> Result<(f64, DeltaEval), GeometryError> {
    let (a, b) = problem.legs(y);
    let mut candidates = Vec::new();
    if !eval.face0.is_point() {
        if let Some(v) = problem.f0.touched_vertex(a).filter(|v| v.y > 0.0) {
            candidates.push(problem.x0.x - v.x * problem.x0.y / v.y);
        }
    }
    if !eval.face1.is_point() {
        if let Some(v) = problem.f1.touched_vertex(b).filter(|v| v.y > 0.0) {
            candidates.push(problem.x1.x - v.x * problem.x1.y / v.y);
        }
    }
    let mut best = (y, eval, problem.objective(y));
    for yk in candidates {
        if !(l <= yk && yk <= r) || yk == y {
            continue;
        }
        let ek = problem.delta(yk)?;
        let tk = problem.objective(yk);
        if ek.interval.meets_tolerance(problem.epsilon) && tk <= best.2 {
            best = (yk, ek, tk);
        }
    }
    Ok((best.0, best.1))
}

fn finish(problem: &ElvisProblem, y: f64, eval: &DeltaEval, iterations: usize, status: Status) -> SolveResult {
    let (a, b) = problem.legs(y);
    let g0 = problem.f0.gauge(a);
    let g1 = problem.f1.gauge(b);
    let (zeta0, zeta1) = eval.select(eval.interval.nearest_to_zero());
    SolveResult {
        y,
        time: g0 + g1,
        v0: a / g0,
        v1: b / g1,
        zeta0,
        zeta1,
        face0: eval.face0,
        face1: eval.face1,
        delta: eval.interval,
        iterations,
        status,
    }
}

/// Signed angles of incidence of the optimal velocities, measured from the
/// interface normal `(0, 1)` and positive when travelling toward `+x`.
pub fn classical_snell_angles(result: &SolveResult, problem: &ElvisProblem) -> Result<(f64, f64), SolverError> {
    match (&problem.f0, &problem.f1) {
        (VelocitySet::Ball(_), VelocitySet::Ball(_)) => Ok((
            result.v0.x.atan2(result.v0.y),
            result.v1.x.atan2(result.v1.y),
        )),
        _ => Err(SolverError::NotIsotropic),
    }
}
