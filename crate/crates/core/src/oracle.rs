//! Derivative-free reference path used to check the solver and the closed
//! forms.
//!
//! Nothing here looks at normal faces or residuals. The minimizer comes from
//! a grid scan plus golden-section search on the crossing time alone, and
//! the crossing time is evaluated in double-double arithmetic so that smooth
//! minima can be located well below the square root of f64 epsilon. Gauges
//! are rebuilt from raw set parameters, not from the solver's closed forms.

use thiserror::Error;
use twofloat::TwoFloat;

use crate::geometry::{GeometryError, Vec2, VelocitySet};
use crate::solver::ElvisProblem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid_points must be at least 16 (got {0})")]
    TooFewGridPoints(usize),
    #[error("golden_tol must be positive (got {0})")]
    BadGoldenTol(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    grid_points: usize,
    golden_tol: f64,
    membership_samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            golden_tol: 1e-12,
            membership_samples: 10_000,
        }
    }
}

impl OracleConfig {
    pub fn new(grid_points: usize, golden_tol: f64, membership_samples: usize) -> Result<Self, OracleError> {
        if grid_points < 16 {
            return Err(OracleError::TooFewGridPoints(grid_points));
        }
        if !(golden_tol > 0.0) {
            return Err(OracleError::BadGoldenTol(golden_tol));
        }
        Ok(Self {
            grid_points,
            golden_tol,
            membership_samples,
        })
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn golden_tol(&self) -> f64 {
        self.golden_tol
    }

    pub fn membership_samples(&self) -> usize {
        self.membership_samples
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleMinimum {
    pub y_star: f64,
    pub phi_star: f64,
    /// Grid abscissae spanning a detected flat minimum, if any.
    pub flat: Option<(f64, f64)>,
    /// Search interval after outward expansion.
    pub bracket: (f64, f64),
}

impl OracleMinimum {
    /// Width of the detected flat region, zero for an isolated minimum.
    pub fn flat_width(&self) -> f64 {
        self.flat.map_or(0.0, |(a, b)| b - a)
    }
}

type Dd = TwoFloat;

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

/// Gauge of the displacement `(dx, dy)` in double-double precision.
fn gauge_dd(set: &VelocitySet, dx: Dd, dy: Dd) -> Dd {
    match set {
        VelocitySet::Ball(b) => dx.hypot(dy) / b.radius(),
        VelocitySet::Ellipse(e) => {
            let (a, b) = e.semi_axes();
            let (c, s) = e.rotation_cs();
            let wx = dx * c + dy * s;
            let wy = dy * c - dx * s;
            (wx / a).hypot(wy / b)
        }
        VelocitySet::Polygon(p) => {
            // edge i: <m_i, u> <= cross(v_i, v_{i+1}) with m_i the unnormalized
            // outward normal, so <m_i, u> = cross(u, v_{i+1} - v_i)
            let vs = p.vertices();
            let n = vs.len();
            let mut best = dd(0.0);
            for i in 0..n {
                let (a, b) = (vs[i], vs[(i + 1) % n]);
                let ex = Dd::new_add(b.x, -a.x);
                let ey = Dd::new_add(b.y, -a.y);
                let offset = Dd::new_mul(a.x, b.y) - Dd::new_mul(a.y, b.x);
                let val = (dx * ey - dy * ex) / offset;
                if val > best {
                    best = val;
                }
            }
            best
        }
    }
}

fn objective_dd(problem: &ElvisProblem, y: f64) -> Dd {
    let (x0, x1) = (problem.x0(), problem.x1());
    let g0 = gauge_dd(problem.f0(), Dd::new_add(y, -x0.x), dd(-x0.y));
    let g1 = gauge_dd(problem.f1(), Dd::new_add(x1.x, -y), dd(x1.y));
    g0 + g1
}

/// Crossing time at `(y, 0)` evaluated in double-double precision, rounded
/// to f64.
pub fn objective(problem: &ElvisProblem, y: f64) -> f64 {
    objective_dd(problem, y).hi()
}

/// Widens `[l, r]` outward until stepping further out no longer decreases
/// the objective. By convexity a minimizer then lies inside.
fn search_interval(problem: &ElvisProblem) -> (f64, f64) {
    let (p0, p1) = (problem.x0().x, problem.x1().x);
    let (l, r) = (p0.min(p1), p0.max(p1));
    let seed = if r > l {
        r - l
    } else {
        problem.x0().y.abs().max(problem.x1().y)
    };
    let phi = |y| objective_dd(problem, y);

    let mut left = l;
    let mut w = seed;
    while phi(left - w) < phi(left) {
        left -= w;
        w *= 2.0;
    }
    let lo = left - w;

    let mut right = r;
    w = seed;
    while phi(right + w) < phi(right) {
        right += w;
        w *= 2.0;
    }
    (lo, right + w)
}

/// Brute-force minimizer of the crossing time: uniform grid over an
/// outward-expanded interval, then golden-section refinement of the best
/// cell.
pub fn minimize_objective(problem: &ElvisProblem, cfg: &OracleConfig) -> OracleMinimum {
    let (lo, hi) = search_interval(problem);
    let n = cfg.grid_points;
    let step = (hi - lo) / (n - 1) as f64;
    let ys: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect();
    let vals: Vec<Dd> = ys.iter().map(|&y| objective_dd(problem, y)).collect();

    let mut best = 0;
    for i in 1..n {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    let floor = vals[best] + 1e-12;
    let (mut a_idx, mut b_idx) = (best, best);
    while a_idx > 0 && vals[a_idx - 1] <= floor {
        a_idx -= 1;
    }
    while b_idx + 1 < n && vals[b_idx + 1] <= floor {
        b_idx += 1;
    }
    // two equal neighbours straddle any symmetric minimum; a plateau needs three
    let flat = (b_idx >= a_idx + 2).then(|| (ys[a_idx], ys[b_idx]));

    let a = ys[best.saturating_sub(1)];
    let b = ys[(best + 1).min(n - 1)];
    let y_star = golden_section(|y| objective_dd(problem, y), a, b, cfg.golden_tol);
    let phi_star = objective_dd(problem, y_star);
    // golden-section is only guaranteed to bracket; never report worse than the grid
    let (y_star, phi_star) = if vals[best] < phi_star {
        (ys[best], vals[best])
    } else {
        (y_star, phi_star)
    };

    OracleMinimum {
        y_star,
        phi_star: phi_star.hi(),
        flat,
        bracket: (lo, hi),
    }
}

fn golden_section<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> Dd,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Membership in the set through its defining inequalities.
pub fn contains(set: &VelocitySet, u: Vec2) -> bool {
    match set {
        VelocitySet::Ball(b) => u.x * u.x + u.y * u.y <= b.radius() * b.radius(),
        VelocitySet::Ellipse(e) => {
            let (a, b) = e.semi_axes();
            let w = e.to_local(u);
            (w.x / a) * (w.x / a) + (w.y / b) * (w.y / b) <= 1.0
        }
        VelocitySet::Polygon(p) => {
            let vs = p.vertices();
            let n = vs.len();
            (0..n).all(|i| {
                let a = vs[i];
                (vs[(i + 1) % n] - a).cross(u - a) >= 0.0
            })
        }
    }
}

/// Gauge by bisection on `t` in the predicate `v / t` in F.
pub fn gauge_by_membership(set: &VelocitySet, v: Vec2, _cfg: &OracleConfig) -> Result<f64, GeometryError> {
    if v.is_zero() || !v.is_finite() {
        return Err(GeometryError::ZeroVector);
    }
    let inside = |t: f64| contains(set, v / t);
    let (mut lo, mut hi) = (0.0, 1.0);
    if inside(hi) {
        while inside(hi * 0.5) {
            hi *= 0.5;
        }
        lo = hi * 0.5;
    } else {
        while !inside(hi) {
            lo = hi;
            hi *= 2.0;
        }
    }
    // run to full f64 resolution, far below the 1e-12 target
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Support function estimated from `membership_samples` boundary points
/// located with [`gauge_by_membership`]. Accurate to roughly the angular
/// sampling step times the set's radius.
pub fn support_by_sampling(set: &VelocitySet, zeta: Vec2, cfg: &OracleConfig) -> f64 {
    let n = cfg.membership_samples.max(1);
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            let dir = Vec2::new(t.cos(), t.sin());
            let g = gauge_by_membership(set, dir, cfg).expect("unit direction is nonzero");
            zeta.dot(dir / g)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> VelocitySet {
        VelocitySet::polygon(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(15, 1e-12, 10).is_err());
        assert!(OracleConfig::new(16, 0.0, 10).is_err());
        assert!(OracleConfig::new(16, 1e-9, 10).is_ok());
    }

    #[test]
    fn membership_gauges() {
        let cfg = OracleConfig::default();
        let b = VelocitySet::ball(2.0).unwrap();
        assert!((gauge_by_membership(&b, Vec2::new(0.0, 3.0), &cfg).unwrap() - 1.5).abs() < 1e-12);
        let e = VelocitySet::ellipse(1.0, 0.5, 0.0).unwrap();
        let g = gauge_by_membership(&e, Vec2::new(1.0, 1.0), &cfg).unwrap();
        assert!((g - 5f64.sqrt()).abs() < 1e-10);
        let g = gauge_by_membership(&square(), Vec2::new(3.0, 2.0), &cfg).unwrap();
        assert!((g - 3.0).abs() < 1e-10);
        let tiny = gauge_by_membership(&square(), Vec2::new(1e-7, 0.0), &cfg).unwrap();
        assert!((tiny - 1e-7).abs() < 1e-18);
        assert_eq!(
            gauge_by_membership(&square(), Vec2::ZERO, &cfg),
            Err(GeometryError::ZeroVector)
        );
    }

    #[test]
    fn double_double_gauge_matches_closed_form() {
        let sets = [
            VelocitySet::ball(1.7).unwrap(),
            VelocitySet::ellipse(2.0, 0.3, 0.9).unwrap(),
            VelocitySet::polygon(&[[2.0, 0.0], [0.0, 1.0], [-1.0, 0.5], [-0.5, -1.0]]).unwrap(),
        ];
        for s in &sets {
            for k in 0..50 {
                let t = k as f64 * 0.37;
                let v = Vec2::new(t.cos(), t.sin()) * (0.5 + t);
                let g = gauge_dd(s, dd(v.x), dd(v.y)).hi();
                assert!((g - s.gauge(v)).abs() <= 1e-14 * g.max(1.0), "{s:?} {v}");
            }
        }
    }

    #[test]
    fn symmetric_ball_minimum() {
        let p = ElvisProblem::new(
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, 1.0),
            VelocitySet::ball(1.0).unwrap(),
            VelocitySet::ball(1.0).unwrap(),
        )
        .unwrap();
        let m = minimize_objective(&p, &OracleConfig::default());
        assert!(m.y_star.abs() < 1e-10);
        assert!((m.phi_star - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.flat, None);
    }

    #[test]
    fn golden_section_on_a_kink() {
        let y = golden_section(|y| dd((y - 0.3).abs()), -1.0, 2.0, 1e-13);
        assert!((y - 0.3).abs() < 1e-12);
    }

    #[test]
    fn sampled_support_of_ellipse() {
        let e = VelocitySet::ellipse(2.0, 1.0, 0.0).unwrap();
        let cfg = OracleConfig::default();
        assert!((support_by_sampling(&e, Vec2::new(0.0, 1.0), &cfg) - 1.0).abs() < 1e-9);
    }
}
