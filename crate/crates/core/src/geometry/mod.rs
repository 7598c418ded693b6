//! Planar convex velocity sets: gauges, support functions, polar sets and
//! exposed faces of normal cones.
//!
//! Every set here is closed, bounded, convex and contains the origin in its
//! interior, so the gauge is finite everywhere and the polar set is again a
//! set of the same kind. Validated sets are immutable values.

mod face;
mod polygon;
mod vec2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use face::NormalFace;
pub use polygon::{Facet, HalfPlaneForm, Polygon, FACE_TOL};
pub use vec2::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("NonConvex: {0}")]
    NonConvex(String),
    #[error("OriginNotInterior: {0}")]
    OriginNotInterior(String),
    #[error("DegenerateDimensions: {0}")]
    DegenerateDimensions(String),
    #[error("ZeroVector: the query vector must be nonzero")]
    ZeroVector,
}

/// Unvalidated description of a velocity set, as written in problem files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetSpec {
    Ball {
        r: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        rot: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Euclidean disc of radius `r` centred at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    r: f64,
}

impl Ball {
    pub fn new(r: f64) -> Result<Self, GeometryError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(GeometryError::DegenerateDimensions(format!(
                "ball radius must be positive and finite, got {r}"
            )));
        }
        Ok(Self { r })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }
}

/// Centred ellipse with semi-axes `a` (along x) and `b` (along y), rotated
/// counterclockwise by `rot` radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    a: f64,
    b: f64,
    rot: f64,
    cos: f64,
    sin: f64,
}

impl Ellipse {
    pub fn new(a: f64, b: f64, rot: f64) -> Result<Self, GeometryError> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(GeometryError::DegenerateDimensions(format!(
                "ellipse semi-axes must be positive and finite, got a = {a}, b = {b}"
            )));
        }
        if !rot.is_finite() {
            return Err(GeometryError::DegenerateDimensions(format!(
                "ellipse rotation must be finite, got {rot}"
            )));
        }
        let (sin, cos) = if rot == 0.0 { (0.0, 1.0) } else { rot.sin_cos() };
        Ok(Self { a, b, rot, cos, sin })
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn rotation(&self) -> f64 {
        self.rot
    }

    /// Cosine and sine of the rotation angle as used by every evaluation.
    pub fn rotation_cs(&self) -> (f64, f64) {
        (self.cos, self.sin)
    }

    /// Coordinates of `v` in the ellipse's own axes.
    #[inline]
    pub fn to_local(&self, v: Vec2) -> Vec2 {
        v.rotate_cs(self.cos, -self.sin)
    }

    #[inline]
    fn to_world(&self, w: Vec2) -> Vec2 {
        w.rotate_cs(self.cos, self.sin)
    }
}

/// A validated velocity set.
#[derive(Clone, Debug, PartialEq)]
pub enum VelocitySet {
    Ball(Ball),
    Ellipse(Ellipse),
    Polygon(Polygon),
}

impl VelocitySet {
    pub fn validate(spec: &SetSpec) -> Result<Self, GeometryError> {
        match spec {
            SetSpec::Ball { r } => Ball::new(*r).map(VelocitySet::Ball),
            SetSpec::Ellipse { a, b, rot } => Ellipse::new(*a, *b, *rot).map(VelocitySet::Ellipse),
            SetSpec::Polygon { vertices } => {
                Polygon::new(vertices.iter().copied().map(Vec2::from).collect())
                    .map(VelocitySet::Polygon)
            }
        }
    }

    pub fn ball(r: f64) -> Result<Self, GeometryError> {
        Ball::new(r).map(VelocitySet::Ball)
    }

    pub fn ellipse(a: f64, b: f64, rot: f64) -> Result<Self, GeometryError> {
        Ellipse::new(a, b, rot).map(VelocitySet::Ellipse)
    }

    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self, GeometryError> {
        Polygon::new(vertices.iter().copied().map(Vec2::from).collect()).map(VelocitySet::Polygon)
    }

    pub fn to_spec(&self) -> SetSpec {
        match self {
            VelocitySet::Ball(b) => SetSpec::Ball { r: b.r },
            VelocitySet::Ellipse(e) => SetSpec::Ellipse {
                a: e.a,
                b: e.b,
                rot: e.rot,
            },
            VelocitySet::Polygon(p) => SetSpec::Polygon {
                vertices: p.vertices().iter().map(|&v| v.into()).collect(),
            },
        }
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self, VelocitySet::Polygon(_))
    }

    /// Minkowski gauge: the least `t >= 0` with `v` in `t F`.
    pub fn gauge(&self, v: Vec2) -> f64 {
        match self {
            VelocitySet::Ball(b) => v.norm() / b.r,
            VelocitySet::Ellipse(e) => {
                let w = e.to_local(v);
                (w.x / e.a).hypot(w.y / e.b)
            }
            VelocitySet::Polygon(p) => p.gauge(v),
        }
    }

    /// Support function: `max <zeta, u>` over `u` in the set.
    pub fn support(&self, zeta: Vec2) -> f64 {
        match self {
            VelocitySet::Ball(b) => b.r * zeta.norm(),
            VelocitySet::Ellipse(e) => {
                let w = e.to_local(zeta);
                (e.a * w.x).hypot(e.b * w.y)
            }
            VelocitySet::Polygon(p) => p.support(zeta),
        }
    }

    /// Polar set `{zeta : <zeta, v> <= 1 for all v in F}`.
    pub fn polar(&self) -> VelocitySet {
        match self {
            VelocitySet::Ball(b) => VelocitySet::Ball(Ball { r: 1.0 / b.r }),
            VelocitySet::Ellipse(e) => VelocitySet::Ellipse(Ellipse {
                a: 1.0 / e.a,
                b: 1.0 / e.b,
                ..*e
            }),
            VelocitySet::Polygon(p) => VelocitySet::Polygon(p.polar()),
        }
    }

    /// Exposed face `{zeta in N_F(p) : support(zeta) = 1}` at the boundary
    /// point `p = v / gauge(v)`.
    ///
    /// Smooth sets return the gauge gradient. A polygon returns its scaled
    /// facet normal, or the polar edge between two facet normals when `p` is
    /// within [`FACE_TOL`] times the circumradius of a vertex.
    pub fn normal_face(&self, v: Vec2) -> Result<NormalFace, GeometryError> {
        if v.is_zero() || !v.is_finite() {
            return Err(GeometryError::ZeroVector);
        }
        Ok(match self {
            VelocitySet::Ball(b) => NormalFace::Point(v / (v.norm() * b.r)),
            VelocitySet::Ellipse(e) => {
                let w = e.to_local(v);
                let g = (w.x / e.a).hypot(w.y / e.b);
                let grad = Vec2::new(w.x / (e.a * e.a), w.y / (e.b * e.b)) / g;
                NormalFace::Point(e.to_world(grad))
            }
            VelocitySet::Polygon(p) => p.normal_face(v),
        })
    }

    /// The polygon vertex hit by the ray along `v`, when the boundary point
    /// is classified as that vertex. Always `None` for smooth sets.
    pub fn touched_vertex(&self, v: Vec2) -> Option<Vec2> {
        match self {
            VelocitySet::Polygon(p) if !v.is_zero() => p.touched_vertex(v).map(|i| p.vertices()[i]),
            _ => None,
        }
    }

    /// Radius of the smallest origin-centred disc containing the set.
    pub fn outer_radius(&self) -> f64 {
        match self {
            VelocitySet::Ball(b) => b.r,
            VelocitySet::Ellipse(e) => e.a.max(e.b),
            VelocitySet::Polygon(p) => p.circumradius(),
        }
    }
}
