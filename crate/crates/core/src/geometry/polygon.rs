//! Convex polygons in vertex form with a derived half-plane form.
//!
//! A validated polygon stores its counterclockwise vertices `v_i` and one
//! facet per edge: facet `i` joins `v_i` to `v_{i+1}` and is the half-plane
//! `<n_i, x> <= h_i` with unit outward normal `n_i` and offset `h_i > 0`.
//! The scaled normals `n_i / h_i` are the vertices of the polar polygon and
//! are cached because every normal-face query returns them.

use std::f64::consts::TAU;

use super::{GeometryError, NormalFace, Vec2};

/// Relative tolerance for merging coincident vertices and dropping
/// collinear ones during validation.
const MERGE_TOL: f64 = 1e-12;

/// Relative tolerance (times the circumradius) for deciding that a boundary
/// point sits on a vertex rather than inside a facet.
pub const FACE_TOL: f64 = 1e-9;

/// One supporting half-plane `<normal, x> <= offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec2,
    pub offset: f64,
}

impl Facet {
    /// The facet normal scaled so that the support function equals one.
    #[inline]
    pub fn polar_vertex(&self) -> Vec2 {
        self.normal / self.offset
    }
}

/// Half-plane description of a polygon, facets ordered like the vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlaneForm {
    pub facets: Vec<Facet>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    hform: HalfPlaneForm,
    duals: Vec<Vec2>,
    circumradius: f64,
}

impl Polygon {
    /// Validates a counterclockwise vertex list.
    ///
    /// Repeated and collinear vertices are dropped. The remaining chain must
    /// turn strictly left at every vertex, wind exactly once, and keep the
    /// origin strictly inside every facet.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::DegenerateDimensions(
                "polygon vertex is not finite".into(),
            ));
        }
        let circumradius = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if circumradius == 0.0 {
            return Err(GeometryError::DegenerateDimensions(
                "polygon has no extent".into(),
            ));
        }
        let vertices = simplify(vertices, circumradius)?;

        let n = vertices.len();
        let mut turning = 0.0;
        for i in 0..n {
            let e_prev = vertices[i] - vertices[(i + n - 1) % n];
            let e_next = vertices[(i + 1) % n] - vertices[i];
            let cross = e_prev.cross(e_next);
            if cross <= 0.0 {
                return Err(GeometryError::NonConvex(format!(
                    "vertex {i} at {} does not turn left (vertices must be strictly convex and counterclockwise)",
                    vertices[i]
                )));
            }
            turning += cross.atan2(e_prev.dot(e_next));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(GeometryError::NonConvex(format!(
                "vertex chain winds {:.3} times around its interior",
                turning / TAU
            )));
        }

        let mut facets = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let e = vertices[(i + 1) % n] - a;
            let normal = Vec2::new(e.y, -e.x) / e.norm();
            let offset = normal.dot(a);
            if !(offset > MERGE_TOL * circumradius) {
                return Err(GeometryError::OriginNotInterior(format!(
                    "facet {i} from {} to {} has offset {offset:e}",
                    a,
                    vertices[(i + 1) % n]
                )));
            }
            facets.push(Facet { normal, offset });
        }
        let duals = facets.iter().map(Facet::polar_vertex).collect();

        Ok(Self {
            vertices,
            hform: HalfPlaneForm { facets },
            duals,
            circumradius,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.hform.facets
    }

    pub fn half_plane_form(&self) -> &HalfPlaneForm {
        &self.hform
    }

    /// Largest distance from the origin to a vertex.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    pub fn gauge(&self, v: Vec2) -> f64 {
        self.facets()
            .iter()
            .map(|f| f.normal.dot(v) / f.offset)
            .fold(0.0, f64::max)
    }

    pub fn support(&self, zeta: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|u| zeta.dot(*u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The polar polygon. Its vertices are the intersections of consecutive
    /// constraints `<zeta, v_i> = 1`, which are exactly the scaled facet
    /// normals `n_i / h_i`.
    pub fn polar(&self) -> Polygon {
        Polygon::new(self.duals.clone()).expect("polar of a valid polygon is valid")
    }

    /// Index of the facet attaining the gauge of `v`.
    fn active_facet(&self, v: Vec2) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, f) in self.facets().iter().enumerate() {
            let val = f.normal.dot(v) / f.offset;
            if val > best_val {
                best_val = val;
                best = i;
            }
        }
        best
    }

    /// Vertex of the polygon that the boundary point in direction `v` is
    /// classified as, if it lies within [`FACE_TOL`] of one.
    pub fn touched_vertex(&self, v: Vec2) -> Option<usize> {
        let i = self.active_facet(v);
        let next = (i + 1) % self.vertices.len();
        let p = v / self.gauge(v);
        let tol = FACE_TOL * self.circumradius;
        if (p - self.vertices[i]).norm() <= tol {
            Some(i)
        } else if (p - self.vertices[next]).norm() <= tol {
            Some(next)
        } else {
            None
        }
    }

    /// Exposed polar face at the boundary point in direction `v` (nonzero).
    pub(crate) fn normal_face(&self, v: Vec2) -> NormalFace {
        let n = self.vertices.len();
        match self.touched_vertex(v) {
            // vertex i is shared by facets i - 1 and i
            Some(i) => NormalFace::Segment(self.duals[(i + n - 1) % n], self.duals[i]),
            None => NormalFace::Point(self.duals[self.active_facet(v)]),
        }
    }
}

/// Drops repeated and collinear vertices until none remain.
fn simplify(mut vertices: Vec<Vec2>, scale: f64) -> Result<Vec<Vec2>, GeometryError> {
    loop {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::DegenerateDimensions(format!(
                "polygon needs at least 3 distinct, non-collinear vertices, found {n}"
            )));
        }
        let mut drop = None;
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let e_prev = cur - prev;
            let e_next = next - cur;
            if e_prev.norm() <= MERGE_TOL * scale {
                drop = Some(i);
                break;
            }
            let straight = e_prev.cross(e_next).abs() <= MERGE_TOL * e_prev.norm() * e_next.norm();
            if straight && e_prev.dot(e_next) > 0.0 {
                drop = Some(i);
                break;
            }
        }
        match drop {
            Some(i) => {
                vertices.remove(i);
            }
            None => return Ok(vertices),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::new(vec![
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_half_plane_form() {
        let sq = square();
        let expected = [
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
            Vec2::new(1.0, 0.0),
        ];
        for (f, n) in sq.facets().iter().zip(expected) {
            assert!((f.normal - n).norm() < 1e-15);
            assert!((f.offset - 1.0).abs() < 1e-15);
        }
        // every vertex is tight on its two incident facets and feasible on the rest
        let k = sq.vertices().len();
        for (i, v) in sq.vertices().iter().enumerate() {
            for (j, f) in sq.facets().iter().enumerate() {
                let slack = f.offset - f.normal.dot(*v);
                if j == i || j == (i + k - 1) % k {
                    assert!(slack.abs() < 1e-15);
                } else {
                    assert!(slack > 0.0);
                }
            }
        }
    }

    #[test]
    fn origin_outside_is_rejected() {
        let err = Polygon::new(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 1.0),
        ])
        .unwrap_err();
        assert!(matches!(err, GeometryError::OriginNotInterior(_)), "{err}");
    }

    #[test]
    fn origin_on_boundary_is_rejected() {
        let err = Polygon::new(vec![
            Vec2::new(-1.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap_err();
        assert!(matches!(err, GeometryError::OriginNotInterior(_)), "{err}");
    }

    #[test]
    fn clockwise_and_reflex_inputs_are_non_convex() {
        let cw = Polygon::new(vec![
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(-1.0, 1.0),
        ]);
        assert!(matches!(cw, Err(GeometryError::NonConvex(_))));

        let dart = Polygon::new(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-0.2, 0.0),
            Vec2::new(-1.0, -1.0),
        ]);
        assert!(matches!(dart, Err(GeometryError::NonConvex(_))));
    }

    #[test]
    fn pentagram_is_non_convex() {
        let star: Vec<Vec2> = (0..5)
            .map(|k| {
                let t = TAU * (2 * k) as f64 / 5.0;
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        assert!(matches!(Polygon::new(star), Err(GeometryError::NonConvex(_))));
    }

    #[test]
    fn collinear_and_repeated_vertices_are_dropped() {
        let p = Polygon::new(vec![
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p, square());
    }

    #[test]
    fn too_few_vertices() {
        let err = Polygon::new(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, 1.0),
        ])
        .unwrap_err();
        assert!(matches!(err, GeometryError::DegenerateDimensions(_)));
    }

    #[test]
    fn square_gauge_and_support() {
        let sq = square();
        assert_eq!(sq.gauge(Vec2::new(3.0, 2.0)), 3.0);
        assert_eq!(sq.gauge(Vec2::ZERO), 0.0);
        assert_eq!(sq.support(Vec2::new(1.0, 1.0)), 2.0);
    }

    #[test]
    fn square_polar_is_diamond() {
        let dia = square().polar();
        let mut got: Vec<(f64, f64)> = dia.vertices().iter().map(|v| (v.x, v.y)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)];
        for (g, w) in got.iter().zip(want) {
            assert!((g.0 - w.0).abs() < 1e-15 && (g.1 - w.1).abs() < 1e-15);
        }
    }

    #[test]
    fn vertex_classification_tolerance() {
        let sq = square();
        // one facet-tolerance away from the corner still counts as the corner
        let near = Vec2::new(1.0, 1.0 - 0.5 * FACE_TOL * sq.circumradius());
        assert!(matches!(sq.normal_face(near), NormalFace::Segment(..)));
        let far = Vec2::new(1.0, 1.0 - 10.0 * FACE_TOL * sq.circumradius());
        assert_eq!(sq.normal_face(far), NormalFace::Point(Vec2::new(1.0, 0.0)));
    }
}
