use super::Vec2;

/// A face of the polar boundary selected by a normal cone.
///
/// Smooth boundary points expose a single point; polygon vertices expose
/// the polar edge between the scaled normals of their two incident facets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormalFace {
    Point(Vec2),
    Segment(Vec2, Vec2),
}

impl NormalFace {
    pub fn endpoints(&self) -> (Vec2, Vec2) {
        match *self {
            NormalFace::Point(z) => (z, z),
            NormalFace::Segment(a, b) => (a, b),
        }
    }

    /// Range of the x-components over the face.
    pub fn x_range(&self) -> (f64, f64) {
        let (a, b) = self.endpoints();
        (a.x.min(b.x), a.x.max(b.x))
    }

    pub fn midpoint(&self) -> Vec2 {
        let (a, b) = self.endpoints();
        (a + b) * 0.5
    }

    pub fn is_point(&self) -> bool {
        matches!(self, NormalFace::Point(_))
    }

    /// Pointwise negation.
    pub fn negated(&self) -> NormalFace {
        match *self {
            NormalFace::Point(z) => NormalFace::Point(-z),
            NormalFace::Segment(a, b) => NormalFace::Segment(-a, -b),
        }
    }

    /// A point of the face whose x-component is `x`, clamped to the face.
    /// A vertical segment returns its midpoint.
    pub fn point_with_x(&self, x: f64) -> Vec2 {
        let (a, b) = self.endpoints();
        if a.x == b.x {
            return self.midpoint();
        }
        let s = ((x - a.x) / (b.x - a.x)).clamp(0.0, 1.0);
        a + (b - a) * s
    }
}
