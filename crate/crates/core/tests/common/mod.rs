#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use elvis::{ElvisProblem, Vec2, VelocitySet};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Lower medium of the polygon experiments: axis-aligned square of half-side 3/4.
pub fn square0() -> VelocitySet {
    VelocitySet::polygon(&[[0.75, 0.75], [-0.75, 0.75], [-0.75, -0.75], [0.75, -0.75]]).unwrap()
}

/// Upper medium of the polygon experiments: square of side 5/4 with its top
/// corner at (0, 1), edges along (4, -3)/5 and (-3, -4)/5.
pub fn square1() -> VelocitySet {
    VelocitySet::polygon(&[[0.0, 1.0], [-0.75, 0.0], [0.25, -0.75], [1.0, 0.25]]).unwrap()
}

pub fn squares_problem(x1x: f64) -> ElvisProblem {
    ElvisProblem::new(Vec2::new(0.0, -1.0), Vec2::new(x1x, 1.0), square0(), square1()).unwrap()
}

pub fn elliptic_problem() -> ElvisProblem {
    ElvisProblem::new(
        Vec2::new(-1.0, -1.0),
        Vec2::new(1.0, 1.0),
        VelocitySet::ellipse(1.0, 0.5, 0.0).unwrap(),
        VelocitySet::ellipse(2.0, 1.0, 0.0).unwrap(),
    )
    .unwrap()
}

pub fn random_ball(rng: &mut TestRng) -> VelocitySet {
    VelocitySet::ball(rng.gen_range(0.5..3.0)).unwrap()
}

pub fn random_ellipse(rng: &mut TestRng) -> VelocitySet {
    VelocitySet::ellipse(
        rng.gen_range(0.3..3.0),
        rng.gen_range(0.3..3.0),
        rng.gen_range(-3.2..3.2),
    )
    .unwrap()
}

/// Vertices on an off-centre ellipse; retried until the origin is interior.
pub fn random_polygon(rng: &mut TestRng) -> VelocitySet {
    loop {
        let a = rng.gen_range(0.5..2.5);
        let b = rng.gen_range(0.5..2.5);
        let rot: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let c = Vec2::new(rng.gen_range(-0.4..0.4) * a, rng.gen_range(-0.4..0.4) * b);
        let k = rng.gen_range(3..9);
        let mut ts: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let verts: Vec<[f64; 2]> = ts
            .iter()
            .map(|t| {
                let p = Vec2::new(a * t.cos(), b * t.sin()).rotate_cs(rot.cos(), rot.sin()) + c;
                [p.x, p.y]
            })
            .collect();
        if let Ok(s) = VelocitySet::polygon(&verts) {
            return s;
        }
    }
}

pub fn random_set(rng: &mut TestRng) -> VelocitySet {
    match rng.gen_range(0..3) {
        0 => random_ball(rng),
        1 => random_ellipse(rng),
        _ => random_polygon(rng),
    }
}

pub fn random_smooth_set(rng: &mut TestRng) -> VelocitySet {
    if rng.gen_bool(0.5) {
        random_ball(rng)
    } else {
        random_ellipse(rng)
    }
}

pub fn random_endpoints(rng: &mut TestRng) -> (Vec2, Vec2) {
    (
        Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..-0.1)),
        Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0)),
    )
}

pub fn random_problem_with(rng: &mut TestRng, set: fn(&mut TestRng) -> VelocitySet) -> ElvisProblem {
    let (x0, x1) = random_endpoints(rng);
    let f0 = set(rng);
    let f1 = set(rng);
    ElvisProblem::new(x0, x1, f0, f1).unwrap()
}

pub fn random_direction(rng: &mut TestRng) -> Vec2 {
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Vec2::new(t.cos(), t.sin())
}

pub fn random_vector(rng: &mut TestRng) -> Vec2 {
    random_direction(rng) * rng.gen_range(0.01..10.0)
}

/// Uniform-ish sample of the set: a random direction scaled into the set.
pub fn random_point_in(set: &VelocitySet, rng: &mut TestRng) -> Vec2 {
    let d = random_direction(rng);
    d / set.gauge(d) * rng.gen_range(0.0..1.0f64).sqrt()
}

/// Boundary point in a random direction.
pub fn random_boundary_point(set: &VelocitySet, rng: &mut TestRng) -> Vec2 {
    let d = random_direction(rng);
    d / set.gauge(d)
}
