mod common;

use common::*;
use proptest::prelude::*;

use elvis::cli::ProblemFile;
use elvis::oracle::{self, OracleConfig};
use elvis::solver::{self, validated_bracket};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn boundary_points_have_unit_gauge(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let set = random_set(&mut rng);
        for _ in 0..50 {
            let p = random_boundary_point(&set, &mut rng);
            prop_assert!((set.gauge(p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_faces_are_exposed_faces_of_the_polar(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let set = random_set(&mut rng);
        let v = random_vector(&mut rng);
        let face = set.normal_face(v).unwrap();
        let (a, b) = face.endpoints();
        let samples: Vec<_> = (0..1000).map(|_| random_point_in(&set, &mut rng)).collect();
        for t in [0.0, 0.5, 1.0] {
            let z = a + (b - a) * t;
            prop_assert!((set.support(z) - 1.0).abs() < 1e-9, "support {}", set.support(z));
            prop_assert!((z.dot(v) - set.gauge(v)).abs() < 1e-9 * set.gauge(v).max(1.0));
            for u in &samples {
                prop_assert!(z.dot(*u) <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn residual_is_monotone(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_problem_with(&mut rng, random_set);
        let (lo, hi) = (-5.0, 5.0);
        let mut prev_hi = f64::NEG_INFINITY;
        for i in 0..100 {
            let y = lo + (hi - lo) * i as f64 / 99.0;
            let d = p.delta(y).unwrap().interval;
            prop_assert!(d.lo <= d.hi);
            prop_assert!(d.lo >= prev_hi - 1e-9, "residual decreased at y = {}", y);
            prev_hi = d.hi;
        }
    }

    #[test]
    fn bracket_holds_the_minimizer(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_problem_with(&mut rng, random_set);
        let b = validated_bracket(&p).unwrap();
        prop_assert!(b.l <= b.r);
        prop_assert!(p.delta(b.l).unwrap().interval.lo <= 0.0);
        prop_assert!(p.delta(b.r).unwrap().interval.hi >= 0.0);
        let (res, trace) = solver::solve(&p).unwrap();
        for row in &trace.rows {
            // r is reported as l + d and may round one ulp past the end.
            prop_assert!(b.l <= row.l && row.r <= b.r + 2.0 * f64::EPSILON * b.r.abs().max(1.0));
            prop_assert!(row.l <= row.y && row.y <= b.r);
        }
        prop_assert!(b.l <= res.y && res.y <= b.r);
    }

    #[test]
    fn solve_time_is_minimal_on_a_grid(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_problem_with(&mut rng, random_set);
        let (res, _) = solver::solve(&p).unwrap();
        prop_assert!((res.time - p.objective(res.y)).abs() < 1e-12 * res.time.max(1.0));
        let (a, b) = (p.x0().x.min(p.x1().x) - 3.0, p.x0().x.max(p.x1().x) + 3.0);
        for i in 0..1000 {
            let y = a + (b - a) * i as f64 / 999.0;
            prop_assert!(res.time <= oracle::objective(&p, y) + 1e-7);
        }
    }

    #[test]
    fn problem_files_round_trip(seed in any::<u64>(), eps in proptest::option::of(1e-15..1e-3f64), it in proptest::option::of(1usize..1000)) {
        let mut rng = rng(seed);
        let p = random_problem_with(&mut rng, random_set);
        let file = ProblemFile {
            x0: p.x0().into(),
            x1: p.x1().into(),
            f0: p.f0().to_spec(),
            f1: p.f1().to_spec(),
            epsilon: eps,
            max_iter: it,
        };
        let back = ProblemFile::parse(&file.to_text()).unwrap();
        prop_assert_eq!(&back, &file);
        let q = back.to_problem(None).unwrap();
        prop_assert_eq!(q.f0().gauge(p.x1()), p.f0().gauge(p.x1()));
    }

    #[test]
    fn smooth_solves_agree_with_oracle(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_problem_with(&mut rng, random_smooth_set);
        let (res, _) = solver::solve(&p).unwrap();
        let m = oracle::minimize_objective(&p, &OracleConfig::default());
        prop_assert!((res.time - m.phi_star).abs() < 1e-9);
    }
}
