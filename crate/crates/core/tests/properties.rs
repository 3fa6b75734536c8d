use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use flatgeo_core::analysis::self_intersections;
use flatgeo_core::builders::random::{rectilinear_polygon, star_polygon};
use flatgeo_core::builders::{double_of_polygon, flat_torus, isosceles_tetrahedron};
use flatgeo_core::geometry::dist_to_multiple;
use flatgeo_core::holonomy::is_parallel;
use flatgeo_core::io::{surface_from_json, surface_to_json};
use flatgeo_core::tracer::{reverse_check, trace, TraceError};
use flatgeo_core::{TangentDirection, Termination, Vec2, DEFAULT_TOLERANCE, DEFAULT_VERTEX_CLEARANCE};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isosceles_tetrahedra_are_parallel_spheres(a in 0.6f64..1.0, b in 0.6f64..1.0, c in 0.6f64..1.0) {
        let s = isosceles_tetrahedron(a, b, c).unwrap();
        prop_assert_eq!(s.euler_characteristic(), 2);
        prop_assert!(s.gauss_bonnet_residual() < 1e-9);
        prop_assert!(s.curvature_multiset().iter().all(|w| (w - PI).abs() < 1e-9));
        prop_assert!(is_parallel(&s).is_parallel());
    }

    #[test]
    fn parallel_doubles_have_curvature_in_pi_multiples(n in 3usize..10, seed in 0u64..10_000) {
        let s = double_of_polygon(&star_polygon(n, seed)).unwrap();
        prop_assert!(s.gauss_bonnet_residual() < 1e-9);
        if is_parallel(&s).is_parallel() {
            prop_assert!(s.vertices().iter().all(|v| dist_to_multiple(v.curvature, PI) < 1e-9));
        }
    }

    #[test]
    fn rectilinear_doubles_are_parallel(cols in 1usize..8, seed in 0u64..10_000) {
        let s = double_of_polygon(&rectilinear_polygon(cols, 4, seed)).unwrap();
        prop_assert!(is_parallel(&s).is_parallel());
    }

    #[test]
    fn surface_json_round_trips(n in 3usize..8, seed in 0u64..1000) {
        let s = double_of_polygon(&star_polygon(n, seed)).unwrap();
        let text = surface_to_json(&s);
        let back = surface_from_json(&text, DEFAULT_TOLERANCE).unwrap();
        prop_assert_eq!(surface_to_json(&back), text);
    }

    #[test]
    fn tetrahedron_traces_reverse_and_never_cross(angle in 0.0f64..TAU, length in 1.0f64..60.0) {
        let s = isosceles_tetrahedron(1.0, 0.9, 0.8).unwrap();
        let start = TangentDirection::from_angle(0, s.triangle(0).incenter(), angle);
        match reverse_check(&s, start, length, DEFAULT_VERTEX_CLEARANCE) {
            Ok(r) => prop_assert!(r < 1e-6),
            Err(TraceError::VertexHitBeforeLength { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
        let tr = trace(&s, start, length, DEFAULT_VERTEX_CLEARANCE).unwrap();
        prop_assert!(tr.check_invariants(&s, 1e-7).is_ok());
        if tr.termination == Termination::LengthReached {
            prop_assert!(self_intersections(&s, &tr).is_empty());
        }
    }

    #[test]
    fn torus_lines_never_cross(dx in -1.0f64..1.0, dy in -1.0f64..1.0) {
        prop_assume!(dx.hypot(dy) > 0.1);
        let s = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.3, 1.1)).unwrap();
        let tr = trace(&s, TangentDirection::new(0, s.triangle(0).incenter(), Vec2::new(dx, dy)), 8.0, DEFAULT_VERTEX_CLEARANCE).unwrap();
        // straight lines on a flat torus never meet themselves transversally
        prop_assert!(self_intersections(&s, &tr).is_empty());
    }
}
