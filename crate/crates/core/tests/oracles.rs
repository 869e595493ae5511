//! Closed-form values checked against the library, each computed here
//! independently of the code under test.

use std::f64::consts::PI;

use waist_core::convex::{central_section_volume, ConvexBody};
use waist_core::fibrations::FiberMap;
use waist_core::integral_geometry::crofton_volume;
use waist_core::mesh::circle_mesh;
use waist_core::spaces::{ball_volume, sphere_volume, Space};
use waist_core::transport::{gauss_to_interval, integrate_mu_m};

#[test]
fn unit_sphere_and_ball_volumes() {
    // |S^i| and |B^k| from the elementary formulas
    let spheres = [(0, 2.0), (1, 2.0 * PI), (2, 4.0 * PI), (3, 2.0 * PI * PI), (4, 8.0 * PI * PI / 3.0)];
    for (i, v) in spheres {
        assert!((sphere_volume::<f64>(i).unwrap() - v).abs() < 1e-12 * v, "S^{i}");
    }
    let balls = [(1, 2.0), (2, PI), (3, 4.0 * PI / 3.0), (4, PI * PI / 2.0)];
    for (k, v) in balls {
        assert!((ball_volume::<f64>(k).unwrap() - v).abs() < 1e-12 * v, "B^{k}");
    }
    assert!(sphere_volume::<f64>(-1).is_err());
}

#[test]
fn constants_in_single_precision() {
    assert!((sphere_volume::<f32>(3).unwrap() - 2.0 * std::f32::consts::PI.powi(2)).abs() < 1e-4);
    // ∫₀^∞ e^{−πx²} dx = 1/2
    assert!((gauss_to_interval::<f32>(10.0) - 0.5).abs() < 1e-5);
}

#[test]
fn space_volumes() {
    assert!((Space::torus(vec![1.0, 2.0, 3.0]).unwrap().volume() - 6.0).abs() < 1e-12);
    // RP^n is half the sphere
    assert!((Space::RealProjective(3).volume() - PI * PI).abs() < 1e-12);
    assert!((Space::cube(4, 1.0).volume() - 1.0).abs() < 1e-12);
}

#[test]
fn hopf_fibers_are_great_circles() {
    let map = FiberMap::hopf3();
    for y in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.6, 0.0, 0.8]] {
        assert!((map.fiber_volume(&y).unwrap() - 2.0 * PI).abs() < 1e-9);
    }
}

#[test]
fn crofton_sees_a_small_circle() {
    // circle of latitude at height h in S^2 has length 2π√(1−h²)
    let h: f64 = 0.6;
    let r = (1.0 - h * h).sqrt();
    let m = circle_mesh(&[0.0, 0.0, h], r, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 400);
    let est = crofton_volume(&m, 1, 40_000, 5).unwrap();
    let truth = 2.0 * PI * r;
    assert!((est.report.value - truth).abs() < 4.0 * est.report.std_error + 1e-3 * truth, "{} vs {truth}", est.report.value);
}

#[test]
fn square_sections_through_the_center() {
    // the chord of [-1/2,1/2]^2 with unit normal (cos θ, sin θ) has length 1/max(|cos θ|, |sin θ|)
    let cube = ConvexBody::cube(2, 1.0);
    for theta in [0.0f64, 0.3, PI / 4.0, 1.2] {
        let dir = vec![-theta.sin(), theta.cos()];
        let e = central_section_volume(&cube, &[dir], 50_000, 3).unwrap();
        let truth = 1.0 / theta.cos().abs().max(theta.sin().abs());
        assert!((e.value - truth).abs() <= 4.0 * e.std_error + 1e-9, "θ={theta}: {} vs {truth}", e.value);
    }
}

#[test]
fn archimedes_densities_integrate_to_sphere_volumes() {
    // μ_m on ℝⁿ is the pushforward of S^{n+m} under projection
    for (n, m) in [(1, 1), (2, 1), (1, 2)] {
        let v: f64 = integrate_mu_m(n, m).unwrap();
        let s = sphere_volume::<f64>(n + m).unwrap();
        assert!((v / s - 1.0).abs() < 1e-6, "({n},{m}): {v} vs {s}");
    }
}
