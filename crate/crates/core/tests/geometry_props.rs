use proptest::prelude::*;
use waist_core::algebra::{mul, norm_sq};
use waist_core::convex::ConvexBody;
use waist_core::fibrations::FiberMap;
use waist_core::isoperimetry::BinaryField;
use waist_core::linalg::{det, dot, orthonormality_defect, orthonormalize, Mat};
use waist_core::mesh::{coordinate_sphere_mesh, SubmanifoldMesh};
use waist_core::rng::{child_seed, gaussian_vec, stream, unit_vector};
use waist_core::spaces::Space;
use waist_core::transport::{builtin_maps, gauss_to_interval};

fn vec_in(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_algebras_are_normed(x in vec_in(8), y in vec_in(8), h in 0usize..4) {
        let n = 1 << h;
        let (x, y) = (&x[..n], &y[..n]);
        let lhs = norm_sq(&mul(x, y));
        let rhs = norm_sq(x) * norm_sq(y);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
    }

    #[test]
    fn hopf_maps_land_on_the_unit_sphere(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        for map in [FiberMap::hopf3(), FiberMap::hopf7()] {
            let p = unit_vector(&mut rng, map.source().ambient_dim());
            let y = map.evaluate(&p).unwrap();
            prop_assert!((norm_sq(&y) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in vec_in(9), b in vec_in(9)) {
        let m = |v: &[f64]| Mat::from_rows(&[v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()]);
        let (ma, mb) = (m(&a), m(&b));
        let lhs = det(&ma.mul(&mb));
        let rhs = det(&ma) * det(&mb);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs.abs()));
    }

    #[test]
    fn orthonormalized_frames_are_orthonormal(seed in any::<u64>(), n in 2usize..7, k in 1usize..4) {
        let k = k.min(n);
        let mut rng = stream(seed, 0);
        let vs: Vec<Vec<f64>> = (0..k).map(|_| gaussian_vec(&mut rng, n)).collect();
        let f = orthonormalize(&vs).unwrap();
        prop_assert!(orthonormality_defect(&f) < 1e-12);
        // span is preserved: the first vector is parallel to the first input
        let c = dot(&f[0], &vs[0]) / dot(&vs[0], &vs[0]).sqrt();
        prop_assert!((c.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_and_torus_distances_are_metrics(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        for space in [Space::Sphere(3), Space::torus(vec![1.0, 2.0, 3.0]).unwrap(), Space::RealProjective(2)] {
            let p: Vec<Vec<f64>> = (0..3).map(|_| space.sample_uniform(&mut rng).unwrap()).collect();
            let d = |i: usize, j: usize| space.distance(&p[i], &p[j]).unwrap();
            prop_assert!(d(0, 0).abs() < 1e-7);
            prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-12);
            prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
        }
    }

    #[test]
    fn transport_maps_are_one_lipschitz(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        for (name, map) in builtin_maps() {
            let mut p = gaussian_vec(&mut rng, map.domain_dim());
            if map.sphere_domain() {
                p = unit_vector(&mut rng, map.domain_dim());
            }
            let s = map.jacobian_singular_values(&p).unwrap().max();
            prop_assert!(s <= 1.0 + 1e-9, "{name}: {s}");
        }
    }

    #[test]
    fn interval_transport_is_monotone_and_odd(a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(gauss_to_interval(lo) <= gauss_to_interval(hi) + 1e-15);
        prop_assert!((gauss_to_interval(a) + gauss_to_interval(-a)).abs() < 1e-12);
        prop_assert!(gauss_to_interval(a).abs() <= 0.5);
    }

    #[test]
    fn support_functions_are_sublinear(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = stream(seed, 0);
        for body in [ConvexBody::cube(n, 1.0), ConvexBody::cross_polytope(n), ConvexBody::ball(n, 0.7)] {
            let u = gaussian_vec(&mut rng, n);
            let v = gaussian_vec(&mut rng, n);
            let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            prop_assert!(body.support(&w) <= body.support(&u) + body.support(&v) + 1e-12);
            let two: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
            prop_assert!((body.support(&two) - 2.0 * body.support(&u)).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_fields_round_trip(seed in any::<u64>(), periodic in any::<bool>()) {
        let f = BinaryField::random_half(vec![1.0, 1.5], vec![12, 9], periodic, seed).unwrap();
        prop_assert_eq!(f.occupied(), 12 * 9 / 2);
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let g = BinaryField::read_from(&mut std::io::Cursor::new(buf)).unwrap();
        prop_assert_eq!(g.cells, f.cells);
        prop_assert_eq!(g.periodic, periodic);
    }
}

#[test]
fn seeds_are_reproducible_and_split() {
    use rand::Rng;
    let a: Vec<u64> = (0..4).map(|_| stream(9, 2).random()).collect();
    let mut s = stream(9, 2);
    let b: Vec<u64> = (0..4).map(|_| s.random()).collect();
    assert_eq!(a[0], b[0]);
    assert_ne!(stream(9, 2).random::<u64>(), stream(9, 3).random::<u64>());
    assert_ne!(child_seed(9, 0), child_seed(9, 1));
}

#[test]
fn mesh_text_round_trip() {
    let m = coordinate_sphere_mesh(2, 6, 3);
    let back = SubmanifoldMesh::parse(&m.to_text()).unwrap();
    assert_eq!(back.len(), m.len());
    assert!((back.volume() - m.volume()).abs() < 1e-12);
}
