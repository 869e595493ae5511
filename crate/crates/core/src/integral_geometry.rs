//! Random equators and flats, intersection counting, Crofton estimators.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use serde::Serialize;

use crate::error::{domain, usage, Result};
use crate::linalg::{det, dist, dot, orthogonal_complement, orthonormalize, solve, Mat};
use crate::mesh::SubmanifoldMesh;
use crate::report::EstimateReport;
use crate::rng::{gaussian_vec, mc_mean, stream};
use crate::spaces::{ball_volume, sphere_volume};

/// Relative barycentric size below which an intersection is treated as
/// touching a face of the simplex.
pub const FACE_TOL: f64 = 1e-10;
const PERTURBATION: f64 = 1e-9;
const TIE_SEED: u64 = 0x7_1eb_7ea4;

/// Unit sphere of a (k+1)-dimensional linear subspace of ℝⁿ⁺¹.
#[derive(Clone, Debug)]
pub struct EquatorialSubsphere {
    pub frame: Vec<Vec<f64>>,
}

impl EquatorialSubsphere {
    pub fn new(frame: Vec<Vec<f64>>) -> Result<Self> {
        if frame.is_empty() || crate::linalg::orthonormality_defect(&frame) > 1e-12 {
            return usage("equator frame is not orthonormal");
        }
        Ok(EquatorialSubsphere { frame })
    }

    /// Equator dimension k.
    pub fn dim(&self) -> usize {
        self.frame.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.frame[0].len()
    }

    pub fn rotated(&self, rot: &Mat<f64>) -> Self {
        EquatorialSubsphere { frame: self.frame.iter().map(|f| rot.mul_vec(f)).collect() }
    }
}

/// Haar-random k-dimensional equator of 𝕊ⁿ.
pub fn sample_equator(n: usize, k: usize, rng: &mut impl Rng) -> Result<EquatorialSubsphere> {
    if k >= n {
        return domain(format!("equator dimension {k} must be below sphere dimension {n}"));
    }
    Ok(EquatorialSubsphere { frame: random_frame(n + 1, k + 1, rng) })
}

/// k orthonormal vectors of ℝⁿ, Haar distributed.
pub fn random_frame(n: usize, k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    loop {
        let g: Vec<Vec<f64>> = (0..k).map(|_| gaussian_vec(rng, n)).collect();
        if let Some(frame) = orthonormalize(&g) {
            return frame;
        }
    }
}

/// Haar-random rotation of ℝⁿ.
pub fn random_rotation(n: usize, rng: &mut impl Rng) -> Mat<f64> {
    let q = random_frame(n, n, rng);
    let mut m = Mat::from_cols(&q);
    if det(&m) < 0.0 {
        for i in 0..n {
            m[(i, 0)] = -m[(i, 0)];
        }
    }
    m
}

/// Rotation within `size` of the identity: orthonormalized I + size·G.
fn small_rotation(n: usize, size: f64, rng: &mut impl Rng) -> Mat<f64> {
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut c = gaussian_vec(rng, n);
            c.iter_mut().for_each(|x| *x *= size);
            c[j] += 1.0;
            c
        })
        .collect();
    Mat::from_cols(&orthonormalize(&cols).expect("near-identity columns are independent"))
}

/// Null vector of a d×(d+1) matrix given by columns, via signed cofactors.
fn cofactor_null(cols: &[Vec<f64>]) -> Vec<f64> {
    let d = cols.len() - 1;
    if d == 0 {
        return vec![1.0];
    }
    let mut minor = Mat::zeros(d, d);
    (0..=d)
        .map(|j| {
            for (c, col) in cols.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, c)| c).enumerate() {
                for r in 0..d {
                    minor[(r, c)] = col[r];
                }
            }
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            s * det(&minor)
        })
        .collect()
}

#[derive(PartialEq)]
enum Crossing {
    Hit,
    Miss,
    Degenerate,
}

fn classify(lambda: &[f64]) -> Crossing {
    let total: f64 = lambda.iter().map(|x| x.abs()).sum();
    if total == 0.0 || !total.is_finite() {
        return Crossing::Degenerate;
    }
    let pos = lambda.iter().filter(|&&x| x > 0.0).count();
    let same_sign = pos == 0 || pos == lambda.len();
    if lambda.iter().any(|x| x.abs() <= FACE_TOL * total) {
        // near a face: only ambiguous when the other coordinates agree in sign
        let strong: Vec<f64> = lambda.iter().copied().filter(|x| x.abs() > FACE_TOL * total).collect();
        let p = strong.iter().filter(|&&x| x > 0.0).count();
        return if p == 0 || p == strong.len() { Crossing::Degenerate } else { Crossing::Miss };
    }
    if same_sign {
        Crossing::Hit
    } else {
        Crossing::Miss
    }
}

/// Result of a single intersection count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Count {
    pub count: usize,
    /// the equator had to be perturbed to break a tie
    pub perturbed: bool,
}

fn count_once(mesh: &SubmanifoldMesh, e: &EquatorialSubsphere, strict: bool) -> Option<usize> {
    let q = orthogonal_complement(&e.frame, e.ambient());
    let proj: Vec<Vec<f64>> = mesh.vertices.iter().map(|v| q.iter().map(|b| dot(b, v)).collect()).collect();
    let mut count = 0;
    let mut cols = vec![vec![]; mesh.dim + 1];
    for s in &mesh.simplices {
        for (c, &i) in cols.iter_mut().zip(s) {
            c.clone_from(&proj[i]);
        }
        match classify(&cofactor_null(&cols)) {
            Crossing::Hit => count += 1,
            Crossing::Miss => {}
            Crossing::Degenerate if strict => return None,
            Crossing::Degenerate => {}
        }
    }
    Some(count)
}

/// Number of points of E ∩ mesh, treating each simplex as the geodesic
/// simplex spanned by its vertex cone. `tie_index` seeds the perturbation
/// applied when E passes within [`FACE_TOL`] of a simplex face.
pub fn count_intersections(mesh: &SubmanifoldMesh, e: &EquatorialSubsphere, tie_index: u64) -> Result<Count> {
    let n = e.ambient() - 1;
    let k = e.dim();
    if mesh.is_empty() {
        return Ok(Count { count: 0, perturbed: false });
    }
    if mesh.ambient != n + 1 || mesh.dim + k != n {
        return usage(format!(
            "mesh of dim {} in R^{} cannot be cut by a {k}-equator of S^{n}",
            mesh.dim, mesh.ambient
        ));
    }
    if let Some(c) = count_once(mesh, e, true) {
        return Ok(Count { count: c, perturbed: false });
    }
    let mut rng = stream(TIE_SEED, tie_index);
    for _ in 0..8 {
        let moved = e.rotated(&small_rotation(n + 1, PERTURBATION, &mut rng));
        if let Some(c) = count_once(mesh, &moved, true) {
            return Ok(Count { count: c, perturbed: true });
        }
    }
    let c = count_once(mesh, e, false).unwrap_or(0);
    Ok(Count { count: c, perturbed: true })
}

#[derive(Clone, Debug, Serialize)]
pub struct CroftonEstimate {
    pub report: EstimateReport,
    /// samples whose equator was perturbed to break a tie
    pub perturbed: u64,
    /// longest mesh edge; the chordal approximation error is O(max_edge²)
    pub max_edge: f64,
}

/// Integral-geometric (n−k)-volume of a mesh in 𝕊ⁿ: ½·s_{n−k}·E[#(E ∩ mesh)]
/// over Haar-random k-equators E.
pub fn crofton_volume(mesh: &SubmanifoldMesh, k: usize, samples: usize, seed: u64) -> Result<CroftonEstimate> {
    if samples == 0 {
        return usage("crofton_volume needs at least one sample");
    }
    let n = mesh.ambient.checked_sub(1).ok_or_else(|| crate::Error::Usage("empty ambient".into()))?;
    if mesh.dim + k != n {
        return usage(format!("mesh dimension {} is not n-k = {}", mesh.dim, n as i64 - k as i64));
    }
    let perturbed = std::sync::atomic::AtomicU64::new(0);
    let failed = std::sync::atomic::AtomicBool::new(false);
    let m = mc_mean(seed, samples, |rng, idx| {
        let e = sample_equator(n, k, rng).expect("k < n checked");
        match count_intersections(mesh, &e, idx as u64) {
            Ok(c) => {
                if c.perturbed {
                    perturbed.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                }
                c.count as f64
            }
            Err(_) => {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                0.0
            }
        }
    });
    if failed.into_inner() {
        return usage("mesh incompatible with equator dimension");
    }
    let scale = 0.5 * sphere_volume::<f64>((n - k) as i64)?;
    Ok(CroftonEstimate {
        report: EstimateReport::from_moments(&m, scale, seed, "crofton-sphere"),
        perturbed: perturbed.into_inner(),
        max_edge: mesh.max_edge(),
    })
}

// ---------------------------------------------------------------- Euclidean

/// k-flat x₀ + span(dirs) in ℝⁿ with an orthonormal basis of the normal space.
#[derive(Clone, Debug)]
pub struct AffineFlat {
    pub point: Vec<f64>,
    pub dirs: Vec<Vec<f64>>,
    pub normals: Vec<Vec<f64>>,
}

/// Anything whose intersections with a random k-flat can be counted.
pub trait FlatTarget: Sync {
    fn ambient(&self) -> usize;
    /// Dimension of the target set (n − k for a k-flat count).
    fn target_dim(&self) -> usize;
    fn count_hits(&self, flat: &AffineFlat) -> usize;
    /// Closed ball (center, radius) containing the target.
    fn bounding_ball(&self) -> (Vec<f64>, f64);
}

impl FlatTarget for SubmanifoldMesh {
    fn ambient(&self) -> usize {
        self.ambient
    }

    fn target_dim(&self) -> usize {
        self.dim
    }

    fn count_hits(&self, flat: &AffineFlat) -> usize {
        let d = self.dim;
        let origin: Vec<f64> = flat.normals.iter().map(|b| dot(b, &flat.point)).collect();
        let mut hits = 0;
        let mut m = Mat::zeros(d + 1, d + 1);
        let mut rhs = vec![0.0; d + 1];
        for s in &self.simplices {
            // barycentric coordinates of the flat's trace in the normal space
            for (c, &vi) in s.iter().enumerate() {
                let v = &self.vertices[vi];
                for (r, b) in flat.normals.iter().enumerate() {
                    m[(r, c)] = dot(b, v);
                }
                m[(d, c)] = 1.0;
            }
            rhs[..d].copy_from_slice(&origin);
            rhs[d] = 1.0;
            if let Some(l) = solve(&m, &rhs) {
                if l.iter().all(|&x| x > 0.0) {
                    hits += 1;
                }
            }
        }
        hits
    }

    fn bounding_ball(&self) -> (Vec<f64>, f64) {
        let (lo, hi) = self.bounding_box();
        let c: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let r = self.vertices.iter().map(|v| dist(v, &c)).fold(0.0, f64::max);
        (c, r)
    }
}

/// Random k-flat meeting the ball B(center, radius): Haar direction, normal
/// offset uniform in the (n−k)-ball of that radius.
pub fn sample_flat(n: usize, k: usize, center: &[f64], radius: f64, rng: &mut impl Rng) -> AffineFlat {
    let frame = random_frame(n, n, rng);
    let dirs = frame[..k].to_vec();
    let normals = frame[k..].to_vec();
    let m = n - k;
    let u = crate::rng::unit_vector(rng, m);
    let r = radius * rng.random::<f64>().powf(1.0 / m as f64);
    let mut point = center.to_vec();
    for (c, b) in u.iter().zip(&normals) {
        for i in 0..n {
            point[i] += r * c * b[i];
        }
    }
    AffineFlat { point, dirs, normals }
}

/// E over Haar k-flat directions of the (n−k)-dimensional Jacobian of the
/// projection of a fixed unit (n−k)-plane onto the flat's normal space.
/// Fixed once per (n, k) from a pinned-seed Monte-Carlo reference.
pub fn flat_calibration(n: usize, k: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&c) = cache.lock().unwrap().get(&(n, k)) {
        return c;
    }
    let m = n - k;
    let c = mc_mean(0xca1_1b7a7e, 1 << 20, |rng, _| {
        let normals = &random_frame(n, n, rng)[k..];
        // reference plane spanned by e_0..e_{m-1}
        let mut a = Mat::zeros(m, m);
        for (r, b) in normals.iter().enumerate() {
            for c in 0..m {
                a[(r, c)] = b[c];
            }
        }
        det(&a).abs()
    })
    .mean();
    cache.lock().unwrap().insert((n, k), c);
    c
}

/// Cauchy–Crofton estimate of vol_{n−k}(target) from random k-flats meeting
/// `region` (a ball containing the target; defaults to its bounding ball).
pub fn cauchy_crofton_euclidean<T: FlatTarget + ?Sized>(
    target: &T,
    k: usize,
    region: Option<(&[f64], f64)>,
    samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    let n = target.ambient();
    if samples == 0 {
        return usage("cauchy_crofton_euclidean needs at least one sample");
    }
    if k == 0 || k >= n || target.target_dim() + k != n {
        return usage(format!("codimension {k} does not match a {}-set in R^{n}", target.target_dim()));
    }
    let (tc, tr) = target.bounding_ball();
    let (center, radius) = match region {
        Some((c, r)) => {
            if c.len() != n || dist(c, &tc) + tr > r * (1.0 + 1e-12) {
                return usage("region does not contain the target");
            }
            (c.to_vec(), r)
        }
        None => (tc, tr.max(1e-300)),
    };
    let m = mc_mean(seed, samples, |rng, _| {
        let flat = sample_flat(n, k, &center, radius, rng);
        target.count_hits(&flat) as f64
    });
    let measure = ball_volume::<f64>((n - k) as i64)? * radius.powi((n - k) as i32);
    let scale = measure / flat_calibration(n, k);
    Ok(EstimateReport::from_moments(&m, scale, seed, "crofton-euclidean"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{circle_mesh, coordinate_sphere_mesh, polyline};
    use std::f64::consts::PI;

    #[test]
    fn great_circle_counts_two() {
        let m = coordinate_sphere_mesh(1, 32, 3);
        let mut rng = stream(3, 0);
        for i in 0..200 {
            let e = sample_equator(2, 1, &mut rng).unwrap();
            assert_eq!(count_intersections(&m, &e, i).unwrap().count, 2);
        }
    }

    #[test]
    fn empty_mesh_counts_zero() {
        let m = SubmanifoldMesh::empty(3, 1);
        let e = sample_equator(2, 1, &mut stream(1, 0)).unwrap();
        assert_eq!(count_intersections(&m, &e, 0).unwrap().count, 0);
    }

    #[test]
    fn equator_dimension_checked() {
        assert!(sample_equator(2, 2, &mut stream(1, 0)).is_err());
    }

    #[test]
    fn tie_is_perturbed() {
        // the equator passes exactly through a mesh vertex
        let m = coordinate_sphere_mesh(1, 4, 3);
        let v = m.vertices[0].clone();
        let e = EquatorialSubsphere::new(vec![v, vec![0.0, 0.0, 1.0]]).unwrap();
        let c = count_intersections(&m, &e, 5).unwrap();
        assert!(c.perturbed);
        assert_eq!(c.count, 2);
    }

    #[test]
    fn calibration_matches_known_constants() {
        assert!((flat_calibration(2, 1) - 2.0 / PI).abs() < 2e-3);
        assert!((flat_calibration(3, 1) - 0.5).abs() < 2e-3);
        assert!((flat_calibration(3, 2) - 0.5).abs() < 2e-3);
    }

    #[test]
    fn circle_perimeter() {
        let c = circle_mesh(&[0.5, 0.5], 0.25, &[1.0, 0.0], &[0.0, 1.0], 256);
        let r = cauchy_crofton_euclidean(&c, 1, Some((&[0.5, 0.5], 0.75)), 100_000, 4).unwrap();
        assert!((r.value - PI / 2.0).abs() / (PI / 2.0) < 0.02, "{r:?}");
    }

    #[test]
    fn region_must_contain_target() {
        let s = polyline(vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        assert!(cauchy_crofton_euclidean(&s, 1, Some((&[5.0, 5.0], 1.0)), 10, 1).is_err());
    }
}
