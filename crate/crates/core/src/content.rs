//! Minkowski-content and cube-cover volume estimators.

use std::collections::{BTreeMap, HashMap};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::linalg::{dist, dot, solve, sub, Mat};
use crate::mesh::SubmanifoldMesh;
use crate::report::EstimateReport;
use crate::rng::{mc_mean, Moments};
use crate::spaces::{ball_volume, Space};

// ------------------------------------------------------------ distances

/// Euclidean distance from p to a simplex given by its vertices.
///
/// The nearest point lies in the relative interior of exactly one face, where
/// it is the orthogonal projection onto that face's affine hull; every face
/// is tried and the admissible candidates compared.
pub fn euclidean_point_simplex_distance(p: &[f64], simplex: &[&[f64]]) -> f64 {
    let m = simplex.len();
    let mut best = f64::INFINITY;
    for mask in 1usize..(1 << m) {
        let face: Vec<&[f64]> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| simplex[i]).collect();
        if let Some(q) = affine_projection(p, &face) {
            best = best.min(dist(p, &q));
        }
    }
    best
}

fn affine_projection(p: &[f64], face: &[&[f64]]) -> Option<Vec<f64>> {
    let w0 = face[0];
    if face.len() == 1 {
        return Some(w0.to_vec());
    }
    let edges: Vec<Vec<f64>> = face[1..].iter().map(|w| sub(w, w0)).collect();
    let r = sub(p, w0);
    let e = Mat::from_cols(&edges);
    let mu = solve(&e.gram(), &e.transpose().mul_vec(&r))?;
    let l0 = 1.0 - mu.iter().sum::<f64>();
    if l0 < 0.0 || mu.iter().any(|&x| x < 0.0) {
        return None;
    }
    let mut q = w0.to_vec();
    for (m, ed) in mu.iter().zip(&edges) {
        for i in 0..q.len() {
            q[i] += m * ed[i];
        }
    }
    Some(q)
}

/// Geodesic distance on the unit sphere from p to the spherical simplex
/// spanned (as a cone) by unit vertices.
pub fn spherical_point_simplex_distance(p: &[f64], simplex: &[&[f64]]) -> f64 {
    let m = simplex.len();
    let mut best_cos = f64::NEG_INFINITY;
    for mask in 1usize..(1 << m) {
        let face: Vec<&[f64]> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| simplex[i]).collect();
        if face.len() == 1 {
            best_cos = best_cos.max(dot(p, face[0]));
            continue;
        }
        let cols: Vec<Vec<f64>> = face.iter().map(|w| w.to_vec()).collect();
        let w = Mat::from_cols(&cols);
        let Some(lambda) = solve(&w.gram(), &w.transpose().mul_vec(p)) else { continue };
        if lambda.iter().any(|&x| x < 0.0) {
            continue;
        }
        let q = w.mul_vec(&lambda);
        // ⟨p, q⟩ = |q|² for the orthogonal projection q
        let nq = dot(&q, &q).sqrt();
        if nq > 0.0 {
            best_cos = best_cos.max(nq);
        }
    }
    best_cos.clamp(-1.0, 1.0).acos()
}

// ----------------------------------------------------------- mesh index

/// Uniform hash grid over simplex bounding boxes (expanded by a margin);
/// falls back to a plain list in high ambient dimension.
pub struct MeshIndex {
    cell: f64,
    grid: Option<HashMap<Vec<i64>, Vec<u32>>>,
    all: Vec<u32>,
}

impl MeshIndex {
    pub fn new(mesh: &SubmanifoldMesh, margin: f64) -> MeshIndex {
        let all: Vec<u32> = (0..mesh.len() as u32).collect();
        let (lo, hi) = mesh.bounding_box();
        let extent = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        let cell = (2.0 * margin).max(extent / 64.0).max(1e-12);
        if mesh.ambient > 5 || mesh.is_empty() {
            return MeshIndex { cell, grid: None, all };
        }
        let mut grid: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        for (si, s) in mesh.simplices.iter().enumerate() {
            let mut a = vec![f64::INFINITY; mesh.ambient];
            let mut b = vec![f64::NEG_INFINITY; mesh.ambient];
            for &v in s {
                for k in 0..mesh.ambient {
                    a[k] = a[k].min(mesh.vertices[v][k]);
                    b[k] = b[k].max(mesh.vertices[v][k]);
                }
            }
            let ia: Vec<i64> = a.iter().map(|x| ((x - margin) / cell).floor() as i64).collect();
            let ib: Vec<i64> = b.iter().map(|x| ((x + margin) / cell).floor() as i64).collect();
            let count: i64 = ia.iter().zip(&ib).map(|(x, y)| y - x + 1).product();
            if count > 100_000 {
                return MeshIndex { cell, grid: None, all };
            }
            let mut idx = ia.clone();
            loop {
                grid.entry(idx.clone()).or_default().push(si as u32);
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] <= ib[k] {
                        break;
                    }
                    idx[k] = ia[k];
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        MeshIndex { cell, grid: Some(grid), all }
    }

    /// Simplices that may lie within `margin` of p.
    pub fn candidates(&self, p: &[f64]) -> &[u32] {
        match &self.grid {
            None => &self.all,
            Some(g) => {
                let key: Vec<i64> = p.iter().map(|x| (x / self.cell).floor() as i64).collect();
                g.get(&key).map_or(&[], |v| v.as_slice())
            }
        }
    }
}

/// Distance from points of a space to a mesh, restricted to distances
/// below a cutoff.
pub struct MeshDistance<'a> {
    space: &'a Space,
    mesh: &'a SubmanifoldMesh,
    index: MeshIndex,
    cutoff: f64,
}

impl<'a> MeshDistance<'a> {
    pub fn new(space: &'a Space, mesh: &'a SubmanifoldMesh, cutoff: f64) -> Result<Self> {
        if mesh.ambient != space.ambient_dim() {
            return usage("mesh ambient dimension does not match the space");
        }
        if let Space::ComplexProjective(_) = space {
            return Err(Error::Unsupported("mesh distances in CP^n; use a distance oracle".into()));
        }
        Ok(MeshDistance { space, mesh, index: MeshIndex::new(mesh, cutoff), cutoff })
    }

    fn raw(&self, p: &[f64], spherical: bool) -> f64 {
        let mut best = f64::INFINITY;
        for &si in self.index.candidates(p) {
            let s = self.mesh.simplex(si as usize);
            let d = if spherical {
                spherical_point_simplex_distance(p, &s)
            } else {
                euclidean_point_simplex_distance(p, &s)
            };
            best = best.min(d);
        }
        best
    }

    /// Distance if it is below the cutoff, else `f64::INFINITY`.
    pub fn distance(&self, p: &[f64]) -> f64 {
        let d = match self.space {
            Space::Sphere(_) => self.raw(p, true),
            Space::RealProjective(_) => {
                let neg: Vec<f64> = p.iter().map(|x| -x).collect();
                self.raw(p, true).min(self.raw(&neg, true))
            }
            Space::Torus(a) => {
                let n = a.len();
                let mut best = f64::INFINITY;
                for code in 0..3usize.pow(n as u32) {
                    let mut c = code;
                    let q: Vec<f64> = (0..n)
                        .map(|i| {
                            let s = (c % 3) as f64 - 1.0;
                            c /= 3;
                            p[i] + s * a[i]
                        })
                        .collect();
                    best = best.min(self.raw(&q, false));
                }
                best
            }
            _ => self.raw(p, false),
        };
        if d < self.cutoff {
            d
        } else {
            f64::INFINITY
        }
    }
}

/// The set whose neighborhood is measured.
pub enum SetRef<'a> {
    Mesh(&'a SubmanifoldMesh),
    /// distance-to-set oracle (membership in ν_t for every t)
    Oracle(&'a (dyn Fn(&[f64]) -> f64 + Sync)),
}

/// Sampling region for ν_t: either the whole space or a box clipped to it.
enum Region {
    Whole(f64),
    Boxed { lo: Vec<f64>, hi: Vec<f64>, volume: f64 },
}

fn region_for(space: &Space, set: &SetRef, t: f64) -> Result<Region> {
    let euclidean_like = matches!(space, Space::Cube(_) | Space::Ball(_) | Space::ConvexBody(_) | Space::Euclidean(_));
    match (set, euclidean_like) {
        (SetRef::Mesh(m), true) if !m.is_empty() => {
            let (mut lo, mut hi) = m.bounding_box();
            for k in 0..lo.len() {
                lo[k] -= t;
                hi[k] += t;
            }
            let (slo, shi) = space_box(space);
            for k in 0..lo.len() {
                lo[k] = lo[k].max(slo[k]);
                hi[k] = hi[k].min(shi[k]);
            }
            let volume = lo.iter().zip(&hi).map(|(a, b)| (b - a).max(0.0)).product();
            Ok(Region::Boxed { lo, hi, volume })
        }
        _ => {
            let v = space.volume();
            if !v.is_finite() {
                return usage("neighborhood of an oracle set in R^n needs a bounded space");
            }
            Ok(Region::Whole(v))
        }
    }
}

fn space_box(space: &Space) -> (Vec<f64>, Vec<f64>) {
    let n = space.ambient_dim();
    match space {
        Space::Cube(s) => (vec![0.0; n], s.clone()),
        Space::Ball(_) => (vec![-1.0; n], vec![1.0; n]),
        Space::ConvexBody(k) => k.bounding_box(),
        _ => (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n]),
    }
}

fn in_space(space: &Space, x: &[f64]) -> bool {
    match space {
        Space::Ball(_) => dot(x, x) < 1.0,
        Space::ConvexBody(k) => k.contains(x),
        _ => true,
    }
}

/// Draws samples from the region and feeds each one's distance to the set
/// (∞ if outside the space) into `score`.
fn sample_distances<F>(space: &Space, set: &SetRef, t_max: f64, samples: usize, seed: u64, score: F) -> Result<(Moments, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let region = region_for(space, set, t_max)?;
    let md = match set {
        SetRef::Mesh(m) => Some(MeshDistance::new(space, m, t_max)?),
        SetRef::Oracle(_) => None,
    };
    let dist_fn = |x: &[f64]| -> f64 {
        match (set, &md) {
            (SetRef::Mesh(m), Some(d)) => {
                if m.is_empty() {
                    f64::INFINITY
                } else {
                    d.distance(x)
                }
            }
            (SetRef::Oracle(f), _) => f(x),
            _ => unreachable!(),
        }
    };
    let failed = std::sync::atomic::AtomicBool::new(false);
    let (mom, vol) = match &region {
        Region::Whole(v) => (
            mc_mean(seed, samples, |rng, _| match space.sample_uniform(rng) {
                Ok(x) => score(dist_fn(&x)),
                Err(_) => {
                    failed.store(true, std::sync::atomic::Ordering::Relaxed);
                    0.0
                }
            }),
            *v,
        ),
        Region::Boxed { lo, hi, volume } => (
            mc_mean(seed, samples, |rng, _| {
                let x: Vec<f64> = lo.iter().zip(hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
                if in_space(space, &x) {
                    score(dist_fn(&x))
                } else {
                    0.0
                }
            }),
            *volume,
        ),
    };
    if failed.into_inner() {
        return Err(Error::Sampling { attempts: samples, acceptance_rate: 0.0 });
    }
    Ok((mom, vol))
}

/// Monte-Carlo μ(ν_t X).
pub fn neighborhood_volume(space: &Space, set: &SetRef, t: f64, samples: usize, seed: u64) -> Result<EstimateReport> {
    if !(t > 0.0) {
        return domain("neighborhood radius must be positive");
    }
    if samples == 0 {
        return usage("neighborhood_volume needs samples");
    }
    let (m, vol) = sample_distances(space, set, t, samples, seed, |d| if d < t { 1.0 } else { 0.0 })?;
    Ok(EstimateReport::from_moments(&m, vol, seed, "neighborhood-mc"))
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiReport {
    /// extrapolated c₀
    pub estimate: EstimateReport,
    pub slope: f64,
    /// RMS residual of the linear fit over the schedule
    pub residual: f64,
    pub schedule: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Least-squares weights w with c₀ = Σ wᵢ yᵢ for the fit y = c₀ + c₁ t.
fn intercept_weights(ts: &[f64]) -> Vec<f64> {
    let n = ts.len() as f64;
    let st: f64 = ts.iter().sum();
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let den = n * stt - st * st;
    ts.iter().map(|t| (stt - t * st) / den).collect()
}

fn check_schedule(ts: &[f64]) -> Result<()> {
    if ts.len() < 3 {
        return usage("t schedule needs at least 3 values");
    }
    if ts.iter().any(|&t| !(t > 0.0)) {
        return domain("t schedule values must be positive");
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) {
        return usage("t schedule must be strictly decreasing");
    }
    Ok(())
}

/// vol(ν_t X)/(v_k t^k) along a decreasing schedule, extrapolated to t → 0
/// by a linear fit. All t share the same samples.
pub fn lower_minkowski_content(
    space: &Space,
    set: &SetRef,
    k: usize,
    schedule: &[f64],
    samples: usize,
    seed: u64,
) -> Result<MinkowskiReport> {
    check_schedule(schedule)?;
    if samples == 0 {
        return usage("lower_minkowski_content needs samples");
    }
    let vk = ball_volume::<f64>(k as i64)?;
    let norms: Vec<f64> = schedule.iter().map(|t| vk * t.powi(k as i32)).collect();
    let w = intercept_weights(schedule);
    let t_max = schedule[0];
    let (m, vol) = sample_distances(space, set, t_max, samples, seed, |d| {
        schedule.iter().zip(&norms).zip(&w).map(|((&t, &nm), &wi)| if d < t { wi / nm } else { 0.0 }).sum()
    })?;
    // per-t ratios from a second pass over the same stream
    let ratios: Vec<f64> = schedule
        .iter()
        .zip(&norms)
        .map(|(&t, &nm)| {
            sample_distances(space, set, t_max, samples, seed, |d| if d < t { 1.0 } else { 0.0 })
                .map(|(mm, v)| mm.mean() * v / nm)
        })
        .collect::<Result<_>>()?;
    let estimate = EstimateReport::from_moments(&m, vol, seed, "minkowski-linear-fit");
    let c0 = estimate.value;
    let n = schedule.len() as f64;
    let st: f64 = schedule.iter().sum();
    let sy: f64 = ratios.iter().sum();
    let slope = (sy - n * c0) / st;
    let residual =
        (schedule.iter().zip(&ratios).map(|(t, r)| (r - c0 - slope * t).powi(2)).sum::<f64>() / n).sqrt();
    Ok(MinkowskiReport { estimate, slope, residual, schedule: schedule.to_vec(), ratios })
}

// ---------------------------------------------------------------- covers

/// Open axis-parallel cube (corner, corner + edge).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cube {
    pub corner: Vec<f64>,
    pub edge: f64,
}

impl Cube {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.corner).all(|(&v, &c)| v > c && v < c + self.edge)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CubeCover {
    pub cubes: Vec<Cube>,
}

/// Σ dᵢᵏ
pub fn hausdorff_cover_weight(cover: &CubeCover, k: i32) -> f64 {
    cover.cubes.iter().map(|c| c.edge.powi(k)).sum()
}

/// Whether the closed box [lo, hi] meets the simplex (LP feasibility).
pub fn simplex_meets_box(simplex: &[&[f64]], lo: &[f64], hi: &[f64]) -> bool {
    let n = lo.len();
    // cheap rejection on bounding boxes
    for k in 0..n {
        let a = simplex.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min);
        let b = simplex.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max);
        if b < lo[k] || a > hi[k] {
            return false;
        }
    }
    if simplex.len() == 1 {
        return true;
    }
    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let lam: Vec<_> = simplex.iter().map(|_| pb.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for k in 0..n {
        let expr: Vec<(minilp::Variable, f64)> = lam.iter().zip(simplex).map(|(&l, v)| (l, v[k])).collect();
        pb.add_constraint(expr.clone(), ComparisonOp::Ge, lo[k]);
        pb.add_constraint(expr, ComparisonOp::Le, hi[k]);
    }
    pb.add_constraint(lam.iter().map(|&l| (l, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    pb.solve().is_ok()
}

/// Feasible cover of a mesh by open cubes of edge ≤ max_edge: closed grid
/// cells of pitch ≈ max_edge/2 meeting the mesh, each slightly enlarged to
/// an open cube; aligned 2ⁿ blocks of marked cells are merged into one cube.
pub fn greedy_cover(mesh: &SubmanifoldMesh, max_edge: f64) -> Result<CubeCover> {
    if !(max_edge > 0.0) {
        return domain("max_edge must be positive");
    }
    if mesh.is_empty() && mesh.vertices.is_empty() {
        return Ok(CubeCover::default());
    }
    let n = mesh.ambient;
    let h = 0.5 * max_edge * (1.0 - 2e-9);
    let pad = 0.5e-9 * h;
    // fixed generic grid offsets keep axis-parallel inputs off grid lines
    let offset: Vec<f64> = (0..n).map(|i| h * (0.37 + 0.2394 * i as f64).fract()).collect();
    let cell_of = |x: f64, k: usize| ((x - offset[k]) / h).floor() as i64;
    let mut marked: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let simplices: Vec<Vec<usize>> = if mesh.dim == 0 && mesh.simplices.is_empty() {
        (0..mesh.vertices.len()).map(|i| vec![i]).collect()
    } else {
        mesh.simplices.clone()
    };
    for s in &simplices {
        let pts: Vec<&[f64]> = s.iter().map(|&i| mesh.vertices[i].as_slice()).collect();
        let ia: Vec<i64> = (0..n).map(|k| cell_of(pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min), k)).collect();
        let ib: Vec<i64> = (0..n).map(|k| cell_of(pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max), k)).collect();
        let mut idx = ia.clone();
        loop {
            if !marked.contains_key(&idx) {
                let lo: Vec<f64> = (0..n).map(|k| offset[k] + idx[k] as f64 * h).collect();
                let hi: Vec<f64> = lo.iter().map(|x| x + h).collect();
                if simplex_meets_box(&pts, &lo, &hi) {
                    marked.insert(idx.clone(), ());
                }
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] <= ib[k] {
                    break;
                }
                idx[k] = ia[k];
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    // merge full aligned blocks
    let mut blocks: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for idx in marked.keys() {
        *blocks.entry(idx.iter().map(|x| x.div_euclid(2)).collect()).or_default() += 1;
    }
    let full = 1usize << n;
    let mut cubes = vec![];
    for (b, &count) in &blocks {
        if count == full {
            cubes.push(Cube {
                corner: (0..n).map(|k| offset[k] + 2.0 * b[k] as f64 * h - pad).collect(),
                edge: 2.0 * h + 2.0 * pad,
            });
        }
    }
    for idx in marked.keys() {
        let b: Vec<i64> = idx.iter().map(|x| x.div_euclid(2)).collect();
        if blocks[&b] != full {
            cubes.push(Cube { corner: (0..n).map(|k| offset[k] + idx[k] as f64 * h - pad).collect(), edge: h + 2.0 * pad });
        }
    }
    Ok(CubeCover { cubes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{coordinate_sphere_mesh, polyline};
    use std::f64::consts::PI;

    #[test]
    fn euclidean_distance_cases() {
        let a = [0.0, 0.0];
        let b = [1.0, 0.0];
        let s = [&a[..], &b[..]];
        assert!((euclidean_point_simplex_distance(&[0.5, 2.0], &s) - 2.0).abs() < 1e-14);
        assert!((euclidean_point_simplex_distance(&[-3.0, 4.0], &s) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn spherical_distance_to_arc() {
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 1.0, 0.0];
        let s = [&a[..], &b[..]];
        let th = 0.3f64;
        let p = [0.5f64.sqrt() * th.cos(), 0.5f64.sqrt() * th.cos(), th.sin()];
        assert!((spherical_point_simplex_distance(&p, &s) - th).abs() < 1e-12);
        // beyond the endpoint the vertex is nearest
        let q = [0.0, -1.0, 0.0];
        assert!((spherical_point_simplex_distance(&q, &s) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn equator_tube() {
        let sp = Space::Sphere(2);
        let eq = coordinate_sphere_mesh(1, 128, 3);
        let t = 0.2;
        let r = neighborhood_volume(&sp, &SetRef::Mesh(&eq), t, 100_000, 5).unwrap();
        let want = 4.0 * PI * t.sin();
        assert!((r.value - want).abs() / want < 0.02, "{r:?}");
    }

    #[test]
    fn stadium() {
        let seg = polyline(vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        let t = 0.05;
        let r = neighborhood_volume(&Space::Euclidean(2), &SetRef::Mesh(&seg), t, 100_000, 2).unwrap();
        let want = 2.0 * t + PI * t * t;
        assert!((r.value - want).abs() / want < 0.02, "{r:?}");
    }

    #[test]
    fn schedule_validation() {
        let seg = polyline(vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        let sp = Space::Euclidean(2);
        assert!(lower_minkowski_content(&sp, &SetRef::Mesh(&seg), 1, &[0.1, 0.2, 0.3], 10, 1).is_err());
        assert!(lower_minkowski_content(&sp, &SetRef::Mesh(&seg), 1, &[0.2, 0.1], 10, 1).is_err());
        assert!(neighborhood_volume(&sp, &SetRef::Mesh(&seg), 0.0, 10, 1).is_err());
    }

    #[test]
    fn cover_examples() {
        let seg = polyline(vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        let w = hausdorff_cover_weight(&greedy_cover(&seg, 0.1).unwrap(), 1);
        assert!(w <= 1.3 && w >= 1.0, "{w}");
        let diag = polyline(vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let w = hausdorff_cover_weight(&greedy_cover(&diag, 0.1).unwrap(), 1);
        assert!(w >= 2f64.sqrt() * 0.9 && w <= 2.1, "{w}");
        let pt = SubmanifoldMesh::new(2, 0, vec![vec![0.3, 0.3]], vec![vec![0]]).unwrap();
        let c = greedy_cover(&pt, 0.1).unwrap();
        assert!(hausdorff_cover_weight(&c, 1) <= 0.1);
        assert!(c.cubes.iter().any(|q| q.contains(&[0.3, 0.3])));
        assert!(greedy_cover(&pt, 0.0).is_err());
    }

    #[test]
    fn cover_covers() {
        let diag = polyline(vec![vec![0.0, 0.0], vec![1.0, 0.7]]);
        let c = greedy_cover(&diag, 0.05).unwrap();
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let p = [t, 0.7 * t];
            assert!(c.cubes.iter().any(|q| q.contains(&p)), "{p:?}");
        }
        assert!(c.cubes.iter().all(|q| q.edge <= 0.05));
    }
}
