//! Convex bodies: support, membership and radial oracles, widths, central
//! sections and the minimal-section search.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::integral_geometry::random_frame;
use crate::linalg::{dot, norm, normalize, orthonormality_defect, orthonormalize};
use crate::report::EstimateReport;
use crate::rng::{mc_mean, stream, unit_vector, Moments};
use crate::spaces::ball_volume;

#[derive(Clone, Debug, PartialEq)]
pub enum BodyKind {
    /// {x : ‖x‖_p ≤ radius}; `p = f64::INFINITY` is the cube.
    PBall { n: usize, p: f64, radius: f64 },
    /// ∏[−hᵢ, hᵢ]
    Boxed { half_widths: Vec<f64> },
    /// convex hull of the vertices
    Polytope { vertices: Vec<Vec<f64>> },
    /// product of centered Euclidean balls of unit volume, one per block
    ProductOfBalls { dims: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct ConvexBody {
    pub kind: BodyKind,
    /// uniform dilation applied on top of `kind`
    pub scale: f64,
    pub symmetric: bool,
    volume: (f64, f64),
    radii: Vec<f64>,
}

const POLYTOPE_VOLUME_SAMPLES: usize = 400_000;
const LP_TOL: f64 = 1e-9;

impl ConvexBody {
    pub fn new(kind: BodyKind) -> Result<ConvexBody> {
        let symmetric = match &kind {
            BodyKind::PBall { n, p, radius } => {
                if *n == 0 || !(*p >= 1.0) || !(*radius > 0.0) {
                    return domain("p-ball needs n >= 1, p >= 1, radius > 0");
                }
                true
            }
            BodyKind::Boxed { half_widths } => {
                if half_widths.is_empty() || half_widths.iter().any(|&h| !(h > 0.0)) {
                    return domain("box half-widths must be positive");
                }
                true
            }
            BodyKind::ProductOfBalls { dims } => {
                if dims.is_empty() || dims.contains(&0) {
                    return domain("ball blocks must have positive dimension");
                }
                true
            }
            BodyKind::Polytope { vertices } => {
                let n = vertices.first().map_or(0, |v| v.len());
                if n == 0 || vertices.len() <= n || vertices.iter().any(|v| v.len() != n) {
                    return domain("polytope needs at least n+1 vertices in R^n");
                }
                polytope_is_symmetric(vertices)
            }
        };
        let radii = match &kind {
            BodyKind::ProductOfBalls { dims } => Self::block_radii(dims),
            _ => vec![],
        };
        let mut body = ConvexBody { kind, scale: 1.0, symmetric, volume: (0.0, 0.0), radii };
        body.volume = body.compute_volume()?;
        Ok(body)
    }

    pub fn ball(n: usize, radius: f64) -> ConvexBody {
        Self::new(BodyKind::PBall { n, p: 2.0, radius }).unwrap()
    }

    /// Centered cube of the given side.
    pub fn cube(n: usize, side: f64) -> ConvexBody {
        Self::new(BodyKind::Boxed { half_widths: vec![side / 2.0; n] }).unwrap()
    }

    /// Unit ℓ₁ ball.
    pub fn cross_polytope(n: usize) -> ConvexBody {
        Self::new(BodyKind::PBall { n, p: 1.0, radius: 1.0 }).unwrap()
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            BodyKind::PBall { n, .. } => *n,
            BodyKind::Boxed { half_widths } => half_widths.len(),
            BodyKind::Polytope { vertices } => vertices[0].len(),
            BodyKind::ProductOfBalls { dims } => dims.iter().sum(),
        }
    }

    pub fn scaled(&self, factor: f64) -> ConvexBody {
        let n = self.dim() as i32;
        ConvexBody {
            kind: self.kind.clone(),
            scale: self.scale * factor,
            symmetric: self.symmetric,
            volume: (self.volume.0 * factor.powi(n), self.volume.1),
            radii: self.radii.clone(),
        }
    }

    /// Volume, exact where a closed form exists.
    pub fn volume_estimate(&self) -> f64 {
        self.volume.0
    }

    /// Relative standard error of [`Self::volume_estimate`] (0 when exact).
    pub fn volume_rel_error(&self) -> f64 {
        self.volume.1
    }

    fn compute_volume(&self) -> Result<(f64, f64)> {
        let n = self.dim();
        let s = self.scale.powi(n as i32);
        Ok(match &self.kind {
            BodyKind::PBall { p, radius, .. } => {
                let unit = if p.is_infinite() {
                    2f64.powi(n as i32)
                } else {
                    use statrs::function::gamma::gamma;
                    (2.0 * gamma(1.0 + 1.0 / p)).powi(n as i32) / gamma(1.0 + n as f64 / p)
                };
                (unit * radius.powi(n as i32) * s, 0.0)
            }
            BodyKind::Boxed { half_widths } => (half_widths.iter().map(|h| 2.0 * h).product::<f64>() * s, 0.0),
            BodyKind::ProductOfBalls { .. } => (s, 0.0),
            BodyKind::Polytope { .. } => {
                let (lo, hi) = self.bounding_box();
                let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
                let m = mc_mean(0x701_7e5, POLYTOPE_VOLUME_SAMPLES, |rng, _| {
                    let x: Vec<f64> = lo.iter().zip(&hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
                    if self.contains(&x) {
                        1.0
                    } else {
                        0.0
                    }
                });
                let v = m.mean() * box_vol;
                (v, if v > 0.0 { m.std_error() * box_vol / v } else { 0.0 })
            }
        })
    }

    /// Euclidean radii of the ball blocks (each of unit volume).
    fn block_radii(dims: &[usize]) -> Vec<f64> {
        dims.iter().map(|&d| ball_volume::<f64>(d as i64).unwrap().powf(-1.0 / d as f64)).collect()
    }

    /// h_K(u) = max_{x ∈ K} ⟨x, u⟩
    pub fn support(&self, u: &[f64]) -> f64 {
        let h = match &self.kind {
            BodyKind::PBall { p, radius, .. } => radius * dual_norm(u, *p),
            BodyKind::Boxed { half_widths } => u.iter().zip(half_widths).map(|(x, h)| x.abs() * h).sum(),
            BodyKind::Polytope { vertices } => {
                vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
            }
            BodyKind::ProductOfBalls { dims } => {
                let mut off = 0;
                let mut h = 0.0;
                for (&d, r) in dims.iter().zip(self.radii.iter().copied()) {
                    h += r * norm(&u[off..off + d]);
                    off += d;
                }
                h
            }
        };
        self.scale * h
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let s = self.scale;
        match &self.kind {
            BodyKind::PBall { p, radius, .. } => p_norm(x, *p) <= radius * s,
            BodyKind::Boxed { half_widths } => x.iter().zip(half_widths).all(|(v, h)| v.abs() <= h * s),
            BodyKind::ProductOfBalls { dims } => {
                let mut off = 0;
                for (&d, r) in dims.iter().zip(self.radii.iter().copied()) {
                    if norm(&x[off..off + d]) > r * s {
                        return false;
                    }
                    off += d;
                }
                true
            }
            BodyKind::Polytope { vertices } => {
                let y: Vec<f64> = x.iter().map(|v| v / s).collect();
                polytope_contains(vertices, &y)
            }
        }
    }

    /// ρ_K(u) = sup{t ≥ 0 : t·u ∈ K} for a nonzero direction u.
    pub fn radial(&self, u: &[f64]) -> f64 {
        let r = match &self.kind {
            BodyKind::PBall { p, radius, .. } => radius / p_norm(u, *p),
            BodyKind::Boxed { half_widths } => {
                u.iter().zip(half_widths).map(|(x, h)| h / x.abs()).fold(f64::INFINITY, f64::min)
            }
            BodyKind::ProductOfBalls { dims } => {
                let mut off = 0;
                let mut r = f64::INFINITY;
                for (&d, rad) in dims.iter().zip(self.radii.iter().copied()) {
                    r = r.min(rad / norm(&u[off..off + d]));
                    off += d;
                }
                r
            }
            BodyKind::Polytope { vertices } => polytope_radial(vertices, u),
        };
        self.scale * r
    }

    /// Axis-aligned bounding box from the support function.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            hi[i] = self.support(&e);
            e[i] = -1.0;
            lo[i] = -self.support(&e);
        }
        (lo, hi)
    }

    /// max_{x ∈ K} |x|
    pub fn circumradius(&self) -> f64 {
        let n = self.dim() as f64;
        let r = match &self.kind {
            BodyKind::PBall { p, radius, .. } => {
                let e = if p.is_infinite() { 0.5 } else { (0.5 - 1.0 / p).max(0.0) };
                radius * n.powf(e)
            }
            BodyKind::Boxed { half_widths } => norm(half_widths),
            BodyKind::Polytope { vertices } => vertices.iter().map(|v| norm(v)).fold(0.0, f64::max),
            BodyKind::ProductOfBalls { .. } => norm(&self.radii),
        };
        self.scale * r
    }
}

fn p_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        norm(x)
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn dual_norm(u: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        p_norm(u, f64::INFINITY)
    } else if p.is_infinite() {
        p_norm(u, 1.0)
    } else {
        p_norm(u, p / (p - 1.0))
    }
}

fn polytope_is_symmetric(vertices: &[Vec<f64>]) -> bool {
    vertices.iter().all(|v| {
        vertices.iter().any(|w| v.iter().zip(w).all(|(a, b)| (a + b).abs() < 1e-12))
    })
}

fn polytope_contains(vertices: &[Vec<f64>], x: &[f64]) -> bool {
    let n = x.len();
    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let lambda: Vec<_> = vertices.iter().map(|_| pb.add_var(0.0, (0.0, f64::INFINITY))).collect();
    // slack allows tolerance on the equality constraints
    let slack = pb.add_var(1.0, (0.0, f64::INFINITY));
    for i in 0..n {
        let mut expr: Vec<(minilp::Variable, f64)> =
            lambda.iter().zip(vertices).map(|(&l, v)| (l, v[i])).collect();
        expr.push((slack, 1.0));
        pb.add_constraint(expr.clone(), ComparisonOp::Ge, x[i]);
        expr.pop();
        expr.push((slack, -1.0));
        pb.add_constraint(expr, ComparisonOp::Le, x[i]);
    }
    pb.add_constraint(lambda.iter().map(|&l| (l, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    match pb.solve() {
        Ok(sol) => sol.objective() <= LP_TOL,
        Err(_) => false,
    }
}

fn polytope_radial(vertices: &[Vec<f64>], u: &[f64]) -> f64 {
    let n = u.len();
    let mut pb = Problem::new(OptimizationDirection::Maximize);
    let lambda: Vec<_> = vertices.iter().map(|_| pb.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let t = pb.add_var(1.0, (0.0, f64::INFINITY));
    for i in 0..n {
        let mut expr: Vec<(minilp::Variable, f64)> =
            lambda.iter().zip(vertices).map(|(&l, v)| (l, v[i])).collect();
        expr.push((t, -u[i]));
        pb.add_constraint(expr, ComparisonOp::Eq, 0.0);
    }
    pb.add_constraint(lambda.iter().map(|&l| (l, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    match pb.solve() {
        Ok(sol) => sol.objective(),
        Err(minilp::Error::Unbounded) => f64::INFINITY,
        Err(minilp::Error::Infeasible) => 0.0,
    }
}

// ------------------------------------------------------- sphere optimizer

/// Deterministic starting directions: ±axes, sign patterns, then
/// pseudo-random fill up to `count`.
pub fn sphere_starts(n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = vec![];
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            out.push(e);
        }
    }
    if n <= 6 {
        for mask in 0..(1usize << n) {
            let v: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
            out.push(normalize(&v).unwrap());
        }
    }
    let mut rng = stream(0x57a2_7, n as u64);
    while out.len() < count {
        out.push(unit_vector(&mut rng, n));
    }
    out.truncate(count.max(1));
    out
}

/// Derivative-free minimization of f over the unit sphere: evaluate all
/// starts, then pattern search from the best few, using tangent
/// projections of the coordinate axes plus a rotating tangent basis.
pub fn minimize_on_sphere(f: &(dyn Fn(&[f64]) -> f64 + Sync), n: usize, starts: usize) -> (f64, Vec<f64>) {
    use rayon::prelude::*;
    let mut cand: Vec<(f64, Vec<f64>)> = sphere_starts(n, starts).into_iter().map(|u| (f(&u), u)).collect();
    cand.sort_by(|a, b| a.0.total_cmp(&b.0));
    cand.truncate(8);
    let results: Vec<(f64, Vec<f64>)> =
        cand.into_par_iter().enumerate().map(|(i, (v, u))| pattern_search(f, u, v, i as u64)).collect();
    results.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)).unwrap()
}

fn pattern_search(f: &(dyn Fn(&[f64]) -> f64 + Sync), mut u: Vec<f64>, mut fu: f64, salt: u64) -> (f64, Vec<f64>) {
    let n = u.len();
    if n == 1 {
        return (fu, u);
    }
    let mut step = 0.25;
    let mut rng = stream(0xba77_e2, salt);
    let mut evals = 0usize;
    while step > 1e-13 && evals < 200_000 {
        let mut dirs: Vec<Vec<f64>> = (0..n)
            .filter_map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                let c = dot(&e, &u);
                normalize(&e.iter().zip(&u).map(|(a, b)| a - c * b).collect::<Vec<_>>())
            })
            .collect();
        let mut basis = vec![u.clone()];
        basis.extend((0..n - 1).map(|_| unit_vector(&mut rng, n)));
        if let Some(q) = orthonormalize(&basis) {
            dirs.extend(q.into_iter().skip(1));
        }
        let mut improved = false;
        for d in &dirs {
            for s in [step, -step] {
                let trial = normalize(&u.iter().zip(d).map(|(a, b)| a + s * b).collect::<Vec<_>>()).unwrap();
                let ft = f(&trial);
                evals += 1;
                if ft < fu {
                    fu = ft;
                    u = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (fu, u)
}

// ------------------------------------------------------------ operations

/// Minimal width min_u h(u) + h(−u) and its direction.
pub fn width(k: &ConvexBody, iterations: usize) -> Result<(f64, Vec<f64>)> {
    let n = k.dim();
    let f = |u: &[f64]| {
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        k.support(u) + k.support(&neg)
    };
    let (w, u) = minimize_on_sphere(&f, n, iterations.max(64));
    if !w.is_finite() {
        return Err(Error::Domain("body is unbounded".into()));
    }
    Ok((w, u))
}

/// Largest centered ball rB ⊂ K and a direction where it touches ∂K.
pub fn inscribed_touching_pair(k: &ConvexBody) -> Result<(f64, Vec<f64>)> {
    if !k.symmetric {
        return usage("inscribed_touching_pair needs a centrally symmetric body");
    }
    let n = k.dim();
    let f = |u: &[f64]| k.radial(u);
    let (r, u) = minimize_on_sphere(&f, n, 64);
    if !(r > 0.0) {
        return domain("origin is not an interior point");
    }
    Ok((r, u))
}

/// Monte-Carlo (n−k)-volume of K ∩ (offset + span(frame)).
pub fn affine_section_volume(
    k: &ConvexBody,
    frame: &[Vec<f64>],
    offset: &[f64],
    samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    let n = k.dim();
    if frame.is_empty() || frame.iter().any(|f| f.len() != n) || orthonormality_defect(frame) > 1e-9 {
        return usage("section frame must be orthonormal vectors in R^n");
    }
    if samples == 0 {
        return usage("section volume needs samples");
    }
    let m = frame.len();
    let radius = k.circumradius() + norm(offset);
    let mom: Moments = mc_mean(seed, samples, |rng, _| {
        let u = unit_vector(rng, m);
        let r = radius * rng.random::<f64>().powf(1.0 / m as f64);
        let mut x = offset.to_vec();
        for (c, f) in u.iter().zip(frame) {
            for i in 0..n {
                x[i] += r * c * f[i];
            }
        }
        if k.contains(&x) {
            1.0
        } else {
            0.0
        }
    });
    let scale = ball_volume::<f64>(m as i64)? * radius.powi(m as i32);
    Ok(EstimateReport::from_moments(&mom, scale, seed, "section-mc"))
}

/// Central section K ∩ span(frame).
pub fn central_section_volume(k: &ConvexBody, frame: &[Vec<f64>], samples: usize, seed: u64) -> Result<EstimateReport> {
    affine_section_volume(k, frame, &vec![0.0; k.dim()], samples, seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub offsets: Vec<f64>,
    pub values: Vec<EstimateReport>,
    pub max_at_center: bool,
    pub nonincreasing: bool,
    pub pass: bool,
}

/// Checks that t ↦ vol(K ∩ (L + t·v)) peaks at t = 0 and decreases in |t|,
/// within 3σ. Uses common random numbers across offsets.
pub fn section_profile_logconcavity_check(
    k: &ConvexBody,
    frame: &[Vec<f64>],
    direction: &[f64],
    offsets: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ProfileReport> {
    if !k.symmetric {
        return usage("profile check needs a centrally symmetric body");
    }
    let v = normalize(direction).ok_or_else(|| Error::Usage("zero direction".into()))?;
    let values: Vec<EstimateReport> = offsets
        .iter()
        .map(|&t| {
            let off: Vec<f64> = v.iter().map(|x| x * t).collect();
            affine_section_volume(k, frame, &off, samples, seed)
        })
        .collect::<Result<_>>()?;
    let tol = |a: &EstimateReport, b: &EstimateReport| 3.0 * (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    let center = offsets.iter().position(|&t| t == 0.0);
    let max_at_center = match center {
        Some(c) => values.iter().all(|v| v.value <= values[c].value + tol(v, &values[c])),
        None => true,
    };
    let mut order: Vec<usize> = (0..offsets.len()).collect();
    order.sort_by(|&a, &b| offsets[a].abs().total_cmp(&offsets[b].abs()));
    let nonincreasing = order.windows(2).all(|w| {
        let (a, b) = (&values[w[0]], &values[w[1]]);
        b.value <= a.value + tol(a, b)
    });
    Ok(ProfileReport { offsets: offsets.to_vec(), values, max_at_center, nonincreasing, pass: max_at_center && nonincreasing })
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionSearch {
    pub frame: Vec<Vec<f64>>,
    pub best: EstimateReport,
    pub start_value: f64,
    pub bound: f64,
    /// scale applied to bring the body to volume v_n
    pub normalization: f64,
    /// relative error of that normalization, propagated into the margin
    pub normalization_error: f64,
    pub pass: bool,
}

/// Zhang-type search: normalize K to volume v_n, then minimize central
/// (n−k)-section volumes over the Grassmannian by random geodesic steps.
pub fn min_section_search(
    body: &ConvexBody,
    k: usize,
    restarts: usize,
    samples: usize,
    seed: u64,
) -> Result<SectionSearch> {
    if !body.symmetric {
        return usage("minimal-section search is only defined for centrally symmetric bodies");
    }
    let n = body.dim();
    if k == 0 || k >= n {
        return domain("need 1 <= k < n");
    }
    let m = n - k;
    let vn = ball_volume::<f64>(n as i64)?;
    let lambda = (vn / body.volume_estimate()).powf(1.0 / n as f64);
    let kb = body.scaled(lambda);
    let search_samples = (samples / 4).max(2000);
    let eval = |frame: &[Vec<f64>]| central_section_volume(&kb, frame, search_samples, seed ^ 0x5ea2c4).unwrap().value;
    let mut rng = stream(seed, 0xf2a);
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut start_value = f64::INFINITY;
    for r in 0..restarts.max(1) {
        let mut frame = if r == 0 { diagonal_frame(n, m) } else { random_frame(n, m, &mut rng) };
        let mut val = eval(&frame);
        start_value = start_value.min(val);
        let mut eta = 0.5;
        while eta > 1e-3 {
            let mut improved = false;
            for _ in 0..6 {
                let moved: Vec<Vec<f64>> = frame
                    .iter()
                    .map(|f| f.iter().map(|x| x + eta * rng.sample::<f64, _>(rand_distr::StandardNormal)).collect())
                    .collect();
                if let Some(cand) = orthonormalize(&moved) {
                    let v = eval(&cand);
                    if v < val {
                        val = v;
                        frame = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                eta *= 0.6;
            }
        }
        if best.as_ref().is_none_or(|b| val < b.0) {
            best = Some((val, frame));
        }
    }
    let (_, frame) = best.unwrap();
    let report = central_section_volume(&kb, &frame, samples, seed)?;
    let bound = ball_volume::<f64>(m as i64)?;
    let norm_err = body.volume_rel_error() * m as f64 / n as f64;
    let pass = report.value <= bound * (1.0 + 3.0 * norm_err) + 3.0 * report.std_error;
    Ok(SectionSearch {
        frame,
        best: report,
        start_value,
        bound,
        normalization: lambda,
        normalization_error: norm_err,
        pass,
    })
}

/// Orthonormal frame of the complement of the span of k "diagonal"
/// directions; a good starting point for polytopes.
fn diagonal_frame(n: usize, m: usize) -> Vec<Vec<f64>> {
    let k = n - m;
    let mut normals: Vec<Vec<f64>> = vec![];
    for j in 0..k {
        normals.push((0..n).map(|i| if i % (j + 1) == 0 { 1.0 } else { -1.0 }).collect());
    }
    let normals = orthonormalize(&normals).unwrap_or_else(|| random_frame(n, k, &mut stream(1, 1)));
    crate::linalg::orthogonal_complement(&normals, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        let (w, _) = width(&ConvexBody::ball(3, 1.0), 16).unwrap();
        assert!((w - 2.0).abs() < 1e-9);
        let (w, u) = width(&ConvexBody::cube(3, 1.0), 16).unwrap();
        assert!((w - 1.0).abs() < 1e-9);
        assert!(u.iter().filter(|x| x.abs() > 1.0 - 1e-6).count() == 1);
    }

    #[test]
    fn triangle_width_is_altitude() {
        let tri = ConvexBody::new(BodyKind::Polytope {
            vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]],
        })
        .unwrap();
        assert!(!tri.symmetric);
        let (w, _) = width(&tri, 64).unwrap();
        assert!((w - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn inradius_of_box() {
        let b = ConvexBody::new(BodyKind::Boxed { half_widths: vec![1.0, 0.5] }).unwrap();
        let (r, u) = inscribed_touching_pair(&b).unwrap();
        assert!((r - 0.5).abs() < 1e-9);
        assert!(u[1].abs() > 1.0 - 1e-6);
    }

    #[test]
    fn polytope_oracles() {
        let sq = ConvexBody::new(BodyKind::Polytope {
            vertices: vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]],
        })
        .unwrap();
        assert!(sq.symmetric);
        assert!(sq.contains(&[0.5, -0.9]));
        assert!(!sq.contains(&[1.1, 0.0]));
        assert!((sq.radial(&[1.0, 0.0]) - 1.0).abs() < 1e-9);
        assert!((sq.volume_estimate() - 4.0).abs() < 0.05);
    }

    #[test]
    fn square_sections() {
        let c = ConvexBody::cube(2, 1.0);
        let axis = central_section_volume(&c, &[vec![1.0, 0.0]], 100_000, 1).unwrap();
        assert!((axis.value - 1.0).abs() < 0.02);
        let h = 0.5f64.sqrt();
        let diag = central_section_volume(&c, &[vec![h, h]], 100_000, 2).unwrap();
        assert!((diag.value - 2f64.sqrt()).abs() / 2f64.sqrt() < 0.01, "{diag:?}");
    }

    #[test]
    fn non_symmetric_rejected() {
        let tri = ConvexBody::new(BodyKind::Polytope {
            vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        })
        .unwrap();
        assert!(min_section_search(&tri, 1, 1, 1000, 1).is_err());
    }
}
