//! Explicit maps whose fibers realize the waist bounds: linear sphere
//! projections, Hopf fibrations and their projective quotients, the |z₁|
//! and x₁² examples, and torus projections.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{conj, mul, norm_sq};
use crate::content::{neighborhood_volume, SetRef};
use crate::error::{domain, usage, Error, Result};
use crate::linalg::{dot, norm, orthogonal_complement, orthonormality_defect, orthonormalize, Mat};
use crate::mesh::{circle_mesh, periodic_surface, polyline, sphere_mesh, SubmanifoldMesh};
use crate::quadrature::integrate;
use crate::report::{BoundRef, EstimateReport};
use crate::rng::{stream, unit_vector};
use crate::spaces::{complex_projective_volume, sphere_volume, Space};

const UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Division {
    Complex,
    Quaternion,
    Octonion,
}

impl Division {
    pub fn dim(self) -> usize {
        match self {
            Division::Complex => 2,
            Division::Quaternion => 4,
            Division::Octonion => 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiberMap {
    /// 𝕊ⁿ → ℝᵏ, x ↦ Rx with orthonormal rows R.
    LinearProjection { n: usize, rows: Vec<Vec<f64>> },
    /// 𝕊^{2m−1} → 𝕊^m, (a, b) ↦ (|a|² − |b|², 2ab̄).
    Hopf(Division),
    /// The induced map on ℝP^N of an even map on 𝕊^N.
    RpQuotient(Box<FiberMap>),
    /// ℂP³ → 𝕊⁴ through which the quaternionic Hopf map factors.
    CpQuotient(Box<FiberMap>),
    AbsZ1OnS3,
    AbsZ1OnRp3,
    X1SquaredOnRp2,
    /// T_{a₁..aₙ} → T_{a_keep}, keeping the listed coordinates.
    TorusProjection { lengths: Vec<f64>, keep: Vec<usize> },
}

fn e(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

impl FiberMap {
    pub fn hopf3() -> FiberMap {
        FiberMap::Hopf(Division::Complex)
    }

    pub fn hopf7() -> FiberMap {
        FiberMap::Hopf(Division::Quaternion)
    }

    pub fn hopf15() -> FiberMap {
        FiberMap::Hopf(Division::Octonion)
    }

    /// Coordinate projection 𝕊ⁿ → ℝᵏ onto the first k axes.
    pub fn coordinate_projection(n: usize, k: usize) -> Result<FiberMap> {
        FiberMap::linear(n, (0..k).map(|i| e(n + 1, i)).collect())
    }

    pub fn linear(n: usize, rows: Vec<Vec<f64>>) -> Result<FiberMap> {
        if rows.is_empty() || rows.len() > n {
            return usage("linear projection needs 1 <= k <= n rows");
        }
        if rows.iter().any(|r| r.len() != n + 1) || orthonormality_defect(&rows) > 1e-12 {
            return usage("linear projection rows must be orthonormal in R^{n+1}");
        }
        Ok(FiberMap::LinearProjection { n, rows })
    }

    pub fn rp_quotient(inner: FiberMap) -> Result<FiberMap> {
        match inner {
            FiberMap::Hopf(_) | FiberMap::AbsZ1OnS3 => Ok(FiberMap::RpQuotient(Box::new(inner))),
            _ => usage("only even maps descend to RP^n"),
        }
    }

    pub fn cp_quotient(inner: FiberMap) -> Result<FiberMap> {
        match inner {
            FiberMap::Hopf(Division::Quaternion) => Ok(FiberMap::CpQuotient(Box::new(inner))),
            _ => Err(Error::Unsupported("only the quaternionic Hopf map is factored through CP^3".into())),
        }
    }

    pub fn torus_projection(lengths: Vec<f64>, keep: Vec<usize>) -> Result<FiberMap> {
        Space::torus(lengths.clone())?;
        let mut k = keep.clone();
        k.sort_unstable();
        k.dedup();
        if k.len() != keep.len() || k.iter().any(|&i| i >= lengths.len()) || k.is_empty() || k.len() == lengths.len() {
            return usage("torus projection keeps a proper nonempty set of distinct coordinates");
        }
        Ok(FiberMap::TorusProjection { lengths, keep: k })
    }

    /// Parses the names used by the CLI.
    pub fn by_name(name: &str) -> Result<FiberMap> {
        Ok(match name {
            "hopf3" | "hopf_3_2" => FiberMap::hopf3(),
            "hopf7" | "hopf_7_4" => FiberMap::hopf7(),
            "hopf15" | "hopf_15_8" => FiberMap::hopf15(),
            "rp3-hopf" => FiberMap::RpQuotient(Box::new(FiberMap::hopf3())),
            "rp7-hopf" => FiberMap::RpQuotient(Box::new(FiberMap::hopf7())),
            "rp15-hopf" => FiberMap::RpQuotient(Box::new(FiberMap::hopf15())),
            "cp3-hopf" => FiberMap::CpQuotient(Box::new(FiberMap::hopf7())),
            "abs-z1-s3" | "abs_z1_on_S3" => FiberMap::AbsZ1OnS3,
            "abs-z1-rp3" | "abs_z1_on_RP3" => FiberMap::AbsZ1OnRp3,
            "x1-squared-rp2" | "x1_squared_on_RP2" => FiberMap::X1SquaredOnRp2,
            "circle" | "s1" => {
                return usage("circle targets: maps RP^3 -> S^1 lift to R-valued maps; use abs-z1-rp3 instead")
            }
            _ => {
                if let Some(rest) = name.strip_prefix("linear:") {
                    let mut it = rest.split(',').map(str::parse::<usize>);
                    let (Some(Ok(n)), Some(Ok(k)), None) = (it.next(), it.next(), it.next()) else {
                        return usage("linear map syntax is linear:n,k");
                    };
                    return FiberMap::coordinate_projection(n, k);
                }
                if let Some(rest) = name.strip_prefix("torus:") {
                    // torus:a1,a2,..;keep=i,j
                    let (lens, keep) = rest.split_once(";keep=").ok_or_else(|| {
                        Error::Usage("torus map syntax is torus:a1,..,an;keep=i,..".into())
                    })?;
                    let lengths = lens
                        .split(',')
                        .map(|s| s.parse::<f64>().map_err(|_| Error::Usage(format!("bad length `{s}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    let keep = keep
                        .split(',')
                        .map(|s| s.parse::<usize>().map_err(|_| Error::Usage(format!("bad index `{s}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    return FiberMap::torus_projection(lengths, keep);
                }
                return usage(format!("unknown map `{name}`"));
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            FiberMap::LinearProjection { n, rows } => format!("linear:{n},{}", rows.len()),
            FiberMap::Hopf(Division::Complex) => "hopf3".into(),
            FiberMap::Hopf(Division::Quaternion) => "hopf7".into(),
            FiberMap::Hopf(Division::Octonion) => "hopf15".into(),
            FiberMap::RpQuotient(m) => match **m {
                FiberMap::Hopf(Division::Complex) => "rp3-hopf".into(),
                FiberMap::Hopf(Division::Quaternion) => "rp7-hopf".into(),
                FiberMap::Hopf(Division::Octonion) => "rp15-hopf".into(),
                _ => "abs-z1-rp3".into(),
            },
            FiberMap::CpQuotient(_) => "cp3-hopf".into(),
            FiberMap::AbsZ1OnS3 => "abs-z1-s3".into(),
            FiberMap::AbsZ1OnRp3 => "abs-z1-rp3".into(),
            FiberMap::X1SquaredOnRp2 => "x1-squared-rp2".into(),
            FiberMap::TorusProjection { lengths, keep } => {
                let l: Vec<String> = lengths.iter().map(|a| a.to_string()).collect();
                let k: Vec<String> = keep.iter().map(|a| a.to_string()).collect();
                format!("torus:{};keep={}", l.join(","), k.join(","))
            }
        }
    }

    pub fn source(&self) -> Space {
        match self {
            FiberMap::LinearProjection { n, .. } => Space::Sphere(*n),
            FiberMap::Hopf(d) => Space::Sphere(2 * d.dim() - 1),
            FiberMap::RpQuotient(m) => Space::RealProjective(m.source().intrinsic_dim()),
            FiberMap::CpQuotient(_) => Space::ComplexProjective(3),
            FiberMap::AbsZ1OnS3 => Space::Sphere(3),
            FiberMap::AbsZ1OnRp3 => Space::RealProjective(3),
            FiberMap::X1SquaredOnRp2 => Space::RealProjective(2),
            FiberMap::TorusProjection { lengths, .. } => Space::Torus(lengths.clone()),
        }
    }

    /// Dimension of the target and the coordinates used to describe it.
    pub fn target_dim(&self) -> usize {
        match self {
            FiberMap::LinearProjection { rows, .. } => rows.len(),
            FiberMap::Hopf(d) => d.dim(),
            FiberMap::RpQuotient(m) | FiberMap::CpQuotient(m) => m.target_dim(),
            FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 | FiberMap::X1SquaredOnRp2 => 1,
            FiberMap::TorusProjection { keep, .. } => keep.len(),
        }
    }

    /// Coordinates of target points (Hopf targets are unit vectors of ℝ^{m+1}).
    pub fn target_coords(&self) -> usize {
        match self {
            FiberMap::Hopf(d) => d.dim() + 1,
            FiberMap::RpQuotient(m) | FiberMap::CpQuotient(m) => m.target_coords(),
            _ => self.target_dim(),
        }
    }

    pub fn fiber_dim(&self) -> usize {
        self.source().intrinsic_dim() - self.target_dim()
    }

    fn check_target(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.target_coords() || y.iter().any(|v| !v.is_finite()) {
            return usage(format!("{}: target point needs {} coordinates", self.name(), self.target_coords()));
        }
        if matches!(self.base(), FiberMap::Hopf(_)) && (norm(y) - 1.0).abs() > UNIT_TOL {
            return domain("Hopf target points lie on the unit sphere");
        }
        Ok(())
    }

    fn base(&self) -> &FiberMap {
        match self {
            FiberMap::RpQuotient(m) | FiberMap::CpQuotient(m) => m.base(),
            m => m,
        }
    }

    pub fn evaluate(&self, p: &[f64]) -> Result<Vec<f64>> {
        let src = self.source();
        if p.len() != src.ambient_dim() {
            return usage(format!("{}: point needs {} coordinates", self.name(), src.ambient_dim()));
        }
        src.validate(p)?;
        Ok(match self {
            FiberMap::LinearProjection { rows, .. } => rows.iter().map(|r| dot(r, p)).collect(),
            FiberMap::Hopf(d) => hopf(d.dim(), p),
            FiberMap::RpQuotient(m) => m.evaluate(p)?,
            FiberMap::CpQuotient(m) => m.evaluate(&cp_to_quaternion(p))?,
            FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 => vec![(p[0] * p[0] + p[1] * p[1]).sqrt()],
            FiberMap::X1SquaredOnRp2 => vec![p[0] * p[0]],
            FiberMap::TorusProjection { lengths, keep } => {
                keep.iter().map(|&i| p[i].rem_euclid(lengths[i])).collect()
            }
        })
    }

    /// Orthonormal basis of the linear span of the fiber, for maps whose
    /// fibers are great subspheres (or their projective images).
    pub fn fiber_span(&self, y: &[f64]) -> Result<Option<Vec<Vec<f64>>>> {
        self.check_target(y)?;
        Ok(match self {
            FiberMap::Hopf(d) => Some(hopf_fiber_frame(d.dim(), y)),
            FiberMap::RpQuotient(m) => m.fiber_span(y)?,
            FiberMap::CpQuotient(m) => m.fiber_span(y)?.map(|f| f.iter().map(|v| cp_to_quaternion(v)).collect()),
            FiberMap::LinearProjection { n, rows } if norm(y) < 1e-15 => Some(orthogonal_complement(rows, n + 1)),
            _ => None,
        })
    }

    /// Analytic volume of f⁻¹(y); 0 for empty or lower-dimensional fibers.
    pub fn fiber_volume(&self, y: &[f64]) -> Result<f64> {
        self.check_target(y)?;
        let fd = self.fiber_dim() as i64;
        Ok(match self {
            FiberMap::LinearProjection { .. } => {
                let r2 = 1.0 - dot(y, y);
                if r2 <= 0.0 {
                    0.0
                } else {
                    sphere_volume::<f64>(fd)? * r2.powf(fd as f64 / 2.0)
                }
            }
            FiberMap::Hopf(d) => sphere_volume::<f64>(d.dim() as i64 - 1)?,
            FiberMap::RpQuotient(m) => 0.5 * m.fiber_volume(y)?,
            FiberMap::CpQuotient(_) => complex_projective_volume::<f64>(1),
            FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 => {
                let t = y[0];
                let v = if t <= 0.0 || t >= 1.0 { 0.0 } else { 4.0 * PI * PI * t * (1.0 - t * t).sqrt() };
                if matches!(self, FiberMap::AbsZ1OnRp3) {
                    0.5 * v
                } else {
                    v
                }
            }
            FiberMap::X1SquaredOnRp2 => {
                let s = y[0];
                if s < 0.0 || s >= 1.0 {
                    0.0
                } else if s == 0.0 {
                    PI
                } else {
                    2.0 * PI * (1.0 - s).sqrt()
                }
            }
            FiberMap::TorusProjection { lengths, keep } => {
                (0..lengths.len()).filter(|i| !keep.contains(i)).map(|i| lengths[i]).product()
            }
        })
    }

    /// Simplicial mesh of the fiber. Projective fibers are represented by
    /// their preimage on the sphere with weight 1/2.
    pub fn fiber_mesh(&self, y: &[f64], res: usize) -> Result<SubmanifoldMesh> {
        self.check_target(y)?;
        if res == 0 {
            return usage("mesh resolution must be positive");
        }
        let fd = self.fiber_dim();
        let amb = self.source().ambient_dim();
        let half = |mut m: SubmanifoldMesh| {
            m.weights.iter_mut().for_each(|w| *w *= 0.5);
            m
        };
        Ok(match self {
            FiberMap::LinearProjection { n, rows } => {
                let r2 = 1.0 - dot(y, y);
                if r2 <= 0.0 {
                    return Ok(SubmanifoldMesh::empty(amb, fd));
                }
                let r = r2.sqrt();
                let mut center = vec![0.0; n + 1];
                for (row, &c) in rows.iter().zip(y) {
                    for i in 0..=*n {
                        center[i] += c * row[i];
                    }
                }
                let frame = orthogonal_complement(rows, n + 1);
                check_sphere_mesh_size(fd, res)?;
                sphere_mesh(fd, res, &frame).map_vertices(amb, |v| v.iter().zip(&center).map(|(a, c)| c + r * a).collect())
            }
            FiberMap::Hopf(d) => {
                check_sphere_mesh_size(d.dim() - 1, res)?;
                sphere_mesh(d.dim() - 1, res, &hopf_fiber_frame(d.dim(), y))
            }
            FiberMap::RpQuotient(m) => half(m.fiber_mesh(y, res)?),
            FiberMap::CpQuotient(_) => {
                return Err(Error::Unsupported("CP^n fibers are measured through their span; no mesh".into()))
            }
            FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 => {
                let t = y[0];
                if t <= 0.0 || t >= 1.0 {
                    return Ok(SubmanifoldMesh::empty(4, 2));
                }
                let s = (1.0 - t * t).sqrt();
                let m = periodic_surface(4, res, |a, b| vec![t * a.cos(), t * a.sin(), s * b.cos(), s * b.sin()]);
                if matches!(self, FiberMap::AbsZ1OnRp3) {
                    half(m)
                } else {
                    m
                }
            }
            FiberMap::X1SquaredOnRp2 => {
                let s = y[0];
                if s < 0.0 || s >= 1.0 {
                    return Ok(SubmanifoldMesh::empty(3, 1));
                }
                let (x, r) = (s.sqrt(), (1.0 - s).sqrt());
                let e2 = e(3, 1);
                let e3 = e(3, 2);
                let upper = circle_mesh(&[x, 0.0, 0.0], r, &e2, &e3, res);
                if s == 0.0 {
                    half(upper)
                } else {
                    half(upper.union(&circle_mesh(&[-x, 0.0, 0.0], r, &e2, &e3, res))?)
                }
            }
            FiberMap::TorusProjection { lengths, keep } => {
                let dropped: Vec<usize> = (0..lengths.len()).filter(|i| !keep.contains(i)).collect();
                let n = lengths.len();
                let base = |u: &[f64]| {
                    let mut p = vec![0.0; n];
                    for (j, &i) in keep.iter().enumerate() {
                        p[i] = y[j].rem_euclid(lengths[i]);
                    }
                    for (j, &i) in dropped.iter().enumerate() {
                        p[i] = u[j] * lengths[i];
                    }
                    p
                };
                match dropped.len() {
                    1 => polyline((0..=res).map(|i| base(&[i as f64 / res as f64])).collect()),
                    2 => {
                        let mut verts = vec![];
                        for i in 0..=res {
                            for j in 0..=res {
                                verts.push(base(&[i as f64 / res as f64, j as f64 / res as f64]));
                            }
                        }
                        let id = |i: usize, j: usize| i * (res + 1) + j;
                        let mut simp = vec![];
                        for i in 0..res {
                            for j in 0..res {
                                simp.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                                simp.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                            }
                        }
                        SubmanifoldMesh::new(n, 2, verts, simp)?
                    }
                    _ => return Err(Error::Unsupported("torus fiber meshes up to dimension 2".into())),
                }
            }
        })
    }

    /// Resolution at which the fiber mesh volume is within 1% of the
    /// analytic value.
    pub fn default_resolution(&self) -> usize {
        match self.base() {
            FiberMap::Hopf(_) | FiberMap::LinearProjection { .. } if self.fiber_dim() >= 2 => 16,
            FiberMap::TorusProjection { .. } => 4,
            _ => 256,
        }
    }

    /// Target points used by profiles and certificates when none are given.
    pub fn default_grid(&self, seed: u64) -> Vec<Vec<f64>> {
        match self.base() {
            FiberMap::Hopf(d) => {
                let m = d.dim() + 1;
                let mut rng = stream(seed, 0);
                let mut g = vec![e(m, 0), {
                    let mut s = e(m, 0);
                    s[0] = -1.0;
                    s
                }];
                g.extend((0..100).map(|_| unit_vector(&mut rng, m)));
                g
            }
            FiberMap::LinearProjection { rows, .. } => {
                let k = rows.len();
                (0..=40).map(|i| scale_e(k, -1.0 + i as f64 / 20.0)).collect()
            }
            FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 => (0..=10).map(|i| vec![i as f64 / 10.0]).collect(),
            FiberMap::X1SquaredOnRp2 => {
                let mut g = vec![vec![0.0], vec![1e-9]];
                g.extend((1..=10).map(|i| vec![i as f64 / 10.0]));
                g
            }
            FiberMap::TorusProjection { lengths, keep } => {
                let mut rng = stream(seed, 0);
                (0..20).map(|_| keep.iter().map(|&i| rng.random::<f64>() * lengths[i]).collect()).collect()
            }
            _ => unreachable!(),
        }
    }
}

const MAX_MESH_SIMPLICES: f64 = 4e6;

fn check_sphere_mesh_size(d: usize, res: usize) -> Result<()> {
    let count = 2.0 * (d + 1) as f64 * (res as f64).powi(d as i32) * (1..=d).product::<usize>() as f64;
    if count > MAX_MESH_SIMPLICES {
        return Err(Error::Unsupported(format!("a mesh of S^{d} at resolution {res} has {count:.0} simplices")));
    }
    Ok(())
}

fn scale_e(k: usize, s: f64) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[0] = s;
    v
}

fn hopf(m: usize, p: &[f64]) -> Vec<f64> {
    let (a, b) = p.split_at(m);
    let w = mul(a, &conj(b));
    let mut out = vec![norm_sq(a) - norm_sq(b)];
    out.extend(w.iter().map(|x| 2.0 * x));
    out
}

/// Great (m−1)-sphere h⁻¹(x, w): {(a, w̄a/(2r²))} with |a|² = r² = (1+x)/2,
/// or equivalently {(wb/(2s²), b)} with s² = (1−x)/2; the branch with the
/// larger radius is used.
fn hopf_fiber_frame(m: usize, y: &[f64]) -> Vec<Vec<f64>> {
    let x = y[0];
    let w = &y[1..];
    let cols: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let u = e(m, i);
            if x >= 0.0 {
                let r2 = 0.5 * (1.0 + x);
                let b: Vec<f64> = mul(&conj(w), &u).iter().map(|v| v / (2.0 * r2)).collect();
                [u, b].concat()
            } else {
                let s2 = 0.5 * (1.0 - x);
                let a: Vec<f64> = mul(w, &u).iter().map(|v| v / (2.0 * s2)).collect();
                [a, u].concat()
            }
        })
        .collect();
    orthonormalize(&cols).expect("Hopf fiber frame has full rank")
}

/// ℂ⁴ (interleaved re/im) → ℍ² with a = c₁ + j c₂, b = c₃ + j c₄, so that
/// complex scalars act by right multiplication, which the Hopf map ignores.
/// The change of coordinates is an involutive isometry.
fn cp_to_quaternion(p: &[f64]) -> Vec<f64> {
    vec![p[0], p[1], p[2], -p[3], p[4], p[5], p[6], -p[7]]
}

// ------------------------------------------------------------ tubes

/// vol ν_t of a great d-sphere in 𝕊ᴺ: s_d s_{N−d−1} ∫₀ᵗ cosᵈr sin^{N−d−1}r dr.
pub fn sphere_tube_volume(big_n: usize, d: usize, t: f64) -> Result<f64> {
    if d >= big_n {
        return domain("tube needs d < N");
    }
    let t = t.clamp(0.0, PI / 2.0);
    let c = sphere_volume::<f64>(d as i64)? * sphere_volume::<f64>((big_n - d - 1) as i64)?;
    let (v, _) = integrate(|r: f64| r.cos().powi(d as i32) * r.sin().powi((big_n - d - 1) as i32), 0.0, t, 1e-14);
    Ok(c * v)
}

/// vol ν_t ℝP^d in ℝPᴺ.
pub fn rp_tube_volume(big_n: usize, d: usize, t: f64) -> Result<f64> {
    Ok(0.5 * sphere_tube_volume(big_n, d, t)?)
}

/// vol ν_t ℂP^d in ℂPᴺ (complex dimensions), via the Hopf circle bundle.
pub fn cp_tube_volume(big_n: usize, d: usize, t: f64) -> Result<f64> {
    Ok(sphere_tube_volume(2 * big_n + 1, 2 * d + 1, t)? / (2.0 * PI))
}

// --------------------------------------------------------- profiles

#[derive(Clone, Debug, Serialize)]
pub struct WaistProfile {
    pub points: Vec<(Vec<f64>, f64)>,
    pub argmax: Vec<f64>,
    pub max: f64,
}

pub fn waist_profile(map: &FiberMap, grid: &[Vec<f64>]) -> Result<WaistProfile> {
    if grid.is_empty() {
        return usage("waist profile needs a nonempty grid");
    }
    let points = grid.iter().map(|y| Ok((y.clone(), map.fiber_volume(y)?))).collect::<Result<Vec<_>>>()?;
    let (argmax, max) = points
        .iter()
        .fold((points[0].0.clone(), f64::NEG_INFINITY), |acc, (y, v)| if *v > acc.1 { (y.clone(), *v) } else { acc });
    Ok(WaistProfile { points, argmax, max })
}

/// Golden-section maximization of a unimodal scalar profile on [a, b].
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

// ------------------------------------------------------ certificates

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// measured ≥ bound
    Lower,
    /// measured ≤ bound
    Upper,
}

#[derive(Clone, Debug, Serialize)]
pub struct TubeRow {
    pub t: f64,
    pub bound: f64,
    pub analytic: f64,
    pub monte_carlo: EstimateReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct WaistCertificate {
    pub map: String,
    pub bound: f64,
    pub bound_ref: BoundRef,
    pub direction: Direction,
    pub measured_sup: f64,
    pub measured_at: Vec<f64>,
    /// weighted mesh volume of the fiber at `measured_at`, when meshable
    pub meshed: Option<f64>,
    pub tube_rows: Vec<TubeRow>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// mesh resolution for the cross-check; `None` picks one per map kind
    pub resolution: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    /// relative tolerance on analytic comparisons
    pub tolerance: f64,
    /// relative tolerance on the meshed cross-check
    pub mesh_tolerance: f64,
    pub t_schedule: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            resolution: None,
            samples: 100_000,
            seed: 1,
            tolerance: 1e-6,
            mesh_tolerance: 0.01,
            t_schedule: vec![0.2, 0.5, 1.0],
        }
    }
}

fn inapplicable<T>(map: &FiberMap, r: BoundRef) -> Result<T> {
    usage(format!("bound `{r}` does not apply to map `{}`", map.name()))
}

/// Compares the measured sup fiber volume (or ν_t volume) of `map` against
/// the cited bound.
pub fn verify_waist_bound(map: &FiberMap, bound_ref: BoundRef, opts: &VerifyOptions) -> Result<WaistCertificate> {
    // the Hopf map is even, so the even-map bound speaks about its quotient on ℝP³
    if bound_ref == BoundRef::EvenMapPi && *map == FiberMap::hopf3() {
        return verify_waist_bound(&FiberMap::RpQuotient(Box::new(map.clone())), bound_ref, opts);
    }
    let src = map.source();
    let fd = map.fiber_dim();
    let bound = match (bound_ref, map) {
        (BoundRef::SphereWaist, FiberMap::LinearProjection { .. }) => sphere_volume::<f64>(fd as i64)?,
        (BoundRef::EvenMapPi, FiberMap::RpQuotient(m)) if **m == FiberMap::hopf3() => PI,
        (BoundRef::Rp2TwoPi, FiberMap::X1SquaredOnRp2) => 2.0 * PI,
        (BoundRef::Rp3PiSquared, FiberMap::AbsZ1OnRp3) => PI * PI,
        (BoundRef::Rp3PiSquared, FiberMap::RpQuotient(m)) if **m == FiberMap::AbsZ1OnS3 => PI * PI,
        (BoundRef::HopfTight, m) if matches!(m.base(), FiberMap::Hopf(_)) && !matches!(m, FiberMap::CpQuotient(_)) => {
            let upstairs = sphere_volume::<f64>(fd as i64)?;
            if matches!(m, FiberMap::RpQuotient(_)) {
                0.5 * upstairs
            } else {
                upstairs
            }
        }
        (BoundRef::HopfTight, FiberMap::CpQuotient(_)) => complex_projective_volume::<f64>(1),
        (BoundRef::RpnNuT, FiberMap::RpQuotient(m)) if matches!(**m, FiberMap::Hopf(_)) => PI,
        (BoundRef::CpnNuT, FiberMap::CpQuotient(_)) => complex_projective_volume::<f64>(1),
        (BoundRef::TorusProduct, FiberMap::TorusProjection { lengths, keep }) => {
            // waist of T_a for maps to ℝᵏ: product of the n−k smallest lengths
            lengths[..lengths.len() - keep.len()].iter().product()
        }
        _ => return inapplicable(map, bound_ref),
    };

    // measured sup: grid profile, refined for one-parameter profiles
    let grid = map.default_grid(opts.seed);
    let prof = waist_profile(map, &grid)?;
    let (mut sup, mut at) = (prof.max, prof.argmax.clone());
    match map {
        FiberMap::AbsZ1OnS3 | FiberMap::AbsZ1OnRp3 => {
            let t = golden_max(|t| map.fiber_volume(&[t]).unwrap_or(0.0), 0.0, 1.0);
            at = vec![t];
            sup = map.fiber_volume(&at)?;
        }
        FiberMap::RpQuotient(m) if **m == FiberMap::AbsZ1OnS3 => {
            let t = golden_max(|t| map.fiber_volume(&[t]).unwrap_or(0.0), 0.0, 1.0);
            at = vec![t];
            sup = map.fiber_volume(&at)?;
        }
        _ => {}
    }
    let mut pass = sup >= bound * (1.0 - opts.tolerance);
    if bound_ref == BoundRef::HopfTight || bound_ref == BoundRef::TorusProduct {
        // tightness: every fiber equals the bound
        let spread = prof.points.iter().map(|(_, v)| (v - bound).abs()).fold(0.0, f64::max);
        pass &= spread <= opts.tolerance * bound;
    }

    let res = opts.resolution.unwrap_or_else(|| map.default_resolution());
    let meshed = match map.fiber_mesh(&at, res) {
        Ok(m) => Some(m.volume()),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(v) = meshed {
        pass &= (v - sup).abs() <= opts.mesh_tolerance * sup;
    }

    let mut tube_rows = vec![];
    if matches!(bound_ref, BoundRef::RpnNuT | BoundRef::CpnNuT) {
        let span = map.fiber_span(&at)?.expect("Hopf quotients have linear fibers");
        let big_n = src.intrinsic_dim();
        for (i, &t) in opts.t_schedule.iter().enumerate() {
            let (bound_t, analytic) = match src {
                Space::RealProjective(_) => (rp_tube_volume(big_n, fd, t)?, rp_tube_volume(big_n, fd, t)?),
                _ => (cp_tube_volume(big_n / 2, fd / 2, t)?, cp_tube_volume(big_n / 2, fd / 2, t)?),
            };
            let oracle = |p: &[f64]| -> f64 {
                let proj: f64 = span.iter().map(|v| dot(v, p).powi(2)).sum::<f64>().sqrt();
                proj.min(1.0).acos()
            };
            let mc = neighborhood_volume(&src, &SetRef::Oracle(&oracle), t, opts.samples, opts.seed.wrapping_add(i as u64))?;
            pass &= analytic >= bound_t * (1.0 - opts.tolerance) && mc.upper_3sigma() >= bound_t * (1.0 - opts.tolerance);
            tube_rows.push(TubeRow { t, bound: bound_t, analytic, monte_carlo: mc });
        }
    }

    Ok(WaistCertificate {
        map: map.name(),
        bound,
        bound_ref,
        direction: Direction::Lower,
        measured_sup: sup,
        measured_at: at,
        meshed,
        tube_rows,
        tolerance: opts.tolerance,
        pass,
    })
}

// --------------------------------------------- even-sphere exploration

/// Level set {f = y} on 𝕊² by linear interpolation on a sphere mesh, with
/// crossing points pushed back to the sphere.
pub fn level_set_on_s2(f: &dyn Fn(&[f64]) -> f64, y: f64, res: usize) -> SubmanifoldMesh {
    let frame: Vec<Vec<f64>> = (0..3).map(|i| e(3, i)).collect();
    let s = sphere_mesh(2, res, &frame);
    let vals: Vec<f64> = s.vertices.iter().map(|v| f(v) - y).collect();
    let mut verts = vec![];
    let mut segs = vec![];
    for tri in &s.simplices {
        let mut pts = vec![];
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let (fa, fb) = (vals[tri[a]], vals[tri[b]]);
            if (fa < 0.0) != (fb < 0.0) {
                let l = fa / (fa - fb);
                let p: Vec<f64> = (0..3).map(|k| s.vertices[tri[a]][k] * (1.0 - l) + s.vertices[tri[b]][k] * l).collect();
                let n = norm(&p);
                pts.push(p.iter().map(|x| x / n).collect::<Vec<f64>>());
            }
        }
        if pts.len() == 2 {
            verts.extend(pts);
            segs.push(vec![verts.len() - 2, verts.len() - 1]);
        }
    }
    SubmanifoldMesh::new(3, 1, verts, segs).expect("level set segments are valid")
}

#[derive(Clone, Debug, Serialize)]
pub struct ExplorationReport {
    pub family: String,
    pub candidates: usize,
    /// smallest sup fiber length found over the family
    pub best_sup: f64,
    pub best_eigenvalues: Vec<f64>,
    pub reference: f64,
    pub conclusive: bool,
}

/// Searches even maps 𝕊² → ℝ given by quadratic forms with random
/// spectra, reporting the smallest sup fiber length found. Exploratory:
/// no bound is asserted.
pub fn explore_even_sphere(candidates: usize, res: usize, seed: u64) -> Result<ExplorationReport> {
    if candidates == 0 {
        return usage("exploration needs candidates");
    }
    let mut rng = stream(seed, 0);
    let mut best = (f64::INFINITY, vec![]);
    for _ in 0..candidates {
        let mut ev: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q = |x: &[f64]| ev[0] * x[0] * x[0] + ev[1] * x[1] * x[1] + ev[2] * x[2] * x[2];
        let mut sup: f64 = 0.0;
        for i in 1..40 {
            let y = ev[0] + (ev[2] - ev[0]) * i as f64 / 40.0;
            sup = sup.max(level_set_on_s2(&q, y, res).volume());
        }
        if sup < best.0 {
            best = (sup, ev);
        }
    }
    Ok(ExplorationReport {
        family: "quadratic forms on S^2".into(),
        candidates,
        best_sup: best.0,
        best_eigenvalues: best.1,
        reference: 2.0 * PI,
        conclusive: false,
    })
}

/// Rotation of a linear projection by an orthogonal matrix (for invariance
/// tests).
pub fn rotate_rows(rows: &[Vec<f64>], rot: &Mat<f64>) -> Vec<Vec<f64>> {
    rows.iter().map(|r| rot.transpose().mul_vec(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn sample_source(map: &FiberMap, rng: &mut crate::rng::McRng) -> Vec<f64> {
        map.source().sample_uniform(rng).unwrap()
    }

    #[test]
    fn hopf_north_pole() {
        let y = FiberMap::hopf3().evaluate(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn hopf_images_are_unit_and_fibers_are_exact() {
        let mut rng = stream(9, 0);
        for map in [FiberMap::hopf3(), FiberMap::hopf7(), FiberMap::hopf15()] {
            for _ in 0..20 {
                let p = sample_source(&map, &mut rng);
                let y = map.evaluate(&p).unwrap();
                assert!((norm(&y) - 1.0).abs() < 1e-12);
                let frame = map.fiber_span(&y).unwrap().unwrap();
                assert!(orthonormality_defect(&frame) < 1e-12);
                // p lies in the span and every span point maps to y
                let proj: f64 = frame.iter().map(|v| dot(v, &p).powi(2)).sum();
                assert!((proj - 1.0).abs() < 1e-10, "{}", map.name());
                let q: Vec<f64> = (0..p.len()).map(|i| (frame[0][i] + 2.0 * frame[1][i]) / 5f64.sqrt()).collect();
                let yq = map.evaluate(&q).unwrap();
                assert!(yq.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-10), "{}", map.name());
            }
        }
    }

    #[test]
    fn cp_quotient_is_phase_invariant() {
        let map = FiberMap::cp_quotient(FiberMap::hopf7()).unwrap();
        let mut rng = stream(2, 0);
        let p = sample_source(&map, &mut rng);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let q: Vec<f64> = (0..4).flat_map(|j| [c * p[2 * j] - s * p[2 * j + 1], s * p[2 * j] + c * p[2 * j + 1]]).collect();
        let a = map.evaluate(&p).unwrap();
        let b = map.evaluate(&q).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn analytic_fiber_volumes() {
        let y = [0.0, 0.6, 0.8];
        assert!((FiberMap::hopf3().fiber_volume(&y).unwrap() - 2.0 * PI).abs() < 1e-12);
        let y5 = [0.0, 0.0, 1.0, 0.0, 0.0];
        let rp7 = FiberMap::rp_quotient(FiberMap::hopf7()).unwrap();
        assert!((rp7.fiber_volume(&y5).unwrap() - PI * PI).abs() < 1e-12);
        let v = FiberMap::AbsZ1OnRp3.fiber_volume(&[0.5f64.sqrt()]).unwrap();
        assert!((v - PI * PI).abs() < 1e-12);
        assert!((FiberMap::X1SquaredOnRp2.fiber_volume(&[0.0]).unwrap() - PI).abs() < 1e-15);
        assert!((FiberMap::X1SquaredOnRp2.fiber_volume(&[0.36]).unwrap() - 2.0 * PI * 0.8).abs() < 1e-12);
        let t = FiberMap::torus_projection(vec![1.0, 2.0, 3.0], vec![2]).unwrap();
        assert_eq!(t.fiber_volume(&[0.4]).unwrap(), 2.0);
    }

    #[test]
    fn meshes_converge() {
        let y = [0.0, 0.6, 0.8];
        let m = FiberMap::hopf3().fiber_mesh(&y, 64).unwrap();
        assert!((m.volume() - 2.0 * PI).abs() / (2.0 * PI) < 1e-3);
        let t = 0.4;
        let m = FiberMap::AbsZ1OnS3.fiber_mesh(&[t], 128).unwrap();
        let want = 4.0 * PI * PI * t * (1.0 - t * t).sqrt();
        assert!((m.volume() - want).abs() / want < 1e-3);
        let m = FiberMap::X1SquaredOnRp2.fiber_mesh(&[0.36], 256).unwrap();
        assert!((m.volume() - 2.0 * PI * 0.8).abs() < 1e-3);
        let lin = FiberMap::coordinate_projection(3, 2).unwrap();
        let m = lin.fiber_mesh(&[0.0, 0.0], 128).unwrap();
        assert!((m.volume() - 2.0 * PI).abs() < 1e-3);
        // mesh vertices lie in the fiber
        for v in &m.vertices {
            let img = lin.evaluate(v).unwrap();
            assert!(img.iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn tube_volumes_fill_the_space() {
        assert!((sphere_tube_volume(2, 1, PI / 2.0).unwrap() - 4.0 * PI).abs() < 1e-10);
        assert!((sphere_tube_volume(2, 1, 0.3).unwrap() - 4.0 * PI * 0.3f64.sin()).abs() < 1e-10);
        assert!((rp_tube_volume(3, 1, PI / 2.0).unwrap() - PI * PI).abs() < 1e-10);
        assert!((cp_tube_volume(3, 1, PI / 2.0).unwrap() - complex_projective_volume::<f64>(3)).abs() < 1e-10);
    }

    #[test]
    fn profiles() {
        let g: Vec<Vec<f64>> = (0..=10).map(|i| vec![i as f64 / 10.0]).collect();
        let p = waist_profile(&FiberMap::AbsZ1OnRp3, &g).unwrap();
        assert_eq!(p.argmax, vec![0.7]);
        assert!((p.max / (PI * PI) - 2.0 * 0.7 * 0.51f64.sqrt()).abs() < 1e-12);
        let x = FiberMap::X1SquaredOnRp2;
        let vals: Vec<f64> = (1..100).map(|i| x.fiber_volume(&[i as f64 / 100.0]).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        assert!(waist_profile(&x, &[]).is_err());
    }

    #[test]
    fn certificates() {
        let opts = VerifyOptions { samples: 20_000, ..Default::default() };
        let rp3 = FiberMap::rp_quotient(FiberMap::hopf3()).unwrap();
        let c = verify_waist_bound(&rp3, BoundRef::EvenMapPi, &opts).unwrap();
        assert!(c.pass && (c.measured_sup - PI).abs() < 1e-12, "{c:?}");
        let lin = FiberMap::coordinate_projection(3, 2).unwrap();
        let c = verify_waist_bound(&lin, BoundRef::SphereWaist, &VerifyOptions { resolution: Some(64), ..opts.clone() }).unwrap();
        assert!(c.pass && c.measured_at == vec![0.0, 0.0], "{c:?}");
        let c = verify_waist_bound(&FiberMap::AbsZ1OnRp3, BoundRef::Rp3PiSquared, &VerifyOptions { resolution: Some(256), ..opts.clone() })
            .unwrap();
        assert!(c.pass && (c.measured_sup - PI * PI).abs() < 1e-9, "{c:?}");
        let c = verify_waist_bound(&rp3, BoundRef::RpnNuT, &opts).unwrap();
        assert!(c.pass && c.tube_rows.len() == 3, "{c:?}");
        let cp = FiberMap::cp_quotient(FiberMap::hopf7()).unwrap();
        let c = verify_waist_bound(&cp, BoundRef::CpnNuT, &opts).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(verify_waist_bound(&lin, BoundRef::EvenMapPi, &opts).is_err());
        for name in ["hopf3", "hopf7", "rp3-hopf", "rp7-hopf", "hopf15"] {
            let m = FiberMap::by_name(name).unwrap();
            let c = verify_waist_bound(&m, BoundRef::HopfTight, &opts).unwrap();
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn names_round_trip() {
        for n in ["hopf3", "hopf7", "hopf15", "rp3-hopf", "rp7-hopf", "cp3-hopf", "abs-z1-rp3", "x1-squared-rp2", "linear:3,2"] {
            assert_eq!(FiberMap::by_name(n).unwrap().name(), n);
        }
        assert!(FiberMap::by_name("circle").is_err());
        let t = FiberMap::by_name("torus:1,2,3;keep=2").unwrap();
        assert_eq!(t.fiber_volume(&[1.0]).unwrap(), 2.0);
    }

    #[test]
    fn level_sets() {
        let f = |x: &[f64]| x[2];
        let m = level_set_on_s2(&f, 0.0, 64);
        assert!((m.volume() - 2.0 * PI).abs() < 1e-2);
        let r = explore_even_sphere(3, 16, 1).unwrap();
        assert!(r.best_sup > 0.0 && !r.conclusive);
    }
}
