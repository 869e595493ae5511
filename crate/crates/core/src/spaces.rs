//! Metric-measure spaces: volume constants, geodesic distances, sampling.

use std::sync::Arc;

use rand::Rng;

use crate::convex::ConvexBody;
use crate::error::{domain, usage, Error, Result};
use crate::linalg::{dist, dot, norm};
use crate::rng::unit_vector;
use crate::scalar::Real;

/// v_k, the volume of the unit k-ball.
///
/// Evaluated by the recursion v_k = v_{k-2}·2π/k, which agrees with
/// π^{k/2}/Γ(k/2+1) and stays exact in small k.
pub fn ball_volume<T: Real>(k: i64) -> Result<T> {
    if k < 0 {
        return domain(format!("ball_volume: negative dimension {k}"));
    }
    let two_pi = T::PI() + T::PI();
    let mut v = if k % 2 == 0 { T::one() } else { T::lit(2.0) };
    let mut j = if k % 2 == 0 { 2 } else { 3 };
    while j <= k {
        v = v * two_pi / T::from_i64(j).unwrap();
        j += 2;
    }
    Ok(v)
}

/// s_i, the volume of the unit i-sphere: (i+1)·v_{i+1}.
pub fn sphere_volume<T: Real>(i: i64) -> Result<T> {
    if i < 0 {
        return domain(format!("sphere_volume: negative dimension {i}"));
    }
    Ok(T::from_i64(i + 1).unwrap() * ball_volume::<T>(i + 1)?)
}

/// Both families of constants up to a given dimension.
#[derive(Clone, Debug)]
pub struct VolumeConstants<T> {
    pub s: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> VolumeConstants<T> {
    pub fn up_to(max_dim: usize) -> Self {
        let v: Vec<T> = (0..=max_dim as i64 + 1).map(|k| ball_volume(k).unwrap()).collect();
        let s = (0..=max_dim).map(|i| T::from_usize_lossy(i + 1) * v[i + 1]).collect();
        VolumeConstants { s, v }
    }
}

/// Volume of ℂPⁿ under the metric in which Hopf circles are at their
/// quotient distance (diameter π/2): π^n/n!.
pub fn complex_projective_volume<T: Real>(n: usize) -> T {
    let mut v = T::one();
    for j in 1..=n {
        v = v * T::PI() / T::from_usize_lossy(j);
    }
    v
}

#[derive(Clone, Debug)]
pub enum Space {
    /// 𝕊ⁿ ⊂ ℝⁿ⁺¹
    Sphere(usize),
    /// open unit ball Bⁿ
    Ball(usize),
    /// ∏[0, sᵢ]
    Cube(Vec<f64>),
    /// ℝⁿ / ⊕ aᵢℤ, lengths ascending
    Torus(Vec<f64>),
    /// ℝPⁿ, represented by unit vectors in ℝⁿ⁺¹
    RealProjective(usize),
    /// ℂPⁿ, represented by unit vectors of ℂⁿ⁺¹ = ℝ²ⁿ⁺² as (re₀, im₀, re₁, im₁, …)
    ComplexProjective(usize),
    ConvexBody(Arc<ConvexBody>),
    /// all of ℝⁿ; infinite volume, no uniform sampling
    Euclidean(usize),
}

const UNIT_TOL: f64 = 1e-12;
const REJECTION_CAP: usize = 1_000_000;

impl Space {
    pub fn cube(n: usize, side: f64) -> Space {
        Space::Cube(vec![side; n])
    }

    pub fn torus(lengths: Vec<f64>) -> Result<Space> {
        if lengths.is_empty() || lengths.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return domain("torus lengths must be positive and finite");
        }
        if lengths.windows(2).any(|w| w[0] > w[1]) {
            return domain("torus lengths must be sorted ascending");
        }
        Ok(Space::Torus(lengths))
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Space::Sphere(n) | Space::RealProjective(n) => n + 1,
            Space::Ball(n) => *n,
            Space::Cube(s) | Space::Torus(s) => s.len(),
            Space::ComplexProjective(n) => 2 * n + 2,
            Space::ConvexBody(k) => k.dim(),
            Space::Euclidean(n) => *n,
        }
    }

    /// Real dimension of the space itself.
    pub fn intrinsic_dim(&self) -> usize {
        match self {
            Space::Sphere(n) | Space::RealProjective(n) | Space::Ball(n) => *n,
            Space::Cube(s) | Space::Torus(s) => s.len(),
            Space::ComplexProjective(n) => 2 * n,
            Space::ConvexBody(k) => k.dim(),
            Space::Euclidean(n) => *n,
        }
    }

    /// Total Riemannian volume. Convex bodies return their cached volume
    /// estimate.
    pub fn volume(&self) -> f64 {
        match self {
            Space::Sphere(n) => sphere_volume(*n as i64).unwrap(),
            Space::Ball(n) => ball_volume(*n as i64).unwrap(),
            Space::Cube(s) | Space::Torus(s) => s.iter().product(),
            Space::RealProjective(n) => 0.5 * sphere_volume::<f64>(*n as i64).unwrap(),
            Space::ComplexProjective(n) => complex_projective_volume(*n),
            Space::ConvexBody(k) => k.volume_estimate(),
            Space::Euclidean(_) => f64::INFINITY,
        }
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.ambient_dim() {
            return usage(format!(
                "point has {} coordinates, space expects {}",
                p.len(),
                self.ambient_dim()
            ));
        }
        Ok(())
    }

    /// Checks the representation invariants of a point of this space.
    pub fn validate(&self, p: &[f64]) -> Result<()> {
        self.check_point(p)?;
        match self {
            Space::Sphere(_) | Space::RealProjective(_) | Space::ComplexProjective(_) => {
                if (norm(p) - 1.0).abs() > UNIT_TOL {
                    return domain("point is not a unit vector");
                }
            }
            Space::Torus(a) => {
                if p.iter().zip(a).any(|(&x, &l)| !(0.0..l).contains(&x)) {
                    return domain("torus point outside fundamental domain");
                }
            }
            Space::Cube(s) => {
                if p.iter().zip(s).any(|(&x, &l)| !(0.0..=l).contains(&x)) {
                    return domain("point outside cube");
                }
            }
            Space::Ball(_) => {
                if norm(p) > 1.0 {
                    return domain("point outside ball");
                }
            }
            Space::ConvexBody(k) => {
                if !k.contains(p) {
                    return domain("point outside body");
                }
            }
            Space::Euclidean(_) => {}
        }
        Ok(())
    }

    /// Geodesic distance in the space's own metric.
    pub fn distance(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(match self {
            Space::Sphere(_) => dot(p, q).clamp(-1.0, 1.0).acos(),
            Space::RealProjective(_) => {
                let d = dot(p, q).clamp(-1.0, 1.0).acos();
                d.min(std::f64::consts::PI - d)
            }
            Space::ComplexProjective(_) => complex_inner_abs(p, q).min(1.0).acos(),
            Space::Torus(a) => p
                .iter()
                .zip(q)
                .zip(a)
                .map(|((&x, &y), &l)| {
                    let d = (x - y).abs() % l;
                    let d = d.min(l - d);
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            Space::Ball(_) | Space::Cube(_) | Space::ConvexBody(_) | Space::Euclidean(_) => dist(p, q),
        })
    }

    /// Canonical representative of a point (projective classes, torus
    /// reduction); identity for other kinds.
    pub fn canonicalize(&self, p: &[f64]) -> Vec<f64> {
        match self {
            Space::RealProjective(_) => {
                let mut v = p.to_vec();
                if let Some(&x) = v.iter().find(|x| x.abs() > UNIT_TOL) {
                    if x < 0.0 {
                        v.iter_mut().for_each(|c| *c = -*c);
                    }
                }
                v
            }
            Space::ComplexProjective(_) => {
                let mut v = p.to_vec();
                let lead = (0..v.len() / 2).find(|&j| v[2 * j].hypot(v[2 * j + 1]) > UNIT_TOL);
                if let Some(j) = lead {
                    let r = v[2 * j].hypot(v[2 * j + 1]);
                    // multiply by conj(z_j)/|z_j|
                    let (c, s) = (v[2 * j] / r, -v[2 * j + 1] / r);
                    for m in 0..v.len() / 2 {
                        let (a, b) = (v[2 * m], v[2 * m + 1]);
                        v[2 * m] = a * c - b * s;
                        v[2 * m + 1] = a * s + b * c;
                    }
                    v[2 * j + 1] = 0.0;
                }
                v
            }
            Space::Torus(a) => p.iter().zip(a).map(|(&x, &l)| x.rem_euclid(l)).collect(),
            _ => p.to_vec(),
        }
    }

    /// One point from the normalized volume measure.
    pub fn sample_uniform(&self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        Ok(match self {
            Space::Euclidean(_) => return Err(Error::Unsupported("uniform sampling of all of R^n".into())),
            Space::Sphere(n) => unit_vector(rng, n + 1),
            Space::RealProjective(n) => self.canonicalize(&unit_vector(rng, n + 1)),
            Space::ComplexProjective(n) => self.canonicalize(&unit_vector(rng, 2 * n + 2)),
            Space::Ball(n) => {
                let u = unit_vector(rng, *n);
                let r = rng.random::<f64>().powf(1.0 / *n as f64);
                u.into_iter().map(|x| x * r).collect()
            }
            Space::Cube(s) => s.iter().map(|&l| rng.random::<f64>() * l).collect(),
            Space::Torus(a) => a.iter().map(|&l| rng.random::<f64>() * l).collect(),
            Space::ConvexBody(k) => {
                let (lo, hi) = k.bounding_box();
                for _ in 0..REJECTION_CAP {
                    let x: Vec<f64> =
                        lo.iter().zip(&hi).map(|(&a, &b)| a + (b - a) * rng.random::<f64>()).collect();
                    if k.contains(&x) {
                        return Ok(x);
                    }
                }
                // no acceptances at all: the observed rate is 0, report the resolution limit
                return Err(Error::Sampling {
                    attempts: REJECTION_CAP,
                    acceptance_rate: 1.0 / REJECTION_CAP as f64,
                });
            }
        })
    }
}

/// |⟨p, q⟩| for vectors of ℂᵐ stored as interleaved real pairs.
pub fn complex_inner_abs(p: &[f64], q: &[f64]) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for j in 0..p.len() / 2 {
        let (a, b) = (p[2 * j], p[2 * j + 1]);
        let (c, d) = (q[2 * j], q[2 * j + 1]);
        re += a * c + b * d;
        im += a * d - b * c;
    }
    re.hypot(im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constants() {
        assert_eq!(ball_volume::<f64>(0).unwrap(), 1.0);
        assert!((ball_volume::<f64>(2).unwrap() - PI).abs() < 1e-15);
        assert!((ball_volume::<f64>(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((sphere_volume::<f64>(1).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_volume::<f64>(3).unwrap() - 2.0 * PI * PI).abs() < 1e-14);
        assert!(ball_volume::<f64>(-1).is_err());
        assert!(sphere_volume::<f32>(-3).is_err());
    }

    #[test]
    fn f32_constants() {
        let v: f32 = ball_volume(4).unwrap();
        assert!((v - std::f32::consts::PI.powi(2) / 2.0).abs() < 1e-5);
    }

    #[test]
    fn distance_examples() {
        let s = Space::Sphere(2);
        assert!((s.distance(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap() - PI / 2.0).abs() < 1e-15);
        let rp = Space::RealProjective(2);
        assert!(rp.distance(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]).unwrap().abs() < 1e-12);
        let t = Space::torus(vec![1.0]).unwrap();
        assert!((t.distance(&[0.1], &[0.9]).unwrap() - 0.2).abs() < 1e-12);
        assert!(s.distance(&[1.0, 0.0], &[0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn cp_diameter() {
        let cp = Space::ComplexProjective(1);
        let d = cp.distance(&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((d - PI / 2.0).abs() < 1e-15);
        // phase does not matter
        let d = cp.distance(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(d.abs() < 1e-7);
        assert!((cp.volume() - PI).abs() < 1e-15);
    }

    #[test]
    fn canonical_cp_is_phase_free() {
        let cp = Space::ComplexProjective(1);
        let p = [0.6, 0.0, 0.0, 0.8];
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let q = [0.6 * c, 0.6 * s, -0.8 * s, 0.8 * c];
        let a = cp.canonicalize(&p);
        let b = cp.canonicalize(&q);
        for i in 0..4 {
            assert!((a[i] - b[i]).abs() < 1e-12);
        }
    }
}
