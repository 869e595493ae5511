//! 1-Lipschitz transports of the Gaussian measure e^{−π|x|²}dx and the
//! projection densities of the Archimedes maps 𝕊^{n+m} → Bⁿ.
//!
//! Everything here is generic over [`Real`].

use rand::Rng;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::integral_geometry::random_frame;
use crate::rng::{gaussian_vec, stream, unit_vector};
use crate::linalg::{dot, norm, orthonormality_defect, singular_values, symmetric_eigen, Mat};
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::spaces::{ball_volume, sphere_volume};

/// Beyond this radius e^{−πr²} < 1e−87: integrals over [0, x] are complete.
const GAUSS_CUTOFF: f64 = 8.0;

/// y(x) = ∫₀ˣ e^{−πξ²} dξ, mapping ℝ onto (−1/2, 1/2).
pub fn gauss_to_interval<T: Real>(x: T) -> T {
    let cut = T::lit(GAUSS_CUTOFF);
    let xc = x.max(-cut).min(cut);
    let pi = T::PI();
    let half = T::lit(0.5);
    // rounding in the quadrature sum can overshoot 1/2 by an ulp in the tails
    integrate(|s: T| (-pi * s * s).exp(), T::zero(), xc, T::quad_tolerance()).0.max(-half).min(half)
}

/// dy/dx of [`gauss_to_interval`].
pub fn gauss_to_interval_derivative<T: Real>(x: T) -> T {
    (-T::PI() * x * x).exp()
}

/// Radius profile of the Gaussian-to-ball transport: the y ≥ 0 with
/// yⁿ = ∫₀ˣ n r^{n−1} e^{−πr²} dr. The image ball has unit volume.
pub fn gauss_to_ball_radial<T: Real>(x: T, n: i64) -> Result<T> {
    if n <= 0 {
        return domain(format!("gauss_to_ball_radial: dimension {n} must be positive"));
    }
    if x < T::zero() || !x.is_finite() {
        return domain("gauss_to_ball_radial: x must be finite and >= 0");
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let nn = T::from_i64(n).unwrap();
    let pi = T::PI();
    let tol = T::quad_tolerance();
    if x <= T::one() {
        // yⁿ = xⁿ·∫₀¹ n s^{n−1} e^{−πx²s²} ds keeps relative accuracy near 0
        let g = integrate(|s: T| nn * s.powi(n as i32 - 1) * (-pi * x * x * s * s).exp(), T::zero(), T::one(), tol).0;
        Ok(x * g.powf(T::one() / nn))
    } else {
        let xc = x.min(T::lit(GAUSS_CUTOFF));
        let f = integrate(|r: T| nn * r.powi(n as i32 - 1) * (-pi * r * r).exp(), T::zero(), xc, tol).0;
        Ok(f.powf(T::one() / nn).min(x))
    }
}

/// dy/dx = (x/y)^{n−1} e^{−πx²}, with the limit 1 at x = 0.
pub fn gauss_to_ball_radial_derivative<T: Real>(x: T, n: i64) -> Result<T> {
    let y = gauss_to_ball_radial(x, n)?;
    if x == T::zero() {
        return Ok(T::one());
    }
    Ok((x / y).powi(n as i32 - 1) * (-T::PI() * x * x).exp())
}

/// Radius of the unit-volume n-ball, the image of the radial transport.
pub fn unit_volume_ball_radius<T: Real>(n: i64) -> T {
    ball_volume::<T>(n).unwrap().powf(-T::one() / T::from_i64(n).unwrap())
}

#[derive(Clone, Debug, PartialEq)]
pub enum TransportMap {
    /// ℝ → (−1/2, 1/2)
    GaussToInterval,
    /// ℝⁿ → unit-volume ball, radial
    GaussToBall(usize),
    /// blockwise product
    Product(Vec<TransportMap>),
    /// x ↦ factor·x on ℝ^dim
    CoordinateScale { factor: f64, dim: usize },
    /// 𝕊^{n+m} ⊂ ℝ^{n+m+1} → Bⁿ, dropping the last m+1 coordinates
    ArchimedesProjection { n: usize, m: usize },
}

/// Singular values of the differential at a point, descending.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianSpectrum<T> {
    pub singular_values: Vec<T>,
    pub point: Vec<T>,
}

impl<T: Real> JacobianSpectrum<T> {
    pub fn max(&self) -> T {
        self.singular_values.first().copied().unwrap_or(T::zero())
    }
}

impl TransportMap {
    /// The cube (−1/2, 1/2)ⁿ transport.
    pub fn gauss_to_cube(n: usize) -> TransportMap {
        TransportMap::Product(vec![TransportMap::GaussToInterval; n])
    }

    /// Product of radial transports onto unit-volume balls of the given
    /// dimensions.
    pub fn gauss_to_ball_product(dims: &[usize]) -> TransportMap {
        TransportMap::Product(dims.iter().map(|&d| TransportMap::GaussToBall(d)).collect())
    }

    /// Ambient coordinates of the domain.
    pub fn domain_dim(&self) -> usize {
        match self {
            TransportMap::GaussToInterval => 1,
            TransportMap::GaussToBall(n) => *n,
            TransportMap::Product(ms) => ms.iter().map(|m| m.domain_dim()).sum(),
            TransportMap::CoordinateScale { dim, .. } => *dim,
            TransportMap::ArchimedesProjection { n, m } => n + m + 1,
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match self {
            TransportMap::GaussToInterval => 1,
            TransportMap::GaussToBall(n) => *n,
            TransportMap::Product(ms) => ms.iter().map(|m| m.codomain_dim()).sum(),
            TransportMap::CoordinateScale { dim, .. } => *dim,
            TransportMap::ArchimedesProjection { n, .. } => *n,
        }
    }

    /// Whether the domain is a round sphere (tangent vectors must then be
    /// orthogonal to the point).
    pub fn sphere_domain(&self) -> bool {
        matches!(self, TransportMap::ArchimedesProjection { .. })
    }

    fn check<T: Real>(&self, p: &[T]) -> Result<()> {
        if p.len() != self.domain_dim() {
            return usage(format!("point has {} coordinates, map expects {}", p.len(), self.domain_dim()));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return domain("point has non-finite coordinates");
        }
        if self.sphere_domain() && (norm(p) - T::one()).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(16.0)) {
            return domain("point is not on the unit sphere");
        }
        Ok(())
    }

    pub fn apply<T: Real>(&self, p: &[T]) -> Result<Vec<T>> {
        self.check(p)?;
        Ok(match self {
            TransportMap::GaussToInterval => vec![gauss_to_interval(p[0])],
            TransportMap::GaussToBall(n) => {
                let r = norm(p);
                if r == T::zero() {
                    vec![T::zero(); *n]
                } else {
                    let y = gauss_to_ball_radial(r, *n as i64)?;
                    p.iter().map(|&x| x * y / r).collect()
                }
            }
            TransportMap::Product(ms) => {
                let mut out = Vec::with_capacity(self.codomain_dim());
                let mut off = 0;
                for m in ms {
                    let d = m.domain_dim();
                    out.extend(m.apply(&p[off..off + d])?);
                    off += d;
                }
                out
            }
            TransportMap::CoordinateScale { factor, .. } => p.iter().map(|&x| x * T::lit(*factor)).collect(),
            TransportMap::ArchimedesProjection { n, .. } => p[..*n].to_vec(),
        })
    }

    /// Differential at p as a codomain × domain matrix in ambient
    /// coordinates. Coordinatewise and linear kinds are analytic; the radial
    /// kind uses central differences except at the origin, where the
    /// isotropic limit y′(0)·I is returned.
    pub fn jacobian<T: Real>(&self, p: &[T]) -> Result<Mat<T>> {
        self.check(p)?;
        Ok(match self {
            TransportMap::GaussToInterval => {
                let mut m = Mat::zeros(1, 1);
                m[(0, 0)] = gauss_to_interval_derivative(p[0]);
                m
            }
            TransportMap::GaussToBall(n) => {
                if norm(p) == T::zero() {
                    Mat::identity(*n)
                } else {
                    self.jacobian_fd(p)?
                }
            }
            TransportMap::Product(ms) => {
                let mut out = Mat::zeros(self.codomain_dim(), self.domain_dim());
                let (mut r0, mut c0) = (0, 0);
                for m in ms {
                    let d = m.domain_dim();
                    let j = m.jacobian(&p[c0..c0 + d])?;
                    for i in 0..j.rows {
                        for k in 0..j.cols {
                            out[(r0 + i, c0 + k)] = j[(i, k)];
                        }
                    }
                    r0 += j.rows;
                    c0 += d;
                }
                out
            }
            TransportMap::CoordinateScale { factor, dim } => {
                let mut m = Mat::identity(*dim);
                m.data.iter_mut().for_each(|x| *x = *x * T::lit(*factor));
                m
            }
            TransportMap::ArchimedesProjection { n, m } => {
                let mut j = Mat::zeros(*n, n + m + 1);
                for i in 0..*n {
                    j[(i, i)] = T::one();
                }
                j
            }
        })
    }

    /// Central-difference differential with step h = max(1e−6, ε^{1/3}).
    pub fn jacobian_fd<T: Real>(&self, p: &[T]) -> Result<Mat<T>> {
        let h = T::lit(1e-6).max(T::epsilon().cbrt());
        let d = p.len();
        let mut out = Mat::zeros(self.codomain_dim(), d);
        for k in 0..d {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[k] = a[k] + h;
            b[k] = b[k] - h;
            let fa = self.apply_unchecked(&a)?;
            let fb = self.apply_unchecked(&b)?;
            for i in 0..fa.len() {
                out[(i, k)] = (fa[i] - fb[i]) / (h + h);
            }
        }
        Ok(out)
    }

    fn apply_unchecked<T: Real>(&self, p: &[T]) -> Result<Vec<T>> {
        match self {
            TransportMap::ArchimedesProjection { n, .. } => Ok(p[..*n].to_vec()),
            _ => self.apply(p),
        }
    }

    /// Orthonormal basis of the tangent space at p (all of ℝᵈ for flat
    /// domains, p^⊥ for the sphere).
    pub fn tangent_basis<T: Real>(&self, p: &[T]) -> Vec<Vec<T>> {
        let d = p.len();
        if self.sphere_domain() {
            crate::linalg::orthogonal_complement(&[p.to_vec()], d)
        } else {
            (0..d)
                .map(|i| {
                    let mut e = vec![T::zero(); d];
                    e[i] = T::one();
                    e
                })
                .collect()
        }
    }

    /// Singular values of the differential on the tangent space.
    pub fn jacobian_singular_values<T: Real>(&self, p: &[T]) -> Result<JacobianSpectrum<T>> {
        let j = self.jacobian(p)?;
        let basis = self.tangent_basis(p);
        let restricted = j.mul(&Mat::from_cols(&basis));
        let mut sv = singular_values(&restricted);
        sv.truncate(restricted.rows.min(restricted.cols));
        Ok(JacobianSpectrum { singular_values: sv, point: p.to_vec() })
    }

    /// √det(AᵀA) for A the differential restricted to span(frame).
    pub fn restricted_determinant<T: Real>(&self, p: &[T], frame: &[Vec<T>]) -> Result<T> {
        let tol = T::lit(1e-9).max(T::epsilon() * T::lit(64.0));
        if frame.is_empty() || frame.iter().any(|f| f.len() != p.len()) || orthonormality_defect(frame) > tol {
            return usage("frame must consist of orthonormal vectors in the domain");
        }
        if self.sphere_domain() && frame.iter().any(|f| dot(f, p).abs() > tol) {
            return usage("frame is not tangent to the sphere at p");
        }
        let a = self.jacobian(p)?.mul(&Mat::from_cols(frame));
        let g = a.gram();
        let (vals, _) = symmetric_eigen(&g);
        Ok(vals.into_iter().fold(T::one(), |acc, l| acc * l.max(T::zero())).sqrt())
    }

    /// Density ratio the map transports to a uniform measure:
    /// e^{−π|p|²} for the Gaussian kinds.
    pub fn source_density<T: Real>(&self, p: &[T]) -> Option<T> {
        fn gaussian_only(m: &TransportMap) -> bool {
            match m {
                TransportMap::GaussToInterval | TransportMap::GaussToBall(_) => true,
                TransportMap::Product(ms) => ms.iter().all(gaussian_only),
                _ => false,
            }
        }
        gaussian_only(self).then(|| (-T::PI() * dot(p, p)).exp())
    }
}

/// μ_m density on Bⁿ: s_m (1 − |x|²)^{(m−1)/2}.
pub fn density_mu_m<T: Real>(m: i64, x: &[T]) -> Result<T> {
    if m < 1 {
        return domain("density_mu_m needs m >= 1");
    }
    let r2 = dot(x, x);
    if r2 > T::one() {
        return domain("density_mu_m: point outside the unit ball");
    }
    let e = T::from_i64(m - 1).unwrap() / T::lit(2.0);
    Ok(sphere_volume::<T>(m)? * (T::one() - r2).powf(e))
}

/// ρ″_m(y) = (1 − 2π|y|²/(m−1))^{(m−1)/2} inside |y| ≤ √((m−1)/2π), else 0.
pub fn density_rho_m<T: Real>(m: i64, y: &[T]) -> Result<T> {
    if m < 2 {
        return domain("density_rho_m needs m >= 2");
    }
    let mm = T::from_i64(m - 1).unwrap();
    let base = T::one() - (T::PI() + T::PI()) / mm * dot(y, y);
    if base <= T::zero() {
        return Ok(T::zero());
    }
    Ok(base.powf(mm / T::lit(2.0)))
}

/// ∫_{Bⁿ} dμ_m by radial quadrature: s_{n−1} ∫₀¹ r^{n−1} μ_m(r) dr.
pub fn integrate_mu_m<T: Real>(n: i64, m: i64) -> Result<T> {
    if n < 1 {
        return domain("integrate_mu_m needs n >= 1");
    }
    let s_prev = sphere_volume::<T>(n - 1)?;
    let err = std::cell::RefCell::new(None);
    let (v, _) = integrate(
        |r: T| {
            let mut x = vec![T::zero(); n as usize];
            x[0] = r.min(T::one());
            match density_mu_m(m, &x) {
                Ok(d) => r.powi(n as i32 - 1) * d,
                Err(e) => {
                    *err.borrow_mut() = Some(e.to_string());
                    T::zero()
                }
            }
        },
        T::zero(),
        T::one(),
        T::lit(1e-12).max(T::epsilon() * T::lit(64.0)),
    );
    if let Some(e) = err.into_inner() {
        return Err(Error::Domain(e));
    }
    Ok(s_prev * v)
}

/// Both sides of the pullback inequality for n = 2, m = 1 and X the
/// horizontal diameter of B²: (∫_X μ₁, vol₂ p₁⁻¹(X)), the second measured on
/// a mesh of the preimage great sphere at the given resolution.
pub fn pullback_equality_case(res: usize) -> Result<(f64, f64)> {
    let lhs = integrate(|r: f64| density_mu_m(1, &[r, 0.0]).unwrap(), -1.0, 1.0, 1e-13).0;
    // p₁⁻¹(X) = {(t, 0, z₃, z₄)} ∩ 𝕊³, a great 2-sphere
    let frame = vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]];
    let mesh = crate::mesh::sphere_mesh(2, res, &frame);
    let p = TransportMap::ArchimedesProjection { n: 2, m: 1 };
    for v in &mesh.vertices {
        let y = p.apply(v)?;
        if y[1].abs() > 1e-12 {
            return Err(Error::Domain("preimage mesh leaves the diameter".into()));
        }
    }
    Ok((lhs, mesh.volume()))
}

/// The builtin catalogue used by the Lipschitz certificate.
pub fn builtin_maps() -> Vec<(String, TransportMap)> {
    let mut out = vec![];
    for n in 1..=4 {
        out.push((format!("gauss_to_cube({n})"), TransportMap::gauss_to_cube(n)));
    }
    for n in 1..=4 {
        out.push((format!("gauss_to_ball({n})"), TransportMap::GaussToBall(n)));
    }
    out.push(("ball_product(2,1)".into(), TransportMap::gauss_to_ball_product(&[2, 1])));
    out.push(("ball_product(2,2)".into(), TransportMap::gauss_to_ball_product(&[2, 2])));
    out.push(("ball_product(1,3)".into(), TransportMap::gauss_to_ball_product(&[1, 3])));
    out.push(("coordinate_scale(0.5,3)".into(), TransportMap::CoordinateScale { factor: 0.5, dim: 3 }));
    for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 3)] {
        out.push((format!("archimedes({n},{m})"), TransportMap::ArchimedesProjection { n, m }));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportRow {
    pub map: String,
    pub points: usize,
    pub max_singular_value: f64,
    pub lipschitz_ok: bool,
    /// (point, subspace) pairs with a known density; 0 when the map has none
    pub pairs: usize,
    /// smallest det DT|_L / ρ(p) over the pairs
    pub min_det_ratio: Option<f64>,
    pub determinant_ok: bool,
}

/// Full Jacobian determinant the transport must dominate on every subspace.
fn density_floor(map: &TransportMap, p: &[f64]) -> Option<f64> {
    match map {
        TransportMap::CoordinateScale { factor, dim } => Some(factor.abs().powi(*dim as i32)),
        m => m.source_density(p),
    }
}

/// Largest singular value of DT at random points, and det DT|_L against ρ(p)
/// for random subspaces L. Lipschitz points are standard normal (wider than
/// the measure) or uniform on the sphere; determinant points follow the
/// source measure.
pub fn lipschitz_check(points: usize, pairs: usize, seed: u64, tolerance: f64) -> Result<Vec<TransportRow>> {
    if points == 0 {
        return usage("lipschitz check needs points");
    }
    let mut rows = Vec::new();
    for (i, (name, map)) in builtin_maps().into_iter().enumerate() {
        let d = map.domain_dim();
        let mut rng = stream(seed, i as u64);
        let draw = |rng: &mut crate::rng::McRng| {
            if map.sphere_domain() {
                unit_vector(rng, d)
            } else {
                gaussian_vec(rng, d)
            }
        };
        let mut max_sv: f64 = 0.0;
        for _ in 0..points {
            let p = draw(&mut rng);
            max_sv = max_sv.max(map.jacobian_singular_values(&p)?.max());
        }
        let mut min_ratio: Option<f64> = None;
        let mut done = 0;
        if density_floor(&map, &vec![0.0; d]).is_some() {
            for _ in 0..pairs {
                // drawn from the source measure e^{−π|x|²}dx itself
                let p: Vec<f64> = gaussian_vec(&mut rng, d).iter().map(|x| x / (2.0 * std::f64::consts::PI).sqrt()).collect();
                let j = rng.random_range(1..=d);
                let frame = random_frame(d, j, &mut rng);
                let rho = density_floor(&map, &p).expect("density checked");
                let det = map.restricted_determinant(&p, &frame)?;
                let r = det / rho;
                min_ratio = Some(min_ratio.map_or(r, |m: f64| m.min(r)));
                done += 1;
            }
        }
        rows.push(TransportRow {
            map: name,
            points,
            max_singular_value: max_sv,
            lipschitz_ok: max_sv <= 1.0 + tolerance,
            pairs: done,
            min_det_ratio: min_ratio,
            determinant_ok: min_ratio.is_none_or(|r| r >= 1.0 - tolerance),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_basics() {
        assert_eq!(gauss_to_interval(0.0f64), 0.0);
        assert!((gauss_to_interval(50.0f64) - 0.5).abs() < 1e-13);
        assert!((gauss_to_interval(-1.0f64) + gauss_to_interval(1.0f64)).abs() < 1e-15);
        assert_eq!(gauss_to_interval_derivative(0.0f64), 1.0);
    }

    #[test]
    fn interval_matches_erf() {
        use statrs::function::erf::erf;
        for &x in &[0.1, 0.5, 1.0, 2.0, 3.5] {
            let want = 0.5 * erf(std::f64::consts::PI.sqrt() * x);
            // statrs erf is good to ~1e-11 here
            assert!((gauss_to_interval(x) - want).abs() < 2e-11, "{x}");
        }
    }

    #[test]
    fn radial_reduces_to_interval_for_n1() {
        for &x in &[0.2f64, 0.9, 1.7, 3.0] {
            let y = gauss_to_ball_radial(x, 1).unwrap();
            assert!((y - gauss_to_interval(x)).abs() < 1e-13);
        }
        assert!(gauss_to_ball_radial(1.0f64, 0).is_err());
        assert_eq!(gauss_to_ball_radial(0.0f64, 3).unwrap(), 0.0);
    }

    #[test]
    fn radial_limit_is_unit_volume_radius() {
        for n in 1..6 {
            let y = gauss_to_ball_radial(20.0f64, n).unwrap();
            assert!((y - unit_volume_ball_radius::<f64>(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn generic_f32() {
        let y: f32 = gauss_to_interval(1.0f32);
        assert!((y as f64 - gauss_to_interval(1.0f64)).abs() < 1e-6);
        let s = TransportMap::gauss_to_cube(2).jacobian_singular_values(&[1.0f32, 1.0]).unwrap();
        assert!((s.max() - (-std::f32::consts::PI).exp()).abs() < 1e-6);
    }

    #[test]
    fn archimedes_drops_coordinates() {
        let p = TransportMap::ArchimedesProjection { n: 1, m: 1 };
        assert_eq!(p.apply(&[0.0, 0.0, 1.0]).unwrap(), vec![0.0]);
        assert!(p.apply(&[0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn mu_and_rho_examples() {
        let tau = 2.0 * std::f64::consts::PI;
        assert!((density_mu_m(1, &[0.3]).unwrap() - tau).abs() < 1e-14);
        assert!((density_mu_m(2, &[0.0, 0.0]).unwrap() - 2.0 * tau).abs() < 1e-14);
        assert!(density_mu_m(2, &[1.1]).is_err());
        assert_eq!(density_rho_m(5, &[0.0]).unwrap(), 1.0);
        let edge = (4.0 / tau).sqrt();
        assert!(density_rho_m(5, &[edge]).unwrap().abs() < 1e-12);
        assert!(density_rho_m(1, &[0.0f64]).is_err());
    }

    #[test]
    fn builtin_maps_are_certified() {
        let rows = lipschitz_check(200, 30, 4, 1e-6).unwrap();
        for r in &rows {
            assert!(r.lipschitz_ok && r.determinant_ok, "{r:?}");
        }
        assert!(rows.iter().any(|r| r.pairs == 30));
    }

    #[test]
    fn non_orthonormal_frame_rejected() {
        let m = TransportMap::gauss_to_cube(2);
        assert!(m.restricted_determinant(&[0.0, 0.0], &[vec![1.0, 1.0]]).is_err());
    }
}
