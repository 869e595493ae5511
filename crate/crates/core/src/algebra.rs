//! Cayley–Dickson algebras ℝ, ℂ, ℍ, 𝕆 on coordinate slices of length 1, 2, 4, 8.
//!
//! (a, b)(c, d) = (ac − d̄b, da + bc̄), (a, b)‾ = (ā, −b).

use crate::scalar::Real;

pub fn conj<T: Real>(a: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a.iter().map(|&x| -x).collect();
    out[0] = a[0];
    out
}

pub fn mul<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    debug_assert!(n == y.len() && n.is_power_of_two());
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let left: Vec<T> = mul(a, c).iter().zip(mul(&conj(d), b)).map(|(&p, q)| p - q).collect();
    let right: Vec<T> = mul(d, a).iter().zip(mul(b, &conj(c))).map(|(&p, q)| p + q).collect();
    [left, right].concat()
}

pub fn norm_sq<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |s, &x| s + x * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_vec, stream};

    #[test]
    fn quaternion_units() {
        let i = [0.0, 1.0, 0.0, 0.0];
        let j = [0.0, 0.0, 1.0, 0.0];
        let k = [0.0, 0.0, 0.0, 1.0];
        assert_eq!(mul(&i, &j), k.to_vec());
        assert_eq!(mul(&j, &i), vec![0.0, 0.0, 0.0, -1.0]);
        assert_eq!(mul(&i, &i), vec![-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn norm_is_multiplicative_up_to_octonions() {
        let mut rng = stream(3, 0);
        for n in [1, 2, 4, 8] {
            for _ in 0..50 {
                let a: Vec<f64> = gaussian_vec(&mut rng, n);
                let b: Vec<f64> = gaussian_vec(&mut rng, n);
                let lhs = norm_sq(&mul(&a, &b));
                let rhs = norm_sq(&a) * norm_sq(&b);
                assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn octonions_are_alternative_not_associative() {
        let mut rng = stream(4, 0);
        let a: Vec<f64> = gaussian_vec(&mut rng, 8);
        let b: Vec<f64> = gaussian_vec(&mut rng, 8);
        let c: Vec<f64> = gaussian_vec(&mut rng, 8);
        let aab = mul(&mul(&a, &a), &b);
        let a_ab = mul(&a, &mul(&a, &b));
        assert!(aab.iter().zip(&a_ab).all(|(x, y)| (x - y).abs() < 1e-10));
        let l = mul(&mul(&a, &b), &c);
        let r = mul(&a, &mul(&b, &c));
        assert!(l.iter().zip(&r).any(|(x, y)| (x - y).abs() > 1e-6));
    }
}
