//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = h * T::lit(XGK[i]);
        let pair = f(c - dx) + f(c + dx);
        kron = kron + pair * T::lit(WGK[i]);
        if i % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[i / 2]);
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// ∫ₐᵇ f with absolute error target `tol`. Returns (value, error estimate).
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> (T, T) {
    if a == b {
        return (T::zero(), T::zero());
    }
    if b < a {
        let (v, e) = integrate(f, b, a, tol);
        return (-v, e);
    }
    let mut stack = vec![(a, b, tol, 0u32)];
    let mut total = T::zero();
    let mut err = T::zero();
    let half = T::lit(0.5);
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi);
        if e <= t || depth >= 48 || (hi - lo) <= T::epsilon() * (lo.abs() + hi.abs()) {
            total = total + v;
            err = err + e;
        } else {
            let mid = (lo + hi) * half;
            stack.push((mid, hi, t * half, depth + 1));
            stack.push((lo, mid, t * half, depth + 1));
        }
    }
    (total, err)
}

/// Tensor-product integral over a box by nested adaptive quadrature.
pub fn integrate_box<T: Real, F: Fn(&[T]) -> T>(f: &F, lo: &[T], hi: &[T], tol: T) -> T {
    nested(f, lo, hi, tol, &[])
}

fn nested<T: Real, F: Fn(&[T]) -> T>(f: &F, lo: &[T], hi: &[T], tol: T, prefix: &[T]) -> T {
    let axis = prefix.len();
    if axis == lo.len() {
        return f(prefix);
    }
    integrate(
        |x| {
            let mut p = prefix.to_vec();
            p.push(x);
            nested(f, lo, hi, tol, &p)
        },
        lo[axis],
        hi[axis],
        tol,
    )
    .0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate(|x: f64| x * x * x - x, 0.0, 2.0, 1e-14);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_total() {
        let (v, _) = integrate(|x: f64| (-std::f64::consts::PI * x * x).exp(), -8.0, 8.0, 1e-14);
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits() {
        let (v, _) = integrate(|x: f64| x, 1.0, 0.0, 1e-14);
        assert!((v + 0.5).abs() < 1e-15);
    }

    #[test]
    fn sqrt_singularity() {
        let (v, _) = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }
}
