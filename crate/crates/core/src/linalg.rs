//! Small dense linear algebra on `Vec`-backed matrices.
//!
//! Dimensions in this crate never exceed ~20, so everything here is the
//! textbook O(n³) routine.

use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for i in 0..r {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// AᵀA
    pub fn gram(&self) -> Mat<T> {
        self.transpose().mul(self)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// a + s·b
pub fn axpy<T: Real>(a: &[T], s: T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + s * y).collect()
}

pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y))
        .sqrt()
}

/// Returns `None` for the zero vector.
pub fn normalize<T: Real>(a: &[T]) -> Option<Vec<T>> {
    let n = norm(a);
    if n > T::zero() && n.is_finite() {
        Some(scale(a, T::one() / n))
    } else {
        None
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
/// Returns `None` if the vectors are numerically dependent.
pub fn orthonormalize<T: Real>(vectors: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        let n0 = norm(&w);
        for _ in 0..2 {
            for q in &out {
                let c = dot(&w, q);
                w = axpy(&w, -c, q);
            }
        }
        let n = norm(&w);
        if !(n > n0 * T::lit(1e-10)) || n == T::zero() {
            return None;
        }
        out.push(scale(&w, T::one() / n));
    }
    Some(out)
}

/// Max deviation of the Gram matrix of `frame` from the identity.
pub fn orthonormality_defect<T: Real>(frame: &[Vec<T>]) -> T {
    let mut worst = T::zero();
    for (i, a) in frame.iter().enumerate() {
        for (j, b) in frame.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((dot(a, b) - target).abs());
        }
    }
    worst
}

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix by cyclic
/// Jacobi rotations. Eigenvalues are sorted descending.
pub fn symmetric_eigen<T: Real>(m: &Mat<T>) -> (Vec<T>, Mat<T>) {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag = diag + a[(i, i)] * a[(i, i)];
            for j in 0..n {
                if i != j {
                    off = off + a[(i, j)] * a[(i, j)];
                }
            }
        }
        if off <= T::epsilon() * T::epsilon() * diag.max(T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[(k, new)] = v[(k, old)];
        }
    }
    (vals, vecs)
}

/// Singular values of an arbitrary matrix, descending.
pub fn singular_values<T: Real>(m: &Mat<T>) -> Vec<T> {
    let g = if m.rows >= m.cols { m.gram() } else { m.mul(&m.transpose()) };
    symmetric_eigen(&g).0.into_iter().map(|l| l.max(T::zero()).sqrt()).collect()
}

/// Determinant by partial-pivot LU.
pub fn det<T: Real>(m: &Mat<T>) -> T {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut d = T::one();
    for c in 0..n {
        let mut piv = c;
        for r in c + 1..n {
            if a[(r, c)].abs() > a[(piv, c)].abs() {
                piv = r;
            }
        }
        if a[(piv, c)] == T::zero() {
            return T::zero();
        }
        if piv != c {
            for j in 0..n {
                a.data.swap(c * n + j, piv * n + j);
            }
            d = -d;
        }
        let p = a[(c, c)];
        d = d * p;
        for r in c + 1..n {
            let f = a[(r, c)] / p;
            if f == T::zero() {
                continue;
            }
            for j in c..n {
                a[(r, j)] = a[(r, j)] - f * a[(c, j)];
            }
        }
    }
    d
}

/// Solves `m x = b` by Gaussian elimination; `None` if singular.
pub fn solve<T: Real>(m: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut x = b.to_vec();
    for c in 0..n {
        let mut piv = c;
        for r in c + 1..n {
            if a[(r, c)].abs() > a[(piv, c)].abs() {
                piv = r;
            }
        }
        if a[(piv, c)].abs() <= T::min_positive_value() {
            return None;
        }
        if piv != c {
            for j in 0..n {
                a.data.swap(c * n + j, piv * n + j);
            }
            x.swap(c, piv);
        }
        for r in c + 1..n {
            let f = a[(r, c)] / a[(c, c)];
            for j in c..n {
                a[(r, j)] = a[(r, j)] - f * a[(c, j)];
            }
            x[r] = x[r] - f * x[c];
        }
    }
    for c in (0..n).rev() {
        let mut s = x[c];
        for j in c + 1..n {
            s = s - a[(c, j)] * x[j];
        }
        x[c] = s / a[(c, c)];
    }
    Some(x)
}

/// √det(AᵀA): the d-volume scale factor of the columns of `a`.
pub fn gram_volume<T: Real>(a: &Mat<T>) -> T {
    det(&a.gram()).max(T::zero()).sqrt()
}

/// d-volume of the simplex spanned by `pts` (d+1 points in any ambient
/// dimension).
pub fn simplex_volume<T: Real>(pts: &[&[T]]) -> T {
    let d = pts.len().saturating_sub(1);
    if d == 0 {
        return T::one();
    }
    let edges: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    let mut fact = T::one();
    for i in 2..=d {
        fact = fact * T::from_usize_lossy(i);
    }
    gram_volume(&Mat::from_cols(&edges)) / fact
}

/// Unit vector spanning the orthogonal complement of n−1 vectors in ℝⁿ
/// (generalized cross product via cofactors), or `None` if dependent.
pub fn complement_vector<T: Real>(vs: &[Vec<T>]) -> Option<Vec<T>> {
    let n = vs.len() + 1;
    let mut out = vec![T::zero(); n];
    for i in 0..n {
        let mut minor = Mat::zeros(n - 1, n - 1);
        for (r, v) in vs.iter().enumerate() {
            let mut c = 0;
            for j in 0..n {
                if j != i {
                    minor[(r, c)] = v[j];
                    c += 1;
                }
            }
        }
        let s = if i % 2 == 0 { T::one() } else { -T::one() };
        out[i] = s * det(&minor);
    }
    normalize(&out)
}

/// Orthonormal basis of the orthogonal complement of span(frame) in ℝⁿ.
pub fn orthogonal_complement<T: Real>(frame: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = frame.to_vec();
    let mut out = Vec::new();
    for i in 0..n {
        let mut e = vec![T::zero(); n];
        e[i] = T::one();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&e, q);
                e = axpy(&e, -c, q);
            }
        }
        let ne = norm(&e);
        if ne > T::lit(1e-6) {
            let u = scale(&e, T::one() / ne);
            basis.push(u.clone());
            out.push(u);
        }
        if basis.len() == n {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_diagonal_is_sorted() {
        let m: Mat<f64> = Mat::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 2.0]]);
        let (vals, _) = symmetric_eigen(&m);
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn eigen_reconstructs() {
        let m: Mat<f64> = Mat::from_rows(&[vec![2.0, 1.0, 0.5], vec![1.0, 3.0, -0.2], vec![0.5, -0.2, 1.0]]);
        let (vals, v) = symmetric_eigen(&m);
        for (j, &l) in vals.iter().enumerate() {
            let col = v.col(j);
            let mv = m.mul_vec(&col);
            for i in 0..3 {
                assert!((mv[i] - l * col[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn det_and_solve_agree() {
        let m: Mat<f64> = Mat::from_rows(&[vec![4.0, 1.0], vec![2.0, 3.0]]);
        assert!((det(&m) - 10.0).abs() < 1e-14);
        let x = solve(&m, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((2.0 * x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn triangle_area() {
        let a = [0.0f64, 0.0, 0.0];
        let b = [1.0, 0.0, 0.0];
        let c = [0.0, 1.0, 0.0];
        assert!((simplex_volume(&[&a[..], &b[..], &c[..]]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complement_is_orthogonal() {
        let vs: Vec<Vec<f64>> = vec![vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]];
        let c = complement_vector(&vs).unwrap();
        assert!(dot(&c, &vs[0]).abs() < 1e-14 && dot(&c, &vs[1]).abs() < 1e-14);
        assert!((norm(&c) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn works_in_f32() {
        let m: Mat<f32> = Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]);
        let s = singular_values(&m);
        assert!((s[0] - 2.0).abs() < 1e-6 && (s[1] - 0.5).abs() < 1e-6);
    }
}
