//! Embedded simplicial meshes and their text format.
//!
//! ```text
//! dim <ambient> <d>
//! v x1 ... x_ambient
//! s i0 ... i_d
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{normalize, simplex_volume};

pub const DEGENERATE_VOLUME: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct SubmanifoldMesh {
    pub ambient: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub simplices: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
}

impl SubmanifoldMesh {
    pub fn empty(ambient: usize, dim: usize) -> Self {
        SubmanifoldMesh { ambient, dim, vertices: vec![], simplices: vec![], weights: vec![] }
    }

    /// Builds a mesh, dropping simplices whose d-volume is below
    /// [`DEGENERATE_VOLUME`]. Weights default to 1.
    pub fn new(ambient: usize, dim: usize, vertices: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if dim > ambient {
            return Err(Error::Usage(format!("mesh dimension {dim} exceeds ambient {ambient}")));
        }
        for v in &vertices {
            if v.len() != ambient {
                return Err(Error::Usage("vertex has wrong coordinate count".into()));
            }
        }
        let mut kept = Vec::with_capacity(simplices.len());
        for s in simplices {
            if s.len() != dim + 1 || s.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::Usage(format!("invalid simplex {s:?}")));
            }
            let pts: Vec<&[f64]> = s.iter().map(|&i| vertices[i].as_slice()).collect();
            if dim == 0 || simplex_volume(&pts) > DEGENERATE_VOLUME {
                kept.push(s);
            }
        }
        let weights = vec![1.0; kept.len()];
        Ok(SubmanifoldMesh { ambient, dim, vertices, simplices: kept, weights })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> Vec<&[f64]> {
        self.simplices[i].iter().map(|&j| self.vertices[j].as_slice()).collect()
    }

    /// Weighted sum of (flat) simplex volumes.
    pub fn volume(&self) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * simplex_volume(&self.simplex(i))).sum()
    }

    pub fn max_edge(&self) -> f64 {
        let mut m: f64 = 0.0;
        for s in &self.simplices {
            for a in 0..s.len() {
                for b in a + 1..s.len() {
                    m = m.max(crate::linalg::dist(&self.vertices[s[a]], &self.vertices[s[b]]));
                }
            }
        }
        m
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.ambient];
        let mut hi = vec![f64::NEG_INFINITY; self.ambient];
        for s in &self.simplices {
            for &i in s {
                for (k, &x) in self.vertices[i].iter().enumerate() {
                    lo[k] = lo[k].min(x);
                    hi[k] = hi[k].max(x);
                }
            }
        }
        (lo, hi)
    }

    /// Disjoint union (vertex lists concatenated).
    pub fn union(&self, other: &SubmanifoldMesh) -> Result<SubmanifoldMesh> {
        if self.ambient != other.ambient || self.dim != other.dim {
            return Err(Error::Usage("union of meshes with different shapes".into()));
        }
        let off = self.vertices.len();
        let mut out = self.clone();
        out.vertices.extend(other.vertices.iter().cloned());
        out.simplices.extend(other.simplices.iter().map(|s| s.iter().map(|&i| i + off).collect()));
        out.weights.extend(other.weights.iter().copied());
        Ok(out)
    }

    /// Applies a map to every vertex.
    pub fn map_vertices(&self, ambient: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> SubmanifoldMesh {
        SubmanifoldMesh {
            ambient,
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| f(v)).collect(),
            simplices: self.simplices.clone(),
            weights: self.weights.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("dim {} {}\n", self.ambient, self.dim);
        for v in &self.vertices {
            s.push('v');
            for x in v {
                let _ = write!(s, " {x:?}");
            }
            s.push('\n');
        }
        for t in &self.simplices {
            s.push('s');
            for i in t {
                let _ = write!(s, " {i}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<SubmanifoldMesh> {
        let perr = |line: usize, m: &str| Error::Parse { line, message: m.to_string() };
        let mut header = None;
        let mut vertices = vec![];
        let mut simplices = vec![];
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let tag = it.next().unwrap();
            let rest: Vec<&str> = it.collect();
            match tag {
                "dim" => {
                    if rest.len() != 2 {
                        return Err(perr(ln + 1, "header must be `dim <ambient> <d>`"));
                    }
                    let a = rest[0].parse().map_err(|_| perr(ln + 1, "bad ambient dimension"))?;
                    let d = rest[1].parse().map_err(|_| perr(ln + 1, "bad mesh dimension"))?;
                    header = Some((a, d));
                }
                "v" => {
                    let v: std::result::Result<Vec<f64>, _> = rest.iter().map(|x| x.parse()).collect();
                    vertices.push(v.map_err(|_| perr(ln + 1, "bad vertex coordinate"))?);
                }
                "s" => {
                    let s: std::result::Result<Vec<usize>, _> = rest.iter().map(|x| x.parse()).collect();
                    simplices.push(s.map_err(|_| perr(ln + 1, "bad simplex index"))?);
                }
                _ => return Err(perr(ln + 1, "unknown line tag")),
            }
        }
        let (a, d) = header.ok_or_else(|| perr(0, "missing `dim` header"))?;
        SubmanifoldMesh::new(a, d, vertices, simplices)
    }
}

/// Kuhn triangulation of [0,1]^d into d! simplices, as lists of corner bit
/// patterns (bit i set = coordinate i is 1).
pub fn kuhn_simplices(d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut perm: Vec<usize> = (0..d).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut corner = 0usize;
        let mut s = vec![0];
        for &axis in p {
            corner |= 1 << axis;
            s.push(corner);
        }
        out.push(s);
    });
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Triangulated unit sphere 𝕊^d, placed in ℝ^{ambient} through an
/// orthonormal frame of d+1 vectors. Built by radially projecting the
/// Kuhn-subdivided boundary of the cube [-1,1]^{d+1} with `res` cells per
/// facet edge.
pub fn sphere_mesh(d: usize, res: usize, frame: &[Vec<f64>]) -> SubmanifoldMesh {
    assert_eq!(frame.len(), d + 1);
    assert!(res >= 1);
    let ambient = frame[0].len();
    let m = d + 1;
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut vertices = vec![];
    let mut simplices = vec![];
    let r = res as i64;
    let kuhn = kuhn_simplices(d);
    let mut vid = |g: Vec<i64>, vertices: &mut Vec<Vec<f64>>| -> usize {
        *index.entry(g.clone()).or_insert_with(|| {
            let x: Vec<f64> = g.iter().map(|&c| c as f64 / r as f64).collect();
            let u = normalize(&x).unwrap();
            let mut p = vec![0.0; ambient];
            for (c, f) in u.iter().zip(frame) {
                for k in 0..ambient {
                    p[k] += c * f[k];
                }
            }
            vertices.push(p);
            vertices.len() - 1
        })
    };
    for axis in 0..m {
        for side in [-r, r] {
            let free: Vec<usize> = (0..m).filter(|&i| i != axis).collect();
            let cells = res.pow(d as u32);
            for cell in 0..cells {
                let mut c = cell;
                let mut base = vec![0i64; d];
                for b in base.iter_mut() {
                    *b = -r + 2 * (c % res) as i64;
                    c /= res;
                }
                for ks in &kuhn {
                    let mut s = Vec::with_capacity(d + 1);
                    for &bits in ks {
                        let mut g = vec![0i64; m];
                        g[axis] = side;
                        for (j, &fa) in free.iter().enumerate() {
                            g[fa] = base[j] + if bits >> j & 1 == 1 { 2 } else { 0 };
                        }
                        s.push(vid(g, &mut vertices));
                    }
                    simplices.push(s);
                }
            }
        }
    }
    SubmanifoldMesh::new(ambient, d, vertices, simplices).expect("sphere mesh is valid")
}

/// Equatorial 𝕊^d spanned by the first d+1 coordinate axes of ℝ^{ambient}.
pub fn coordinate_sphere_mesh(d: usize, res: usize, ambient: usize) -> SubmanifoldMesh {
    let frame: Vec<Vec<f64>> = (0..=d)
        .map(|i| {
            let mut e = vec![0.0; ambient];
            e[i] = 1.0;
            e
        })
        .collect();
    sphere_mesh(d, res, &frame)
}

/// Closed polyline through `points` (last joined to first).
pub fn closed_polyline(points: Vec<Vec<f64>>) -> SubmanifoldMesh {
    let n = points.len();
    let ambient = points[0].len();
    let simplices = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    SubmanifoldMesh::new(ambient, 1, points, simplices).expect("valid polyline")
}

/// Open polyline.
pub fn polyline(points: Vec<Vec<f64>>) -> SubmanifoldMesh {
    let ambient = points[0].len();
    let simplices = (0..points.len() - 1).map(|i| vec![i, i + 1]).collect();
    SubmanifoldMesh::new(ambient, 1, points, simplices).expect("valid polyline")
}

/// Circle of radius `r` around `center` in the plane spanned by the
/// orthonormal pair (e1, e2), with `res` vertices.
pub fn circle_mesh(center: &[f64], r: f64, e1: &[f64], e2: &[f64], res: usize) -> SubmanifoldMesh {
    let pts = (0..res)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * i as f64 / res as f64;
            let (s, c) = th.sin_cos();
            (0..center.len()).map(|k| center[k] + r * (c * e1[k] + s * e2[k])).collect()
        })
        .collect();
    closed_polyline(pts)
}

/// Triangulated torus given by a parametrization of [0,2π)², periodic in
/// both angles.
pub fn periodic_surface(
    ambient: usize,
    res: usize,
    param: impl Fn(f64, f64) -> Vec<f64>,
) -> SubmanifoldMesh {
    let tau = 2.0 * std::f64::consts::PI;
    let mut vertices = Vec::with_capacity(res * res);
    for i in 0..res {
        for j in 0..res {
            vertices.push(param(tau * i as f64 / res as f64, tau * j as f64 / res as f64));
        }
    }
    let id = |i: usize, j: usize| (i % res) * res + (j % res);
    let mut simplices = Vec::with_capacity(2 * res * res);
    for i in 0..res {
        for j in 0..res {
            simplices.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            simplices.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    SubmanifoldMesh::new(ambient, 2, vertices, simplices).expect("valid surface")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kuhn_counts() {
        assert_eq!(kuhn_simplices(1).len(), 1);
        assert_eq!(kuhn_simplices(3).len(), 6);
    }

    #[test]
    fn sphere_meshes_converge() {
        let c = coordinate_sphere_mesh(1, 64, 3);
        assert!((c.volume() - 2.0 * PI).abs() < 1e-2);
        let s = coordinate_sphere_mesh(2, 24, 3);
        assert!((s.volume() - 4.0 * PI).abs() / (4.0 * PI) < 1e-2);
    }

    #[test]
    fn sphere_mesh_is_closed() {
        // every (d-1)-face of a closed d-mesh is shared by exactly two simplices
        let s = coordinate_sphere_mesh(2, 4, 3);
        let mut faces: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in &s.simplices {
            for skip in 0..3 {
                let mut f: Vec<usize> = t.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                f.sort();
                *faces.entry(f).or_default() += 1;
            }
        }
        assert!(faces.values().all(|&c| c == 2));
    }

    #[test]
    fn text_round_trip() {
        let m = coordinate_sphere_mesh(1, 3, 3);
        let back = SubmanifoldMesh::parse(&m.to_text()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn parse_errors_carry_line() {
        match SubmanifoldMesh::parse("dim 2 1\nv 0 0\nq 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_simplices_dropped() {
        let m = SubmanifoldMesh::new(2, 1, vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0]], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(m.len(), 1);
    }
}
