//! Bent families of parallel flats in the unit cube.
//!
//! Γ is the cubical grid of pitch l = 1/ℓ and Γ* the same grid shifted by l/2.
//! Every point q of the cube is written q = (1 − t)x + ty with x on a primal
//! (n−k)-face φ and y on a facet η of the dual k-face φ*. Ψ_ε collapses
//! t ≤ 1 − ε onto φ and stretches the remaining collar onto the segment [x, y].

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::integral_geometry::{random_frame, AffineFlat, FlatTarget};
use crate::linalg::{dot, orthogonal_complement, orthonormality_defect, solve, Mat};
use crate::report::EstimateReport;
use crate::rng::{gaussian_vec, stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub n: usize,
    pub ell: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Grid {
    pub fn new(n: usize, ell: usize) -> Result<Self> {
        if n == 0 || ell == 0 {
            return domain("grid needs n ≥ 1 and ℓ ≥ 1");
        }
        Ok(Grid { n, ell })
    }

    pub fn pitch(&self) -> f64 {
        1.0 / self.ell as f64
    }

    /// p = ℓⁿ.
    pub fn cells(&self) -> usize {
        self.ell.pow(self.n as u32)
    }

    /// Number of j-faces of Γ inside [0,1]ⁿ.
    pub fn face_count(&self, j: usize) -> usize {
        binomial(self.n, j) * self.ell.pow(j as u32) * (self.ell + 1).pow((self.n - j) as u32)
    }

    pub fn cell_coords(&self, mut idx: usize) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for a in (0..self.n).rev() {
            c[a] = idx % self.ell;
            idx /= self.ell;
        }
        c
    }

    pub fn cell_index(&self, c: &[usize]) -> usize {
        c.iter().fold(0, |acc, &x| acc * self.ell + x)
    }

    /// Dual vertex at the center of cell `idx`.
    pub fn center(&self, idx: usize) -> Vec<f64> {
        let l = self.pitch();
        self.cell_coords(idx).iter().map(|&c| (c as f64 + 0.5) * l).collect()
    }

    pub fn cell_of(&self, q: &[f64]) -> usize {
        let c: Vec<usize> = q
            .iter()
            .map(|&x| ((x * self.ell as f64).floor().max(0.0) as usize).min(self.ell - 1))
            .collect();
        self.cell_index(&c)
    }
}

/// A primal face: `fixed` axes sit on grid lines, `free` axes range over one cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    pub fixed: Vec<(usize, i64)>,
    pub free: Vec<(usize, i64)>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Cells (as coordinate vectors) whose closure contains the face.
    fn cells(&self, g: &Grid) -> Vec<Vec<usize>> {
        let mut out = vec![vec![0usize; g.n]];
        for &(a, c) in &self.free {
            for v in &mut out {
                v[a] = c as usize;
            }
        }
        for &(a, line) in &self.fixed {
            let mut next = Vec::new();
            for v in &out {
                for c in [line - 1, line] {
                    if c >= 0 && (c as usize) < g.ell {
                        let mut w = v.clone();
                        w[a] = c as usize;
                        next.push(w);
                    }
                }
            }
            out = next;
        }
        out
    }
}

/// Join tile φ*η: η is the facet of φ* where axis `eta_axis` sits at
/// distance l/2 from φ on side `eta_side`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tile {
    pub phi: Face,
    pub eta_axis: usize,
    pub eta_side: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct Join {
    pub tile: Tile,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
}

fn check_k(g: &Grid, k: usize) -> Result<()> {
    if k == 0 || k >= g.n {
        return domain(format!("codimension k = {k} outside [1, {}]", g.n - 1));
    }
    Ok(())
}

/// Tile and join coordinates of q. The k axes closest to a grid line are the
/// fixed axes of φ; ties go to the lower axis index.
pub fn tile_decompose(g: &Grid, k: usize, q: &[f64]) -> Result<Join> {
    check_k(g, k)?;
    if q.len() != g.n || q.iter().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
        return domain("point outside the unit cube");
    }
    let n = g.n;
    let l = g.pitch();
    let ell = g.ell as f64;
    let mut line = vec![0i64; n];
    let mut d = vec![0.0; n];
    for a in 0..n {
        let s = q[a] * ell;
        let r = s.round();
        line[a] = r as i64;
        d[a] = (s - r).abs() * l;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let b1 = order[k - 1];
    let mut fixed: Vec<usize> = order[..k].to_vec();
    let mut free: Vec<usize> = order[k..].to_vec();
    fixed.sort_unstable();
    free.sort_unstable();
    let t = (2.0 * d[b1] / l).clamp(0.0, 1.0);

    let cell: Vec<i64> = q
        .iter()
        .map(|&x| ((x * ell).floor() as i64).clamp(0, g.ell as i64 - 1))
        .collect();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let side: i8 = if q[b1] >= line[b1] as f64 * l { 1 } else { -1 };
    for &a in &fixed {
        let gl = line[a] as f64 * l;
        x[a] = gl;
        y[a] = if a == b1 {
            gl + side as f64 * 0.5 * l
        } else if t > 0.0 {
            gl + (q[a] - gl) / t
        } else {
            gl
        };
    }
    for &a in &free {
        y[a] = (cell[a] as f64 + 0.5) * l;
        x[a] = if t < 1.0 { (q[a] - t * y[a]) / (1.0 - t) } else { y[a] };
    }
    let phi = Face {
        fixed: fixed.iter().map(|&a| (a, line[a])).collect(),
        free: free.iter().map(|&a| (a, cell[a])).collect(),
    };
    Ok(Join { tile: Tile { phi, eta_axis: b1, eta_side: side }, x, y, t })
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("ε = {eps} outside (0, 1)"));
    }
    Ok(())
}

fn psi_of(j: &Join, eps: f64) -> Vec<f64> {
    let s = (1.0 - j.t) / eps;
    if s >= 1.0 {
        return j.x.clone();
    }
    j.y.iter().zip(&j.x).map(|(&y, &x)| y + s * (x - y)).collect()
}

/// Ψ_ε(q): x when t ≤ 1 − ε, otherwise y + ((1 − t)/ε)(x − y).
pub fn psi_epsilon(g: &Grid, k: usize, eps: f64, q: &[f64]) -> Result<Vec<f64>> {
    check_eps(eps)?;
    Ok(psi_of(&tile_decompose(g, k, q)?, eps))
}

/// A point of the collar that Ψ_ε sends to q (q itself on the skeleton).
pub fn psi_preimage(g: &Grid, k: usize, eps: f64, q: &[f64]) -> Result<Vec<f64>> {
    check_eps(eps)?;
    let j = tile_decompose(g, k, q)?;
    if j.t == 0.0 {
        return Ok(q.to_vec());
    }
    let t = 1.0 - eps * (1.0 - j.t);
    Ok(j.x.iter().zip(&j.y).map(|(&x, &y)| (1.0 - t) * x + t * y).collect())
}

/// True when q lies in the open collar t > 1 − ε.
fn in_collar(j: &Join, eps: f64) -> bool {
    j.t > 1.0 - eps
}

// ------------------------------------------------------------ flat families

/// Parallel (n−k)-flats {z : frame·(z − offset) = xᵢ} perpendicular to the
/// k-flat P = offset + span(frame).
#[derive(Clone, Debug, Serialize)]
pub struct FlatFamily {
    pub n: usize,
    pub k: usize,
    pub frame: Vec<Vec<f64>>,
    pub normals: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// Cell whose dual vertex each flat was routed through, if any.
    pub anchors: Option<Vec<usize>>,
}

impl FlatFamily {
    pub fn new(frame: Vec<Vec<f64>>, offset: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        let k = frame.len();
        let n = offset.len();
        if k == 0 || k >= n || frame.iter().any(|f| f.len() != n) {
            return usage("P must be a k-frame with 1 ≤ k < n");
        }
        if orthonormality_defect(&frame) > 1e-10 {
            return usage("P frame is not orthonormal");
        }
        if points.iter().any(|x| x.len() != k) {
            return usage("flat coordinates must have one entry per P direction");
        }
        let normals = orthogonal_complement(&frame, n);
        Ok(FlatFamily { n, k, frame, normals, offset, points, anchors: None })
    }

    /// A point on flat i.
    pub fn base(&self, i: usize) -> Vec<f64> {
        let mut b = self.offset.clone();
        for (c, f) in self.points[i].iter().zip(&self.frame) {
            for a in 0..self.n {
                b[a] += c * f[a];
            }
        }
        b
    }

    pub fn project(&self, z: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = z.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.frame.iter().map(|f| dot(f, &d)).collect()
    }

    /// One flat through the collar of every dual vertex: the member of the
    /// family that passes through a point in each subcube. Jitter inside the
    /// collar keeps the flats off Γ*; returns the family and its ε.
    pub fn witness(g: &Grid, frame: Vec<Vec<f64>>, rng: &mut impl Rng) -> Result<(FlatFamily, f64)> {
        let offset = vec![0.5; g.n];
        let k = frame.len();
        check_k(g, k)?;
        let centers: Vec<Vec<f64>> = (0..g.cells()).map(|i| g.center(i)).collect();
        let jitter: Vec<Vec<f64>> = (0..centers.len())
            .map(|_| (0..k).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let mut sigma = 0.25 * g.pitch();
        for _ in 0..60 {
            let mut fam = FlatFamily::new(frame.clone(), offset.clone(), Vec::new())?;
            fam.points = centers
                .iter()
                .zip(&jitter)
                .map(|(c, j)| fam.project(c).iter().zip(j).map(|(p, u)| p + sigma * u).collect())
                .collect();
            fam.anchors = Some((0..centers.len()).collect());
            let eps = fam.collision_epsilon(g)?;
            let worst = (0..fam.points.len())
                .map(|i| anchor_clearance(&fam, g, i))
                .fold(0.0, f64::max);
            if worst <= 0.5 * eps {
                return Ok((fam, eps));
            }
            sigma *= 0.25;
        }
        Err(Error::GeneralPosition("could not route flats through their collars".into()))
    }

    /// ε = half the smallest scaled clearance between a flat and a (k−1)-face
    /// of Γ* it is not anchored to, capped at 1/2.
    pub fn collision_epsilon(&self, g: &Grid) -> Result<f64> {
        check_k(g, self.k)?;
        if g.n != self.n {
            return usage("grid and family dimensions differ");
        }
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            let anchor = self.anchors.as_ref().map(|a| g.center(a[i]));
            for (face, _) in dual_faces(g, self.k) {
                if anchor.as_ref().is_some_and(|c| face.contains(c)) {
                    continue;
                }
                best = best.min(scaled_clearance(self, g, i, &face));
            }
        }
        Ok((0.5 * best).min(0.5))
    }

    /// Fails if some flat passes within 1e−9 of a (k−1)-face of Γ*.
    pub fn check_general_position(&self, g: &Grid) -> Result<()> {
        let l = g.pitch();
        for i in 0..self.points.len() {
            for (face, c) in dual_faces(g, self.k) {
                let d = scaled_clearance(self, g, i, &face) * 0.5 * l;
                if d < 1e-9 {
                    return Err(Error::GeneralPosition(format!(
                        "flat {i} meets the dual face {face:?} of cell {c} (clearance {d:.2e})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A (k−1)-face of Γ* through a cell center: the axes it extends along.
#[derive(Clone, Debug)]
struct DualFace {
    center: Vec<f64>,
    along: Vec<usize>,
}

impl DualFace {
    fn contains(&self, p: &[f64]) -> bool {
        (0..p.len()).all(|a| self.along.contains(&a) || (p[a] - self.center[a]).abs() < 1e-12)
    }
}

/// Dual (k−1)-faces through each cell center (each face listed once per
/// center it contains, which only repeats work).
fn dual_faces(g: &Grid, k: usize) -> Vec<(DualFace, usize)> {
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k - 1 {
        let mut next = Vec::new();
        for c in &combos {
            let start = c.last().map_or(0, |&x| x + 1);
            for a in start..g.n {
                let mut d = c.clone();
                d.push(a);
                next.push(d);
            }
        }
        combos = next;
    }
    let mut out = Vec::new();
    for i in 0..g.cells() {
        let center = g.center(i);
        for along in &combos {
            out.push((DualFace { center: center.clone(), along: along.clone() }, i));
        }
    }
    out
}

/// min over the flat of the ℓ∞ distance, across the face's normal axes, to
/// the face; scaled so that the ε-collar is reached at value ε.
fn scaled_clearance(fam: &FlatFamily, g: &Grid, i: usize, face: &DualFace) -> f64 {
    let base = fam.base(i);
    let axes: Vec<usize> = (0..g.n).filter(|a| !face.along.contains(a)).collect();
    // minimize max_a |base_a − c_a + Σ_j s_j normal_j[a]| over s; n−k ≤ 2 here
    let r: Vec<f64> = axes.iter().map(|&a| base[a] - face.center[a]).collect();
    let dirs: Vec<Vec<f64>> = fam
        .normals
        .iter()
        .map(|nv| axes.iter().map(|&a| nv[a]).collect())
        .collect();
    2.0 * linf_min(&r, &dirs) / g.pitch()
}

/// min_s ‖r + Σ s_j dirs_j‖_∞ via the LP optimality structure: the optimum
/// is attained where enough coordinates are tied in absolute value.
fn linf_min(r: &[f64], dirs: &[Vec<f64>]) -> f64 {
    let m = r.len();
    let p = dirs.len();
    let eval = |s: &[f64]| -> f64 {
        (0..m)
            .map(|a| (r[a] + (0..p).map(|j| s[j] * dirs[j][a]).sum::<f64>()).abs())
            .fold(0.0, f64::max)
    };
    if p == 0 {
        return eval(&[]);
    }
    if m == p + 1 && p == 1 {
        // line in the plane: the optimum has a vanishing or tied coordinate
        let (d0, d1) = (dirs[0][0], dirs[0][1]);
        let mut best = f64::INFINITY;
        for (num, den) in [(-r[0], d0), (-r[1], d1), (r[1] - r[0], d0 - d1), (-r[1] - r[0], d0 + d1)] {
            if den.abs() > 1e-300 {
                best = best.min(eval(&[num / den]));
            }
        }
        return best;
    }
    if m == p + 1 {
        // hyperplane with unit normal ν: ℓ∞ distance is |ν·r| / ‖ν‖₁
        if let Some(nu) = crate::linalg::complement_vector(dirs) {
            let l1: f64 = nu.iter().map(|x| x.abs()).sum();
            return dot(&nu, r).abs() / l1;
        }
    }
    // candidate vertices: p + 1 active constraints r_a + s·d_a = σ_a h
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; p + 1];
    fn next_combo(idx: &mut [usize], m: usize) -> bool {
        let r = idx.len();
        for i in (0..r).rev() {
            if idx[i] < m - r + i {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    if m < p + 1 {
        // fewer constraints than unknowns: the flat reaches zero distance
        // whenever the system is consistent; fall back to least squares
        let mut a = Mat::zeros(m, p);
        for i in 0..m {
            for j in 0..p {
                a[(i, j)] = dirs[j][i];
            }
        }
        let at = a.transpose();
        let rhs = at.mul_vec(&r.iter().map(|x| -x).collect::<Vec<_>>());
        if let Some(s) = solve(&at.mul(&a), &rhs) {
            return eval(&s);
        }
        return eval(&vec![0.0; p]);
    }
    for (i, v) in idx.iter_mut().enumerate() {
        *v = i;
    }
    loop {
        for signs in 0..(1u32 << (p + 1)) {
            // unknowns (s_1..s_p, h)
            let mut a = Mat::zeros(p + 1, p + 1);
            let mut b = vec![0.0; p + 1];
            for (row, &ax) in idx.iter().enumerate() {
                let sg = if signs >> row & 1 == 1 { 1.0 } else { -1.0 };
                for j in 0..p {
                    a[(row, j)] = dirs[j][ax];
                }
                a[(row, p)] = -sg;
                b[row] = -r[ax];
            }
            if let Some(x) = solve(&a, &b) {
                if x[p] >= -1e-15 {
                    best = best.min(eval(&x[..p]));
                }
            }
        }
        if !next_combo(&mut idx, m) {
            break;
        }
    }
    best
}

fn anchor_clearance(fam: &FlatFamily, g: &Grid, i: usize) -> f64 {
    let Some(anchors) = &fam.anchors else { return 0.0 };
    let c = anchors[i];
    dual_faces_at(g, fam.k, c)
        .iter()
        .map(|f| scaled_clearance(fam, g, i, f))
        .fold(f64::INFINITY, f64::min)
}

fn dual_faces_at(g: &Grid, k: usize, cell: usize) -> Vec<DualFace> {
    let center = g.center(cell);
    dual_faces(&Grid { n: g.n, ell: 1 }, k)
        .into_iter()
        .map(|(f, _)| DualFace { center: center.clone(), along: f.along })
        .collect()
}

// ------------------------------------------------------------ deformation

#[derive(Clone, Debug, Serialize)]
pub struct DeformReport {
    pub epsilon: f64,
    pub z1: f64,
    pub z2: f64,
    pub total: f64,
    pub faces_marked: usize,
    /// (n−k)-volume of the image inside each closed subcube.
    pub cell_volumes: Vec<f64>,
    pub min_cell_volume: f64,
    /// Largest number of collar components met by a single flat.
    pub max_components: usize,
}

#[derive(Default)]
struct FlatImage {
    marked: HashSet<Face>,
    z2_cells: HashMap<usize, f64>,
    components: usize,
}

/// Pushes every flat of the family through Ψ_ε and measures the image:
/// z₁ is the union of primal faces hit by the collapsed part, z₂ the volume
/// of the stretched collar part.
pub fn deform_family(fam: &FlatFamily, g: &Grid, eps: f64, resolution: usize) -> Result<DeformReport> {
    check_eps(eps)?;
    check_k(g, fam.k)?;
    if g.n != fam.n {
        return usage("grid and family dimensions differ");
    }
    if resolution == 0 {
        return usage("resolution must be positive");
    }
    let m = fam.n - fam.k;
    if m > 2 {
        return Err(Error::Unsupported(format!("flats of dimension {m}")));
    }
    fam.check_general_position(g)?;
    let images: Vec<FlatImage> = (0..fam.points.len())
        .into_par_iter()
        .map(|i| if m == 1 { line_image(fam, g, eps, i, resolution) } else { plane_image(fam, g, eps, i, resolution) })
        .collect::<Result<_>>()?;

    let l = g.pitch();
    let face_vol = l.powi(m as i32);
    let mut marked: HashSet<Face> = HashSet::new();
    let mut cell_volumes = vec![0.0; g.cells()];
    let mut z2 = 0.0;
    let mut max_components = 0;
    for im in &images {
        marked.extend(im.marked.iter().cloned());
        let mut keys: Vec<_> = im.z2_cells.iter().collect();
        keys.sort_by_key(|(c, _)| **c);
        for (&c, &v) in keys {
            cell_volumes[c] += v;
            z2 += v;
        }
        max_components = max_components.max(im.components);
    }
    for f in &marked {
        for c in f.cells(g) {
            cell_volumes[g.cell_index(&c)] += face_vol;
        }
    }
    let z1 = marked.len() as f64 * face_vol;
    let min_cell_volume = cell_volumes.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DeformReport {
        epsilon: eps,
        z1,
        z2,
        total: z1 + z2,
        faces_marked: marked.len(),
        cell_volumes,
        min_cell_volume,
        max_components,
    })
}

/// Parameter range of base + s·w inside [0,1]ⁿ.
fn clip_line(base: &[f64], w: &[f64]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for a in 0..base.len() {
        if w[a].abs() < 1e-15 {
            if !(0.0..=1.0).contains(&base[a]) {
                return None;
            }
            continue;
        }
        let (s0, s1) = ((0.0 - base[a]) / w[a], (1.0 - base[a]) / w[a]);
        lo = lo.max(s0.min(s1));
        hi = hi.min(s0.max(s1));
    }
    (hi > lo).then_some((lo, hi))
}

fn at(base: &[f64], w: &[f64], s: f64) -> Vec<f64> {
    base.iter().zip(w).map(|(b, d)| (b + s * d).clamp(0.0, 1.0)).collect()
}

fn line_image(fam: &FlatFamily, g: &Grid, eps: f64, i: usize, res: usize) -> Result<FlatImage> {
    let base = fam.base(i);
    let w = &fam.normals[0];
    let mut im = FlatImage::default();
    let Some((s0, s1)) = clip_line(&base, w) else { return Ok(im) };
    let l = g.pitch();
    // collar membership and cells only change where a coordinate crosses a
    // grid line or a collar wall
    let mut cuts = vec![s0, s1];
    for a in 0..g.n {
        if w[a].abs() < 1e-15 {
            continue;
        }
        for m in 0..=g.ell {
            let mut vals = vec![m as f64 * l];
            if m < g.ell {
                let c = (m as f64 + 0.5) * l;
                vals.extend([c - 0.5 * eps * l, c + 0.5 * eps * l]);
            }
            for v in vals {
                let s = (v - base[a]) / w[a];
                if s > s0 && s < s1 {
                    cuts.push(s);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut prev_collar = false;
    for win in cuts.windows(2) {
        let (sa, sb) = (win[0], win[1]);
        let mid = at(&base, w, 0.5 * (sa + sb));
        let jm = tile_decompose(g, fam.k, &mid)?;
        if in_collar(&jm, eps) {
            if !prev_collar {
                im.components += 1;
            }
            prev_collar = true;
            let mut len = 0.0;
            let mut last = psi_epsilon(g, fam.k, eps, &at(&base, w, sa))?;
            for j in 1..=res {
                let p = psi_epsilon(g, fam.k, eps, &at(&base, w, sa + (sb - sa) * j as f64 / res as f64))?;
                len += last.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                last = p;
            }
            *im.z2_cells.entry(g.cell_of(&mid)).or_default() += len;
        } else {
            prev_collar = false;
            for j in 0..res {
                let q = at(&base, w, sa + (sb - sa) * (j as f64 + 0.5) / res as f64);
                let jq = tile_decompose(g, fam.k, &q)?;
                if !in_collar(&jq, eps) {
                    im.marked.insert(jq.tile.phi);
                }
            }
        }
    }
    Ok(im)
}

/// Convex polygon {(s, t) : lo ≤ p + s e₁ + t e₂ ≤ hi} in plane coordinates.
fn plane_box_polygon(p: &[f64], e1: &[f64], e2: &[f64], lo: &[f64], hi: &[f64]) -> Vec<[f64; 2]> {
    let n = p.len();
    let r: f64 = lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt() + 1.0;
    let c: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let d: Vec<f64> = c.iter().zip(p).map(|(a, b)| a - b).collect();
    let (cs, ct) = (dot(&d, e1), dot(&d, e2));
    let mut poly = vec![[cs - r, ct - r], [cs + r, ct - r], [cs + r, ct + r], [cs - r, ct + r]];
    for a in 0..n {
        // a-coordinate ≥ lo_a and ≤ hi_a
        for (sign, bound) in [(1.0, lo[a]), (-1.0, hi[a])] {
            let f = |v: &[f64; 2]| sign * (p[a] + v[0] * e1[a] + v[1] * e2[a] - bound);
            let mut out = Vec::with_capacity(poly.len() + 1);
            for idx in 0..poly.len() {
                let u = poly[idx];
                let v = poly[(idx + 1) % poly.len()];
                let (fu, fv) = (f(&u), f(&v));
                if fu >= 0.0 {
                    out.push(u);
                }
                if (fu >= 0.0) != (fv >= 0.0) {
                    let tt = fu / (fu - fv);
                    out.push([u[0] + tt * (v[0] - u[0]), u[1] + tt * (v[1] - u[1])]);
                }
            }
            poly = out;
            if poly.is_empty() {
                return poly;
            }
        }
    }
    poly
}

fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let mut a = 0.0;
    for i in 0..poly.len() {
        let (u, v) = (poly[i], poly[(i + 1) % poly.len()]);
        a += u[0] * v[1] - v[0] * u[1];
    }
    0.5 * a.abs()
}

/// Hyperplane flats (k = 1, n = 3). On each collar cube Ψ_ε is the homothety
/// of ratio 1/ε about the center, so z₂ is exact; z₁ is marked by sampling.
fn plane_image(fam: &FlatFamily, g: &Grid, eps: f64, i: usize, res: usize) -> Result<FlatImage> {
    if fam.k != 1 {
        return Err(Error::Unsupported("two-dimensional flats need k = 1".into()));
    }
    let base = fam.base(i);
    let (e1, e2) = (&fam.normals[0], &fam.normals[1]);
    let u = &fam.frame[0];
    let l = g.pitch();
    let half = 0.5 * eps * l;
    let reach = half * u.iter().map(|x| x.abs()).sum::<f64>();
    let mut im = FlatImage::default();
    for c in 0..g.cells() {
        let ctr = g.center(c);
        let gap = dot(u, &ctr) - dot(u, &base);
        if gap.abs() >= reach {
            continue;
        }
        let lo: Vec<f64> = ctr.iter().map(|x| x - half).collect();
        let hi: Vec<f64> = ctr.iter().map(|x| x + half).collect();
        let poly = plane_box_polygon(&base, e1, e2, &lo, &hi);
        let area = polygon_area(&poly);
        if area > 0.0 {
            im.components += 1;
            *im.z2_cells.entry(c).or_default() += area / (eps * eps);
        }
    }
    let poly = plane_box_polygon(&base, e1, e2, &vec![0.0; 3], &vec![1.0; 3]);
    if poly.is_empty() {
        return Ok(im);
    }
    let (mut smin, mut smax, mut tmin, mut tmax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for v in &poly {
        smin = smin.min(v[0]);
        smax = smax.max(v[0]);
        tmin = tmin.min(v[1]);
        tmax = tmax.max(v[1]);
    }
    let h = l / res as f64;
    let ns = ((smax - smin) / h).ceil() as usize;
    let nt = ((tmax - tmin) / h).ceil() as usize;
    for a in 0..ns {
        for b in 0..nt {
            let (s, t) = (smin + (a as f64 + 0.5) * h, tmin + (b as f64 + 0.5) * h);
            let q: Vec<f64> = (0..3).map(|x| base[x] + s * e1[x] + t * e2[x]).collect();
            if q.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                continue;
            }
            let j = tile_decompose(g, 1, &q)?;
            if !in_collar(&j, eps) {
                im.marked.insert(j.tile.phi);
            }
        }
    }
    Ok(im)
}

// ------------------------------------------------------------ cup bounds

#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    /// Unit direction of P (k = 1) or of the flats (k = n − 1).
    pub slope: Vec<f64>,
    pub epsilon: f64,
    pub z1: f64,
    pub z2: f64,
    pub total: f64,
    pub min_cell_volume: f64,
    pub max_components: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CupReport {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub p: usize,
    /// 2^{n+k} C(n,k) p^{k/n}.
    pub upper: f64,
    /// p^{k/n}.
    pub lower: f64,
    pub rows: Vec<TrialRow>,
    pub max_total: f64,
    pub min_total: f64,
    pub ratio_to_lower: f64,
    /// Every subcube carries at least 0.95 vol(Q)^{(n−k)/n} of the image.
    pub partition_ok: bool,
    pub components_ok: bool,
    pub pass: bool,
}

pub fn default_resolution(n: usize, k: usize) -> usize {
    match (n, k) {
        (3, 1) => 8,
        (3, 2) => 64,
        _ => 16,
    }
}

/// Random P per trial, the witness member through every subcube, and the
/// measured deformed volume against the cup-power bounds.
pub fn cup_bound_check(n: usize, k: usize, ell: usize, trials: usize, seed: u64, resolution: Option<usize>) -> Result<CupReport> {
    if !matches!((n, k), (2, 1) | (3, 1) | (3, 2)) {
        return Err(Error::Unsupported(format!("cup bound for (n, k) = ({n}, {k})")));
    }
    if ell == 0 || ell > 8 {
        return domain(format!("ℓ = {ell} outside [1, 8]"));
    }
    if trials == 0 {
        return usage("at least one trial");
    }
    let g = Grid::new(n, ell)?;
    let res = resolution.unwrap_or_else(|| default_resolution(n, k));
    let rows: Vec<TrialRow> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, trial as u64);
            let frame = random_frame(n, k, &mut rng);
            let (fam, eps) = FlatFamily::witness(&g, frame, &mut rng)?;
            let d = deform_family(&fam, &g, eps, res)?;
            let slope = if k == 1 { fam.frame[0].clone() } else { fam.normals[0].clone() };
            Ok(TrialRow {
                trial,
                slope,
                epsilon: eps,
                z1: d.z1,
                z2: d.z2,
                total: d.total,
                min_cell_volume: d.min_cell_volume,
                max_components: d.max_components,
            })
        })
        .collect::<Result<_>>()?;
    let p = g.cells();
    let pf = p as f64;
    let upper = 2f64.powi((n + k) as i32) * binomial(n, k) as f64 * pf.powf(k as f64 / n as f64);
    let lower = pf.powf(k as f64 / n as f64);
    let max_total = rows.iter().map(|r| r.total).fold(0.0, f64::max);
    let min_total = rows.iter().map(|r| r.total).fold(f64::INFINITY, f64::min);
    let cell_floor = 0.95 * g.pitch().powi((n - k) as i32);
    let partition_ok = rows.iter().all(|r| r.min_cell_volume >= cell_floor);
    let components_ok = rows.iter().all(|r| r.max_components <= k * p);
    Ok(CupReport {
        n,
        k,
        ell,
        p,
        upper,
        lower,
        max_total,
        min_total,
        ratio_to_lower: max_total / lower,
        partition_ok,
        components_ok,
        pass: max_total <= upper && partition_ok,
        rows,
    })
}

/// The planar bending bounds on every trial of a (2, 1) cup run.
#[derive(Clone, Debug, Serialize)]
pub struct BendReport {
    pub cup: CupReport,
    pub z1_bound: f64,
    pub z2_bound: f64,
    pub total_bound: f64,
    pub total_floor: f64,
    pub z1_ok: bool,
    pub z2_ok: bool,
    pub total_ok: bool,
    pub floor_ok: bool,
    pub pass: bool,
}

pub fn bend_check(ell: usize, trials: usize, seed: u64, resolution: Option<usize>) -> Result<BendReport> {
    let cup = cup_bound_check(2, 1, ell, trials, seed, resolution)?;
    let sp = (cup.p as f64).sqrt();
    let (z1_bound, z2_bound, total_bound, total_floor) = (2.0 * sp + 2.0, 2.0 * sp, 4.0 * sp + 2.0, 0.95 * sp);
    let z1_ok = cup.rows.iter().all(|r| r.z1 <= z1_bound);
    let z2_ok = cup.rows.iter().all(|r| r.z2 <= z2_bound);
    let total_ok = cup.rows.iter().all(|r| r.total <= total_bound);
    let floor_ok = cup.rows.iter().all(|r| r.total >= total_floor);
    Ok(BendReport {
        pass: z1_ok && z2_ok && total_ok && floor_ok,
        cup,
        z1_bound,
        z2_bound,
        total_bound,
        total_floor,
        z1_ok,
        z2_ok,
        total_ok,
        floor_ok,
    })
}

// ------------------------------------------------------------ algebraic families

/// Monomials xⁱyʲ with i + j ≤ d, by total degree then descending i.
pub fn monomials(d: usize) -> Vec<(usize, usize)> {
    (0..=d).flat_map(|s| (0..=s).rev().map(move |i| (i, s - i))).collect()
}

/// Zero set of a bivariate polynomial, clipped to the unit square.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneCurve {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * s + x)
}

/// Real roots of c (ascending coefficients) in the open interval (a, b):
/// critical points split it into monotone pieces with at most one root each.
pub fn real_roots(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    let c = &c[..=deg];
    match deg {
        0 => Vec::new(),
        1 => {
            let r = -c[0] / c[1];
            if r > a && r < b { vec![r] } else { Vec::new() }
        }
        _ => {
            let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, x)| i as f64 * x).collect();
            let mut knots = vec![a];
            knots.extend(real_roots(&dc, a, b));
            knots.push(b);
            let mut roots = Vec::new();
            for w in knots.windows(2) {
                let (mut lo, mut hi) = (w[0], w[1]);
                let (mut flo, fhi) = (poly_eval(c, lo), poly_eval(c, hi));
                if flo == 0.0 || fhi == 0.0 || (flo > 0.0) == (fhi > 0.0) {
                    continue;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let fm = poly_eval(c, mid);
                    if (fm > 0.0) == (flo > 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            roots
        }
    }
}

impl PlaneCurve {
    pub fn new(degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != monomials(degree).len() {
            return usage(format!("degree {degree} needs {} coefficients", monomials(degree).len()));
        }
        Ok(PlaneCurve { degree, coeffs })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .map(|(&(i, j), c)| c * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    /// Coefficients in s of P(p + s v).
    pub fn restrict(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let d = self.degree;
        let mut xp = vec![vec![1.0]];
        let mut yp = vec![vec![1.0]];
        for i in 0..d {
            xp.push(poly_mul(&xp[i], &[p[0], v[0]]));
            yp.push(poly_mul(&yp[i], &[p[1], v[1]]));
        }
        let mut out = vec![0.0; d + 1];
        for (&(i, j), c) in monomials(d).iter().zip(&self.coeffs) {
            for (e, x) in poly_mul(&xp[i], &yp[j]).iter().enumerate() {
                out[e] += c * x;
            }
        }
        out
    }

    /// Max |P| on a 17 × 17 grid relative to the coefficient norm.
    fn relative_size(&self) -> f64 {
        let norm = self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        let mut m = 0.0f64;
        for a in 0..=16 {
            for b in 0..=16 {
                m = m.max(self.eval(a as f64 / 16.0, b as f64 / 16.0).abs());
            }
        }
        m / norm.max(f64::MIN_POSITIVE)
    }
}

impl FlatTarget for PlaneCurve {
    fn ambient(&self) -> usize {
        2
    }

    fn target_dim(&self) -> usize {
        1
    }

    fn count_hits(&self, flat: &AffineFlat) -> usize {
        let v = &flat.dirs[0];
        match clip_line(&flat.point, v) {
            Some((s0, s1)) => real_roots(&self.restrict(&flat.point, v), s0, s1).len(),
            None => 0,
        }
    }

    fn bounding_ball(&self) -> (Vec<f64>, f64) {
        (vec![0.5, 0.5], 0.5 * 2f64.sqrt())
    }
}

fn random_curve(d: usize, rng: &mut impl Rng) -> Result<PlaneCurve> {
    for _ in 0..32 {
        let c = PlaneCurve::new(d, gaussian_vec(rng, monomials(d).len()))?;
        if c.relative_size() > 1e-9 {
            return Ok(c);
        }
    }
    Err(Error::Sampling { attempts: 32, acceptance_rate: 0.0 })
}

/// Cauchy–Crofton length of a random degree-d curve in the unit square.
pub fn algebraic_family_volume(n: usize, d: usize, lines: usize, seed: u64) -> Result<EstimateReport> {
    if n != 2 {
        return Err(Error::Unsupported(format!("algebraic families in dimension {n}")));
    }
    if d == 0 {
        return domain("degree must be positive");
    }
    let curve = random_curve(d, &mut stream(seed, u64::MAX))?;
    crate::integral_geometry::cauchy_crofton_euclidean(&curve, 1, None, lines, seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicReport {
    pub degree: usize,
    /// Number of interpolation points (interpolating family only).
    pub p: Option<usize>,
    pub bound: f64,
    pub bound_ref: crate::report::BoundRef,
    pub members: Vec<EstimateReport>,
    pub max: f64,
    pub pass: bool,
}

fn summarize(degree: usize, p: Option<usize>, bound: f64, bound_ref: crate::report::BoundRef, members: Vec<EstimateReport>) -> AlgebraicReport {
    let max = members.iter().map(|m| m.value).fold(0.0, f64::max);
    let pass = members.iter().all(|m| m.value <= bound + 3.0 * m.std_error);
    AlgebraicReport { degree, p, bound, bound_ref, members, max, pass }
}

/// Random degree-d curves against the bound (d/2)·2n = 2d.
pub fn algebraic_family_check(d: usize, members: usize, lines: usize, seed: u64) -> Result<AlgebraicReport> {
    let reports = (0..members)
        .map(|m| algebraic_family_volume(2, d, lines, crate::rng::child_seed(seed, m as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(d, None, 2.0 * d as f64, crate::report::BoundRef::AlgebraicDegree, reports))
}

/// The degree-d curve through p = C(d+2, 2) − 1 given points.
pub fn interpolating_curve(d: usize, pts: &[[f64; 2]]) -> Result<PlaneCurve> {
    let mons = monomials(d);
    let p = mons.len() - 1;
    if pts.len() != p {
        return usage(format!("degree {d} interpolates exactly {p} points"));
    }
    // fix the coefficient of the constant monomial to 1
    let mut a = Mat::zeros(p, p);
    let mut b = vec![0.0; p];
    for (r, q) in pts.iter().enumerate() {
        for (c, &(i, j)) in mons.iter().enumerate().skip(1) {
            a[(r, c - 1)] = q[0].powi(i as i32) * q[1].powi(j as i32);
        }
        b[r] = -1.0;
    }
    let Some(sol) = solve(&a, &b) else {
        return Err(Error::GeneralPosition("interpolation points are not in general position".into()));
    };
    let mut coeffs = vec![1.0];
    coeffs.extend(sol);
    PlaneCurve::new(d, coeffs)
}

/// Curves through p random points of the square against 2√2·√p.
pub fn interpolating_family_check(d: usize, members: usize, lines: usize, seed: u64) -> Result<AlgebraicReport> {
    if d == 0 {
        return domain("degree must be positive");
    }
    let p = monomials(d).len() - 1;
    let reports = (0..members)
        .map(|m| {
            let s = crate::rng::child_seed(seed, m as u64);
            let mut rng = stream(s, u64::MAX);
            let pts: Vec<[f64; 2]> = (0..p).map(|_| [rng.random(), rng.random()]).collect();
            let curve = interpolating_curve(d, &pts)?;
            crate::integral_geometry::cauchy_crofton_euclidean(&curve, 1, None, lines, s)
        })
        .collect::<Result<Vec<_>>>()?;
    let bound = 2.0 * 2f64.sqrt() * (p as f64).sqrt();
    Ok(summarize(d, Some(p), bound, crate::report::BoundRef::AlgebraicInterpolating, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.random()).collect()
    }

    #[test]
    fn face_counts() {
        let g = Grid::new(2, 3).unwrap();
        assert_eq!(g.face_count(0), 16);
        assert_eq!(g.face_count(1), 24);
        assert_eq!(g.face_count(2), 9);
        let g = Grid::new(3, 2).unwrap();
        assert_eq!(g.face_count(3), 8);
        assert_eq!(g.face_count(2), 36);
    }

    #[test]
    fn trivial_joins() {
        let g = Grid::new(2, 2).unwrap();
        let j = tile_decompose(&g, 1, &[0.25, 0.5]).unwrap();
        assert_eq!(j.t, 0.0);
        assert_eq!(j.x, vec![0.25, 0.5]);
        let j = tile_decompose(&g, 1, &[0.25, 0.75]).unwrap();
        assert_eq!(j.t, 1.0);
        assert_eq!(j.y, vec![0.25, 0.75]);
        assert!(tile_decompose(&g, 2, &[0.1, 0.1]).is_err());
        assert!(tile_decompose(&g, 0, &[0.1, 0.1]).is_err());
    }

    #[test]
    fn join_reconstructs_point() {
        let mut rng = stream(11, 0);
        for (n, k, ell) in [(2, 1, 3), (3, 1, 2), (3, 2, 3), (4, 2, 2)] {
            let g = Grid::new(n, ell).unwrap();
            for _ in 0..2500 {
                let q = rand_point(&mut rng, n);
                let j = tile_decompose(&g, k, &q).unwrap();
                assert!((0.0..=1.0).contains(&j.t));
                for a in 0..n {
                    let r = (1.0 - j.t) * j.x[a] + j.t * j.y[a];
                    assert!((r - q[a]).abs() < 1e-12, "{n} {k} {q:?}");
                }
            }
        }
    }

    #[test]
    fn tiles_have_volume_of_cell() {
        // per cell: C(n,k) faces φ, 2k facets each, join volume l^n (n−k)!(k−1)!/(2·n!)
        let fact = |m: usize| (1..=m).product::<usize>() as f64;
        for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
            let per = binomial(n, k) as f64 * 2.0 * k as f64 * fact(n - k) * fact(k - 1) / (2.0 * fact(n));
            assert!((per - 1.0).abs() < 1e-12, "{n} {k}");
        }
    }

    #[test]
    fn psi_examples() {
        let g = Grid::new(2, 1).unwrap();
        assert_eq!(psi_epsilon(&g, 1, 0.5, &[0.5, 0.5]).unwrap(), vec![0.5, 0.5]);
        assert!(psi_epsilon(&g, 1, 1.0, &[0.5, 0.5]).is_err());
        assert!(psi_epsilon(&g, 1, 0.0, &[0.5, 0.5]).is_err());
        // 2-D: radial push from the center onto the boundary
        let q = psi_epsilon(&g, 1, 0.25, &[0.8, 0.6]).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-15 && (q[1] - 0.5 - 0.5 * 0.1 / 0.3).abs() < 1e-12);
        // homothety of ratio 1/ε inside εQ
        let q = psi_epsilon(&g, 1, 0.25, &[0.55, 0.52]).unwrap();
        assert!((q[0] - 0.7).abs() < 1e-12 && (q[1] - 0.58).abs() < 1e-12);
    }

    #[test]
    fn psi_fixes_skeleton_and_boundary() {
        let mut rng = stream(12, 0);
        for (n, ell) in [(2, 3), (3, 2)] {
            let g = Grid::new(n, ell).unwrap();
            for _ in 0..500 {
                let mut q = rand_point(&mut rng, n);
                let a = rng.random_range(0..n);
                q[a] = rng.random_range(0..=ell) as f64 / ell as f64;
                assert_eq!(psi_epsilon(&g, 1, 0.3, &q).unwrap(), q);
            }
        }
    }

    #[test]
    fn codim_two_preserves_boundary_facets() {
        let g = Grid::new(3, 2).unwrap();
        let mut rng = stream(13, 0);
        for _ in 0..500 {
            let mut q = rand_point(&mut rng, 3);
            let a = rng.random_range(0..3);
            q[a] = if rng.random::<bool>() { 1.0 } else { 0.0 };
            let p = psi_epsilon(&g, 2, 0.3, &q).unwrap();
            assert!((p[a] - q[a]).abs() < 1e-15);
            // two fixed coordinates: a primal edge is fixed
            let mut e = rand_point(&mut rng, 3);
            e[0] = 0.5;
            e[2] = 1.0;
            assert_eq!(psi_epsilon(&g, 2, 0.3, &e).unwrap(), e);
        }
    }

    #[test]
    fn psi_is_onto_with_collar_preimages() {
        let mut rng = stream(14, 0);
        for (n, k, ell) in [(2, 1, 3), (3, 1, 2), (3, 2, 2)] {
            let g = Grid::new(n, ell).unwrap();
            for _ in 0..3000 {
                let q = rand_point(&mut rng, n);
                let pre = psi_preimage(&g, k, 0.2, &q).unwrap();
                let back = psi_epsilon(&g, k, 0.2, &pre).unwrap();
                for a in 0..n {
                    assert!((back[a] - q[a]).abs() < 1e-9, "{n} {k} {q:?}");
                }
            }
        }
    }

    #[test]
    fn psi_has_no_jumps() {
        let mut rng = stream(15, 0);
        for (n, k) in [(2, 1), (3, 1), (3, 2)] {
            let g = Grid::new(n, 2).unwrap();
            let eps = 0.5;
            for _ in 0..20 {
                let a = rand_point(&mut rng, n);
                let b = rand_point(&mut rng, n);
                let steps = 4000;
                let h = crate::linalg::dist(&a, &b) / steps as f64;
                let mut last = psi_epsilon(&g, k, eps, &a).unwrap();
                for i in 1..=steps {
                    let s = i as f64 / steps as f64;
                    let q: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + s * (y - x)).collect();
                    let p = psi_epsilon(&g, k, eps, &q).unwrap();
                    assert!(crate::linalg::dist(&p, &last) <= 10.0 * h / eps, "{n} {k}");
                    last = p;
                }
            }
        }
    }

    #[test]
    fn linf_distance_to_axis_line() {
        // line through (0, 0.3, 0) along (1, 0, 0); face: the z-axis through 0
        let r = vec![0.0, 0.3];
        let dirs = vec![vec![1.0, 0.0]];
        assert!((linf_min(&r, &dirs) - 0.3).abs() < 1e-15);
        let dirs = vec![vec![1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()]];
        assert!((linf_min(&[0.2, -0.2], &dirs) - 0.2).abs() < 1e-12);
        assert!(linf_min(&[0.2, 0.2], &dirs) < 1e-12);
    }

    #[test]
    fn general_position_is_enforced() {
        let g = Grid::new(2, 2).unwrap();
        let u = vec![0.6, 0.8];
        let mut fam = FlatFamily::new(vec![u.clone()], vec![0.5, 0.5], vec![]).unwrap();
        fam.points = vec![fam.project(&[0.25, 0.25])];
        assert!(matches!(deform_family(&fam, &g, 0.1, 8), Err(Error::GeneralPosition(_))));
    }

    #[test]
    fn planar_bending_small_grid() {
        let r = bend_check(2, 8, 5, None).unwrap();
        assert!(r.pass, "{r:?}");
        for row in &r.cup.rows {
            assert!(row.z2 > 0.0);
            assert!(row.max_components <= 1);
        }
    }

    #[test]
    fn witness_flats_enter_only_their_collar() {
        let g = Grid::new(2, 3).unwrap();
        let mut rng = stream(16, 0);
        let (fam, eps) = FlatFamily::witness(&g, random_frame(2, 1, &mut rng), &mut rng).unwrap();
        let d = deform_family(&fam, &g, eps, 16).unwrap();
        assert_eq!(d.max_components, 1);
        // each collar chord is stretched across its square: at least l, at most √2 l
        let l = g.pitch();
        assert!(d.z2 >= 9.0 * l * (1.0 - 1e-9) && d.z2 <= 9.0 * 2f64.sqrt() * l * (1.0 + 1e-9));
    }

    #[test]
    fn cup_regimes() {
        assert!(matches!(cup_bound_check(4, 1, 2, 1, 0, None), Err(Error::Unsupported(_))));
        let r = cup_bound_check(3, 1, 2, 2, 3, None).unwrap();
        assert!(r.max_total <= 96.0 && r.pass, "{r:?}");
        let r = cup_bound_check(3, 2, 2, 2, 3, None).unwrap();
        assert!(r.max_total <= r.upper, "{r:?}");
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (s − 0.2)(s − 0.5)(s − 0.9)
        let c = poly_mul(&poly_mul(&[-0.2, 1.0], &[-0.5, 1.0]), &[-0.9, 1.0]);
        let r = real_roots(&c, 0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (x, y) in r.iter().zip([0.2, 0.5, 0.9]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(real_roots(&[1.0, 0.0, 1.0], -5.0, 5.0).is_empty());
    }

    #[test]
    fn crofton_length_of_circle() {
        // (x − ½)² + (y − ½)² − 0.16
        let c = PlaneCurve::new(2, vec![0.5 - 0.16, -1.0, -1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(c.eval(0.9, 0.5).abs() < 1e-15);
        let e = crate::integral_geometry::cauchy_crofton_euclidean(&c, 1, None, 200_000, 4).unwrap();
        let exact = 2.0 * std::f64::consts::PI * 0.4;
        assert!((e.value - exact).abs() < 3.0 * e.std_error + 1e-3, "{e:?}");
        assert!(e.value <= 4.0);
    }

    #[test]
    fn lines_are_short() {
        let r = algebraic_family_check(1, 5, 20_000, 7).unwrap();
        assert!(r.pass && r.max <= 2f64.sqrt() + 0.05, "{r:?}");
    }

    #[test]
    fn interpolating_curve_passes_through_points() {
        let mut rng = stream(17, 0);
        let pts: Vec<[f64; 2]> = (0..9).map(|_| [rng.random(), rng.random()]).collect();
        let c = interpolating_curve(3, &pts).unwrap();
        for q in &pts {
            assert!(c.eval(q[0], q[1]).abs() < 1e-8);
        }
    }
}
