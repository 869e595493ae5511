//! Mod-2 PL chains relative to ∂[0,1]ⁿ and the recursive filling H.
//!
//! Coordinates are exact rationals. A filling is built by cutting the cycle
//! with a hyperplane x_a = t picked from the cover, coning the two halves to
//! the opposite facets and recursing on the slice:
//! H(z) = I₀(z≤t) + I₁(z≥t) + H(z_t) × [0, 1].

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::content::{Cube, CubeCover};
use crate::error::{usage, Error, Result};
use crate::mesh::SubmanifoldMesh;

pub mod partition;
pub mod star;

pub type Q = BigRational;
pub type Point = Vec<Q>;

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of a finite float (every f64 is a dyadic rational).
pub fn q_from_f64(x: f64) -> Q {
    BigRational::from_float(x).expect("finite coordinate")
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Vertex set of a simplex, sorted, without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Point>);

impl Simplex {
    /// None when two vertices coincide (degenerate simplices are dropped).
    pub fn new(mut v: Vec<Point>) -> Option<Self> {
        v.sort();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Simplex(v))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// Lies in one facet of the cube.
    pub fn in_cube_boundary(&self) -> bool {
        let (zero, one) = (Q::zero(), Q::one());
        (0..self.0[0].len()).any(|a| self.0.iter().all(|p| p[a] == zero) || self.0.iter().all(|p| p[a] == one))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Chain {
    pub ambient: usize,
    pub dim: usize,
    simplices: BTreeSet<Simplex>,
}

impl Mod2Chain {
    pub fn new(ambient: usize, dim: usize) -> Self {
        Mod2Chain { ambient, dim, simplices: BTreeSet::new() }
    }

    /// Builds a chain from vertex lists, reducing mod 2.
    pub fn from_simplices(ambient: usize, dim: usize, list: Vec<Vec<Point>>) -> Result<Self> {
        let mut c = Mod2Chain::new(ambient, dim);
        for v in list {
            if v.len() != dim + 1 || v.iter().any(|p| p.len() != ambient) {
                return usage(format!("simplex does not have {} vertices in R^{ambient}", dim + 1));
            }
            if v.iter().flatten().any(|x| x.is_negative() || *x > Q::one()) {
                return usage("vertex outside the unit cube");
            }
            if let Some(s) = Simplex::new(v) {
                c.toggle(s);
            }
        }
        Ok(c)
    }

    pub fn toggle(&mut self, s: Simplex) {
        debug_assert_eq!(s.dim(), self.dim);
        if !self.simplices.remove(&s) {
            self.simplices.insert(s);
        }
    }

    pub fn add(&mut self, other: &Mod2Chain) {
        for s in &other.simplices {
            self.toggle(s.clone());
        }
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn to_mesh(&self) -> SubmanifoldMesh {
        let mut vertices = Vec::new();
        let mut simplices = Vec::new();
        for s in &self.simplices {
            let mut idx = Vec::new();
            for p in s.vertices() {
                idx.push(vertices.len());
                vertices.push(p.iter().map(q_to_f64).collect());
            }
            simplices.push(idx);
        }
        SubmanifoldMesh { ambient: self.ambient, dim: self.dim, weights: vec![1.0; simplices.len()], vertices, simplices }
    }

    /// `dim k` and `ambient n` headers, then one simplex per line with
    /// vertices separated by `;`.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\nambient {}\n", self.dim, self.ambient);
        for s in &self.simplices {
            let line: Vec<String> = s
                .vertices()
                .iter()
                .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            let _ = writeln!(out, "{}", line.join(" ; "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let perr = |line: usize, message: &str| Error::Parse { line, message: message.into() };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<usize> {
            let (i, l) = lines.next().ok_or_else(|| perr(0, "missing header"))?;
            l.strip_prefix(key)
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| perr(i + 1, &format!("expected `{key} <integer>`")))
        };
        let dim = header("dim")?;
        let ambient = header("ambient")?;
        let mut list = Vec::new();
        for (i, l) in lines {
            let mut simplex = Vec::new();
            for v in l.split(';') {
                let p: Option<Point> = v.split_whitespace().map(|x| x.parse::<Q>().ok()).collect();
                simplex.push(p.ok_or_else(|| perr(i + 1, "bad rational coordinate"))?);
            }
            list.push(simplex);
        }
        Mod2Chain::from_simplices(ambient, dim, list)
    }
}

/// Mod-2 boundary with faces inside ∂[0,1]ⁿ discarded. A 0-chain has empty
/// boundary.
pub fn boundary(z: &Mod2Chain) -> Mod2Chain {
    if z.dim == 0 {
        return Mod2Chain::new(z.ambient, 0);
    }
    let mut b = Mod2Chain::new(z.ambient, z.dim - 1);
    for s in &z.simplices {
        for f in s.facets() {
            if !f.in_cube_boundary() {
                b.toggle(f);
            }
        }
    }
    b
}

// ------------------------------------------------------------ cutting

/// Splits every simplex crossing x_axis = t into pieces on either side.
/// Polygons are fanned from their least vertex; shared edges are cut at the
/// same exact point from both sides, so cycles stay cycles.
pub fn refine(z: &Mod2Chain, axis: usize, t: &Q) -> Result<Mod2Chain> {
    let mut out = Mod2Chain::new(z.ambient, z.dim);
    for s in &z.simplices {
        let v = s.vertices();
        let below = v.iter().any(|p| &p[axis] < t);
        let above = v.iter().any(|p| &p[axis] > t);
        if !(below && above) {
            out.toggle(s.clone());
            continue;
        }
        match z.dim {
            1 => {
                let c = crossing(&v[0], &v[1], axis, t);
                for piece in [vec![v[0].clone(), c.clone()], vec![c, v[1].clone()]] {
                    if let Some(p) = Simplex::new(piece) {
                        out.toggle(p);
                    }
                }
            }
            2 => {
                for side in [-1, 1] {
                    let poly = clip_polygon(v, axis, t, side);
                    for tri in fan(poly) {
                        if let Some(p) = Simplex::new(tri) {
                            out.toggle(p);
                        }
                    }
                }
            }
            d => return Err(Error::Unsupported(format!("cutting {d}-simplices"))),
        }
    }
    Ok(out)
}

fn crossing(a: &Point, b: &Point, axis: usize, t: &Q) -> Point {
    let s = (t - &a[axis]) / (&b[axis] - &a[axis]);
    let mut p: Point = a.iter().zip(b).map(|(x, y)| x + &s * (y - x)).collect();
    p[axis] = t.clone();
    p
}

/// The part of a triangle on one side (−1: ≤ t, +1: ≥ t), in cyclic order.
fn clip_polygon(v: &[Point], axis: usize, t: &Q, side: i32) -> Vec<Point> {
    let keep = |p: &Point| if side < 0 { &p[axis] <= t } else { &p[axis] >= t };
    let mut out = Vec::new();
    for i in 0..v.len() {
        let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
        if keep(a) {
            out.push(a.clone());
        }
        if (&a[axis] < t && &b[axis] > t) || (&a[axis] > t && &b[axis] < t) {
            out.push(crossing(a, b, axis, t));
        }
    }
    out
}

fn fan(poly: Vec<Point>) -> Vec<Vec<Point>> {
    if poly.len() < 3 {
        return Vec::new();
    }
    let start = (0..poly.len()).min_by(|&i, &j| poly[i].cmp(&poly[j])).unwrap();
    let p: Vec<Point> = (0..poly.len()).map(|i| poly[(start + i) % poly.len()].clone()).collect();
    (1..p.len() - 1).map(|i| vec![p[0].clone(), p[i].clone(), p[i + 1].clone()]).collect()
}

// ------------------------------------------------------------ cones

/// I_side(z): the staircase prism between z and its projection onto the
/// facet x_axis = side. Repeated-vertex simplices (vertices already on the
/// facet) are dropped.
pub fn cone_to_facet(z: &Mod2Chain, axis: usize, side: u8) -> Result<Mod2Chain> {
    if axis >= z.ambient || side > 1 {
        return usage("facet axis or side out of range");
    }
    let target = if side == 0 { Q::zero() } else { Q::one() };
    let opposite = Q::one() - &target;
    let mut out = Mod2Chain::new(z.ambient, z.dim + 1);
    for s in &z.simplices {
        let v = s.vertices();
        if v.iter().any(|p| p[axis] == opposite) {
            return usage(format!("chain touches the opposite facet x_{axis} = {opposite}"));
        }
        let w: Vec<Point> = v
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p[axis] = target.clone();
                p
            })
            .collect();
        for i in 0..v.len() {
            let mut verts: Vec<Point> = w[..=i].to_vec();
            verts.extend_from_slice(&v[i..]);
            if let Some(p) = Simplex::new(verts) {
                out.toggle(p);
            }
        }
    }
    Ok(out)
}

/// c × [0,1] for a chain inside the slice x_axis = t, built as I₀(c) + I₁(c)
/// so that it is split at the slice.
pub fn cylinder(c: &Mod2Chain, axis: usize) -> Result<Mod2Chain> {
    let mut h = cone_to_facet(c, axis, 0)?;
    h.add(&cone_to_facet(c, axis, 1)?);
    Ok(h)
}

// ------------------------------------------------------------ ledger

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverLedger {
    pub cover: CubeCover,
    pub k: usize,
    pub weight: f64,
}

impl CoverLedger {
    pub fn new(cover: CubeCover, k: usize) -> Self {
        let weight = crate::content::hausdorff_cover_weight(&cover, k as i32);
        CoverLedger { cover, k, weight }
    }

    /// One row per cube: corner (space separated), edge, k, weight of the row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("corner,edge,k,weight\n");
        for c in &self.cover.cubes {
            let corner: Vec<String> = c.corner.iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "{},{:?},{},{:?}", corner.join(" "), c.edge, self.k, c.edge.powi(self.k as i32));
        }
        out
    }
}

fn open_span(c: &Cube, axis: usize) -> (Q, Q) {
    (q_from_f64(c.corner[axis]), q_from_f64(c.corner[axis] + c.edge))
}

impl CoverLedger {
    /// Cut for this ledger's dimension along `axis`.
    pub fn choose_cut(&self, axis: usize) -> Q {
        choose_cut(&self.cover.cubes, self.k, axis)
    }
}

/// Midpoint of the leftmost interval minimizing S(t) = Σ_{Q_j ∋ t} d_jᵏ⁻¹,
/// breakpoints at cube faces inside [0, 1].
pub fn choose_cut(cubes: &[Cube], k: usize, axis: usize) -> Q {
    let mut bps = vec![Q::zero(), Q::one()];
    for c in cubes {
        let (lo, hi) = open_span(c, axis);
        for b in [lo, hi] {
            if b.is_positive() && b < Q::one() {
                bps.push(b);
            }
        }
    }
    bps.sort();
    bps.dedup();
    let mut best: Option<(f64, Q)> = None;
    for w in bps.windows(2) {
        let mid = (&w[0] + &w[1]) / q(2, 1);
        let s: f64 = cubes
            .iter()
            .filter(|c| {
                let (lo, hi) = open_span(c, axis);
                lo < mid && mid < hi
            })
            .map(|c| c.edge.powi(k as i32 - 1))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| s < b - 1e-12 * b.abs().max(1.0)) {
            best = Some((s, mid));
        }
    }
    best.expect("two breakpoints at least").1
}

fn meets_slice(c: &Cube, axis: usize, t: &Q) -> bool {
    let (lo, hi) = open_span(c, axis);
    &lo < t && t < &hi
}

/// Each cube replaced by ⌈1/d⌉ cubes of the same edge stacked along `axis`
/// from 0: the long box over the cube.
fn stack(cubes: &[Cube], axis: usize) -> Vec<Cube> {
    let mut out = Vec::new();
    for c in cubes {
        let m = (1.0 / c.edge - 1e-12).ceil().max(1.0) as usize;
        for i in 0..m {
            let mut corner = c.corner.clone();
            corner[axis] = i as f64 * c.edge;
            out.push(Cube { corner, edge: c.edge });
        }
    }
    out
}

/// A_k = 2A_{k−1} + 2 with A₀ = 2.
pub fn ledger_constant(k: usize) -> f64 {
    2f64.powi(k as i32 + 2) - 2.0
}

#[derive(Clone, Debug)]
pub struct FillResult {
    pub filling: Mod2Chain,
    pub ledger: CoverLedger,
    /// The input subdivided by every cut hyperplane; ∂H(z) equals it exactly.
    pub refined: Mod2Chain,
    pub cuts: Vec<(usize, Q)>,
}

/// Whether every vertex and barycenter of z lies in some closed cube.
pub fn cover_covers(cover: &CubeCover, z: &Mod2Chain) -> bool {
    let inside = |p: &[f64]| {
        cover.cubes.iter().any(|c| p.iter().zip(&c.corner).all(|(&x, &lo)| x >= lo - 1e-12 && x <= lo + c.edge + 1e-12))
    };
    z.simplices().all(|s| {
        let pts: Vec<Vec<f64>> = s.vertices().iter().map(|p| p.iter().map(q_to_f64).collect()).collect();
        let bary: Vec<f64> = (0..z.ambient).map(|a| pts.iter().map(|p| p[a]).sum::<f64>() / pts.len() as f64).collect();
        pts.iter().all(|p| inside(p)) && inside(&bary)
    })
}

/// H(z) with ∂H(z) = z (after subdivision by the cuts) and the (k+1)-ledger.
/// The cuts and the ledger depend only on the cover.
pub fn fill(z: &Mod2Chain, ledger: &CoverLedger) -> Result<FillResult> {
    let k = z.dim;
    if ledger.k != k {
        return usage(format!("ledger measures dimension {} but the cycle has dimension {k}", ledger.k));
    }
    if k >= z.ambient {
        return usage("fillings need k < n");
    }
    if !boundary(z).is_empty() {
        return usage("input is not a relative cycle");
    }
    if ledger.cover.cubes.iter().any(|c| c.corner.len() != z.ambient || !(c.edge > 0.0 && c.edge <= 1.0)) {
        return usage("cover cubes must live in the same space with edges in (0, 1]");
    }
    if !cover_covers(&ledger.cover, z) {
        return usage("cover does not cover the cycle");
    }
    let mut cuts = Vec::new();
    let mut cubes = ledger.cover.cubes.clone();
    for level in 0..=k {
        let t = choose_cut(&cubes, k - level, level);
        cubes.retain(|c| meets_slice(c, level, &t));
        cuts.push((level, t));
    }
    let mut refined = z.clone();
    for (axis, t) in &cuts {
        refined = refine(&refined, *axis, t)?;
    }
    let (filling, out) = fill_rec(&refined, &ledger.cover.cubes, k, 0)?;
    Ok(FillResult { filling, ledger: CoverLedger::new(CubeCover { cubes: out }, k + 1), refined, cuts })
}

fn fill_rec(z: &Mod2Chain, cubes: &[Cube], k: usize, axis: usize) -> Result<(Mod2Chain, Vec<Cube>)> {
    let t = choose_cut(cubes, k, axis);
    let mut le = Mod2Chain::new(z.ambient, z.dim);
    let mut ge = Mod2Chain::new(z.ambient, z.dim);
    for s in z.simplices() {
        let v = s.vertices();
        if z.dim > 0 && v.iter().all(|p| p[axis] == t) {
            return Err(Error::GeneralPosition(format!("a {}-simplex lies in the cut x_{axis} = {t}", z.dim)));
        }
        if v.iter().all(|p| p[axis] <= t) {
            le.toggle(s.clone());
        } else {
            ge.toggle(s.clone());
        }
    }
    let mut h = cone_to_facet(&le, axis, 0)?;
    h.add(&cone_to_facet(&ge, axis, 1)?);
    let mut out = stack(cubes, axis);
    if k >= 1 {
        let zt = boundary(&le);
        if zt.simplices().any(|s| s.vertices().iter().any(|p| p[axis] != t)) {
            return Err(Error::GeneralPosition(format!("slice at x_{axis} = {t} is not a relative cycle")));
        }
        let slice: Vec<Cube> = cubes.iter().filter(|c| meets_slice(c, axis, &t)).cloned().collect();
        let (hz, rec) = fill_rec(&zt, &slice, k - 1, axis + 1)?;
        h.add(&cylinder(&hz, axis)?);
        out.extend(stack(&rec, axis));
    }
    Ok((h, out))
}

// ------------------------------------------------------------ checks

#[derive(Clone, Debug, Serialize)]
pub struct FillRow {
    pub instance: usize,
    pub n: usize,
    pub k: usize,
    pub simplices: [usize; 2],
    pub filling_simplices: [usize; 2],
    pub input_weight: f64,
    pub output_weight: f64,
    pub ratio: f64,
    pub bound: f64,
    pub boundary_ok: bool,
    pub ratio_ok: bool,
    pub independent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FillCheck {
    pub rows: Vec<FillRow>,
    pub boundary_pass: bool,
    pub ratio_pass: bool,
    pub independence_pass: bool,
    pub max_ratio_fraction: f64,
}

/// Pairs of random relative cycles filled under one cover of their union.
/// Each instance checks ∂H(z) = z for both cycles, the ledger ratio, and
/// that both fillings report the same ledger.
pub fn fill_check(instances: usize, dims: &[(usize, usize)], max_edge: f64, seed: u64) -> Result<FillCheck> {
    if dims.is_empty() || dims.iter().any(|&(n, k)| k >= n || n > 3) {
        return usage("fill checks need k < n <= 3");
    }
    let rows = (0..instances)
        .map(|i| {
            let (n, k) = dims[i % dims.len()];
            let mut rng = crate::rng::stream(seed, i as u64);
            let z1 = random_relative_cycle(n, k, &mut rng)?;
            let z2 = random_relative_cycle(n, k, &mut rng)?;
            let cover = crate::content::greedy_cover(&z1.to_mesh().union(&z2.to_mesh())?, max_edge)?;
            let led = CoverLedger::new(cover, k);
            let (r1, r2) = (fill(&z1, &led)?, fill(&z2, &led)?);
            let bound = ledger_constant(k);
            let ratio = if led.weight > 0.0 { r1.ledger.weight / led.weight } else { 0.0 };
            Ok(FillRow {
                instance: i,
                n,
                k,
                simplices: [z1.len(), z2.len()],
                filling_simplices: [r1.filling.len(), r2.filling.len()],
                input_weight: led.weight,
                output_weight: r1.ledger.weight,
                ratio,
                bound,
                boundary_ok: boundary(&r1.filling) == r1.refined && boundary(&r2.filling) == r2.refined,
                ratio_ok: ratio <= bound * (1.0 + 1e-12),
                independent: r1.ledger == r2.ledger,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FillCheck {
        boundary_pass: rows.iter().all(|r| r.boundary_ok),
        ratio_pass: rows.iter().all(|r| r.ratio_ok),
        independence_pass: rows.iter().all(|r| r.independent),
        max_ratio_fraction: rows.iter().map(|r| r.ratio / r.bound).fold(0.0, f64::max),
        rows,
    })
}

/// The (n, k) pairs exercised by default.
pub const FILL_DIMS: [(usize, usize); 6] = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];

// ------------------------------------------------------------ random cycles

fn dyadic(rng: &mut impl Rng) -> Q {
    q(rng.random_range(1..1024), 1024)
}

fn dyadic_point(rng: &mut impl Rng, n: usize) -> Point {
    (0..n).map(|_| dyadic(rng)).collect()
}

/// A random relative k-cycle with dyadic vertices: points, closed polygons
/// or boundary-to-boundary paths, tetrahedron boundaries or graph sheets.
pub fn random_relative_cycle(n: usize, k: usize, rng: &mut impl Rng) -> Result<Mod2Chain> {
    if k >= n || n > 3 {
        return usage("random cycles need k < n <= 3");
    }
    let list: Vec<Vec<Point>> = match k {
        0 => (0..rng.random_range(1..=4)).map(|_| vec![dyadic_point(rng, n)]).collect(),
        1 => {
            let m = rng.random_range(3..=6);
            let mut pts: Vec<Point> = (0..m).map(|_| dyadic_point(rng, n)).collect();
            if rng.random::<bool>() {
                let closing = pts[0].clone();
                pts.push(closing);
            } else {
                for i in [0, m - 1] {
                    let a = rng.random_range(0..n);
                    pts[i][a] = if rng.random::<bool>() { Q::one() } else { Q::zero() };
                }
            }
            pts.windows(2).map(|w| w.to_vec()).collect()
        }
        _ => {
            if rng.random::<bool>() {
                let v: Vec<Point> = (0..4).map(|_| dyadic_point(rng, 3)).collect();
                (0..4).map(|i| (0..4).filter(|&j| j != i).map(|j| v[j].clone()).collect()).collect()
            } else {
                // sheet x_a = h(x_b, x_c) over a 3 × 3 vertex grid
                let a = rng.random_range(0..3);
                let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                let mut grid = vec![vec![Vec::new(); 3]; 3];
                for (i, row) in grid.iter_mut().enumerate() {
                    for (j, p) in row.iter_mut().enumerate() {
                        let mut v = vec![Q::zero(); 3];
                        v[a] = dyadic(rng);
                        v[b] = q(i as i64, 2);
                        v[c] = q(j as i64, 2);
                        *p = v;
                    }
                }
                let mut tris = Vec::new();
                for i in 0..2 {
                    for j in 0..2 {
                        tris.push(vec![grid[i][j].clone(), grid[i + 1][j].clone(), grid[i + 1][j + 1].clone()]);
                        tris.push(vec![grid[i][j].clone(), grid[i][j + 1].clone(), grid[i + 1][j + 1].clone()]);
                    }
                }
                tris
            }
        }
    };
    Mod2Chain::from_simplices(n, k, list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::greedy_cover;
    use crate::rng::stream;

    fn pt(c: &[(i64, i64)]) -> Point {
        c.iter().map(|&(a, b)| q(a, b)).collect()
    }

    #[test]
    fn segment_boundaries() {
        let s = Mod2Chain::from_simplices(2, 1, vec![vec![pt(&[(1, 4), (1, 2)]), pt(&[(3, 4), (1, 2)])]]).unwrap();
        assert_eq!(boundary(&s).len(), 2);
        let s = Mod2Chain::from_simplices(2, 1, vec![vec![pt(&[(0, 1), (1, 2)]), pt(&[(1, 1), (1, 2)])]]).unwrap();
        assert!(boundary(&s).is_empty());
        // a face spanning two different facets is not in the boundary
        let tri = Mod2Chain::from_simplices(
            2,
            2,
            vec![vec![pt(&[(0, 1), (1, 2)]), pt(&[(1, 2), (0, 1)]), pt(&[(1, 2), (1, 2)])]],
        )
        .unwrap();
        assert_eq!(boundary(&tri).len(), 3);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let mut rng = stream(21, 0);
        for _ in 0..100 {
            let list: Vec<Vec<Point>> = (0..5).map(|_| (0..3).map(|_| dyadic_point(&mut rng, 3)).collect()).collect();
            let z = Mod2Chain::from_simplices(3, 2, list).unwrap();
            assert!(boundary(&boundary(&z)).is_empty());
        }
    }

    #[test]
    fn cone_examples() {
        let p = Mod2Chain::from_simplices(2, 0, vec![vec![pt(&[(1, 4), (1, 2)])]]).unwrap();
        let c = cone_to_facet(&p, 0, 0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.simplices().next().unwrap().vertices()[0], pt(&[(0, 1), (1, 2)]));
        // a segment parallel to the facet sweeps a square of two triangles
        let s = Mod2Chain::from_simplices(3, 1, vec![vec![pt(&[(1, 2), (1, 4), (1, 2)]), pt(&[(1, 2), (3, 4), (1, 2)])]]).unwrap();
        assert_eq!(cone_to_facet(&s, 0, 1).unwrap().len(), 2);
        let touching = Mod2Chain::from_simplices(2, 0, vec![vec![pt(&[(1, 1), (1, 2)])]]).unwrap();
        assert!(cone_to_facet(&touching, 0, 0).is_err());
    }

    #[test]
    fn prism_boundary_identity() {
        let mut rng = stream(22, 0);
        for i in 0..100 {
            let (n, d) = [(2, 0), (2, 1), (3, 1), (3, 2)][i % 4];
            let list: Vec<Vec<Point>> = (0..3).map(|_| (0..=d).map(|_| dyadic_point(&mut rng, n)).collect()).collect();
            let y = Mod2Chain::from_simplices(n, d, list).unwrap();
            let axis = rng.random_range(0..n);
            let side = rng.random_range(0..2u8);
            let mut lhs = boundary(&cone_to_facet(&y, axis, side).unwrap());
            lhs.add(&y);
            if d > 0 {
                lhs.add(&cone_to_facet(&boundary(&y), axis, side).unwrap());
            }
            assert!(lhs.is_empty(), "{n} {d}");
        }
    }

    #[test]
    fn cut_choice() {
        let cube = |x: f64, d: f64| Cube { corner: vec![x, 0.0], edge: d };
        assert_eq!(choose_cut(&[cube(0.2, 0.2)], 1, 0), q_from_f64(0.1));
        assert_eq!(choose_cut(&[cube(0.0, 0.25), cube(0.5, 0.25)], 1, 0), q_from_f64(0.375));
        let full: Vec<Cube> = (0..4).map(|i| cube(i as f64 * 0.25, 0.25)).collect();
        assert_eq!(choose_cut(&full, 1, 0), q_from_f64(0.125));
    }

    #[test]
    fn refinement_keeps_cycles() {
        let mut rng = stream(23, 0);
        for _ in 0..30 {
            let z = random_relative_cycle(3, 2, &mut rng).unwrap();
            let r = refine(&refine(&z, 0, &q(1, 3)).unwrap(), 1, &q(2, 5)).unwrap();
            assert!(boundary(&r).is_empty());
            let (a, b) = (z.to_mesh().volume(), r.to_mesh().volume());
            assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn fill_two_points() {
        let z = Mod2Chain::from_simplices(2, 0, vec![vec![pt(&[(1, 4), (1, 4)])], vec![pt(&[(3, 4), (3, 4)])]]).unwrap();
        let d = 0.125;
        let cover = CubeCover {
            cubes: vec![Cube { corner: vec![0.2, 0.2], edge: d }, Cube { corner: vec![0.7, 0.7], edge: d }],
        };
        let r = fill(&z, &CoverLedger::new(cover, 0)).unwrap();
        assert_eq!(r.filling.len(), 2);
        assert_eq!(boundary(&r.filling), z);
        assert!(r.ledger.weight <= 2.0 * 2.0 + 1e-12);
        let e = fill(&Mod2Chain::new(2, 0), &CoverLedger::new(CubeCover::default(), 0)).unwrap();
        assert!(e.filling.is_empty() && e.ledger.weight == 0.0);
    }

    #[test]
    fn fill_random_cycles() {
        let mut rng = stream(24, 0);
        for (n, k) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
            for _ in 0..6 {
                let z = random_relative_cycle(n, k, &mut rng).unwrap();
                let cover = greedy_cover(&z.to_mesh(), 0.3).unwrap();
                let led = CoverLedger::new(cover, k);
                let r = fill(&z, &led).unwrap();
                assert_eq!(boundary(&r.filling), r.refined, "{n} {k}");
                assert!(r.ledger.weight <= ledger_constant(k) * led.weight * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn non_cycles_are_rejected() {
        let s = Mod2Chain::from_simplices(2, 1, vec![vec![pt(&[(1, 4), (1, 2)]), pt(&[(3, 4), (1, 2)])]]).unwrap();
        let cover = greedy_cover(&s.to_mesh(), 0.3).unwrap();
        assert!(matches!(fill(&s, &CoverLedger::new(cover, 1)), Err(Error::Usage(_))));
    }

    #[test]
    fn checks_pass() {
        let c = fill_check(12, &FILL_DIMS, 0.3, 5).unwrap();
        assert!(c.boundary_pass && c.ratio_pass && c.independence_pass, "{:?}", c.rows);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = stream(25, 0);
        let z = random_relative_cycle(3, 2, &mut rng).unwrap();
        assert_eq!(Mod2Chain::parse(&z.to_text()).unwrap(), z);
    }
}
