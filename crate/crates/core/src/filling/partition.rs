//! Labeled grid partitions of [0,1]ⁿ turned into mod-2 cell chains.
//!
//! The grid is barycentrically subdivided and each vertex (a barycenter of a
//! grid face F) gets the least label among cells containing F. Inside a
//! simplex with barycentric weights β, μ_j sums the weights on vertices
//! labelled j, and C_I is where the μ_i, i ∈ I, tie for the maximum. These
//! sets are in general position by construction and satisfy
//! ∂C_I = Σ_{i∉I} C_{I∪i} relative to the cube boundary.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use super::{boundary, q, Mod2Chain, Point, Simplex, Q};
use crate::error::{usage, Result};

#[derive(Clone, Debug, Serialize)]
pub struct GridPartition {
    pub n: usize,
    /// Cells per side.
    pub m: usize,
    /// One label per cell, last axis fastest.
    pub labels: Vec<usize>,
}

impl GridPartition {
    pub fn parts(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.labels.iter().copied().collect();
        s.into_iter().collect()
    }

    fn label(&self, cell: &[usize]) -> usize {
        self.labels[cell.iter().fold(0, |acc, &c| acc * self.m + c)]
    }

    /// Least label over the cells whose closure contains the face: fixed
    /// axes sit on grid line `g`, free axes range over cell `c`.
    fn face_label(&self, face: &[(bool, usize)]) -> usize {
        let mut best = usize::MAX;
        let choices: Vec<Vec<usize>> = face
            .iter()
            .map(|&(free, g)| {
                if free {
                    vec![g]
                } else {
                    [g.wrapping_sub(1), g].into_iter().filter(|&c| c < self.m).collect()
                }
            })
            .collect();
        let mut cell = vec![0; self.n];
        rec_cells(&choices, 0, &mut cell, &mut |c| best = best.min(self.label(c)));
        best
    }
}

fn rec_cells(choices: &[Vec<usize>], i: usize, cell: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if i == choices.len() {
        f(cell);
        return;
    }
    for &c in &choices[i] {
        cell[i] = c;
        rec_cells(choices, i + 1, cell, f);
    }
}

/// Random labelling with up to `parts` labels; blocks of cells share labels.
pub fn random_partition(n: usize, m: usize, parts: usize, rng: &mut impl Rng) -> GridPartition {
    let cells = m.pow(n as u32);
    let block = rng.random_range(1..=2usize);
    let labels = (0..cells)
        .map(|i| {
            let seed = i / block;
            (seed * 7 + rng.random_range(0..parts.max(1))) % parts.max(1)
        })
        .collect();
    GridPartition { n, m, labels }
}

// ------------------------------------------------------------ exact polytopes

fn solve(mut a: Vec<Vec<Q>>) -> Option<Vec<Q>> {
    // augmented square system
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn affine_dim(pts: &[&Vec<Q>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    rank(pts[1..].iter().map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect()).collect())
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Q::zero(), |s, v| s + v)
}

struct Polytope {
    verts: Vec<Vec<Q>>,
    tight: Vec<Vec<bool>>,
    key: Vec<Point>,
}

/// {β : eq·β = rhs, ineq·β ≥ 0} by brute-force vertex enumeration.
fn polytope(eq: &[(Vec<Q>, Q)], ineq: &[Vec<Q>], key: impl Fn(&[Q]) -> Point) -> Polytope {
    let dim = eq[0].0.len();
    let need = dim - eq.len();
    let mut verts: Vec<Vec<Q>> = Vec::new();
    for subset in combinations(ineq.len(), need) {
        let mut sys: Vec<Vec<Q>> = eq
            .iter()
            .map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect())
            .collect();
        sys.extend(subset.iter().map(|&i| ineq[i].iter().cloned().chain(std::iter::once(Q::zero())).collect()));
        if let Some(x) = solve(sys) {
            if ineq.iter().all(|r| !dot(r, &x).is_negative()) && !verts.contains(&x) {
                verts.push(x);
            }
        }
    }
    let tight = verts.iter().map(|v| ineq.iter().map(|r| dot(r, v).is_zero()).collect()).collect();
    let key = verts.iter().map(|v| key(v)).collect();
    Polytope { verts, tight, key }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

/// Pulling triangulation of the face spanned by `face` (vertex indices).
fn triangulate(p: &Polytope, face: &[usize], dim: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let v = *face.iter().min_by(|&&a, &&b| p.key[a].cmp(&p.key[b])).unwrap();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in 0..p.tight[0].len() {
        let sub: Vec<usize> = face.iter().copied().filter(|&u| p.tight[u][j]).collect();
        if sub.is_empty() || sub.len() == face.len() || sub.contains(&v) {
            continue;
        }
        let pts: Vec<&Vec<Q>> = sub.iter().map(|&u| &p.verts[u]).collect();
        if affine_dim(&pts) == dim - 1 {
            facets.insert(sub);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut tau in triangulate(p, &f, dim - 1) {
            tau.insert(0, v);
            out.push(tau);
        }
    }
    out
}

// ------------------------------------------------------------ cells

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub labels: Vec<usize>,
    pub cell_simplices: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub n: usize,
    pub m: usize,
    pub parts: usize,
    pub rows: Vec<IdentityRow>,
    pub pass: bool,
}

/// All C_I with 1 ≤ |I| ≤ n + 1 as mod-2 chains of dimension n + 1 − |I|.
pub fn partition_cells(p: &GridPartition) -> Result<BTreeMap<Vec<usize>, Mod2Chain>> {
    let n = p.n;
    if !(1..=3).contains(&n) || p.m == 0 || p.labels.len() != p.m.pow(n as u32) {
        return usage("partition needs n in 1..=3 and one label per grid cell");
    }
    if p.parts().len() > 6 {
        return usage("at most 6 parts");
    }
    let mut cells: BTreeMap<Vec<usize>, Mod2Chain> = BTreeMap::new();
    let perms = permutations(n);
    let mut cell = vec![0; n];
    let choices = vec![(0..p.m).collect::<Vec<_>>(); n];
    let mut simplices = Vec::new();
    rec_cells(&choices, 0, &mut cell, &mut |c| simplices.push(c.to_vec()));
    for c in &simplices {
        for bits in 0..1usize << n {
            for perm in &perms {
                // flag F_0 ⊂ … ⊂ F_n: F_j frees the first j axes of perm
                let mut verts: Vec<Point> = Vec::new();
                let mut labels = Vec::new();
                for j in 0..=n {
                    let face: Vec<(bool, usize)> = (0..n)
                        .map(|a| {
                            if perm[..j].contains(&a) {
                                (true, c[a])
                            } else {
                                (false, c[a] + (bits >> a & 1))
                            }
                        })
                        .collect();
                    labels.push(p.face_label(&face));
                    verts.push(
                        face.iter()
                            .map(|&(free, g)| if free { q(2 * g as i64 + 1, 2 * p.m as i64) } else { q(g as i64, p.m as i64) })
                            .collect(),
                    );
                }
                add_simplex_cells(n, &verts, &labels, &mut cells);
            }
        }
    }
    Ok(cells)
}

fn add_simplex_cells(n: usize, u: &[Point], labels: &[usize], cells: &mut BTreeMap<Vec<usize>, Mod2Chain>) {
    let present: Vec<usize> = labels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mu = |j: usize| -> Vec<Q> { labels.iter().map(|&l| if l == j { Q::one() } else { Q::zero() }).collect() };
    let to_x = |b: &[Q]| -> Point { (0..n).map(|a| (0..=n).fold(Q::zero(), |s, m| s + &b[m] * &u[m][a])).collect() };
    for mask in 1u32..(1 << present.len()) {
        let set: Vec<usize> = (0..present.len()).filter(|i| mask >> i & 1 == 1).map(|i| present[i]).collect();
        if set.len() > n + 1 {
            continue;
        }
        let mut eq = vec![(vec![Q::one(); n + 1], Q::one())];
        let m0 = mu(set[0]);
        for &i in &set[1..] {
            eq.push((mu(i).iter().zip(&m0).map(|(a, b)| a - b).collect(), Q::zero()));
        }
        let mut ineq: Vec<Vec<Q>> = (0..=n)
            .map(|m| (0..=n).map(|r| if r == m { Q::one() } else { Q::zero() }).collect())
            .collect();
        for &l in present.iter().filter(|l| !set.contains(l)) {
            ineq.push(m0.iter().zip(mu(l)).map(|(a, b)| a - b).collect());
        }
        let poly = polytope(&eq, &ineq, to_x);
        let dim = n + 1 - set.len();
        let all: Vec<usize> = (0..poly.verts.len()).collect();
        let pts: Vec<&Vec<Q>> = poly.verts.iter().collect();
        if poly.verts.is_empty() || affine_dim(&pts) != dim {
            continue;
        }
        let chain = cells.entry(set.clone()).or_insert_with(|| Mod2Chain::new(n, dim));
        for tau in triangulate(&poly, &all, dim) {
            if let Some(s) = Simplex::new(tau.iter().map(|&i| poly.key[i].clone()).collect()) {
                chain.toggle(s);
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Checks ∂C_I = Σ_{i∉I} C_{I∪i} for every label set with |I| ≤ n.
pub fn partition_boundary_identity(p: &GridPartition) -> Result<PartitionReport> {
    let cells = partition_cells(p)?;
    let parts = p.parts();
    let n = p.n;
    let mut rows = Vec::new();
    for mask in 1u32..(1 << parts.len()) {
        let set: Vec<usize> = (0..parts.len()).filter(|i| mask >> i & 1 == 1).map(|i| parts[i]).collect();
        if set.len() > n {
            continue;
        }
        let dim = n + 1 - set.len();
        let empty = Mod2Chain::new(n, dim);
        let c = cells.get(&set).unwrap_or(&empty);
        let lhs = boundary(c);
        let mut rhs = Mod2Chain::new(n, dim - 1);
        for &i in parts.iter().filter(|i| !set.contains(i)) {
            let mut s = set.clone();
            s.push(i);
            s.sort_unstable();
            if let Some(next) = cells.get(&s) {
                rhs.add(next);
            }
        }
        rows.push(IdentityRow { labels: set, cell_simplices: c.len(), holds: lhs == rhs });
    }
    let pass = rows.iter().all(|r| r.holds);
    Ok(PartitionReport { n, m: p.m, parts: parts.len(), rows, pass })
}

/// Identity checks on random partitions of small grids in dimensions 1 to 3.
pub fn partition_check(count: usize, seed: u64) -> Result<Vec<PartitionReport>> {
    let mut rng = crate::rng::stream(seed, 0);
    (0..count)
        .map(|i| {
            let (n, m) = [(1, 6), (2, 3), (2, 4), (3, 2)][i % 4];
            let parts = rng.random_range(2..=6);
            partition_boundary_identity(&random_partition(n, m, parts, &mut rng))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn two_halves() {
        let p = GridPartition { n: 2, m: 2, labels: vec![0, 0, 1, 1] };
        let cells = partition_cells(&p).unwrap();
        let wall = &cells[&vec![0, 1]];
        let len: f64 = wall.to_mesh().volume();
        assert!((len - 1.0).abs() < 1e-12, "{len}");
        let area: f64 = cells[&vec![0]].to_mesh().volume() + cells[&vec![1]].to_mesh().volume();
        assert!((area - 1.0).abs() < 1e-12);
        assert!(partition_boundary_identity(&p).unwrap().pass);
    }

    #[test]
    fn random_partitions_satisfy_identity() {
        let mut rng = stream(31, 0);
        for (n, m, parts) in [(1, 5, 3), (2, 3, 4), (2, 3, 6), (3, 2, 4)] {
            let p = random_partition(n, m, parts, &mut rng);
            let r = partition_boundary_identity(&p).unwrap();
            assert!(r.pass, "{n} {m} {:?}", r.rows);
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(partition_boundary_identity(&GridPartition { n: 2, m: 2, labels: vec![0, 1] }).is_err());
        assert!(partition_boundary_identity(&GridPartition { n: 4, m: 1, labels: vec![0] }).is_err());
    }
}
