//! Isoperimetry of orthogonal tori and boxes on occupancy grids.

use std::io::{BufRead, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::report::EstimateReport;
use crate::rng::stream;
use crate::scalar::Real;
use crate::transport::gauss_to_interval;

/// ∫_{−t}^{t} e^{−πs²} ds
pub fn gaussian_profile<T: Real>(t: T) -> T {
    gauss_to_interval(t) * T::lit(2.0)
}

/// Boolean occupancy on a grid over a torus (periodic) or a box.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryField {
    pub lengths: Vec<f64>,
    pub res: Vec<usize>,
    pub periodic: bool,
    /// row-major, last axis fastest
    pub cells: Vec<bool>,
}

impl BinaryField {
    pub fn new(lengths: Vec<f64>, res: Vec<usize>, periodic: bool, cells: Vec<bool>) -> Result<Self> {
        if lengths.is_empty() || lengths.len() != res.len() {
            return usage("field needs one resolution per axis");
        }
        if lengths.iter().any(|&a| !(a > 0.0)) || res.contains(&0) {
            return domain("field lengths and resolutions must be positive");
        }
        if cells.len() != res.iter().product::<usize>() {
            return usage("cell count does not match the resolution");
        }
        Ok(BinaryField { lengths, res, periodic, cells })
    }

    pub fn dim(&self) -> usize {
        self.res.len()
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.res[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|k| self.cell_size(k)).product()
    }

    pub fn index(&self, c: &[usize]) -> usize {
        c.iter().zip(&self.res).fold(0, |acc, (&ci, &r)| acc * r + ci)
    }

    pub fn coords(&self, mut i: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            c[k] = i % self.res[k];
            i /= self.res[k];
        }
        c
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn fraction(&self) -> f64 {
        self.occupied() as f64 / self.cells.len() as f64
    }

    /// {x_axis < a_axis/2}
    pub fn half_slab(lengths: Vec<f64>, res: Vec<usize>, axis: usize, periodic: bool) -> Result<Self> {
        if axis >= res.len() {
            return usage("slab axis out of range");
        }
        let total = res.iter().product();
        let f = BinaryField { lengths, res, periodic, cells: vec![false; total] };
        let cells = (0..total).map(|i| 2 * f.coords(i)[axis] < f.res[axis]).collect();
        BinaryField::new(f.lengths, f.res, periodic, cells)
    }

    /// Sublevel set of a smooth random trigonometric field, thresholded at
    /// its median so exactly ⌊N/2⌋ cells are occupied.
    pub fn random_half(lengths: Vec<f64>, res: Vec<usize>, periodic: bool, seed: u64) -> Result<Self> {
        let n = res.len();
        let mut rng = stream(seed, 0);
        let modes: Vec<(Vec<f64>, f64, f64)> = (0..6)
            .map(|_| {
                let k: Vec<f64> = (0..n).map(|_| rng.random_range(-3i32..=3) as f64).collect();
                (k, rng.random::<f64>() * std::f64::consts::TAU, rng.random::<f64>() + 0.2)
            })
            .collect();
        let total: usize = res.iter().product();
        let proto = BinaryField { lengths: lengths.clone(), res: res.clone(), periodic, cells: vec![] };
        let values: Vec<f64> = (0..total)
            .map(|i| {
                let c = proto.coords(i);
                modes
                    .iter()
                    .map(|(k, ph, amp)| {
                        let arg: f64 = (0..n).map(|j| k[j] * (c[j] as f64 + 0.5) / res[j] as f64).sum();
                        amp * (std::f64::consts::TAU * arg + ph).cos()
                    })
                    .sum::<f64>()
                    + 1e-9 * (i as f64 / total as f64)
            })
            .collect();
        let mut order: Vec<usize> = (0..total).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let mut cells = vec![false; total];
        for &i in &order[..total / 2] {
            cells[i] = true;
        }
        BinaryField::new(lengths, res, periodic, cells)
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "binaryfield {}", self.dim())?;
        writeln!(w, "lengths {}", self.lengths.iter().map(|a| format!("{a:?}")).collect::<Vec<_>>().join(" "))?;
        writeln!(w, "res {}", self.res.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))?;
        writeln!(w, "periodic {}", self.periodic as u8)?;
        writeln!(w, "data")?;
        w.write_all(&self.cells.iter().map(|&b| b as u8).collect::<Vec<u8>>())?;
        Ok(())
    }

    pub fn read_from(r: &mut impl BufRead) -> Result<Self> {
        let mut line = String::new();
        let mut header = vec![];
        for lineno in 1..=5 {
            line.clear();
            r.read_line(&mut line)?;
            let t = line.trim().to_string();
            if lineno == 5 {
                if t != "data" {
                    return Err(Error::Parse { line: 5, message: "expected `data`".into() });
                }
                break;
            }
            header.push(t);
        }
        let field = |i: usize, key: &str| -> Result<Vec<String>> {
            let mut it = header[i].split_whitespace();
            if it.next() != Some(key) {
                return Err(Error::Parse { line: i + 1, message: format!("expected `{key}`") });
            }
            Ok(it.map(str::to_string).collect())
        };
        let bad = |i: usize| Error::Parse { line: i + 1, message: "bad number".into() };
        let n: usize = field(0, "binaryfield")?.first().and_then(|s| s.parse().ok()).ok_or_else(|| bad(0))?;
        let lengths = field(1, "lengths")?.iter().map(|s| s.parse::<f64>().map_err(|_| bad(1))).collect::<Result<Vec<_>>>()?;
        let res = field(2, "res")?.iter().map(|s| s.parse::<usize>().map_err(|_| bad(2))).collect::<Result<Vec<_>>>()?;
        let periodic = field(3, "periodic")?.first().map(|s| s == "1").unwrap_or(false);
        if lengths.len() != n || res.len() != n {
            return Err(Error::Parse { line: 2, message: "dimension mismatch".into() });
        }
        let mut bytes = vec![];
        r.read_to_end(&mut bytes)?;
        if bytes.iter().any(|&b| b > 1) {
            return Err(Error::Parse { line: 6, message: "occupancy bytes must be 0 or 1".into() });
        }
        BinaryField::new(lengths, res, periodic, bytes.into_iter().map(|b| b == 1).collect())
    }
}

// ------------------------------------------------------------- halving

/// Cyclic box of cells: start and length per axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfBox {
    pub start: Vec<usize>,
    pub len: Vec<usize>,
    pub occupancy: f64,
    /// |occupancy − 1/2|
    pub slack: f64,
}

fn box_cells(f: &BinaryField, start: &[usize], len: &[usize]) -> Vec<usize> {
    let n = f.dim();
    let count: usize = len.iter().product();
    let mut out = Vec::with_capacity(count);
    let mut off = vec![0usize; n];
    for _ in 0..count {
        let c: Vec<usize> = (0..n).map(|k| (start[k] + off[k]) % f.res[k]).collect();
        out.push(f.index(&c));
        for k in (0..n).rev() {
            off[k] += 1;
            if off[k] < len[k] {
                break;
            }
            off[k] = 0;
        }
    }
    out
}

fn occupancy(f: &BinaryField, start: &[usize], len: &[usize]) -> f64 {
    let cells = box_cells(f, start, len);
    cells.iter().filter(|&&i| f.cells[i]).count() as f64 / cells.len() as f64
}

/// The recursive halving of a half-volume set: cyclically translate along
/// axis 0 so that each half-torus holds half of its volume in M, then split
/// each half independently along axis 1, and so on, ending with 2ⁿ boxes of
/// size (a₁/2)×…×(aₙ/2).
pub fn torus_halving_translations(m: &BinaryField) -> Result<Vec<HalfBox>> {
    if !m.periodic {
        return usage("halving translations act on a torus");
    }
    if m.res.iter().any(|r| r % 2 == 1) {
        return usage("halving needs even resolution on every axis");
    }
    let total = m.cells.len();
    if (2 * m.occupied()).abs_diff(total) > 2 {
        return usage(format!("set occupies {:.6} of the torus, not one half", m.fraction()));
    }
    let n = m.dim();
    let mut boxes = vec![(vec![0; n], m.res.clone())];
    for axis in 0..n {
        let mut next = vec![];
        for (start, len) in boxes {
            let target = occupancy(m, &start, &len);
            let mut half = len.clone();
            half[axis] /= 2;
            // 1-D scan: the shift whose half-box occupancy is closest to the
            // parent's, smallest shift on ties
            let mut best = (f64::INFINITY, 0);
            for s in 0..len[axis] {
                let mut st = start.clone();
                st[axis] = (start[axis] + s) % m.res[axis];
                let gap = (occupancy(m, &st, &half) - target).abs();
                if gap < best.0 - 1e-15 {
                    best = (gap, s);
                }
            }
            let mut a = start.clone();
            a[axis] = (start[axis] + best.1) % m.res[axis];
            let mut b = a.clone();
            b[axis] = (a[axis] + half[axis]) % m.res[axis];
            next.push((a, half.clone()));
            next.push((b, half));
        }
        boxes = next;
    }
    Ok(boxes
        .into_iter()
        .map(|(start, len)| {
            let occ = occupancy(m, &start, &len);
            HalfBox { start, len, occupancy: occ, slack: (occ - 0.5).abs() }
        })
        .collect())
}

/// Whether the boxes cover every cell exactly once.
pub fn boxes_tile(m: &BinaryField, boxes: &[HalfBox]) -> bool {
    let mut hits = vec![0u32; m.cells.len()];
    for b in boxes {
        for i in box_cells(m, &b.start, &b.len) {
            hits[i] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

// ------------------------------------------------------------ boundary

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub estimate: EstimateReport,
    /// total area of the grid interface faces
    pub interface_area: f64,
    pub schedule: Vec<f64>,
    pub ratios: Vec<f64>,
    pub residual: f64,
    pub res: Vec<usize>,
    pub supersample: usize,
    /// set empty or full: no boundary
    pub degenerate: bool,
}

/// Faces between occupied and unoccupied cells: `faces[cell][axis]` is the
/// face on the lower side of `cell` along `axis`. Box walls are not part of
/// the relative boundary.
fn interface(m: &BinaryField) -> Vec<Vec<bool>> {
    let n = m.dim();
    (0..m.cells.len())
        .map(|i| {
            let c = m.coords(i);
            (0..n)
                .map(|k| {
                    if c[k] == 0 && !m.periodic {
                        return false;
                    }
                    let mut d = c.clone();
                    d[k] = (c[k] + m.res[k] - 1) % m.res[k];
                    m.cells[m.index(&d)] != m.cells[i]
                })
                .collect()
        })
        .collect()
}

/// Lower Minkowski content of ∂M from neighborhood volumes evaluated on a
/// grid refined `supersample` times per axis, with exact distances to the
/// interface faces, extrapolated linearly to t → 0. The schedule is in
/// units of the smallest cell edge.
pub fn boundary_content(m: &BinaryField, schedule_cells: &[f64], supersample: usize) -> Result<BoundaryReport> {
    if schedule_cells.len() < 3 || schedule_cells.windows(2).any(|w| w[1] >= w[0]) || schedule_cells.iter().any(|&t| !(t > 0.0)) {
        return usage("schedule needs at least 3 strictly decreasing positive values");
    }
    if supersample == 0 {
        return usage("supersample must be positive");
    }
    let n = m.dim();
    let h: Vec<f64> = (0..n).map(|k| m.cell_size(k)).collect();
    let hmin = h.iter().cloned().fold(f64::INFINITY, f64::min);
    let schedule: Vec<f64> = schedule_cells.iter().map(|t| t * hmin).collect();
    let t_max = schedule[0];
    let faces = interface(m);
    let interface_area: f64 = faces
        .iter()
        .map(|f| (0..n).filter(|&k| f[k]).map(|k| m.cell_volume() / h[k]).sum::<f64>())
        .sum();
    let degenerate = interface_area == 0.0;
    let reach: Vec<i64> = h.iter().map(|hk| (t_max / hk).ceil() as i64 + 1).collect();

    // band cells: within `reach` of a cell carrying a face
    let mut band = vec![false; m.cells.len()];
    for i in 0..m.cells.len() {
        if faces[i].iter().any(|&b| b) {
            let c = m.coords(i);
            for_offsets(&reach, |off| {
                if let Some(d) = shifted(m, &c, off) {
                    band[m.index(&d)] = true;
                }
            });
        }
    }
    let band: Vec<usize> = (0..m.cells.len()).filter(|&i| band[i]).collect();
    let s = supersample;
    let sub = s.pow(n as u32);
    let point_vol = m.cell_volume() / sub as f64;
    let counts: Vec<u64> = band
        .par_iter()
        .map(|&i| {
            let c = m.coords(i);
            let mut local = vec![0u64; schedule.len()];
            for j in 0..sub {
                let mut r = j;
                let x: Vec<f64> = (0..n)
                    .map(|k| {
                        let q = r % s;
                        r /= s;
                        (c[k] as f64 + (q as f64 + 0.5) / s as f64) * h[k]
                    })
                    .collect();
                let d = distance_to_faces(m, &faces, &c, &x, &reach, &h);
                for (l, &t) in schedule.iter().enumerate() {
                    if d < t {
                        local[l] += 1;
                    }
                }
            }
            local
        })
        .reduce(|| vec![0u64; schedule.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    // codimension 1: v₁ t = 2t
    let ratios: Vec<f64> = counts.iter().zip(&schedule).map(|(&c, &t)| c as f64 * point_vol / (2.0 * t)).collect();
    let k = schedule.len() as f64;
    let st: f64 = schedule.iter().sum();
    let stt: f64 = schedule.iter().map(|t| t * t).sum();
    let sy: f64 = ratios.iter().sum();
    let sty: f64 = schedule.iter().zip(&ratios).map(|(t, y)| t * y).sum();
    let slope = (k * sty - st * sy) / (k * stt - st * st);
    let c0 = (sy - slope * st) / k;
    let residual = (schedule.iter().zip(&ratios).map(|(t, y)| (y - c0 - slope * t).powi(2)).sum::<f64>() / k).sqrt();
    let mut estimate = EstimateReport::exact(if degenerate { 0.0 } else { c0 }, "grid-minkowski");
    estimate.std_error = residual;
    Ok(BoundaryReport {
        estimate,
        interface_area,
        schedule,
        ratios,
        residual,
        res: m.res.clone(),
        supersample,
        degenerate,
    })
}

fn for_offsets(reach: &[i64], mut f: impl FnMut(&[i64])) {
    let n = reach.len();
    let mut off: Vec<i64> = reach.iter().map(|r| -r).collect();
    loop {
        f(&off);
        let mut k = 0;
        while k < n {
            off[k] += 1;
            if off[k] <= reach[k] {
                break;
            }
            off[k] = -reach[k];
            k += 1;
        }
        if k == n {
            return;
        }
    }
}

fn shifted(m: &BinaryField, c: &[usize], off: &[i64]) -> Option<Vec<usize>> {
    c.iter()
        .zip(off)
        .zip(&m.res)
        .map(|((&ci, &o), &r)| {
            let v = ci as i64 + o;
            if m.periodic {
                Some(v.rem_euclid(r as i64) as usize)
            } else if v < 0 || v >= r as i64 {
                None
            } else {
                Some(v as usize)
            }
        })
        .collect()
}

fn distance_to_faces(m: &BinaryField, faces: &[Vec<bool>], c: &[usize], x: &[f64], reach: &[i64], h: &[f64]) -> f64 {
    let n = m.dim();
    let mut best = f64::INFINITY;
    for_offsets(reach, |off| {
        let Some(d) = shifted(m, c, off) else { return };
        let fi = &faces[m.index(&d)];
        for k in 0..n {
            if !fi[k] {
                continue;
            }
            // unwrapped cell corner
            let mut s = 0.0;
            for j in 0..n {
                let lo = (c[j] as i64 + off[j]) as f64 * h[j];
                let v = if j == k {
                    x[j] - lo
                } else if x[j] < lo {
                    lo - x[j]
                } else if x[j] > lo + h[j] {
                    x[j] - lo - h[j]
                } else {
                    0.0
                };
                s += v * v;
            }
            best = best.min(s);
        }
    });
    best.sqrt()
}

/// 2∏_{i<n} aᵢ for tori, ∏_{i<n} aᵢ for boxes (lengths ascending).
pub fn isoperimetric_bound(m: &BinaryField) -> f64 {
    let mut a = m.lengths.clone();
    a.sort_by(f64::total_cmp);
    let p: f64 = a[..a.len() - 1].iter().product();
    if m.periodic {
        2.0 * p
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_profile_basics() {
        assert_eq!(gaussian_profile(0.0f64), 0.0);
        assert!((gaussian_profile(40.0f64) - 1.0).abs() < 1e-13);
        let t = 1e-4f64;
        assert!((gaussian_profile(t) / (2.0 * t) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn slab_boundaries() {
        let f = BinaryField::half_slab(vec![1.0, 1.0], vec![64, 64], 1, true).unwrap();
        let r = boundary_content(&f, &[3.0, 2.0, 1.0], 4).unwrap();
        assert!((r.estimate.value - 2.0).abs() < 1e-9, "{r:?}");
        let f = BinaryField::half_slab(vec![1.0, 2.0], vec![64, 64], 1, true).unwrap();
        let r = boundary_content(&f, &[3.0, 2.0, 1.0], 4).unwrap();
        assert!((r.estimate.value - 2.0).abs() < 1e-9, "{r:?}");
        let f = BinaryField::half_slab(vec![1.0, 1.0], vec![64, 64], 0, false).unwrap();
        let r = boundary_content(&f, &[3.0, 2.0, 1.0], 4).unwrap();
        assert!((r.estimate.value - 1.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn empty_set_has_no_boundary() {
        let f = BinaryField::new(vec![1.0, 1.0], vec![8, 8], true, vec![false; 64]).unwrap();
        let r = boundary_content(&f, &[3.0, 2.0, 1.0], 2).unwrap();
        assert!(r.degenerate && r.estimate.value == 0.0);
    }

    #[test]
    fn halving() {
        let f = BinaryField::half_slab(vec![1.0, 2.0], vec![32, 32], 1, true).unwrap();
        let boxes = torus_halving_translations(&f).unwrap();
        assert_eq!(boxes.len(), 4);
        assert!(boxes.iter().all(|b| b.slack == 0.0), "{boxes:?}");
        assert!(boxes_tile(&f, &boxes));
        let g = BinaryField::random_half(vec![1.0, 1.0], vec![128, 128], true, 3).unwrap();
        let boxes = torus_halving_translations(&g).unwrap();
        assert!(boxes_tile(&g, &boxes));
        assert!(boxes.iter().all(|b| b.slack <= 2.0 / 128.0), "{boxes:?}");
        let bad = BinaryField::new(vec![1.0], vec![8], true, vec![true, true, true, true, true, true, false, false]).unwrap();
        assert!(torus_halving_translations(&bad).is_err());
    }

    #[test]
    fn random_sets_exceed_bound() {
        for seed in 0..3 {
            let g = BinaryField::random_half(vec![1.0, 1.0], vec![64, 64], false, seed).unwrap();
            assert_eq!(g.occupied(), 64 * 64 / 2);
            let r = boundary_content(&g, &[3.0, 2.0, 1.0], 4).unwrap();
            assert!(r.estimate.value >= 0.95 * isoperimetric_bound(&g), "{r:?}");
        }
    }

    #[test]
    fn file_round_trip() {
        let g = BinaryField::random_half(vec![1.0, 2.0], vec![8, 6], true, 1).unwrap();
        let mut buf = vec![];
        g.write_to(&mut buf).unwrap();
        let back = BinaryField::read_from(&mut std::io::Cursor::new(buf)).unwrap();
        assert_eq!(g, back);
        assert!(BinaryField::read_from(&mut std::io::Cursor::new(b"nonsense\n".to_vec())).is_err());
    }
}
