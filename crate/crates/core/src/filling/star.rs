//! Vertex assignment on the barycentric subdivision of a simplicial complex.
//!
//! A face of T′ is a chain w₀ < … < w_m of faces of T; it is assigned its
//! least element. N_v collects the assigned vertices of the T′-faces through v.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use crate::error::{usage, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Complex {
    /// Maximal simplices as vertex lists.
    pub facets: Vec<Vec<usize>>,
}

impl Complex {
    pub fn dim(&self) -> usize {
        self.facets.iter().map(|f| f.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Every nonempty face, each a sorted vertex list.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            for mask in 1u32..(1 << f.len()) {
                out.insert((0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect());
            }
        }
        out
    }
}

/// k-dimensional complex made of `count` random k-simplices on `vertices` vertices.
pub fn random_complex(k: usize, vertices: usize, count: usize, rng: &mut impl Rng) -> Complex {
    let facets = (0..count)
        .map(|_| {
            let mut f = BTreeSet::new();
            while f.len() < k + 1 {
                f.insert(rng.random_range(0..vertices.max(k + 1)));
            }
            f.into_iter().collect()
        })
        .collect();
    Complex { facets }
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub dim: usize,
    pub faces: usize,
    pub subdivision_faces: usize,
    pub max_n_v: usize,
    /// Face of T (a vertex of T′) attaining the maximum.
    pub worst: Vec<usize>,
    pub bound: usize,
    pub pass: bool,
}

fn is_subface(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && a.iter().all(|x| b.contains(x))
}

/// Minimal-element assignment on T′ and the largest N_v.
pub fn star_assignment(t: &Complex) -> Result<StarReport> {
    if t.facets.is_empty() || t.facets.iter().any(|f| f.is_empty()) {
        return usage("complex needs at least one nonempty simplex");
    }
    let faces: Vec<Vec<usize>> = t.faces().into_iter().collect();
    let up: Vec<Vec<usize>> = (0..faces.len())
        .map(|i| (0..faces.len()).filter(|&j| is_subface(&faces[i], &faces[j])).collect())
        .collect();
    let mut n_v: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut count = 0usize;
    // every chain starting at its least element w
    for w in 0..faces.len() {
        let mut stack = vec![vec![w]];
        while let Some(chain) = stack.pop() {
            count += 1;
            for &v in &chain {
                n_v.entry(v).or_default().insert(w);
            }
            let top = *chain.last().unwrap();
            for &next in &up[top] {
                let mut c = chain.clone();
                c.push(next);
                stack.push(c);
            }
        }
    }
    let (worst, max_n_v) = n_v
        .iter()
        .map(|(&v, s)| (v, s.len()))
        .max_by_key(|&(v, s)| (s, std::cmp::Reverse(v)))
        .unwrap();
    let dim = t.dim();
    let bound = (1usize << dim) - 1;
    Ok(StarReport {
        dim,
        faces: faces.len(),
        subdivision_faces: count,
        max_n_v,
        worst: faces[worst].clone(),
        bound,
        pass: max_n_v <= bound,
    })
}

/// `per_k` random complexes for each k in 1..=3.
pub fn star_check(per_k: usize, seed: u64) -> Result<Vec<StarReport>> {
    let mut out = Vec::new();
    for k in 1..=3usize {
        let mut rng = crate::rng::stream(seed, k as u64);
        for _ in 0..per_k {
            let count = rng.random_range(1..=6);
            out.push(star_assignment(&random_complex(k, 2 * k + 3, count, &mut rng))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nv_is_every_subface() {
        // N_v for a top simplex v contains all its nonempty faces, v included
        for k in 1..=3 {
            let t = Complex { facets: vec![(0..=k).collect()] };
            let r = star_assignment(&t).unwrap();
            assert_eq!(r.max_n_v, (1 << (k + 1)) - 1);
            assert_eq!(r.worst.len(), k + 1);
        }
    }

    #[test]
    fn counts_chains() {
        // T′ of an edge: 3 vertices and 2 edges
        let r = star_assignment(&Complex { facets: vec![vec![0, 1]] }).unwrap();
        assert_eq!(r.faces, 3);
        assert_eq!(r.subdivision_faces, 5);
    }
}
