//! Seeded synthetic graphs.

use std::collections::{BTreeSet, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every row copies its predecessor, then toggles `mutations` random columns.
/// Row 0 is a run of `degree` consecutive columns at a random offset, which
/// keeps the transpose copy-friendly as well.
pub fn copy_chain(n: usize, degree: usize, mutations: usize, seed: u64) -> Result<CsrGraph> {
    if degree > n {
        return Err(Error::Parameter(format!("degree {degree} exceeds {n} vertices")));
    }
    let mut rng = rng(seed);
    let start = rng.random_range(0..=n - degree) as VertexId;
    let mut row: BTreeSet<VertexId> = (start..start + degree as VertexId).collect();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            for _ in 0..mutations {
                let c = rng.random_range(0..n) as VertexId;
                if !row.remove(&c) {
                    row.insert(c);
                }
            }
        }
        rows.push(row.iter().copied().collect::<Vec<_>>());
    }
    CsrGraph::from_rows(&rows)
}

/// Uniform random digraph with exactly `m` distinct edges (self-loops allowed).
pub fn erdos_renyi(n: usize, m: usize, seed: u64) -> Result<CsrGraph> {
    if (m as u128) > (n as u128) * (n as u128) {
        return Err(Error::Parameter(format!("{m} edges do not fit on {n} vertices")));
    }
    let mut rng = rng(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let e = (
            rng.random_range(0..n) as VertexId,
            rng.random_range(0..n) as VertexId,
        );
        if seen.insert(e) {
            edges.push(e);
        }
    }
    CsrGraph::from_edges(&edges, n)
}

/// Each row is a Bernoulli(`density`) row, except that with probability
/// `copy_prob` it instead copies a random row among the previous eight and
/// toggles each column with probability `flip`.
pub fn copy_model(n: usize, density: f64, copy_prob: f64, flip: f64, seed: u64) -> Result<CsrGraph> {
    for (name, p) in [("density", density), ("copy_prob", copy_prob), ("flip", flip)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("{name} must lie in [0, 1], got {p}")));
        }
    }
    let mut rng = rng(seed);
    let mut rows: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    for i in 0..n {
        let row: Vec<VertexId> = if i > 0 && rng.random_bool(copy_prob) {
            let src = &rows[rng.random_range(i.saturating_sub(8)..i)];
            let mut bits = vec![false; n];
            for &c in src {
                bits[c as usize] = true;
            }
            for b in bits.iter_mut() {
                if rng.random_bool(flip) {
                    *b = !*b;
                }
            }
            (0..n as VertexId).filter(|&c| bits[c as usize]).collect()
        } else {
            (0..n as VertexId).filter(|_| rng.random_bool(density)).collect()
        };
        rows.push(row);
    }
    CsrGraph::from_rows(&rows)
}

/// A complete bipartite block between `sources` random vertices and `targets`
/// random vertices, plus `noise` random edges.
pub fn planted_biclique(n: usize, sources: usize, targets: usize, noise: usize, seed: u64) -> Result<CsrGraph> {
    if sources > n || targets > n {
        return Err(Error::Parameter("biclique sides exceed the vertex count".into()));
    }
    let mut rng = rng(seed);
    let s = sample(&mut rng, n, sources);
    let t = sample(&mut rng, n, targets);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(sources * targets + noise);
    for u in s.iter() {
        edges.extend(t.iter().map(|v| (u as VertexId, v as VertexId)));
    }
    for _ in 0..noise {
        edges.push((
            rng.random_range(0..n) as VertexId,
            rng.random_range(0..n) as VertexId,
        ));
    }
    CsrGraph::from_edges(&edges, n)
}
