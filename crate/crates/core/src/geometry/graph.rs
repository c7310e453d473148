use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PointCloud;
use crate::{ensure, Result};

/// Undirected weighted edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Weighted undirected graph on vertices `0..n`.
///
/// Edges are kept sorted by `(u, v)`; a CSR adjacency is built once at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<(usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| if e.u > e.v { Edge { u: e.v, v: e.u, w: e.w } } else { e })
            .collect();
        for e in &edges {
            ensure!(e.u != e.v, Invariant, "self-loop at vertex {}", e.u);
            ensure!(e.v < n, Invariant, "edge ({}, {}) out of range for n = {n}", e.u, e.v);
            ensure!(
                e.w.is_finite() && e.w > 0.0,
                Invariant,
                "edge ({}, {}) has non-positive or non-finite weight {}",
                e.u,
                e.v,
                e.w
            );
        }
        edges.sort_by_key(|e| (e.u, e.v));
        ensure!(
            edges.windows(2).all(|p| (p[0].u, p[0].v) != (p[1].u, p[1].v)),
            Invariant,
            "duplicate edge"
        );

        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adjacency = vec![(0usize, 0.0f64); offsets[n]];
        for e in &edges {
            adjacency[fill[e.u]] = (e.v, e.w);
            fill[e.u] += 1;
            adjacency[fill[e.v]] = (e.u, e.w);
            fill[e.v] += 1;
        }
        Ok(Self { n, edges, offsets, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Total edge weight `W`.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Neighbors of `x` with edge weights, in increasing vertex order.
    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[self.offsets[x]..self.offsets[x + 1]]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// Weighted degree (sum of incident weights).
    pub fn strength(&self, x: usize) -> f64 {
        self.neighbors(x).iter().map(|&(_, w)| w).sum()
    }

    /// Connected component label of each vertex, labels numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &(y, _) in self.neighbors(x) {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Same graph with vertices relabelled by `perm` (vertex `x` becomes `perm[x]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            self.n,
            self.edges.iter().map(|e| Edge { u: perm[e.u], v: perm[e.v], w: e.w }),
        )
    }
}

/// One entry of a nearest-neighbor list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub dist: f64,
}

/// Exact `k` nearest neighbors of every point (self excluded), sorted by
/// `(distance, index)`.
pub fn nearest_neighbors(x: &PointCloud, k: usize) -> Result<Vec<Vec<Neighbor>>> {
    let n = x.len();
    ensure!(k >= 1, Parameter, "n_neigh must be positive");
    ensure!(k < n, Parameter, "n_neigh = {k} must be smaller than the number of points {n}");
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<Neighbor> = (0..n)
                .filter(|&j| j != i)
                .map(|j| Neighbor { index: j, dist: x.dist(i, j) })
                .collect();
            let by_key = |a: &Neighbor, b: &Neighbor| {
                a.dist.total_cmp(&b.dist).then(a.index.cmp(&b.index))
            };
            if k < cand.len() {
                cand.select_nth_unstable_by(k - 1, by_key);
                cand.truncate(k);
            }
            cand.sort_by(by_key);
            cand
        })
        .collect())
}

/// Symmetrized k-nearest-neighbor graph with unit weights.
pub fn knn_graph(x: &PointCloud, n_neigh: usize) -> Result<WeightedGraph> {
    let knn = nearest_neighbors(x, n_neigh)?;
    let mut pairs = BTreeMap::new();
    for (i, list) in knn.iter().enumerate() {
        for nb in list {
            pairs.insert((i.min(nb.index), i.max(nb.index)), 1.0);
        }
    }
    WeightedGraph::new(x.len(), pairs.into_iter().map(|((u, v), w)| Edge { u, v, w }))
}

const SIGMA_LO: f64 = 1e-8;
const SIGMA_HI: f64 = 1e3;
const SIGMA_ITERS: usize = 64;
const MIN_UMAP_WEIGHT: f64 = 1e-6;

/// Bandwidth `σ` solving `Σ_j exp(-max(0, d_j - ρ)/σ) = log₂(k)` by bisection.
///
/// Returns `None` when every neighbor sits at distance `ρ`, in which case
/// all local weights are 1 whatever `σ` is.
fn local_bandwidth(dists: &[f64], rho: f64) -> Option<f64> {
    if dists.iter().all(|&d| d - rho <= 0.0) {
        return None;
    }
    let target = (dists.len() as f64).log2();
    let mass = |sigma: f64| -> f64 {
        dists.iter().map(|&d| (-(d - rho).max(0.0) / sigma).exp()).sum()
    };
    let (mut lo, mut hi) = (SIGMA_LO, SIGMA_HI);
    if mass(lo) >= target {
        return Some(lo);
    }
    if mass(hi) <= target {
        return Some(hi);
    }
    for _ in 0..SIGMA_ITERS {
        let mid = 0.5 * (lo + hi);
        if mass(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Directed UMAP membership strengths `x -> neighbor` for every point.
pub(crate) fn umap_directed_weights(knn: &[Vec<Neighbor>]) -> Vec<Vec<(usize, f64)>> {
    knn.par_iter()
        .map(|list| {
            let dists: Vec<f64> = list.iter().map(|nb| nb.dist).collect();
            let rho = dists[0];
            match local_bandwidth(&dists, rho) {
                None => list.iter().map(|nb| (nb.index, 1.0)).collect(),
                Some(sigma) => list
                    .iter()
                    .map(|nb| (nb.index, (-(nb.dist - rho).max(0.0) / sigma).exp()))
                    .collect(),
            }
        })
        .collect()
}

/// UMAP's weighted neighborhood graph: local exponential kernels with
/// per-point bandwidth, symmetrized by the probabilistic union
/// `a + b - a·b`. Edges whose weight falls below `1e-6` are dropped.
pub fn umap_graph(x: &PointCloud, n_neigh: usize) -> Result<WeightedGraph> {
    ensure!(n_neigh >= 2, Parameter, "umap graph needs n_neigh >= 2, got {n_neigh}");
    let knn = nearest_neighbors(x, n_neigh)?;
    let directed = umap_directed_weights(&knn);
    let mut pairs: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for (i, list) in directed.iter().enumerate() {
        for &(j, w) in list {
            let slot = pairs.entry((i.min(j), i.max(j))).or_insert((0.0, 0.0));
            if i < j {
                slot.0 = w;
            } else {
                slot.1 = w;
            }
        }
    }
    let edges = pairs.into_iter().filter_map(|((u, v), (a, b))| {
        let w = a + b - a * b;
        (w >= MIN_UMAP_WEIGHT).then_some(Edge { u, v, w })
    });
    WeightedGraph::new(x.len(), edges)
}
