//! Zero-dimensional suplevel persistence of vertex-filtered graphs.
//!
//! Vertices enter at `f(x)`, edges at `min(f(u), f(v))`, and thresholds
//! decrease. Components are merged with the elder rule on a union-find.

use serde::{Deserialize, Serialize};

use crate::geometry::WeightedGraph;
use crate::{ensure, Result};

/// One finite bar of the reduced suplevel barcode, with the simplices that
/// created and destroyed it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H0Bar {
    pub birth_vertex: usize,
    /// Death edge as `(min id, max id)`.
    pub death_edge: (usize, usize),
    /// Endpoint of the death edge attaining the minimum (lower id on ties).
    pub death_vertex: usize,
    pub birth_value: f64,
    pub death_value: f64,
}

impl H0Bar {
    pub fn length(&self) -> f64 {
        self.birth_value - self.death_value
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct H0Attribution {
    pub bars: Vec<H0Bar>,
}

impl H0Attribution {
    /// Total persistence re-evaluated on `f` with the pairing held fixed.
    pub fn total_at(&self, f: &[f64]) -> f64 {
        self.bars.iter().map(|b| f[b.birth_vertex] - f[b.death_vertex]).sum()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Links two distinct roots and returns the new root.
    fn link(&mut self, a: usize, b: usize) -> usize {
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => {
                self.parent[a] = b;
                b
            }
            std::cmp::Ordering::Greater => {
                self.parent[b] = a;
                a
            }
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
                a
            }
        }
    }
}

/// Order in which vertices enter the suplevel filtration: decreasing value,
/// ties by increasing id.
fn entry_order(f: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
    order
}

/// Reduced 0-dimensional suplevel persistence of `f` on `graph`.
///
/// Returns the total persistence `Σ (birth − death)` over finite bars and
/// the per-bar attribution. One essential class per connected component of
/// the graph is excluded; zero-length bars are not reported.
pub fn h0_suplevel(graph: &WeightedGraph, f: &[f64]) -> Result<(f64, H0Attribution)> {
    let n = graph.n();
    ensure!(f.len() == n, Parameter, "function has {} values for {n} vertices", f.len());
    for (x, &v) in f.iter().enumerate() {
        ensure!((0.0..=1.0).contains(&v), Domain, "f({x}) = {v} lies outside [0, 1]");
    }

    let order = entry_order(f);
    let mut position = vec![0usize; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut uf = UnionFind::new(n);
    // Oldest vertex of each component, keyed by root.
    let mut oldest: Vec<usize> = (0..n).collect();
    let mut bars = Vec::new();
    let mut total = 0.0;

    for &v in &order {
        for &(u, _) in graph.neighbors(v) {
            if position[u] > position[v] {
                continue;
            }
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru == rv {
                continue;
            }
            let (elder, younger) = if position[oldest[ru]] < position[oldest[rv]] {
                (oldest[ru], oldest[rv])
            } else {
                (oldest[rv], oldest[ru])
            };
            let death_vertex = if f[u] == f[v] { u.min(v) } else { v };
            let birth_value = f[younger];
            let death_value = f[v];
            if birth_value > death_value {
                total += birth_value - death_value;
                bars.push(H0Bar {
                    birth_vertex: younger,
                    death_edge: (u.min(v), u.max(v)),
                    death_vertex,
                    birth_value,
                    death_value,
                });
            }
            let root = uf.link(ru, rv);
            oldest[root] = elder;
        }
    }
    Ok((total, H0Attribution { bars }))
}

/// Subgradient of the total persistence with respect to `f`: `+1` at each
/// bar's birth vertex and `−1` at its death vertex.
pub fn h0_subgradient(attribution: &H0Attribution, n: usize) -> Vec<f64> {
    let mut grad = vec![0.0; n];
    for bar in &attribution.bars {
        grad[bar.birth_vertex] += 1.0;
        grad[bar.death_vertex] -= 1.0;
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Edge;

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n - 1).map(|i| Edge { u: i, v: i + 1, w: 1.0 })).unwrap()
    }

    #[test]
    fn constant_function_has_no_bars() {
        let (total, att) = h0_suplevel(&path(5), &[1.0; 5]).unwrap();
        assert_eq!(total, 0.0);
        assert!(att.bars.is_empty());
        assert_eq!(h0_subgradient(&att, 5), vec![0.0; 5]);
    }

    #[test]
    fn path_with_dip() {
        let (total, att) = h0_suplevel(&path(3), &[1.0, 0.2, 0.8]).unwrap();
        assert!((total - 0.6).abs() < 1e-15);
        assert_eq!(att.bars.len(), 1);
        let bar = att.bars[0];
        assert_eq!((bar.birth_vertex, bar.death_vertex, bar.death_edge), (2, 1, (1, 2)));
        assert_eq!((bar.birth_value, bar.death_value), (0.8, 0.2));
        assert_eq!(h0_subgradient(&att, 3), vec![0.0, -1.0, 1.0]);
    }

    #[test]
    fn disconnected_edges_each_keep_an_essential_class() {
        let g = WeightedGraph::new(
            4,
            [Edge { u: 0, v: 1, w: 1.0 }, Edge { u: 2, v: 3, w: 1.0 }],
        )
        .unwrap();
        let (total, _) = h0_suplevel(&g, &[1.0; 4]).unwrap();
        assert_eq!(total, 0.0);
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        assert!(h0_suplevel(&path(2), &[1.0, 1.5]).is_err());
        assert!(h0_suplevel(&path(2), &[-0.1, 0.5]).is_err());
        assert!(h0_suplevel(&path(2), &[0.5]).is_err());
    }

    #[test]
    fn death_vertex_ties_go_to_lower_id() {
        // 3 (0.9) - 1 (0.5) - 2 (0.5) - 0 (0.8): the components of 3 and 0 meet
        // through the edge (1, 2) whose endpoints tie at 0.5.
        let g = WeightedGraph::new(
            4,
            [
                Edge { u: 0, v: 2, w: 1.0 },
                Edge { u: 1, v: 2, w: 1.0 },
                Edge { u: 1, v: 3, w: 1.0 },
            ],
        )
        .unwrap();
        let (total, att) = h0_suplevel(&g, &[0.8, 0.5, 0.5, 0.9]).unwrap();
        assert!((total - 0.3).abs() < 1e-15);
        assert_eq!(att.bars.len(), 1);
        let bar = att.bars[0];
        assert_eq!((bar.birth_vertex, bar.death_edge, bar.death_vertex), (0, (1, 2), 1));
    }

    #[test]
    fn fixed_pairing_total_matches() {
        let f = [0.1, 0.9, 0.2, 0.7, 0.05, 0.6];
        let (total, att) = h0_suplevel(&path(6), &f).unwrap();
        assert!((att.total_at(&f) - total).abs() < 1e-15);
    }
}
