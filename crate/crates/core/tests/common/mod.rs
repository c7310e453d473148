// Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use covercraft::complex::Simplex;
use covercraft::geometry::Edge;
use covercraft::{FilteredComplex, WeightedGraph};
use rand::Rng;

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push(Edge { u, v, w: rng.random_range(0.1..2.0) });
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Connected components of the subgraph induced by `keep`, by flood fill.
fn induced_components(graph: &WeightedGraph, keep: &[bool]) -> Vec<Option<usize>> {
    let mut label = vec![None; graph.n()];
    let mut next = 0;
    for s in 0..graph.n() {
        if !keep[s] || label[s].is_some() {
            continue;
        }
        let mut stack = vec![s];
        label[s] = Some(next);
        while let Some(v) = stack.pop() {
            for &(u, _) in graph.neighbors(v) {
                if keep[u] && label[u].is_none() {
                    label[u] = Some(next);
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    label
}

/// Total reduced suplevel H0 persistence as `∫₀¹ (#components of {f ≥ t}
/// beyond one per touched graph component) dt`, summed exactly over the
/// steps of the sweep.
pub fn h0_sweep_total(graph: &WeightedGraph, f: &[f64]) -> f64 {
    let whole = induced_components(graph, &vec![true; graph.n()]);
    let mut levels: Vec<f64> = f.to_vec();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let mut total = 0.0;
    for (j, &t) in levels.iter().enumerate() {
        let below = levels.get(j + 1).copied().unwrap_or(0.0);
        let keep: Vec<bool> = f.iter().map(|&v| v >= t).collect();
        let parts = induced_components(graph, &keep);
        let mut pieces: Vec<usize> = parts.iter().flatten().copied().collect();
        pieces.sort_unstable();
        pieces.dedup();
        let mut touched: Vec<usize> = (0..graph.n()).filter(|&x| keep[x]).map(|x| whole[x].unwrap()).collect();
        touched.sort_unstable();
        touched.dedup();
        total += (pieces.len() - touched.len()) as f64 * (t - below);
    }
    total
}

/// Rank over Z/2 of vectors given as bitmasks.
fn rank_z2(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & mask != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers `β_0..=β_max` of a complex (at most 128 simplices per
/// dimension), from ranks of the Z/2 boundary matrices.
pub fn betti_z2(simplices: &[Simplex], max: usize) -> Vec<usize> {
    let mut by_dim: Vec<Vec<&Simplex>> = vec![Vec::new(); max + 2];
    for s in simplices {
        if s.dim() <= max + 1 {
            by_dim[s.dim()].push(s);
        }
    }
    let index: Vec<HashMap<&Simplex, usize>> =
        by_dim.iter().map(|ss| ss.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
    let boundary_rank = |d: usize| -> usize {
        if d == 0 {
            return 0;
        }
        let rows = by_dim[d]
            .iter()
            .map(|s| s.facets().fold(0u128, |acc, f| acc | 1u128 << index[d - 1][&f]))
            .collect();
        rank_z2(rows)
    };
    (0..=max).map(|d| by_dim[d].len() - boundary_rank(d) - boundary_rank(d + 1)).collect()
}

/// Random face-closed complex on a few vertices with a monotone filtration
/// that has frequent ties.
pub fn random_monotone_complex<R: Rng>(max_simplices: usize, rng: &mut R) -> FilteredComplex {
    let nv = rng.random_range(3..=8);
    let mut values: HashMap<Simplex, f64> = HashMap::new();
    let mut order: Vec<Simplex> = Vec::new();
    for _ in 0..200 {
        let size = rng.random_range(1..=4.min(nv));
        let mut vs: Vec<usize> = (0..nv).collect();
        for i in 0..size {
            let j = rng.random_range(i..nv);
            vs.swap(i, j);
        }
        let top = Simplex::new(vs[..size].to_vec()).unwrap();
        // Closure of `top`, faces first.
        let mut closure = vec![top.clone()];
        let mut i = 0;
        while i < closure.len() {
            let faces: Vec<Simplex> = closure[i].facets().collect();
            closure.extend(faces);
            i += 1;
        }
        closure.sort_by_key(|s| s.dim());
        closure.dedup();
        let new: Vec<Simplex> = closure.into_iter().filter(|s| !values.contains_key(s)).collect();
        if values.len() + new.len() > max_simplices {
            break;
        }
        let mut new = new;
        new.sort_by(|a, b| a.canonical_cmp(b));
        new.dedup();
        for s in new {
            let floor = s.facets().map(|f| values[&f]).fold(0.0, f64::max);
            let bump = if rng.random_bool(0.3) { 0.0 } else { (rng.random_range(0..4) as f64) * 0.25 };
            values.insert(s.clone(), floor + bump);
            order.push(s);
        }
    }
    FilteredComplex::new(order.into_iter().map(|s| {
        let v = values[&s];
        (s, v)
    }))
    .unwrap()
}

/// Checks `reduce_barcode` against Betti numbers of every sublevel complex.
/// Returns a description of the first disagreement.
pub fn check_barcode_against_sweep(k: &FilteredComplex) -> Result<(), String> {
    let max = k.max_dim().unwrap_or(0);
    let bc = covercraft::persistence::reduce_barcode(k, max);
    let mut levels: Vec<f64> = k.iter().map(|(_, v)| v).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    for &r in &levels {
        let sub: Vec<Simplex> = k.sublevel(r).iter().cloned().collect();
        let expected = betti_z2(&sub, max);
        for (d, &b) in expected.iter().enumerate() {
            let got = covercraft::persistence::betti_curve(&bc, d).eval(r);
            if got != b {
                return Err(format!("at r = {r}, dim {d}: barcode gives {got}, sweep gives {b}"));
            }
        }
    }
    Ok(())
}
