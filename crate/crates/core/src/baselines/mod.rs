//! Comparison constructions: Ball Mapper, 1D Mapper, the witness complex
//! with `v = 0`, and the Vietoris–Rips filtration.

mod mapper;

pub use mapper::{mapper_1d, uniform_cover, Clusterer, Dbscan, IntervalCover, SingleLinkage};

use rayon::prelude::*;

use crate::complex::{Cover, FilteredComplex, Simplex};
use crate::geometry::{epsilon_net, PointCloud};
use crate::{ensure, Error, Result};

/// Largest complex the clique and witness expansions will build.
pub const MAX_SIMPLICES: usize = 10_000_000;

/// Cover by closed balls of radius `eps` around the points of a seeded
/// `eps`-net. Member `i` is the ball around the `i`-th landmark.
pub fn ball_mapper(x: &PointCloud, eps: f64, seed: u64) -> Result<(Cover, Vec<usize>)> {
    let landmarks = epsilon_net(x, eps, seed)?;
    let members = landmarks
        .par_iter()
        .map(|&y| (0..x.len()).filter(|&i| x.dist(i, y) <= eps).collect())
        .collect();
    Ok((Cover::new(x.len(), members)?, landmarks))
}

/// Depth-first enumeration of vertex lists `v₀ < v₁ < …` up to `max_dim`,
/// carrying per-frame state; `extend` returns the value and child state of
/// `simplex ∪ {j}` or `None` to prune. Runs in parallel over the first
/// vertex and fails once the total count exceeds [`MAX_SIMPLICES`].
fn expand<S: Send + Sync + Clone>(
    n: usize,
    max_dim: usize,
    root: impl Fn(usize) -> Option<(f64, S)> + Sync,
    candidates: impl Fn(usize) -> Vec<usize> + Sync,
    extend: impl Fn(&S, usize) -> Option<(f64, S)> + Sync,
) -> Result<Vec<(Simplex, f64)>> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    let count = AtomicUsize::new(0);
    let over = || Error::Capacity(format!("complex would exceed {MAX_SIMPLICES} simplices"));
    let parts: Vec<Result<Vec<(Simplex, f64)>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let Some((value, state)) = root(i) else { return Ok(out) };
            out.push((Simplex::vertex(i), value));
            let mut stack = vec![(vec![i], state, candidates(i))];
            while let Some((simplex, state, cands)) = stack.pop() {
                if simplex.len() > max_dim {
                    continue;
                }
                for (c, &j) in cands.iter().enumerate() {
                    let Some((value, child)) = extend(&state, j) else { continue };
                    let mut next = simplex.clone();
                    next.push(j);
                    out.push((Simplex::from_sorted(next.clone()), value));
                    if next.len() <= max_dim {
                        stack.push((next, child, cands[c + 1..].to_vec()));
                    }
                }
                if count.fetch_add(cands.len(), Ordering::Relaxed) > MAX_SIMPLICES {
                    return Err(over());
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for part in parts {
        all.extend(part?);
    }
    ensure!(all.len() <= MAX_SIMPLICES, Capacity, "complex would exceed {MAX_SIMPLICES} simplices");
    Ok(all)
}

/// Witness filtration with `v = 0` on `landmarks`: a simplex `σ` enters at
/// `min_x max_{y∈σ} d(y, x)` over all points `x` of the cloud. Every subset of
/// landmarks up to `max_dim` is present.
pub fn witness_v0(x: &PointCloud, landmarks: &[usize], max_dim: usize) -> Result<FilteredComplex> {
    ensure!(!landmarks.is_empty(), Parameter, "witness complex needs at least one landmark");
    ensure!(landmarks.iter().all(|&y| y < x.len()), Parameter, "landmark id out of range");
    let m = landmarks.len();
    let dist: Vec<Vec<f64>> = landmarks
        .par_iter()
        .map(|&y| (0..x.len()).map(|i| x.dist(y, i)).collect())
        .collect();
    let minimum = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let entries = expand(
        m,
        max_dim,
        |i| Some((minimum(&dist[i]), dist[i].clone())),
        |i| (i + 1..m).collect(),
        |maxes: &Vec<f64>, j| {
            let next: Vec<f64> = maxes.iter().zip(&dist[j]).map(|(a, b)| a.max(*b)).collect();
            Some((minimum(&next), next))
        },
    )?;
    FilteredComplex::new(entries)
}

/// Vietoris–Rips filtration up to `max_dim`, keeping simplices whose
/// diameter is at most `max_radius`; the value of a simplex is its largest
/// pairwise distance.
pub fn vietoris_rips(x: &PointCloud, max_dim: usize, max_radius: f64) -> Result<FilteredComplex> {
    ensure!(max_radius >= 0.0, Parameter, "max_radius must be >= 0, got {max_radius}");
    let n = x.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).filter(|&j| x.dist(i, j) <= max_radius).collect())
        .collect();
    let entries = expand(
        n,
        max_dim,
        |i| Some((0.0, (vec![i], 0.0))),
        |i| neighbors[i].clone(),
        |(verts, value): &(Vec<usize>, f64), j| {
            let mut diam = *value;
            for &v in verts {
                let d = x.dist(v, j);
                if d > max_radius {
                    return None;
                }
                diam = diam.max(d);
            }
            let mut next = verts.clone();
            next.push(j);
            Some((diam, (next, diam)))
        },
    )?;
    FilteredComplex::new(entries)
}
