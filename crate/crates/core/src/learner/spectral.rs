//! Spectral-clustering initialization: bottom eigenvectors of the symmetric
//! normalized Laplacian followed by k-means on the embedded rows.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::complex::FuzzyCover;
use crate::geometry::{Edge, WeightedGraph};
use crate::{ensure, Error, Result};

/// Graphs up to this size use a dense eigensolver.
pub const DENSE_EIGEN_MAX_N: usize = 3000;
const DEGREE_EPS: f64 = 1e-12;
const LANCZOS_TOL: f64 = 1e-8;
const KMEANS_ITERS: usize = 100;
const KMEANS_RESTARTS: usize = 10;

/// `D^{-1/2}` entries with isolated vertices regularized to degree `1e-12`.
fn inv_sqrt_degrees(graph: &WeightedGraph) -> Vec<f64> {
    (0..graph.n())
        .map(|x| {
            let d = graph.strength(x);
            1.0 / (if d > 0.0 { d } else { DEGREE_EPS }).sqrt()
        })
        .collect()
}

/// `y = L x` for `L = I − D^{-1/2} A D^{-1/2}`.
fn laplacian_apply(graph: &WeightedGraph, isd: &[f64], x: &[f64], y: &mut [f64]) {
    for v in 0..graph.n() {
        let mut acc = 0.0;
        for &(u, w) in graph.neighbors(v) {
            acc += w * isd[u] * x[u];
        }
        y[v] = x[v] - isd[v] * acc;
    }
}

/// Dense symmetric normalized Laplacian.
pub fn normalized_laplacian(graph: &WeightedGraph) -> DMatrix<f64> {
    let n = graph.n();
    let isd = inv_sqrt_degrees(graph);
    let mut l = DMatrix::identity(n, n);
    for e in graph.edges() {
        let v = e.w * isd[e.u] * isd[e.v];
        l[(e.u, e.v)] -= v;
        l[(e.v, e.u)] -= v;
    }
    l
}

/// Eigenpairs sorted by increasing eigenvalue; vectors are the columns.
fn sorted_eigen(eig: SymmetricEigen<f64, nalgebra::Dyn>, k: usize) -> (Vec<f64>, DMatrix<f64>) {
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    idx.truncate(k);
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Lanczos with full reorthogonalization for the `k` smallest eigenpairs of
/// the normalized Laplacian. The Krylov dimension grows until the Ritz
/// residuals fall below tolerance.
fn lanczos_smallest(graph: &WeightedGraph, k: usize, seed: u64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = graph.n();
    let isd = inv_sqrt_degrees(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1a2c);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    let mut q: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut q);
    let mut w = vec![0.0; n];
    let mut target = (4 * k + 60).min(n);

    loop {
        while basis.len() < target {
            basis.push(q.clone());
            laplacian_apply(graph, &isd, &q, &mut w);
            let a = dot(&w, &q);
            alpha.push(a);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    axpy(-c, b, &mut w);
                }
            }
            let norm = dot(&w, &w).sqrt();
            if basis.len() == n {
                break;
            }
            if norm < 1e-12 {
                // Invariant subspace found: restart with a fresh orthogonal vector.
                let mut r: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                for _ in 0..2 {
                    for b in &basis {
                        let c = dot(&r, b);
                        axpy(-c, b, &mut r);
                    }
                }
                normalize(&mut r);
                beta.push(0.0);
                q = r;
            } else {
                beta.push(norm);
                q = w.iter().map(|v| v / norm).collect();
            }
        }

        let m = basis.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let (values, small) = sorted_eigen(SymmetricEigen::new(t), k);
        let mut vectors = DMatrix::zeros(n, k);
        for c in 0..k {
            for (i, b) in basis.iter().enumerate() {
                let coef = small[(i, c)];
                for x in 0..n {
                    vectors[(x, c)] += coef * b[x];
                }
            }
        }
        let mut worst: f64 = 0.0;
        let mut lv = vec![0.0; n];
        for c in 0..k {
            let v: Vec<f64> = vectors.column(c).iter().copied().collect();
            laplacian_apply(graph, &isd, &v, &mut lv);
            let res: f64 = lv.iter().zip(&v).map(|(a, b)| (a - values[c] * b).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(res);
        }
        if worst <= LANCZOS_TOL || m == n {
            return Ok((values, vectors));
        }
        target = (m * 2).min(n);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn solve_connected(graph: &WeightedGraph, k: usize, seed: u64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if graph.n() <= DENSE_EIGEN_MAX_N {
        Ok(sorted_eigen(SymmetricEigen::new(normalized_laplacian(graph)), k))
    } else {
        lanczos_smallest(graph, k, seed)
    }
}

/// The `k` smallest eigenpairs of the normalized Laplacian (dense solver up
/// to [`DENSE_EIGEN_MAX_N`] vertices, Lanczos beyond).
///
/// The Laplacian is block diagonal over connected components, so each
/// component is solved on its own and the pairs are merged; this keeps the
/// repeated eigenvalue 0 of a disconnected graph out of the Krylov solver.
pub fn laplacian_eigenpairs(graph: &WeightedGraph, k: usize, seed: u64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = graph.n();
    ensure!(k >= 1 && k <= n, Parameter, "k = {k} must lie in 1..={n}");
    let labels = graph.components();
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    if count <= 1 {
        return solve_connected(graph, k, seed);
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut local = vec![0; n];
    for (x, &c) in labels.iter().enumerate() {
        local[x] = groups[c].len();
        groups[c].push(x);
    }
    let mut edges_of: Vec<Vec<Edge>> = vec![Vec::new(); count];
    for e in graph.edges() {
        edges_of[labels[e.u]].push(Edge { u: local[e.u], v: local[e.v], w: e.w });
    }
    // (value, component, column in that component's solution)
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    let mut solutions = Vec::with_capacity(count);
    for (c, members) in groups.iter().enumerate() {
        let sub = WeightedGraph::new(members.len(), std::mem::take(&mut edges_of[c]))?;
        let (values, vectors) = solve_connected(&sub, k.min(members.len()), seed)?;
        pairs.extend(values.iter().enumerate().map(|(j, &v)| (v, c, j)));
        solutions.push(vectors);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs.truncate(k);
    let mut vectors = DMatrix::zeros(n, k);
    for (col, &(_, c, j)) in pairs.iter().enumerate() {
        for (i, &x) in groups[c].iter().enumerate() {
            vectors[(x, col)] = solutions[c][(i, j)];
        }
    }
    Ok((pairs.iter().map(|p| p.0).collect(), vectors))
}

/// Rows of the spectral embedding: eigenvector rows scaled by `D^{-1/2}`
/// and normalized to unit length.
pub fn spectral_embedding(graph: &WeightedGraph, k: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let (_, vectors) = laplacian_eigenpairs(graph, k, seed)?;
    let isd = inv_sqrt_degrees(graph);
    Ok((0..graph.n())
        .map(|x| {
            let mut row: Vec<f64> = (0..k).map(|c| vectors[(x, c)] * isd[x]).collect();
            let norm = dot(&row, &row).sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|v| *v /= norm);
            }
            row
        })
        .collect())
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Result of a k-means run.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeans {
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub inertia: f64,
}

fn kmeans_once(data: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> KMeans {
    let n = data.len();
    // k-means++ seeding.
    let mut centers: Vec<Vec<f64>> = vec![data[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = data.iter().map(|x| sq_dist(x, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if r < w {
                    chosen = i;
                    break;
                }
                r -= w;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.push(data[pick].clone());
        for (i, x) in data.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(x, &centers[centers.len() - 1]));
        }
    }

    let dim = data[0].len();
    let mut labels = vec![usize::MAX; n];
    for _ in 0..KMEANS_ITERS {
        let mut changed = false;
        for (i, x) in data.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = sq_dist(x, center);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (x, &l) in data.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(x) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            } else {
                // Re-seed an empty cluster at the point farthest from its center.
                let far = (0..n)
                    .max_by(|&a, &b| {
                        sq_dist(&data[a], &centers[labels[a]])
                            .total_cmp(&sq_dist(&data[b], &centers[labels[b]]))
                            .then(b.cmp(&a))
                    })
                    .expect("nonempty data");
                centers[c] = data[far].clone();
                labels[far] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = data.iter().zip(&labels).map(|(x, &l)| sq_dist(x, &centers[l])).sum();
    KMeans { labels, centers, inertia }
}

/// k-means++ seeded Lloyd iterations, best of several restarts by inertia.
pub fn kmeans(data: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeans> {
    ensure!(!data.is_empty(), Parameter, "k-means needs data");
    ensure!(k >= 1 && k <= data.len(), Parameter, "k = {k} must lie in 1..={}", data.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeans> = None;
    for _ in 0..KMEANS_RESTARTS {
        let run = kmeans_once(data, k, &mut rng);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    best.ok_or_else(|| Error::Numeric("k-means produced no result".into()))
}

/// Spectral clustering of the graph into `k` clusters, as an indicator fuzzy cover.
pub fn spectral_init(graph: &WeightedGraph, k: usize, seed: u64) -> Result<FuzzyCover> {
    ensure!(k <= graph.n(), Parameter, "n_cov = {k} exceeds the number of points {}", graph.n());
    let embedding = spectral_embedding(graph, k, seed)?;
    ensure!(
        embedding.iter().flatten().all(|v| v.is_finite()),
        Numeric,
        "spectral embedding is not finite"
    );
    let clusters = kmeans(&embedding, k, seed)?;
    FuzzyCover::from_labels(&clusters.labels, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{knn_graph, sample_sphere};

    fn clique_pair(size: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for block in 0..2 {
            let off = block * size;
            for u in 0..size {
                for v in u + 1..size {
                    edges.push(Edge { u: off + u, v: off + v, w: 1.0 });
                }
            }
        }
        WeightedGraph::new(2 * size, edges).unwrap()
    }

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n - 1).map(|i| Edge { u: i, v: i + 1, w: 1.0 })).unwrap()
    }

    fn partition_of(g: &FuzzyCover) -> Vec<Vec<usize>> {
        let labels = g.argmax();
        let mut parts: Vec<Vec<usize>> = (0..g.k())
            .map(|c| (0..g.n()).filter(|&x| labels[x] == c).collect())
            .filter(|p: &Vec<usize>| !p.is_empty())
            .collect();
        parts.sort();
        parts
    }

    #[test]
    fn two_cliques_are_separated() {
        let g = spectral_init(&clique_pair(6), 2, 0).unwrap();
        assert_eq!(partition_of(&g), vec![(0..6).collect::<Vec<_>>(), (6..12).collect()]);
    }

    #[test]
    fn path_splits_into_contiguous_thirds() {
        // Oracle: the first three Laplacian eigenvectors of P9 order the path,
        // and the only balanced 3-means split of a monotone embedding is
        // contiguous. Frozen from a dense eigensolve + exhaustive 3-partition
        // check of contiguous splits.
        let g = spectral_init(&path(9), 3, 0).unwrap();
        assert_eq!(partition_of(&g), vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]);
    }

    #[test]
    fn initialization_is_deterministic() {
        let x = sample_sphere(2, 300, 4).unwrap();
        let graph = knn_graph(&x, 10).unwrap();
        assert_eq!(spectral_init(&graph, 5, 9).unwrap(), spectral_init(&graph, 5, 9).unwrap());
    }

    #[test]
    fn too_many_clusters_is_an_error() {
        assert!(spectral_init(&path(3), 4, 0).is_err());
    }

    #[test]
    fn isolated_vertices_do_not_break_the_embedding() {
        let g = WeightedGraph::new(5, [Edge { u: 0, v: 1, w: 1.0 }, Edge { u: 1, v: 2, w: 1.0 }]).unwrap();
        let cover = spectral_init(&g, 2, 0).unwrap();
        assert_eq!(cover.n(), 5);
    }

    #[test]
    fn lanczos_agrees_with_dense_solver() {
        let x = sample_sphere(2, 400, 2).unwrap();
        let graph = knn_graph(&x, 12).unwrap();
        let (dense_vals, dense_vecs) = sorted_eigen(SymmetricEigen::new(normalized_laplacian(&graph)), 4);
        let (lz_vals, lz_vecs) = lanczos_smallest(&graph, 4, 0).unwrap();
        for c in 0..4 {
            assert!((dense_vals[c] - lz_vals[c]).abs() < 1e-8, "{c}: {} vs {}", dense_vals[c], lz_vals[c]);
        }
        // The bottom eigenvector is simple; compare up to sign.
        let d = dense_vecs.column(0).dot(&lz_vecs.column(0)).abs();
        assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn componentwise_solution_matches_dense() {
        let g = clique_pair(5);
        let (vals, vecs) = laplacian_eigenpairs(&g, 3, 0).unwrap();
        let (dense_vals, _) = sorted_eigen(SymmetricEigen::new(normalized_laplacian(&g)), 3);
        for (a, b) in vals.iter().zip(&dense_vals) {
            assert!((a - b).abs() < 1e-10);
        }
        // Each returned vector is a unit eigenvector of the full Laplacian.
        let l = normalized_laplacian(&g);
        for c in 0..3 {
            let v = vecs.column(c);
            assert!((v.norm() - 1.0).abs() < 1e-10);
            assert!((&l * v - v * vals[c]).norm() < 1e-10);
        }
    }

    #[test]
    fn kmeans_recovers_separated_groups() {
        let mut data = Vec::new();
        for i in 0..20 {
            data.push(vec![i as f64 * 0.01, 0.0]);
            data.push(vec![10.0 + i as f64 * 0.01, 0.0]);
        }
        let km = kmeans(&data, 2, 3).unwrap();
        for i in 0..20 {
            assert_eq!(km.labels[2 * i], km.labels[0]);
            assert_eq!(km.labels[2 * i + 1], km.labels[1]);
        }
        assert_ne!(km.labels[0], km.labels[1]);
    }
}
