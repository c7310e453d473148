use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::PointCloud;
use crate::{ensure, Result};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points on the unit sphere `S^dim ⊂ R^{dim+1}` (normalized Gaussians).
pub fn sample_sphere(dim: usize, n: usize, seed: u64) -> Result<PointCloud> {
    ensure!(n >= 1, Parameter, "need at least one point");
    ensure!(dim >= 1, Parameter, "sphere dimension must be at least 1");
    let ambient = dim + 1;
    let mut rng = rng(seed);
    let mut data = Vec::with_capacity(n * ambient);
    for _ in 0..n {
        loop {
            let v: Vec<f64> = (0..ambient).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                data.extend(v.iter().map(|x| x / norm));
                break;
            }
        }
    }
    PointCloud::new(Array2::from_shape_vec((n, ambient), data).expect("shape"))
}

/// Uniform sample of the unit circle in the plane.
pub fn sample_circle(n: usize, seed: u64) -> Result<PointCloud> {
    sample_sphere(1, n, seed)
}

/// Isotropic Gaussian blobs around `centers`; points are split as evenly as
/// possible, blob by blob. Returns the cloud and each point's blob label.
pub fn sample_blobs(
    n: usize,
    centers: &[Vec<f64>],
    std_dev: f64,
    seed: u64,
) -> Result<(PointCloud, Vec<usize>)> {
    ensure!(!centers.is_empty(), Parameter, "need at least one blob center");
    ensure!(n >= centers.len(), Parameter, "need at least one point per blob");
    ensure!(std_dev > 0.0, Parameter, "blob standard deviation must be positive");
    let dim = centers[0].len();
    ensure!(centers.iter().all(|c| c.len() == dim), Parameter, "centers differ in dimension");
    let normal = Normal::new(0.0, std_dev).expect("positive std");
    let mut rng = rng(seed);
    let mut data = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    let k = centers.len();
    for (b, c) in centers.iter().enumerate() {
        let count = n / k + usize::from(b < n % k);
        for _ in 0..count {
            data.extend(c.iter().map(|m| m + normal.sample(&mut rng)));
            labels.push(b);
        }
    }
    Ok((PointCloud::new(Array2::from_shape_vec((n, dim), data).expect("shape"))?, labels))
}

/// Greedy `eps`-net: points are visited in a seeded random order and kept
/// when they are farther than `eps` from every point kept so far.
pub fn epsilon_net(x: &PointCloud, eps: f64, seed: u64) -> Result<Vec<usize>> {
    ensure!(eps > 0.0 && eps.is_finite(), Parameter, "eps must be positive, got {eps}");
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.shuffle(&mut rng(seed));
    let mut net: Vec<usize> = Vec::new();
    for i in order {
        if net.iter().all(|&y| x.dist(i, y) > eps) {
            net.push(i);
        }
    }
    Ok(net)
}

/// Furthest-point (max-min) subsample of size `m`. The first point is drawn
/// from `seed`; ties are broken toward the smallest index.
pub fn furthest_point_subsample(x: &PointCloud, m: usize, seed: u64) -> Result<Vec<usize>> {
    let n = x.len();
    ensure!(m >= 1 && m <= n, Parameter, "subsample size {m} must lie in 1..={n}");
    let first = rng(seed).random_range(0..n);
    let mut chosen = vec![first];
    let mut min_dist: Vec<f64> = (0..n).map(|i| x.dist(i, first)).collect();
    min_dist[first] = f64::NEG_INFINITY;
    while chosen.len() < m {
        let mut best = usize::MAX;
        for i in 0..n {
            if min_dist[i] == f64::NEG_INFINITY {
                continue;
            }
            if best == usize::MAX || min_dist[i] > min_dist[best] {
                best = i;
            }
        }
        chosen.push(best);
        min_dist[best] = f64::NEG_INFINITY;
        for i in 0..n {
            if min_dist[i] != f64::NEG_INFINITY {
                min_dist[i] = min_dist[i].min(x.dist(i, best));
            }
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_points_have_unit_norm() {
        for dim in [2, 3] {
            let x = sample_sphere(dim, 500, 7).unwrap();
            assert_eq!(x.dim(), dim + 1);
            for i in 0..x.len() {
                let norm = x.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_sample_mean_vanishes() {
        let x = sample_sphere(2, 10_000, 11).unwrap();
        for c in 0..3 {
            let mean = x.points().column(c).sum() / 10_000.0;
            assert!(mean.abs() < 0.05, "coordinate {c} mean {mean}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_sphere(3, 50, 5).unwrap(), sample_sphere(3, 50, 5).unwrap());
        assert_ne!(sample_sphere(3, 50, 5).unwrap(), sample_sphere(3, 50, 6).unwrap());
    }

    #[test]
    fn net_with_huge_eps_is_a_single_point() {
        let x = sample_sphere(2, 80, 0).unwrap();
        assert_eq!(epsilon_net(&x, 2.5, 3).unwrap().len(), 1);
    }

    #[test]
    fn net_keeps_both_far_points() {
        let x = PointCloud::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let mut net = epsilon_net(&x, 0.5, 0).unwrap();
        net.sort();
        assert_eq!(net, vec![0, 1]);
    }

    #[test]
    fn grid_net_is_separated_and_covering() {
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|i| vec![(i % 10) as f64 / 9.0, (i / 10) as f64 / 9.0])
            .collect();
        let x = PointCloud::from_rows(&rows).unwrap();
        for seed in 0..5 {
            let net = epsilon_net(&x, 0.3, seed).unwrap();
            for (a, &i) in net.iter().enumerate() {
                for &j in &net[a + 1..] {
                    assert!(x.dist(i, j) > 0.3);
                }
            }
            for p in 0..x.len() {
                assert!(net.iter().any(|&y| x.dist(p, y) <= 0.3));
            }
            // Maximality: no further point could be added.
            for p in 0..x.len() {
                if !net.contains(&p) {
                    assert!(net.iter().any(|&y| x.dist(p, y) <= 0.3));
                }
            }
        }
    }

    #[test]
    fn furthest_point_full_permutation() {
        let x = sample_sphere(2, 20, 1).unwrap();
        let mut idx = furthest_point_subsample(&x, 20, 4).unwrap();
        idx.sort();
        assert_eq!(idx, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn furthest_point_square_picks_diagonal() {
        let x = PointCloud::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        // Find a seed whose first draw is corner 0.
        let seed = (0..1000u64).find(|&s| rng(s).random_range(0..4) == 0).unwrap();
        assert_eq!(furthest_point_subsample(&x, 2, seed).unwrap(), vec![0, 2]);
    }

    #[test]
    fn furthest_point_matches_exhaustive_argmax() {
        let x = sample_sphere(2, 10, 9).unwrap();
        let got = furthest_point_subsample(&x, 3, 2).unwrap();
        let mut chosen = vec![got[0]];
        for _ in 1..3 {
            let mut best: Option<(f64, usize)> = None;
            for i in 0..10 {
                if chosen.contains(&i) {
                    continue;
                }
                let d = chosen.iter().map(|&c| x.dist(i, c)).fold(f64::INFINITY, f64::min);
                if best.is_none_or(|(bd, _)| d > bd) {
                    best = Some((d, i));
                }
            }
            chosen.push(best.unwrap().1);
        }
        assert_eq!(got, chosen);
    }

    #[test]
    fn blobs_are_labelled_evenly() {
        let (x, labels) = sample_blobs(7, &[vec![0.0, 0.0], vec![5.0, 0.0]], 0.1, 0).unwrap();
        assert_eq!(x.len(), 7);
        assert_eq!(labels.iter().filter(|&&l| l == 0).count(), 4);
    }
}
