use serde::{Deserialize, Serialize};

use crate::complex::Cover;
use crate::geometry::PointCloud;
use crate::{ensure, Result};

/// Closed intervals `[lo, hi]` sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCover {
    intervals: Vec<(f64, f64)>,
}

impl IntervalCover {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        ensure!(!intervals.is_empty(), Parameter, "interval cover needs at least one interval");
        for &(lo, hi) in &intervals {
            ensure!(lo.is_finite() && hi.is_finite() && lo < hi, Parameter, "bad interval [{lo}, {hi}]");
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn covers(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t <= hi)
    }

    /// Largest number of intervals sharing a common point.
    pub fn max_overlap(&self) -> usize {
        let mut best = 0;
        for &(t, _) in &self.intervals {
            best = best.max(self.intervals.iter().filter(|&&(lo, hi)| lo <= t && t <= hi).count());
        }
        best
    }
}

/// `k` intervals of equal length `ℓ` covering `[lo, hi]`, consecutive ones
/// overlapping in a fraction `gain` of their length:
/// `ℓ = (hi − lo) / (k − (k − 1)·gain)`.
pub fn uniform_cover(lo: f64, hi: f64, k: usize, gain: f64) -> Result<IntervalCover> {
    ensure!(k >= 1, Parameter, "need at least one interval");
    ensure!((0.0..1.0).contains(&gain), Parameter, "gain must lie in [0, 1), got {gain}");
    ensure!(lo.is_finite() && hi.is_finite() && lo <= hi, Parameter, "bad range [{lo}, {hi}]");
    // A degenerate range still gets intervals of positive length.
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let len = (hi - lo) / (k as f64 - (k as f64 - 1.0) * gain);
    let step = len * (1.0 - gain);
    let intervals = (0..k)
        .map(|i| {
            let a = lo + i as f64 * step;
            let b = if i + 1 == k { hi } else { a + len };
            (a, b)
        })
        .collect();
    IntervalCover::new(intervals)
}

/// Partitions a subset of the points (given by ids) into clusters.
pub trait Clusterer {
    fn cluster(&self, x: &PointCloud, ids: &[usize]) -> Vec<Vec<usize>>;
}

/// Connected components of the graph joining points at distance `<= cutoff`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleLinkage {
    pub cutoff: f64,
}

impl Clusterer for SingleLinkage {
    fn cluster(&self, x: &PointCloud, ids: &[usize]) -> Vec<Vec<usize>> {
        let n = ids.len();
        let mut label = vec![usize::MAX; n];
        let mut clusters = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let c = clusters.len();
            label[start] = c;
            let mut members = vec![ids[start]];
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for b in 0..n {
                    if label[b] == usize::MAX && x.dist(ids[a], ids[b]) <= self.cutoff {
                        label[b] = c;
                        members.push(ids[b]);
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            clusters.push(members);
        }
        clusters
    }
}

/// Density-based clustering: points with at least `min_pts` points
/// (themselves included) within `eps` are core points; core points within
/// `eps` of each other share a cluster, and other points join the cluster of
/// their first core neighbor. Points with no core neighbor become singleton
/// clusters so that the pulled-back cover stays total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dbscan {
    pub eps: f64,
    pub min_pts: usize,
}

impl Clusterer for Dbscan {
    fn cluster(&self, x: &PointCloud, ids: &[usize]) -> Vec<Vec<usize>> {
        let n = ids.len();
        let near: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).filter(|&b| x.dist(ids[a], ids[b]) <= self.eps).collect())
            .collect();
        let core: Vec<bool> = near.iter().map(|nb| nb.len() >= self.min_pts).collect();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if !core[start] || label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for &b in &near[a] {
                    if label[b] == usize::MAX {
                        label[b] = count;
                        if core[b] {
                            stack.push(b);
                        }
                    }
                }
            }
            count += 1;
        }
        for l in label.iter_mut() {
            if *l == usize::MAX {
                *l = count;
                count += 1;
            }
        }
        let mut clusters = vec![Vec::new(); count];
        for (a, &l) in label.iter().enumerate() {
            clusters[l].push(ids[a]);
        }
        clusters.iter_mut().for_each(|c| c.sort_unstable());
        clusters
    }
}

/// 1D Mapper: clusters of each interval preimage `f⁻¹([lo, hi])`, in
/// interval order. Empty preimages contribute nothing.
pub fn mapper_1d(
    x: &PointCloud,
    f: &[f64],
    cover: &IntervalCover,
    clusterer: &dyn Clusterer,
) -> Result<Cover> {
    ensure!(f.len() == x.len(), Parameter, "function has {} values for {} points", f.len(), x.len());
    ensure!(f.iter().all(|v| v.is_finite()), Domain, "function values must be finite");
    if let Some(t) = f.iter().find(|&&t| !cover.covers(t)) {
        return Err(crate::Error::Parameter(format!("interval cover misses function value {t}")));
    }
    let mut members = Vec::new();
    for &(lo, hi) in cover.intervals() {
        let pre: Vec<usize> = (0..x.len()).filter(|&i| lo <= f[i] && f[i] <= hi).collect();
        if pre.is_empty() {
            continue;
        }
        members.extend(clusterer.cluster(x, &pre));
    }
    Cover::new(x.len(), members)
}
