use std::io::{Read, Write};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::{ensure, Error, Result};

/// A family of subsets of `{0, .., n-1}`. Members may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl Cover {
    /// Members are sorted and deduplicated; ids must be `< n`.
    pub fn new(n: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut members = members;
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
            if let Some(&last) = m.last() {
                ensure!(last < n, Invariant, "cover member contains id {last} >= n = {n}");
            }
        }
        Ok(Self { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices of nonempty members.
    pub fn nonempty(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, m)| !m.is_empty()).map(|(i, _)| i)
    }

    /// Whether the union of members is the whole ground set.
    pub fn is_total(&self) -> bool {
        let mut seen = vec![false; self.n];
        for m in &self.members {
            for &x in m {
                seen[x] = true;
            }
        }
        seen.into_iter().all(|b| b)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Cover = serde_json::from_str(text)?;
        Cover::new(raw.n, raw.members)
    }
}

/// A fuzzy cover: an `n × k` matrix with entries in `[0, 1]` whose rows
/// each attain the maximum value 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyCover {
    g: Array2<f64>,
}

/// Tolerance on the unit row maximum.
pub const ROW_MAX_TOL: f64 = 1e-9;

impl FuzzyCover {
    pub fn new(g: Array2<f64>) -> Result<Self> {
        ensure!(g.ncols() >= 1, Parameter, "fuzzy cover needs at least one member");
        for (x, row) in g.rows().into_iter().enumerate() {
            let mut max = f64::NEG_INFINITY;
            for &v in row {
                ensure!(
                    (0.0..=1.0).contains(&v),
                    Domain,
                    "fuzzy cover entry {v} at row {x} is outside [0, 1]"
                );
                max = max.max(v);
            }
            ensure!(
                (max - 1.0).abs() <= ROW_MAX_TOL,
                Invariant,
                "row {x} of fuzzy cover has maximum {max}, expected 1"
            );
        }
        Ok(Self { g })
    }

    /// Indicator fuzzy cover of a labelling into `k` classes.
    pub fn from_labels(labels: &[usize], k: usize) -> Result<Self> {
        ensure!(
            labels.iter().all(|&l| l < k),
            Parameter,
            "label out of range for k = {k}"
        );
        let mut g = Array2::zeros((labels.len(), k));
        for (x, &l) in labels.iter().enumerate() {
            g[[x, l]] = 1.0;
        }
        Self::new(g)
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.g
    }

    pub fn into_matrix(self) -> Array2<f64> {
        self.g
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    /// Number of cover members.
    pub fn k(&self) -> usize {
        self.g.ncols()
    }

    /// Index of the largest membership in each row (first on ties).
    pub fn argmax(&self) -> Vec<usize> {
        self.g
            .rows()
            .into_iter()
            .map(|row| {
                let mut best = 0;
                for (i, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = i;
                    }
                }
                best
            })
            .collect()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let cloud = crate::geometry::PointCloud::read_csv(reader)?;
        Self::new(cloud.points().clone())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    /// Headerless CSV, `n` rows × `k` columns.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for row in self.g.rows() {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(out, "{}", line.join(",")).map_err(Error::from)?;
        }
        Ok(())
    }
}

/// Strict suplevel cover: member `i` is `{x : g[x, i] > lambda}`.
pub fn threshold(g: &FuzzyCover, lambda: f64) -> Result<Cover> {
    ensure!(
        (0.0..1.0).contains(&lambda),
        Parameter,
        "threshold must lie in [0, 1), got {lambda}"
    );
    let members = (0..g.k())
        .map(|i| {
            g.g.column(i)
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v > lambda)
                .map(|(x, _)| x)
                .collect()
        })
        .collect();
    Cover::new(g.n(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn partition_indicator_thresholds_to_partition() {
        let g = FuzzyCover::from_labels(&[0, 1, 1, 0, 2], 3).unwrap();
        for lambda in [0.01, 0.5, 0.99] {
            let c = threshold(&g, lambda).unwrap();
            assert_eq!(c.members(), &[vec![0, 3], vec![1, 2], vec![4]]);
            assert!(c.is_total());
        }
    }

    #[test]
    fn threshold_is_strict() {
        let g = FuzzyCover::new(array![[1.0, 0.6], [0.5, 1.0]]).unwrap();
        let c = threshold(&g, 0.5).unwrap();
        assert_eq!(c.members(), &[vec![0], vec![0, 1]]);
    }

    #[test]
    fn zero_threshold_keeps_supports() {
        let g = FuzzyCover::new(array![[1.0, 0.0, 0.2], [0.3, 1.0, 0.0]]).unwrap();
        let c = threshold(&g, 0.0).unwrap();
        assert_eq!(c.members(), &[vec![0, 1], vec![1], vec![0]]);
        assert!(c.is_total());
    }

    #[test]
    fn threshold_rejects_lambda_one() {
        let g = FuzzyCover::from_labels(&[0], 1).unwrap();
        assert!(matches!(threshold(&g, 1.0), Err(Error::Parameter(_))));
        assert!(threshold(&g, -0.1).is_err());
    }

    #[test]
    fn fuzzy_cover_requires_unit_row_max() {
        assert!(FuzzyCover::new(array![[0.9, 0.2]]).is_err());
        assert!(FuzzyCover::new(array![[1.0, 1.2]]).is_err());
        assert!(FuzzyCover::new(array![[1.0 - 1e-12, 0.2]]).is_ok());
    }

    #[test]
    fn cover_json_round_trip() {
        let c = Cover::new(4, vec![vec![2, 0], vec![], vec![3, 1, 1]]).unwrap();
        assert_eq!(c.members()[2], vec![1, 3]);
        let text = c.to_json().unwrap();
        assert_eq!(Cover::from_json(&text).unwrap(), c);
        assert!(Cover::new(2, vec![vec![2]]).is_err());
    }
}
