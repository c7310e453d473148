//! Point clouds, neighborhood graphs and samplers.

mod graph;
mod sampling;

pub use graph::{knn_graph, nearest_neighbors, umap_graph, Edge, Neighbor, WeightedGraph};
pub use sampling::{
    epsilon_net, furthest_point_subsample, sample_blobs, sample_circle, sample_sphere,
};

use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView1};

use crate::{ensure, Error, Result};

/// A finite set of points in Euclidean space, stored row-major (one point per row).
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Array2<f64>,
}

impl PointCloud {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        ensure!(points.nrows() >= 1, Parameter, "point cloud must contain at least one point");
        ensure!(points.ncols() >= 1, Parameter, "points must have at least one coordinate");
        ensure!(
            points.iter().all(|v| v.is_finite()),
            Domain,
            "point coordinates must be finite"
        );
        // Row slices rely on standard layout.
        let points = points.as_standard_layout().into_owned();
        Ok(Self { points })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        ensure!(!rows.is_empty(), Parameter, "point cloud must contain at least one point");
        let dim = rows[0].len();
        ensure!(
            rows.iter().all(|r| r.len() == dim),
            Parse,
            "ragged rows: expected {dim} coordinates per point"
        );
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let points = Array2::from_shape_vec((rows.len(), dim), flat)
            .map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(points)
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn point(&self, i: usize) -> ArrayView1<'_, f64> {
        self.points.row(i)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.points.as_slice().expect("standard layout")[i * d..(i + 1) * d]
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        euclidean(self.row(i), self.row(j))
    }

    /// Sub-cloud made of the given point indices, in order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let rows = self.points.select(ndarray::Axis(0), indices);
        PointCloud { points: rows }
    }

    /// Largest pairwise distance (brute force).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }

    /// Reads a headerless CSV with one point per row.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|field| {
                    field.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: `{field}` is not a number", line + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    /// Writes the cloud as headerless CSV using shortest round-trip float formatting.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for row in self.points.rows() {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
