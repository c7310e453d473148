//! Discrete loss estimators on a neighborhood graph and their gradients.
//!
//! For a membership matrix `g` (`n × k`) and graph `G` with total weight `W`:
//!
//! ```text
//! M(g) = η_M Σ_i (Σ_x g_i(x))²                      η_M = 1 / (k n²)
//! G(g) = η_G Σ_i (Σ_(x,y) w |g_i(x) - g_i(y)|)²     η_G = 1 / (k W²)
//! T(g) = η_T Σ_i ‖g_i‖²_H0                          η_T = 1 / (k n)
//! R(g) = η_R Σ_i Σ_(x,y) w |g_i(x) - g_i(y)|²       η_R = 1 / (k W)
//! ```
//!
//! `‖g_i‖_H0` is the total persistence of the reduced 0-dimensional suplevel
//! barcode of column `i` on `G`.

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::WeightedGraph;
use crate::persistence::{h0_subgradient, h0_suplevel, H0Attribution};
use crate::{ensure, Result};

/// Normalization constants; they depend only on the graph and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub eta_m: f64,
    pub eta_g: f64,
    pub eta_t: f64,
    pub eta_r: f64,
}

impl Normalization {
    pub fn new(graph: &WeightedGraph, k: usize) -> Self {
        let n = graph.n() as f64;
        let k = k as f64;
        let w = graph.total_weight();
        // An edgeless graph makes the edge losses identically zero.
        let (eta_g, eta_r) = if w > 0.0 { (1.0 / (k * w * w), 1.0 / (k * w)) } else { (0.0, 0.0) };
        Self { eta_m: 1.0 / (k * n * n), eta_g, eta_t: 1.0 / (k * n), eta_r }
    }
}

/// Weights of the four terms in the combined objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub alpha_m: f64,
    pub alpha_g: f64,
    pub alpha_t: f64,
    pub alpha_r: f64,
}

impl LossWeights {
    /// `M + reg·G + T + reg·R`.
    pub fn from_reg(reg: f64) -> Self {
        Self { alpha_m: 1.0, alpha_g: reg, alpha_t: 1.0, alpha_r: reg }
    }

    fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("alpha_m", self.alpha_m),
            ("alpha_g", self.alpha_g),
            ("alpha_t", self.alpha_t),
            ("alpha_r", self.alpha_r),
        ] {
            ensure!(a.is_finite() && a >= 0.0, Parameter, "{name} must be finite and >= 0, got {a}");
        }
        Ok(())
    }
}

/// Scalar part of a loss evaluation; one JSON line per epoch in training logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossValues {
    pub m: f64,
    pub g_loss: f64,
    pub t0: f64,
    pub r: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub values: LossValues,
    /// Gradient of `total` with respect to the entries of `g`.
    pub gradient: Array2<f64>,
}

pub fn measure_loss(g: ArrayView2<'_, f64>, eta_m: f64) -> (f64, Array2<f64>) {
    let sums = g.sum_axis(ndarray::Axis(0));
    let value = eta_m * sums.iter().map(|s| s * s).sum::<f64>();
    let mut grad = Array2::zeros(g.raw_dim());
    for mut row in grad.rows_mut() {
        for (gi, s) in row.iter_mut().zip(sums.iter()) {
            *gi = eta_m * 2.0 * s;
        }
    }
    (value, grad)
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn geometry_loss(
    g: ArrayView2<'_, f64>,
    graph: &WeightedGraph,
    eta_g: f64,
) -> (f64, Array2<f64>) {
    let k = g.ncols();
    let mut grad = Array2::zeros(g.raw_dim());
    let mut value = 0.0;
    for i in 0..k {
        let col = g.column(i);
        let s: f64 = graph.edges().iter().map(|e| e.w * (col[e.u] - col[e.v]).abs()).sum();
        value += s * s;
        let scale = eta_g * 2.0 * s;
        if scale == 0.0 {
            continue;
        }
        for e in graph.edges() {
            let d = scale * e.w * sign(col[e.u] - col[e.v]);
            grad[[e.u, i]] += d;
            grad[[e.v, i]] -= d;
        }
    }
    (eta_g * value, grad)
}

pub fn regularization_loss(
    g: ArrayView2<'_, f64>,
    graph: &WeightedGraph,
    eta_r: f64,
) -> (f64, Array2<f64>) {
    let k = g.ncols();
    let mut grad = Array2::zeros(g.raw_dim());
    let mut value = 0.0;
    for i in 0..k {
        let col = g.column(i);
        for e in graph.edges() {
            let d = col[e.u] - col[e.v];
            value += e.w * d * d;
            let step = eta_r * 2.0 * e.w * d;
            grad[[e.u, i]] += step;
            grad[[e.v, i]] -= step;
        }
    }
    (eta_r * value, grad)
}

/// Per-column H₀ evaluation: `(total persistence, attribution)`.
pub(crate) fn column_persistence(
    g: ArrayView2<'_, f64>,
    graph: &WeightedGraph,
) -> Result<Vec<(f64, H0Attribution)>> {
    (0..g.ncols())
        .into_par_iter()
        .map(|i| {
            let col: Vec<f64> = g.column(i).to_vec();
            h0_suplevel(graph, &col)
        })
        .collect()
}

fn topology_from_attributions(
    g: ArrayView2<'_, f64>,
    per_column: &[(f64, H0Attribution)],
    eta_t: f64,
) -> (f64, Array2<f64>) {
    let n = g.nrows();
    let mut grad = Array2::zeros(g.raw_dim());
    let mut value = 0.0;
    for (i, (total, att)) in per_column.iter().enumerate() {
        value += total * total;
        if *total == 0.0 {
            continue;
        }
        let sub = h0_subgradient(att, n);
        for (x, s) in sub.into_iter().enumerate() {
            if s != 0.0 {
                grad[[x, i]] += eta_t * 2.0 * total * s;
            }
        }
    }
    (eta_t * value, grad)
}

pub fn topology_loss(
    g: ArrayView2<'_, f64>,
    graph: &WeightedGraph,
    eta_t: f64,
) -> Result<(f64, Array2<f64>)> {
    ensure!(g.nrows() == graph.n(), Parameter, "matrix has {} rows, graph {} vertices", g.nrows(), graph.n());
    let per_column = column_persistence(g, graph)?;
    Ok(topology_from_attributions(g, &per_column, eta_t))
}

/// Evaluates the weighted objective with cached normalization constants.
#[derive(Debug, Clone)]
pub struct LossEvaluator<'a> {
    graph: &'a WeightedGraph,
    weights: LossWeights,
    norm: Normalization,
}

impl<'a> LossEvaluator<'a> {
    pub fn new(graph: &'a WeightedGraph, k: usize, weights: LossWeights) -> Result<Self> {
        weights.validate()?;
        Ok(Self { graph, weights, norm: Normalization::new(graph, k) })
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    /// Full evaluation; also returns the per-column persistence pairing.
    pub fn evaluate(&self, g: ArrayView2<'_, f64>) -> Result<(LossReport, Vec<H0Attribution>)> {
        ensure!(
            g.nrows() == self.graph.n(),
            Parameter,
            "matrix has {} rows, graph {} vertices",
            g.nrows(),
            self.graph.n()
        );
        let per_column = if self.weights.alpha_t > 0.0 {
            column_persistence(g, self.graph)?
        } else {
            vec![(0.0, H0Attribution::default()); g.ncols()]
        };
        let report = self.assemble(g, &per_column);
        Ok((report, per_column.into_iter().map(|(_, a)| a).collect()))
    }

    /// Evaluation with the H₀ pairing held fixed (big-step reuse between
    /// persistence refreshes).
    pub fn evaluate_with_pairing(
        &self,
        g: ArrayView2<'_, f64>,
        pairing: &[H0Attribution],
    ) -> LossReport {
        let cols: Vec<f64> = (0..g.ncols())
            .map(|i| pairing[i].total_at(&g.column(i).to_vec()))
            .collect();
        let per_column: Vec<(f64, H0Attribution)> =
            cols.into_iter().zip(pairing.iter().cloned()).collect();
        self.assemble(g, &per_column)
    }

    fn assemble(&self, g: ArrayView2<'_, f64>, per_column: &[(f64, H0Attribution)]) -> LossReport {
        let w = self.weights;
        let (m, gm) = measure_loss(g, self.norm.eta_m);
        let (gl, gg) = geometry_loss(g, self.graph, self.norm.eta_g);
        let (t0, gt) = topology_from_attributions(g, per_column, self.norm.eta_t);
        let (r, gr) = regularization_loss(g, self.graph, self.norm.eta_r);
        let total = w.alpha_m * m + w.alpha_g * gl + w.alpha_t * t0 + w.alpha_r * r;
        let gradient = gm * w.alpha_m + gg * w.alpha_g + gt * w.alpha_t + gr * w.alpha_r;
        LossReport { values: LossValues { m, g_loss: gl, t0, r, total }, gradient }
    }
}

/// Weighted sum of the four losses with normalization computed from `(graph, k)`.
pub fn combined_loss(
    g: ArrayView2<'_, f64>,
    graph: &WeightedGraph,
    weights: LossWeights,
) -> Result<LossReport> {
    Ok(LossEvaluator::new(graph, g.ncols(), weights)?.evaluate(g)?.0)
}
