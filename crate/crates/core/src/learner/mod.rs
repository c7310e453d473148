//! Fuzzy cover learning: spectral initialization followed by Adam on the
//! combined loss of the matrix-parametrized cover.

mod adam;
mod param;
mod spectral;

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use adam::{adam_step, AdamState, BETA1, BETA2, EPSILON};
pub use param::{chain_gradient, cover_from_theta, pi_p, softmax_rows, theta_from_cover, Theta};
pub use spectral::{
    kmeans, laplacian_eigenpairs, normalized_laplacian, spectral_embedding, spectral_init, KMeans,
    DENSE_EIGEN_MAX_N,
};

use crate::complex::FuzzyCover;
use crate::geometry::{knn_graph, umap_graph, PointCloud, WeightedGraph};
use crate::losses::{LossEvaluator, LossValues, LossWeights};
use crate::persistence::H0Attribution;
use crate::{ensure, Result};

/// Neighborhood graph used for the losses and the initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    UnitKnn,
    #[default]
    Umap,
}

impl GraphKind {
    pub fn build(self, x: &PointCloud, n_neigh: usize) -> Result<WeightedGraph> {
        match self {
            GraphKind::UnitKnn => knn_graph(x, n_neigh),
            GraphKind::Umap => umap_graph(x, n_neigh),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnConfig {
    pub n_cov: usize,
    pub n_neigh: usize,
    pub reg: f64,
    pub lr: f64,
    pub n_epoch: usize,
    pub p: f64,
    pub lambda: f64,
    pub seed: u64,
    pub graph_kind: GraphKind,
    pub max_dim: usize,
    /// Scale of the initial lift `θ = margin · g₀`.
    pub margin: f64,
    /// Recompute the H₀ pairing every this many epochs and reuse it in
    /// between; 1 recomputes every epoch.
    pub persistence_refresh: usize,
    pub early_stop: bool,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            n_cov: 2,
            n_neigh: 15,
            reg: 10.0,
            lr: 0.1,
            n_epoch: 500,
            p: 5.0,
            lambda: 0.5,
            seed: 0,
            graph_kind: GraphKind::Umap,
            max_dim: 2,
            margin: 4.0,
            persistence_refresh: 1,
            early_stop: true,
        }
    }
}

impl LearnConfig {
    pub fn with_n_cov(n_cov: usize) -> Self {
        Self { n_cov, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.n_cov >= 1, Parameter, "n_cov must be positive");
        ensure!(self.n_neigh >= 2, Parameter, "n_neigh must be at least 2, got {}", self.n_neigh);
        ensure!(self.reg.is_finite() && self.reg >= 0.0, Parameter, "reg must be finite and >= 0");
        ensure!(self.lr.is_finite() && self.lr > 0.0, Parameter, "lr must be finite and > 0");
        ensure!(self.p.is_finite() && self.p >= 1.0, Parameter, "p must be finite and >= 1, got {}", self.p);
        ensure!((0.0..1.0).contains(&self.lambda), Parameter, "lambda must lie in [0, 1), got {}", self.lambda);
        ensure!(self.margin.is_finite(), Parameter, "margin must be finite");
        ensure!(self.persistence_refresh >= 1, Parameter, "persistence_refresh must be >= 1");
        Ok(())
    }
}

/// Seconds spent in each stage of a training run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub graph: f64,
    pub init: f64,
    pub optimize: f64,
    /// Mean seconds per epoch (0 when no epoch ran).
    pub per_epoch: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    /// Loss at the start of each epoch, before the Adam update.
    pub history: Vec<LossValues>,
    pub cover: FuzzyCover,
    pub timings: Timings,
    pub stopped_early: bool,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    epoch: usize,
    #[serde(flatten)]
    values: &'a LossValues,
}

impl TrainTrace {
    pub fn epochs_run(&self) -> usize {
        self.history.len()
    }

    /// One JSON object per epoch.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for (epoch, values) in self.history.iter().enumerate() {
            serde_json::to_writer(&mut out, &TraceLine { epoch, values })?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

const STOP_WINDOW: usize = 20;
const STOP_RTOL: f64 = 1e-7;

fn converged(history: &[LossValues]) -> bool {
    let Some(last) = history.last() else { return false };
    if history.len() <= STOP_WINDOW {
        return false;
    }
    let then = history[history.len() - 1 - STOP_WINDOW].total;
    (last.total - then).abs() <= STOP_RTOL * then.abs().max(f64::MIN_POSITIVE)
}

/// Learns a fuzzy cover of `x` from a given graph.
pub fn learn_on_graph(graph: &WeightedGraph, cfg: &LearnConfig) -> Result<(FuzzyCover, TrainTrace)> {
    cfg.validate()?;
    ensure!(
        graph.n() >= cfg.n_cov,
        Parameter,
        "n_cov = {} exceeds the number of points {}",
        cfg.n_cov,
        graph.n()
    );
    let mut timings = Timings::default();

    let start = Instant::now();
    let g0 = spectral_init(graph, cfg.n_cov, cfg.seed)?;
    let mut theta = theta_from_cover(&g0, cfg.margin);
    timings.init = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let evaluator = LossEvaluator::new(graph, cfg.n_cov, LossWeights::from_reg(cfg.reg))?;
    let mut state = AdamState::new(theta.0.dim());
    let mut history = Vec::with_capacity(cfg.n_epoch);
    let mut pairing: Vec<H0Attribution> = Vec::new();
    let mut stopped_early = false;
    for epoch in 0..cfg.n_epoch {
        let g = pi_p(&softmax_rows(&theta), cfg.p)?;
        let report = if epoch % cfg.persistence_refresh == 0 {
            let (report, fresh) = evaluator.evaluate(g.view())?;
            pairing = fresh;
            report
        } else {
            evaluator.evaluate_with_pairing(g.view(), &pairing)
        };
        ensure!(
            report.values.total.is_finite() && report.gradient.iter().all(|v| v.is_finite()),
            Numeric,
            "non-finite loss at epoch {epoch}: {:?}",
            report.values
        );
        history.push(report.values);
        let grad = chain_gradient(&theta, cfg.p, &report.gradient);
        adam_step(&mut theta.0, &grad, &mut state, cfg.lr);
        ensure!(theta.0.iter().all(|v| v.is_finite()), Numeric, "parameters diverged at epoch {epoch}");
        if cfg.early_stop && converged(&history) {
            stopped_early = true;
            break;
        }
    }
    timings.optimize = start.elapsed().as_secs_f64();
    if !history.is_empty() {
        timings.per_epoch = timings.optimize / history.len() as f64;
    }

    let cover = cover_from_theta(&theta)?;
    let trace = TrainTrace { history, cover: cover.clone(), timings, stopped_early };
    Ok((cover, trace))
}

/// Builds the neighborhood graph, initializes by spectral clustering and
/// minimizes `M + reg·G + T₀ + reg·R` over `π_p ∘ softmax ∘ θ` with Adam.
/// The returned cover is `π_∞ ∘ softmax ∘ θ`.
pub fn shape_discover(x: &PointCloud, cfg: &LearnConfig) -> Result<(FuzzyCover, TrainTrace)> {
    cfg.validate()?;
    ensure!(x.len() >= cfg.n_cov, Parameter, "n_cov = {} exceeds the number of points {}", cfg.n_cov, x.len());
    let start = Instant::now();
    let graph = cfg.graph_kind.build(x, cfg.n_neigh.min(x.len().saturating_sub(1)).max(1))?;
    let graph_secs = start.elapsed().as_secs_f64();
    let (cover, mut trace) = learn_on_graph(&graph, cfg)?;
    trace.timings.graph = graph_secs;
    Ok((cover, trace))
}
