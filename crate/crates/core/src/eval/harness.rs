use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{complex_size, homology_recovery_quotient, BettiTarget};
use crate::baselines::{vietoris_rips, witness_v0};
use crate::complex::{fuzzy_nerve_filtration, FilteredComplex};
use crate::geometry::{furthest_point_subsample, sample_blobs, sample_sphere, PointCloud};
use crate::learner::{shape_discover, LearnConfig};
use crate::persistence::reduce_barcode;
use crate::{ensure, Result};

/// A point cloud to evaluate on: a seeded synthetic sample or a CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatasetSpec {
    /// Uniform sample of the unit `dim`-sphere in `R^(dim+1)`.
    Sphere { dim: usize, n: usize, seed: u64 },
    /// Gaussian blobs with unit standard deviation.
    Blobs { n: usize, centers: Vec<Vec<f64>>, seed: u64 },
    File { path: PathBuf },
}

impl DatasetSpec {
    pub fn load(&self) -> Result<PointCloud> {
        match self {
            DatasetSpec::Sphere { dim, n, seed } => sample_sphere(*dim, *n, *seed),
            DatasetSpec::Blobs { n, centers, seed } => Ok(sample_blobs(*n, centers, 1.0, *seed)?.0),
            DatasetSpec::File { path } => PointCloud::load(path),
        }
    }

    /// Short label used in report rows.
    pub fn name(&self) -> String {
        match self {
            DatasetSpec::Sphere { dim: 1, n, .. } => format!("circle-{n}"),
            DatasetSpec::Sphere { dim, n, .. } => format!("sphere{dim}-{n}"),
            DatasetSpec::Blobs { n, centers, .. } => format!("blobs{}-{n}", centers.len()),
            DatasetSpec::File { path } => path.display().to_string(),
        }
    }
}

/// How a complex with a given vertex budget is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MethodSpec {
    /// Learned cover with `n_cov = budget`; the remaining hyperparameters
    /// come from `config`.
    ShapeDiscover {
        #[serde(default)]
        config: LearnConfig,
    },
    /// Vietoris–Rips on a furthest-point subsample of `budget` points.
    Rips,
    /// Witness complex (`v = 0`) on `budget` furthest-point landmarks.
    Witness,
}

impl MethodSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::ShapeDiscover { .. } => "shape_discover",
            MethodSpec::Rips => "rips",
            MethodSpec::Witness => "witness",
        }
    }
}

/// One cell of the comparison table (medians over the runs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub method: String,
    pub dataset: String,
    pub budget: usize,
    pub vertices: usize,
    pub simplices: usize,
    pub quotient: f64,
    pub seconds: f64,
    /// Median seconds per stage, in execution order.
    pub stages: Vec<(String, f64)>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

struct Run {
    complex: FilteredComplex,
    stages: Vec<(String, f64)>,
}

fn build(x: &PointCloud, method: &MethodSpec, budget: usize, max_dim: usize, seed: u64) -> Result<Run> {
    let mut stages = Vec::new();
    let complex = match method {
        MethodSpec::ShapeDiscover { config } => {
            let cfg = LearnConfig { n_cov: budget, seed, max_dim, ..config.clone() };
            let (cover, trace) = shape_discover(x, &cfg)?;
            stages.push(("graph".to_string(), trace.timings.graph));
            stages.push(("init".to_string(), trace.timings.init));
            stages.push(("optimize".to_string(), trace.timings.optimize));
            let start = Instant::now();
            let k = fuzzy_nerve_filtration(&cover, max_dim)?;
            stages.push(("nerve".to_string(), start.elapsed().as_secs_f64()));
            k
        }
        MethodSpec::Rips | MethodSpec::Witness => {
            let start = Instant::now();
            let landmarks = furthest_point_subsample(x, budget, seed)?;
            stages.push(("subsample".to_string(), start.elapsed().as_secs_f64()));
            let start = Instant::now();
            let k = if matches!(method, MethodSpec::Rips) {
                vietoris_rips(&x.select(&landmarks), max_dim, f64::INFINITY)?
            } else {
                witness_v0(x, &landmarks, max_dim)?
            };
            stages.push(("complex".to_string(), start.elapsed().as_secs_f64()));
            k
        }
    };
    Ok(Run { complex, stages })
}

/// Runs `method` at the given vertex budget `runs` times (seeds `seed`,
/// `seed + 1`, …), computes each barcode up to the target's dimension and
/// reports medians of the quotient, sizes and timings. The complex is
/// built up to dimension `max_dim`, by default one more than the highest
/// target degree.
#[allow(clippy::too_many_arguments)]
pub fn inference_harness(
    x: &PointCloud,
    dataset: &str,
    method: &MethodSpec,
    budget: usize,
    target: &BettiTarget,
    runs: usize,
    seed: u64,
    max_dim: Option<usize>,
) -> Result<HarnessReport> {
    ensure!(runs >= 1, Parameter, "harness needs at least one run");
    ensure!(budget >= 1, Parameter, "vertex budget must be positive");
    let max_dim = max_dim.unwrap_or(target.betti().len());
    let hom_dim = target.betti().len() - 1;
    let mut quotients = Vec::new();
    let mut vertices = Vec::new();
    let mut simplices = Vec::new();
    let mut seconds = Vec::new();
    let mut stage_times: Vec<(String, Vec<f64>)> = Vec::new();
    for r in 0..runs {
        let start = Instant::now();
        let mut run = build(x, method, budget, max_dim, seed + r as u64)?;
        let t = Instant::now();
        let barcode = reduce_barcode(&run.complex, hom_dim);
        run.stages.push(("barcode".to_string(), t.elapsed().as_secs_f64()));
        seconds.push(start.elapsed().as_secs_f64());
        quotients.push(homology_recovery_quotient(&barcode, target).value);
        let (v, s) = complex_size(&run.complex);
        vertices.push(v as f64);
        simplices.push(s as f64);
        for (i, (name, secs)) in run.stages.into_iter().enumerate() {
            if stage_times.len() <= i {
                stage_times.push((name, Vec::new()));
            }
            stage_times[i].1.push(secs);
        }
    }
    Ok(HarnessReport {
        method: method.name().to_string(),
        dataset: dataset.to_string(),
        budget,
        vertices: median(vertices).round() as usize,
        simplices: median(simplices).round() as usize,
        quotient: median(quotients),
        seconds: median(seconds),
        stages: stage_times.into_iter().map(|(n, v)| (n, median(v))).collect(),
    })
}

/// Deterministic part of the table: `method,dataset,budget,vertices,simplices,quotient`.
pub fn write_report_csv<W: Write>(reports: &[HarnessReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "dataset", "budget", "vertices", "simplices", "quotient"])?;
    for r in reports {
        w.write_record([
            r.method.clone(),
            r.dataset.clone(),
            r.budget.to_string(),
            r.vertices.to_string(),
            r.simplices.to_string(),
            r.quotient.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Wall-clock part of the table: one row per cell and stage, plus a
/// `total` row per cell.
pub fn write_timings_csv<W: Write>(reports: &[HarnessReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "dataset", "budget", "stage", "seconds"])?;
    for r in reports {
        let rows = r.stages.iter().map(|(s, t)| (s.as_str(), *t)).chain([("total", r.seconds)]);
        for (stage, secs) in rows {
            w.write_record([
                r.method.clone(),
                r.dataset.clone(),
                r.budget.to_string(),
                stage.to_string(),
                format!("{secs:.6}"),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> PointCloud {
        crate::geometry::sample_circle(120, 1).unwrap()
    }

    #[test]
    fn rips_on_circle_recovers_loop() {
        let t = BettiTarget::new(vec![1, 1]).unwrap();
        let r = inference_harness(&circle(), "circle", &MethodSpec::Rips, 30, &t, 3, 0, None).unwrap();
        assert!(r.quotient > 0.0);
        assert_eq!(r.vertices, 30);
        assert_eq!(r.stages.iter().map(|s| s.0.as_str()).collect::<Vec<_>>(), ["subsample", "complex", "barcode"]);
    }

    #[test]
    fn single_vertex_budget() {
        let x = circle();
        for method in [MethodSpec::Rips, MethodSpec::Witness] {
            let point = BettiTarget::new(vec![1, 0]).unwrap();
            let r = inference_harness(&x, "circle", &method, 1, &point, 1, 0, None).unwrap();
            assert_eq!((r.vertices, r.simplices), (1, 1));
            // A single vertex has no finite bar, so the window is empty.
            assert_eq!(r.quotient, 0.0);
        }
    }

    #[test]
    fn witness_on_circle_recovers_loop() {
        let t = BettiTarget::new(vec![1, 1]).unwrap();
        let r = inference_harness(&circle(), "circle", &MethodSpec::Witness, 12, &t, 1, 0, None).unwrap();
        assert!(r.quotient > 0.0);
    }

    #[test]
    fn report_csv_shape() {
        let t = BettiTarget::new(vec![1, 1]).unwrap();
        let x = circle();
        let reports = vec![
            inference_harness(&x, "circle", &MethodSpec::Rips, 10, &t, 1, 0, None).unwrap(),
            inference_harness(&x, "circle", &MethodSpec::Witness, 10, &t, 1, 0, None).unwrap(),
        ];
        let mut buf = Vec::new();
        write_report_csv(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("method,dataset,budget,vertices,simplices,quotient\n"));
        let mut buf = Vec::new();
        write_timings_csv(&reports, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 2 * 4);
    }

    #[test]
    fn dataset_specs_parse_from_toml() {
        let d: DatasetSpec = toml::from_str("kind = \"sphere\"\ndim = 2\nn = 50\nseed = 3").unwrap();
        assert_eq!(d.name(), "sphere2-50");
        assert_eq!(d.load().unwrap().len(), 50);
        let m: MethodSpec = toml::from_str("method = \"shape_discover\"\n[config]\nn_epoch = 3").unwrap();
        match m {
            MethodSpec::ShapeDiscover { config } => assert_eq!(config.n_epoch, 3),
            other => panic!("{other:?}"),
        }
    }
}
