use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::manifest::{sha256_file, sha256_hex, write_atomic, FileRecord, OutputRecord, RunManifest};
use super::{
    BarcodeArgs, BarcodeSource, BenchArgs, Command, CoverArgs, GenArgs, GenKind, GraphArg, HrqArgs,
    NerveArgs, NerveFormat, EXIT_MISMATCH, EXIT_OK,
};
use crate::baselines::{ball_mapper, vietoris_rips, witness_v0};
use crate::complex::{fuzzy_nerve_filtration, nerve, threshold, Cover, FuzzyCover, NerveGraph};
use crate::eval::{
    homology_recovery_quotient, inference_harness, write_report_csv, write_timings_csv, BettiTarget,
    DatasetSpec, MethodSpec,
};
use crate::geometry::{epsilon_net, furthest_point_subsample, sample_blobs, sample_sphere, PointCloud};
use crate::learner::{shape_discover, GraphKind, LearnConfig};
use crate::persistence::{reduce_barcode, Barcode};
use crate::{ensure, Error, Result};

/// Centers of the `gen blobs` dataset (unit standard deviation).
pub const BLOB_CENTERS: [[f64; 2]; 2] = [[0.0, 0.0], [10.0, 0.0]];

struct Output {
    path: PathBuf,
    bytes: Vec<u8>,
    reproducible: bool,
}

#[derive(Default)]
struct Execution {
    inputs: Vec<PathBuf>,
    outputs: Vec<Output>,
    manifest: Option<PathBuf>,
    seed: Option<u64>,
}

impl Execution {
    fn output(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.outputs.push(Output { path, bytes, reproducible: true });
    }
}

fn manifest_beside(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    path.with_file_name(name)
}

fn execute(command: &Command) -> Result<Execution> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Cover(a) => cover(a),
        Command::Nerve(a) => nerve_cmd(a),
        Command::Barcode(a) => barcode(a),
        Command::Hrq(a) => hrq(a),
        Command::Bench(a) => bench(a),
        Command::Replay(_) => Err(Error::Parameter("a manifest cannot record a replay".into())),
    }
}

/// Writes every output atomically and returns the manifest (also written).
fn commit(command: Command, exec: Execution) -> Result<Option<RunManifest>> {
    let mut outputs = Vec::new();
    for out in &exec.outputs {
        write_atomic(&out.path, &out.bytes)?;
        outputs.push(OutputRecord {
            path: out.path.clone(),
            sha256: out.reproducible.then(|| sha256_hex(&out.bytes)),
        });
    }
    let Some(path) = exec.manifest else { return Ok(None) };
    let inputs = exec
        .inputs
        .iter()
        .map(|p| Ok(FileRecord { path: p.clone(), sha256: sha256_file(p)? }))
        .collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest {
        tool: "covercraft".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: exec.seed,
        command,
        inputs,
        outputs,
    };
    write_atomic(&path, manifest.to_json()?.as_bytes())?;
    Ok(Some(manifest))
}

pub(super) fn run_recorded(command: Command) -> Result<Option<RunManifest>> {
    let exec = execute(&command)?;
    commit(command, exec)
}

pub(super) fn replay(manifest_path: &Path) -> Result<i32> {
    let recorded = RunManifest::load(manifest_path)?;
    for input in &recorded.inputs {
        let now = sha256_file(&input.path)?;
        ensure!(
            now == input.sha256,
            Parameter,
            "input {} changed since the manifest was written",
            input.path.display()
        );
    }
    let Some(fresh) = run_recorded(recorded.command.clone())? else {
        return Err(Error::Parameter("the recorded command writes no manifest".into()));
    };
    let mut code = EXIT_OK;
    for (old, new) in recorded.outputs.iter().zip(&fresh.outputs) {
        if old.path != new.path || old.sha256 != new.sha256 {
            eprintln!("mismatch: {}", old.path.display());
            code = EXIT_MISMATCH;
        }
    }
    if recorded.outputs.len() != fresh.outputs.len() {
        eprintln!("mismatch: {} outputs recorded, {} produced", recorded.outputs.len(), fresh.outputs.len());
        code = EXIT_MISMATCH;
    }
    if code == EXIT_OK {
        println!("replayed {}: all outputs identical", manifest_path.display());
    }
    Ok(code)
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn gen(a: &GenArgs) -> Result<Execution> {
    let x = match a.kind {
        GenKind::Sphere2 => sample_sphere(2, a.n, a.seed)?,
        GenKind::Sphere3 => sample_sphere(3, a.n, a.seed)?,
        GenKind::Circle => sample_sphere(1, a.n, a.seed)?,
        GenKind::Blobs => {
            let centers: Vec<Vec<f64>> = BLOB_CENTERS.iter().map(|c| c.to_vec()).collect();
            sample_blobs(a.n, &centers, 1.0, a.seed)?.0
        }
    };
    let mut exec = Execution { manifest: Some(manifest_beside(&a.out)), seed: Some(a.seed), ..Default::default() };
    exec.output(a.out.clone(), csv_bytes(|b| x.write_csv(b))?);
    println!("wrote {} points in R^{} to {}", x.len(), x.dim(), a.out.display());
    Ok(exec)
}

fn cover(a: &CoverArgs) -> Result<Execution> {
    let x = PointCloud::load(&a.input)?;
    let cfg = LearnConfig {
        n_cov: a.n_cov,
        n_neigh: a.n_neigh,
        reg: a.reg,
        lr: a.lr,
        n_epoch: a.n_epoch,
        p: a.p,
        seed: a.seed,
        graph_kind: match a.graph {
            GraphArg::Unit => GraphKind::UnitKnn,
            GraphArg::Umap => GraphKind::Umap,
        },
        persistence_refresh: a.persistence_refresh,
        early_stop: !a.no_early_stop,
        ..LearnConfig::default()
    };
    let (g, trace) = shape_discover(&x, &cfg)?;
    let mut exec = Execution {
        inputs: vec![a.input.clone()],
        manifest: Some(a.out_dir.join("manifest.json")),
        seed: Some(a.seed),
        ..Default::default()
    };
    exec.output(a.out_dir.join("cover.csv"), csv_bytes(|b| g.write_csv(b))?);
    exec.output(a.out_dir.join("trace.jsonl"), csv_bytes(|b| trace.write_jsonl(b))?);
    exec.outputs.push(Output {
        path: a.out_dir.join("timings.json"),
        bytes: serde_json::to_vec_pretty(&trace.timings)?,
        reproducible: false,
    });
    let effective = threshold(&g, cfg.lambda)?.nonempty().count();
    let last = trace.history.last().map_or(f64::NAN, |v| v.total);
    println!(
        "learned {} cover elements ({effective} nonempty at lambda {}) in {} epochs, final loss {last:.6}",
        g.k(),
        cfg.lambda,
        trace.epochs_run()
    );
    Ok(exec)
}

fn read_labels(path: &Path) -> Result<Vec<String>> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

fn nerve_cmd(a: &NerveArgs) -> Result<Execution> {
    ensure!((0.0..1.0).contains(&a.lambda), Parameter, "lambda must lie in [0, 1), got {}", a.lambda);
    let is_json = a.input.extension().is_some_and(|e| e == "json");
    let cover = if is_json {
        Cover::from_json(&std::fs::read_to_string(&a.input)?)?
    } else {
        threshold(&FuzzyCover::load(&a.input)?, a.lambda)?
    };
    let mut inputs = vec![a.input.clone()];
    let labels = match &a.labels {
        Some(p) => {
            inputs.push(p.clone());
            Some(read_labels(p)?)
        }
        None => None,
    };
    let text = match a.format {
        NerveFormat::Dot => NerveGraph::from_cover(&cover, labels.as_deref())?.to_dot(),
        NerveFormat::Graphml => NerveGraph::from_cover(&cover, labels.as_deref())?.to_graphml(),
        NerveFormat::Json => {
            let mut s = nerve(&cover, a.max_dim).to_filtered().to_json()?;
            s.push('\n');
            s
        }
    };
    let k = nerve(&cover, a.max_dim);
    println!(
        "nerve: {} vertices, {} edges, {} simplices in total",
        k.count_dim(0),
        k.count_dim(1),
        k.len()
    );
    let mut exec = Execution { inputs, manifest: Some(manifest_beside(&a.out)), ..Default::default() };
    exec.output(a.out.clone(), text.into_bytes());
    Ok(exec)
}

fn barcode(a: &BarcodeArgs) -> Result<Execution> {
    let max_dim = a.max_dim.unwrap_or(a.max_hom_dim + 1);
    let complex = match a.source {
        BarcodeSource::FuzzyNerve => fuzzy_nerve_filtration(&FuzzyCover::load(&a.input)?, max_dim)?,
        BarcodeSource::Rips => {
            let x = PointCloud::load(&a.input)?;
            vietoris_rips(&x, max_dim, a.max_radius.unwrap_or(f64::INFINITY))?
        }
        BarcodeSource::Witness => {
            let x = PointCloud::load(&a.input)?;
            let landmarks = match (a.eps, a.landmarks) {
                (Some(eps), _) => epsilon_net(&x, eps, a.seed)?,
                (None, Some(m)) => furthest_point_subsample(&x, m, a.seed)?,
                (None, None) => return Err(Error::Parameter("witness needs --eps or --landmarks".into())),
            };
            let w = witness_v0(&x, &landmarks, max_dim)?;
            if a.verify {
                let eps = a.eps.ok_or_else(|| Error::Parameter("--verify needs --eps".into()))?;
                let (cover, _) = ball_mapper(&x, eps, a.seed)?;
                ensure!(
                    nerve(&cover, max_dim) == w.sublevel(eps),
                    Numeric,
                    "Ball Mapper nerve differs from the witness complex at eps = {eps}"
                );
                println!("verified: Ball Mapper nerve equals the witness complex at eps = {eps}");
            }
            w
        }
    };
    let bc = reduce_barcode(&complex, a.max_hom_dim);
    for d in 0..=a.max_hom_dim {
        let bars: Vec<_> = bc.bars_in_dim(d).collect();
        let infinite = bars.iter().filter(|b| !b.is_finite()).count();
        println!("H{d}: {} bars ({infinite} infinite)", bars.len());
    }
    let mut exec = Execution {
        inputs: vec![a.input.clone()],
        manifest: Some(manifest_beside(&a.out)),
        seed: Some(a.seed),
        ..Default::default()
    };
    exec.output(a.out.clone(), csv_bytes(|b| bc.write_csv(b))?);
    Ok(exec)
}

fn hrq(a: &HrqArgs) -> Result<Execution> {
    let bc = Barcode::load(&a.input)?;
    let target = BettiTarget::parse(&a.betti)?;
    let q = homology_recovery_quotient(&bc, &target);
    if q.degenerate {
        eprintln!("warning: the barcode has no finite window; quotient set to 0");
    }
    println!("quotient {}", q.value);
    let mut exec = Execution::default();
    if let Some(out) = &a.out {
        let (lo, hi) = q.window.map_or((String::new(), String::new()), |(l, h)| (l.to_string(), h.to_string()));
        let row = format!("betti,quotient,window_start,window_end,degenerate\n{},{},{lo},{hi},{}\n",
            target.betti().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "),
            q.value,
            q.degenerate
        );
        exec.inputs.push(a.input.clone());
        exec.manifest = Some(manifest_beside(out));
        exec.output(out.clone(), row.into_bytes());
    }
    Ok(exec)
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Suite {
    #[serde(default = "one")]
    runs: usize,
    #[serde(default)]
    seed: u64,
    datasets: Vec<SuiteDataset>,
    methods: Vec<SuiteMethod>,
}

#[derive(Debug, Deserialize)]
struct SuiteDataset {
    #[serde(flatten)]
    spec: DatasetSpec,
    betti: Vec<usize>,
    name: Option<String>,
}

#[derive(Debug, Deserialize)]
struct SuiteMethod {
    #[serde(flatten)]
    spec: MethodSpec,
    budget: usize,
    max_dim: Option<usize>,
}

fn bench(a: &BenchArgs) -> Result<Execution> {
    let text = std::fs::read_to_string(&a.suite)?;
    let suite: Suite = toml::from_str(&text).map_err(|e| Error::Parse(format!("suite: {e}")))?;
    let mut inputs = vec![a.suite.clone()];
    let mut reports = Vec::new();
    for d in &suite.datasets {
        if let DatasetSpec::File { path } = &d.spec {
            inputs.push(path.clone());
        }
        let x = d.spec.load()?;
        let target = BettiTarget::new(d.betti.clone())?;
        let name = d.name.clone().unwrap_or_else(|| d.spec.name());
        for m in &suite.methods {
            let r = inference_harness(&x, &name, &m.spec, m.budget, &target, suite.runs, suite.seed, m.max_dim)?;
            println!(
                "{:<15} {:<14} budget {:>4}: {:>4} vertices {:>8} simplices  quotient {:.3}  {:.2}s",
                r.method, r.dataset, r.budget, r.vertices, r.simplices, r.quotient, r.seconds
            );
            reports.push(r);
        }
    }
    let mut exec = Execution {
        inputs,
        manifest: Some(a.out_dir.join("manifest.json")),
        seed: Some(suite.seed),
        ..Default::default()
    };
    exec.output(a.out_dir.join("report.csv"), csv_bytes(|b| write_report_csv(&reports, b))?);
    exec.outputs.push(Output {
        path: a.out_dir.join("timings.csv"),
        bytes: csv_bytes(|b| write_timings_csv(&reports, b))?,
        reproducible: false,
    });
    Ok(exec)
}
