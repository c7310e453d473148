// Runs every example binary that `cargo test` built alongside this test.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 10] = [
    "learn_circle_cover",
    "sphere_topology",
    "fuzzy_nerve_filtration",
    "ball_mapper_witness",
    "mapper_1d",
    "rips_barcode",
    "h0_persistence",
    "neighborhood_graphs",
    "topological_inference",
    "losses_and_training",
];

fn example_path(name: &str) -> PathBuf {
    // target/<profile>/deps/examples-<hash> -> target/<profile>/examples/<name>
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().and_then(|p| p.parent()).unwrap().join("examples");
    dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

/// `cargo test --workspace` builds examples next to the tests; a filtered
/// run such as `cargo test --test examples` does not, so build them here.
fn ensure_built() {
    if EXAMPLES.iter().all(|n| example_path(n).exists()) {
        return;
    }
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let status = Command::new(cargo)
        .args(["build", "--examples", "--manifest-path", concat!(env!("CARGO_MANIFEST_DIR"), "/Cargo.toml")])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn every_example_runs() {
    ensure_built();
    for name in EXAMPLES {
        let path = example_path(name);
        assert!(path.exists(), "example binary {} was not built", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "{name} failed: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}

#[test]
fn example_list_is_complete() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut found: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(String::from))
        .collect();
    found.sort();
    let mut listed: Vec<String> = EXAMPLES.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(found, listed);
}
