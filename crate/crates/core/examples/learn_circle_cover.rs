//! Learn a fuzzy cover of a sampled circle and check that the fuzzy
//! nerve sees one loop.
//!
//! cargo run --release --example learn_circle_cover -- [n_cov] [seed]

use covercraft::complex::{fuzzy_nerve_filtration, threshold};
use covercraft::eval::{homology_recovery_quotient, BettiTarget};
use covercraft::geometry::sample_circle;
use covercraft::persistence::reduce_barcode;
use covercraft::{shape_discover, LearnConfig};

fn main() -> covercraft::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_cov: usize = args.next().map_or(4, |a| a.parse().expect("n_cov"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));

    let x = sample_circle(200, seed)?;
    let cfg = LearnConfig { seed, ..LearnConfig::with_n_cov(n_cov) };
    let (cover, trace) = shape_discover(&x, &cfg)?;

    println!("{} epochs (stopped early: {})", trace.epochs_run(), trace.stopped_early);
    for (e, v) in trace.history.iter().enumerate().step_by(50) {
        println!("  epoch {e:>3}  M {:.4}  G {:.4}  T0 {:.5}  R {:.4}  total {:.4}", v.m, v.g_loss, v.t0, v.r, v.total);
    }
    let sizes: Vec<usize> = threshold(&cover, cfg.lambda)?.members().iter().map(Vec::len).collect();
    println!("cover element sizes at lambda {}: {sizes:?}", cfg.lambda);

    let k = fuzzy_nerve_filtration(&cover, 2)?;
    let bc = reduce_barcode(&k, 1);
    for bar in bc.bars_in_dim(1) {
        println!("H1 bar [{:.3}, {:.3})", bar.birth, bar.death);
    }
    let q = homology_recovery_quotient(&bc, &BettiTarget::new(vec![1, 1])?);
    println!("recovery quotient for a circle: {:.3}", q.value);
    Ok(())
}
