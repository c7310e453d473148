//! Five learned cover elements are enough to see a 2-sphere.
//!
//! The nerve is built up to tetrahedra so that the H2 class can die inside
//! the filtration. cargo run --release --example sphere_topology -- [n]

use covercraft::complex::fuzzy_nerve_filtration;
use covercraft::eval::{complex_size, homology_recovery_quotient, BettiTarget};
use covercraft::geometry::sample_sphere;
use covercraft::persistence::{betti_curve, reduce_barcode};
use covercraft::{shape_discover, LearnConfig};

fn main() -> covercraft::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(600, |a| a.parse().expect("n"));
    let x = sample_sphere(2, n, 0)?;
    let (cover, trace) = shape_discover(&x, &LearnConfig::with_n_cov(5))?;
    println!(
        "{n} points: graph {:.2}s, init {:.2}s, optimize {:.2}s",
        trace.timings.graph, trace.timings.init, trace.timings.optimize
    );

    let k = fuzzy_nerve_filtration(&cover, 3)?;
    let (v, s) = complex_size(&k);
    println!("fuzzy nerve: {v} vertices, {s} simplices");
    let bc = reduce_barcode(&k, 2);
    for d in 0..=2 {
        let curve = betti_curve(&bc, d);
        let steps: Vec<String> = curve.breakpoints.iter().map(|(r, b)| format!("{r:.2}:{b}")).collect();
        println!("betti_{d} steps {}", steps.join(" "));
    }
    let q = homology_recovery_quotient(&bc, &BettiTarget::new(vec![1, 0, 1])?);
    println!("recovery quotient for a 2-sphere: {:.3}", q.value);
    Ok(())
}
