//! Zero-dimensional suplevel persistence of a function on a path, and the
//! subgradient the topology loss descends along.

use covercraft::geometry::Edge;
use covercraft::persistence::{h0_subgradient, h0_suplevel};
use covercraft::WeightedGraph;

fn main() -> covercraft::Result<()> {
    let f = [0.9, 0.2, 0.7, 0.1, 1.0, 0.4, 0.8];
    let graph = WeightedGraph::new(f.len(), (0..f.len() - 1).map(|u| Edge { u, v: u + 1, w: 1.0 }))?;
    let (total, attribution) = h0_suplevel(&graph, &f)?;
    for bar in &attribution.bars {
        println!(
            "peak at {} ({:.1}) merges through edge {:?} at {:.1}",
            bar.birth_vertex, bar.birth_value, bar.death_edge, bar.death_value
        );
    }
    println!("total persistence {total:.2}");

    // Moving along the negative subgradient flattens the secondary peaks.
    let grad = h0_subgradient(&attribution, f.len());
    let step: Vec<f64> = f.iter().zip(&grad).map(|(v, g)| (v - 0.05 * g).clamp(0.0, 1.0)).collect();
    println!("after one step: {:.2}", h0_suplevel(&graph, &step)?.0);
    Ok(())
}
