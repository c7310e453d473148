//! Unit k-NN and UMAP-weighted neighborhood graphs, and the spectral
//! clustering that initializes cover learning.

use covercraft::geometry::{knn_graph, sample_blobs, umap_graph};
use covercraft::learner::{laplacian_eigenpairs, spectral_init};

fn main() -> covercraft::Result<()> {
    let centers = vec![vec![0.0, 0.0], vec![6.0, 0.0], vec![3.0, 5.0]];
    let (x, labels) = sample_blobs(300, &centers, 1.0, 4)?;

    let knn = knn_graph(&x, 15)?;
    let umap = umap_graph(&x, 15)?;
    for (name, g) in [("unit knn", &knn), ("umap", &umap)] {
        let mut comps = g.components();
        comps.sort_unstable();
        comps.dedup();
        let mean_degree = 2.0 * g.edges().len() as f64 / g.n() as f64;
        println!(
            "{name}: {} edges, total weight {:.1}, mean degree {mean_degree:.1}, {} components",
            g.edges().len(),
            g.total_weight(),
            comps.len()
        );
    }

    let (values, _) = laplacian_eigenpairs(&umap, 4, 0)?;
    println!("smallest normalized Laplacian eigenvalues {values:.4?}");

    let init = spectral_init(&umap, 3, 0)?;
    let clusters = init.argmax();
    let mut agree = 0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            agree += usize::from((labels[i] == labels[j]) == (clusters[i] == clusters[j]));
        }
    }
    let pairs = x.len() * (x.len() - 1) / 2;
    println!("spectral clustering agrees with blob labels on {:.1}% of pairs", 100.0 * agree as f64 / pairs as f64);
    Ok(())
}
