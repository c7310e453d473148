//! A hand-rolled training loop over the loss terms: softmax parameters,
//! projection to the p-sphere, and Adam, on a small two-cluster graph.

use covercraft::geometry::{sample_blobs, umap_graph};
use covercraft::learner::{adam_step, chain_gradient, cover_from_theta, pi_p, softmax_rows, AdamState, Theta};
use covercraft::losses::{LossEvaluator, LossWeights};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> covercraft::Result<()> {
    let (x, _) = sample_blobs(80, &[vec![0.0, 0.0], vec![8.0, 0.0]], 1.0, 3)?;
    let graph = umap_graph(&x, 10)?;
    let (n, k, p) = (x.len(), 2, 5.0);
    let eval = LossEvaluator::new(&graph, k, LossWeights::from_reg(10.0))?;
    println!("{:?}", eval.normalization());

    // A random start instead of spectral initialization.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut theta = Theta(Array2::from_shape_fn((n, k), |_| rng.random_range(-0.1..0.1)));
    let mut adam = AdamState::new((n, k));
    for epoch in 0..=300 {
        let g = pi_p(&softmax_rows(&theta), p)?;
        let (report, _) = eval.evaluate(g.view())?;
        if epoch % 60 == 0 {
            let v = report.values;
            println!("epoch {epoch:>3}: M {:.4} G {:.4} T0 {:.5} R {:.4}", v.m, v.g_loss, v.t0, v.r);
        }
        let grad = chain_gradient(&theta, p, &report.gradient);
        adam_step(&mut theta.0, &grad, &mut adam, 0.1);
    }
    let cover = cover_from_theta(&theta)?;
    let counts = cover.argmax().iter().fold([0, 0], |mut c, &i| {
        c[i] += 1;
        c
    });
    println!("argmax cluster sizes {counts:?}");
    Ok(())
}
