//! Ball Mapper at scale eps has the same nerve as the eps-sublevel of the
//! witness filtration on the same landmarks.

use covercraft::baselines::{ball_mapper, witness_v0};
use covercraft::complex::nerve;
use covercraft::geometry::sample_circle;
use covercraft::persistence::reduce_barcode;

fn main() -> covercraft::Result<()> {
    let x = sample_circle(300, 2)?;
    for eps in [0.2, 0.35, 0.5] {
        let (cover, landmarks) = ball_mapper(&x, eps, 0)?;
        let w = witness_v0(&x, &landmarks, 2)?;
        let ball = nerve(&cover, 2);
        println!(
            "eps {eps}: {} landmarks, nerve {} simplices, equal to witness sublevel: {}",
            landmarks.len(),
            ball.len(),
            ball == w.sublevel(eps)
        );
        let h1: Vec<_> = reduce_barcode(&w, 1).bars_in_dim(1).map(|b| (b.birth, b.death)).collect();
        println!("  witness H1 bars {h1:.3?}");
    }
    Ok(())
}
