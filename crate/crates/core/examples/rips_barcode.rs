//! Vietoris–Rips persistence of a furthest-point subsample of a circle.

use covercraft::baselines::vietoris_rips;
use covercraft::geometry::{furthest_point_subsample, sample_circle};
use covercraft::persistence::{betti_curve, reduce_barcode};

fn main() -> covercraft::Result<()> {
    let x = sample_circle(500, 1)?;
    let landmarks = furthest_point_subsample(&x, 40, 0)?;
    let k = vietoris_rips(&x.select(&landmarks), 2, f64::INFINITY)?;
    println!("{} simplices", k.len());

    let bc = reduce_barcode(&k, 1);
    let longest = bc.bars_in_dim(1).max_by(|a, b| a.length().total_cmp(&b.length()));
    if let Some(bar) = longest {
        println!("longest H1 bar [{:.3}, {:.3})", bar.birth, bar.death);
    }
    println!("total H0 persistence {:.3}", bc.total_persistence(0));
    for r in [0.05, 0.2, 1.0, 2.0] {
        println!("r = {r}: betti_0 {}, betti_1 {}", betti_curve(&bc, 0).eval(r), betti_curve(&bc, 1).eval(r));
    }
    let mut csv = Vec::new();
    bc.write_csv(&mut csv)?;
    println!("{} barcode rows", String::from_utf8_lossy(&csv).lines().count() - 1);
    Ok(())
}
