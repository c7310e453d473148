//! A hand-made fuzzy cover of eight points on a circle: each point belongs
//! fully to its own arc and partly to the neighboring arcs.

use covercraft::complex::{fuzzy_nerve_levels, nerve, threshold, NerveGraph};
use covercraft::persistence::reduce_barcode;
use covercraft::FuzzyCover;
use ndarray::Array2;

fn main() -> covercraft::Result<()> {
    let (n, k) = (8, 4);
    let g = Array2::from_shape_fn((n, k), |(x, i)| {
        let arc = x / 2;
        if arc == i {
            1.0
        } else if (x % 2 == 1 && (arc + 1) % k == i) || (x % 2 == 0 && (arc + k - 1) % k == i) {
            0.6
        } else {
            0.0
        }
    });
    let cover = FuzzyCover::new(g)?;

    for (s, level) in fuzzy_nerve_levels(&cover, 2) {
        println!("{s}  lambda {level:.2}");
    }
    for lambda in [0.5, 0.7] {
        let k = nerve(&threshold(&cover, lambda)?, 2);
        println!("lambda {lambda}: {} edges, {} triangles", k.count_dim(1), k.count_dim(2));
    }

    let filtration = covercraft::complex::fuzzy_nerve_filtration(&cover, 2)?;
    for bar in reduce_barcode(&filtration, 1).bars_in_dim(1) {
        println!("loop lives on [{:.3}, {})", bar.birth, bar.death);
    }
    print!("{}", NerveGraph::from_cover(&threshold(&cover, 0.5)?, None)?.to_dot());
    Ok(())
}
