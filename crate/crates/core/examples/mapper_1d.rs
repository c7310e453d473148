//! Classic Mapper on a circle with the height function as lens: the nerve
//! is a cycle, and intervals without triple overlaps give no triangles.

use covercraft::baselines::{mapper_1d, uniform_cover, Dbscan, SingleLinkage};
use covercraft::complex::{nerve, NerveGraph};
use covercraft::geometry::sample_circle;

fn main() -> covercraft::Result<()> {
    let x = sample_circle(400, 5)?;
    let height: Vec<f64> = (0..x.len()).map(|i| x.row(i)[1]).collect();
    let intervals = uniform_cover(-1.0, 1.0, 6, 0.3)?;
    println!("{} intervals, at most {} overlapping", intervals.intervals().len(), intervals.max_overlap());

    let cover = mapper_1d(&x, &height, &intervals, &SingleLinkage { cutoff: 0.2 })?;
    let k = nerve(&cover, 2);
    println!(
        "single linkage: {} clusters, {} edges, {} triangles",
        k.count_dim(0),
        k.count_dim(1),
        k.count_dim(2)
    );

    let dbscan = mapper_1d(&x, &height, &intervals, &Dbscan { eps: 0.15, min_pts: 3 })?;
    println!("dbscan: {} clusters", dbscan.len());

    let labels: Vec<String> = height.iter().map(|&h| if h > 0.0 { "top" } else { "bottom" }.to_string()).collect();
    print!("{}", NerveGraph::from_cover(&cover, Some(&labels))?.to_graphml());
    Ok(())
}
