//! Compare learned covers with Rips and witness complexes of the same
//! vertex budget, as a small table.

use covercraft::eval::{inference_harness, write_report_csv, BettiTarget, DatasetSpec, MethodSpec};
use covercraft::LearnConfig;

fn main() -> covercraft::Result<()> {
    let dataset = DatasetSpec::Sphere { dim: 1, n: 200, seed: 0 };
    let x = dataset.load()?;
    let target = BettiTarget::parse("1,1")?;
    let fast = LearnConfig { n_epoch: 200, ..LearnConfig::default() };
    let methods = [MethodSpec::ShapeDiscover { config: fast }, MethodSpec::Rips, MethodSpec::Witness];

    let mut reports = Vec::new();
    for budget in [3, 4, 8] {
        for method in &methods {
            let r = inference_harness(&x, &dataset.name(), method, budget, &target, 3, 0, None)?;
            println!("{:<15} budget {budget}: quotient {:.3} ({} simplices)", r.method, r.quotient, r.simplices);
            reports.push(r);
        }
    }
    write_report_csv(&reports, std::io::stdout())?;
    Ok(())
}
