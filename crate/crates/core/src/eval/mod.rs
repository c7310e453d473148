//! Homology recovery quotient, complex sizes and the topological-inference
//! harness comparing learned covers against Rips and witness complexes.

mod harness;

pub use harness::{
    inference_harness, write_report_csv, write_timings_csv, DatasetSpec, HarnessReport, MethodSpec,
};

use serde::{Deserialize, Serialize};

use crate::complex::FilteredComplex;
use crate::persistence::Barcode;
use crate::{ensure, Result};

/// Betti numbers `β₀, …, β_d` to be recovered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTarget(Vec<usize>);

impl BettiTarget {
    pub fn new(betti: Vec<usize>) -> Result<Self> {
        ensure!(!betti.is_empty(), Parameter, "Betti target must list at least beta_0");
        Ok(Self(betti))
    }

    pub fn betti(&self) -> &[usize] {
        &self.0
    }

    /// Parses a comma-separated list such as `1,0,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let betti = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| crate::Error::Parse(format!("bad Betti number {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(betti)
    }
}

/// Fraction of the window `[a, b]` on which the barcode has the target
/// Betti numbers. `a` is the smallest finite left endpoint and `b` the
/// largest finite right endpoint over all bars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryQuotient {
    pub value: f64,
    pub window: Option<(f64, f64)>,
    /// Set when the window is empty or degenerate and the value defaults to 0.
    pub degenerate: bool,
}

pub fn homology_recovery_quotient(bc: &Barcode, target: &BettiTarget) -> RecoveryQuotient {
    let a = bc.bars.iter().map(|b| b.birth).filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
    let b = bc.bars.iter().map(|b| b.death).filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if !(a.is_finite() && b.is_finite() && b > a) {
        return RecoveryQuotient { value: 0.0, window: None, degenerate: true };
    }
    let mut breaks: Vec<f64> = vec![a, b];
    for bar in &bc.bars {
        for t in [bar.birth, bar.death] {
            if t > a && t < b {
                breaks.push(t);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let betti_at = |r: f64, dim: usize| {
        bc.bars.iter().filter(|bar| bar.dim == dim && bar.birth <= r && r < bar.death).count()
    };
    let mut good = 0.0;
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if target.betti().iter().enumerate().all(|(d, &beta)| betti_at(mid, d) == beta) {
            good += w[1] - w[0];
        }
    }
    RecoveryQuotient { value: (good / (b - a)).clamp(0.0, 1.0), window: Some((a, b)), degenerate: false }
}

/// `(number of distinct vertices, total number of simplices)`.
pub fn complex_size(k: &FilteredComplex) -> (usize, usize) {
    let mut vertices: Vec<usize> = k.iter().flat_map(|(s, _)| s.vertices().iter().copied()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    (vertices.len(), k.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::vietoris_rips;
    use crate::complex::{nerve, threshold, Simplex};
    use crate::geometry::sample_circle;
    use crate::persistence::{reduce_barcode, Bar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn target(b: &[usize]) -> BettiTarget {
        BettiTarget::new(b.to_vec()).unwrap()
    }

    #[test]
    fn parse_target() {
        assert_eq!(BettiTarget::parse("1, 0,1").unwrap().betti(), &[1, 0, 1]);
        assert!(BettiTarget::parse("").is_err());
        assert!(BettiTarget::parse("1,x").is_err());
    }

    #[test]
    fn circle_rips_recovers_a_loop() {
        let x = sample_circle(30, 1).unwrap();
        let bc = reduce_barcode(&vietoris_rips(&x, 2, 2.5).unwrap(), 1);
        assert!(homology_recovery_quotient(&bc, &target(&[1, 1])).value > 0.0);
    }

    #[test]
    fn unreachable_target_is_zero() {
        let bc = Barcode::new(vec![Bar::new(0, 0.0, f64::INFINITY), Bar::new(0, 0.0, 1.0)]);
        let q = homology_recovery_quotient(&bc, &target(&[1]));
        assert_eq!(q.value, 0.0);
        assert_eq!(q.window, Some((0.0, 1.0)));
        assert_eq!(homology_recovery_quotient(&bc, &target(&[5, 5])).value, 0.0);
    }

    #[test]
    fn no_finite_death_is_degenerate() {
        let bc = Barcode::new(vec![Bar::new(0, 0.0, f64::INFINITY)]);
        let q = homology_recovery_quotient(&bc, &target(&[1]));
        assert!(q.degenerate);
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn hand_computed_quotient() {
        // β₀: 2 on [0, 1), 1 after; β₁: 1 on [0.5, 3). Window [0, 3].
        let bc = Barcode::new(vec![
            Bar::new(0, 0.0, f64::INFINITY),
            Bar::new(0, 0.0, 1.0),
            Bar::new(1, 0.5, 3.0),
        ]);
        let q = homology_recovery_quotient(&bc, &target(&[1, 1]));
        assert!((q.value - 2.0 / 3.0).abs() < 1e-15);
    }

    fn random_barcode(rng: &mut ChaCha8Rng) -> Barcode {
        let mut bars = vec![Bar::new(0, 0.0, f64::INFINITY)];
        for _ in 0..rng.random_range(1..12) {
            let dim = rng.random_range(0..3);
            let birth = rng.random_range(0.0..5.0);
            let death = if rng.random_bool(0.15) { f64::INFINITY } else { birth + rng.random_range(0.01..3.0) };
            bars.push(Bar::new(dim, birth, death));
        }
        Barcode::new(bars)
    }

    #[test]
    fn quotient_is_affine_invariant_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let bc = random_barcode(&mut rng);
            let t = target(&[1, rng.random_range(0..2), rng.random_range(0..2)]);
            let q = homology_recovery_quotient(&bc, &t).value;
            assert!((0.0..=1.0).contains(&q));
            let (c, s) = (rng.random_range(0.1..10.0), rng.random_range(-5.0..5.0));
            let moved = Barcode::new(bc.bars.iter().map(|b| Bar::new(b.dim, c * b.birth + s, c * b.death + s)).collect());
            assert!((homology_recovery_quotient(&moved, &t).value - q).abs() < 1e-9);
        }
    }

    #[test]
    fn quotient_matches_dense_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let bc = random_barcode(&mut rng);
            let t = target(&[1, 1]);
            let q = homology_recovery_quotient(&bc, &t);
            let Some((a, b)) = q.window else { continue };
            let samples = 100_000;
            let mut hits = 0;
            for i in 0..samples {
                let r = a + (i as f64 + 0.5) * (b - a) / samples as f64;
                let ok = (0..2).all(|d| {
                    bc.bars.iter().filter(|bar| bar.dim == d && bar.birth <= r && r < bar.death).count()
                        == t.betti()[d]
                });
                hits += usize::from(ok);
            }
            assert!((hits as f64 / samples as f64 - q.value).abs() < 2e-3, "{} vs {}", hits, q.value);
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(complex_size(&FilteredComplex::new(Vec::new()).unwrap()), (0, 0));
        let tri = crate::complex::SimplicialComplex::new([
            Simplex::new(vec![0, 1, 2]).unwrap(),
            Simplex::new(vec![0, 1]).unwrap(),
            Simplex::new(vec![0, 2]).unwrap(),
            Simplex::new(vec![1, 2]).unwrap(),
            Simplex::vertex(0),
            Simplex::vertex(1),
            Simplex::vertex(2),
        ])
        .unwrap();
        assert_eq!(complex_size(&tri.to_filtered()), (3, 7));
    }

    #[test]
    fn nerve_sizes_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let labels: Vec<usize> = (0..40).map(|_| rng.random_range(0..6)).collect();
        let mut g = crate::complex::FuzzyCover::from_labels(&labels, 6).unwrap().into_matrix();
        for v in g.iter_mut() {
            if *v == 0.0 && rng.random_bool(0.2) {
                *v = 0.7;
            }
        }
        let g = crate::complex::FuzzyCover::new(g).unwrap();
        let k = nerve(&threshold(&g, 0.5).unwrap(), 3).to_filtered();
        let (v, total) = complex_size(&k);
        let verts = k.iter().filter(|(s, _)| s.dim() == 0).count();
        assert_eq!(v, verts);
        assert_eq!(total, k.iter().count());
    }
}
