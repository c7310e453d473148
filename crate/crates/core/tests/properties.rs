mod common;

use covercraft::baselines::{ball_mapper, mapper_1d, uniform_cover, witness_v0, SingleLinkage};
use covercraft::complex::{fuzzy_nerve_filtration, fuzzy_nerve_levels, nerve, threshold, SimplicialComplex};
use covercraft::eval::{homology_recovery_quotient, BettiTarget};
use covercraft::geometry::knn_graph;
use covercraft::learner::{cover_from_theta, pi_p, softmax_rows, Theta};
use covercraft::losses::{geometry_loss, regularization_loss, Normalization};
use covercraft::persistence::{h0_suplevel, Bar};
use covercraft::{Barcode, FilteredComplex, FuzzyCover, PointCloud};
use ndarray::Array2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cloud(max_n: usize, max_dim: usize) -> impl Strategy<Value = PointCloud> {
    (1..=max_dim, 2..=max_n).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), n)
            .prop_map(|rows| PointCloud::from_rows(&rows).unwrap())
    })
}

/// Rows with at least one entry equal to 1, as produced by π_∞.
fn fuzzy(max_n: usize, max_k: usize) -> impl Strategy<Value = FuzzyCover> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        (prop::collection::vec(0.0f64..1.0, n * k), prop::collection::vec(0..k, n)).prop_map(move |(v, top)| {
            let mut g = Array2::from_shape_vec((n, k), v).unwrap();
            for (x, &i) in top.iter().enumerate() {
                g[[x, i]] = 1.0;
            }
            FuzzyCover::new(g).unwrap()
        })
    })
}

fn barcode() -> impl Strategy<Value = Barcode> {
    prop::collection::vec((0usize..3, -5.0f64..5.0, prop::option::weighted(0.8, 0.0f64..4.0)), 0..12).prop_map(
        |bars| {
            Barcode::new(
                bars.into_iter()
                    .map(|(d, b, len)| Bar::new(d, b, len.map_or(f64::INFINITY, |l| b + l)))
                    .collect(),
            )
        },
    )
}

proptest! {
    #[test]
    fn h0_total_matches_sweep(seed in any::<u64>(), n in 1usize..20, p in 0.0f64..0.6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graph = common::random_graph(n, p, &mut rng);
        let f: Vec<f64> = (0..n).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
        let (total, att) = h0_suplevel(&graph, &f).unwrap();
        prop_assert!((total - common::h0_sweep_total(&graph, &f)).abs() < 1e-12);
        prop_assert!((att.total_at(&f) - total).abs() < 1e-12);
    }

    #[test]
    fn barcode_matches_betti_sweep(seed in any::<u64>()) {
        let k = common::random_monotone_complex(40, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(common::check_barcode_against_sweep(&k), Ok(()));
    }

    #[test]
    fn filtered_complex_json_round_trip(seed in any::<u64>()) {
        let k = common::random_monotone_complex(30, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(FilteredComplex::from_json(&k.to_json().unwrap()).unwrap(), k);
    }

    #[test]
    fn barcode_csv_round_trip(bc in barcode()) {
        let mut buf = Vec::new();
        bc.write_csv(&mut buf).unwrap();
        prop_assert_eq!(Barcode::read_csv(buf.as_slice()).unwrap(), bc);
    }

    #[test]
    fn quotient_is_bounded_and_affine_invariant(bc in barcode(), c in 0.01f64..100.0, s in -10.0f64..10.0, t in prop::collection::vec(0usize..3, 1..4)) {
        let target = BettiTarget::new(t).unwrap();
        let q = homology_recovery_quotient(&bc, &target).value;
        prop_assert!((0.0..=1.0).contains(&q));
        let moved = Barcode::new(bc.bars.iter().map(|b| Bar::new(b.dim, c * b.birth + s, c * b.death + s)).collect());
        let q2 = homology_recovery_quotient(&moved, &target).value;
        prop_assert!((q - q2).abs() < 1e-9, "{} vs {}", q, q2);
    }

    #[test]
    fn geometry_loss_never_exceeds_regularization(seed in any::<u64>(), g in fuzzy(20, 4)) {
        let graph = common::random_graph(g.n(), 0.4, &mut ChaCha8Rng::seed_from_u64(seed));
        let eta = Normalization::new(&graph, g.k());
        let (gl, _) = geometry_loss(g.matrix().view(), &graph, eta.eta_g);
        let (r, _) = regularization_loss(g.matrix().view(), &graph, eta.eta_r);
        prop_assert!(gl <= r * (1.0 + 1e-12));
    }

    #[test]
    fn threshold_nerve_is_a_level_set_of_the_fuzzy_nerve(g in fuzzy(15, 4), lambda in 0.0f64..1.0) {
        let levels = fuzzy_nerve_levels(&g, 2);
        let above = SimplicialComplex::new(levels.iter().filter(|(_, l)| *l > lambda).map(|(s, _)| s.clone())).unwrap();
        prop_assert_eq!(nerve(&threshold(&g, lambda).unwrap(), 2), above);
        // The filtration exists and is monotone by construction.
        prop_assert!(fuzzy_nerve_filtration(&g, 2).is_ok());
    }

    #[test]
    fn output_covers_have_unit_row_max(theta in prop::collection::vec(-20.0f64..20.0, 12), p in 1.0f64..8.0) {
        let theta = Theta(Array2::from_shape_vec((4, 3), theta).unwrap());
        let g = cover_from_theta(&theta).unwrap();
        for row in g.matrix().rows() {
            prop_assert_eq!(row.iter().copied().fold(0.0, f64::max), 1.0);
        }
        let h = pi_p(&softmax_rows(&theta), p).unwrap();
        for row in h.rows() {
            let norm = row.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p);
            prop_assert!((norm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn knn_graph_is_symmetrized_neighbor_relation(x in cloud(25, 3), k in 1usize..6) {
        prop_assume!(k < x.len());
        let g = knn_graph(&x, k).unwrap();
        for e in g.edges() {
            prop_assert!(e.u < e.v && e.w == 1.0);
        }
        // Every vertex keeps at least its k nearest neighbors.
        for v in 0..x.len() {
            prop_assert!(g.degree(v) >= k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_mapper_nerve_is_witness_sublevel(x in cloud(40, 3), eps in 0.1f64..1.2, seed in any::<u64>()) {
        let (cover, landmarks) = ball_mapper(&x, eps, seed).unwrap();
        prop_assert_eq!(nerve(&cover, 3), witness_v0(&x, &landmarks, 3).unwrap().sublevel(eps));
    }

    #[test]
    fn mapper_without_triple_overlaps_has_no_triangles(
        x in cloud(40, 2),
        k in 1usize..8,
        gain in 0.0f64..0.5,
        cutoff in 0.05f64..1.0,
    ) {
        let f: Vec<f64> = (0..x.len()).map(|i| x.row(i)[0]).collect();
        let cover = uniform_cover(-1.0, 1.0, k, gain).unwrap();
        prop_assert!(cover.max_overlap() <= 2);
        let c = mapper_1d(&x, &f, &cover, &SingleLinkage { cutoff }).unwrap();
        prop_assert_eq!(nerve(&c, 2).count_dim(2), 0);
    }
}
