use hyperrcd::synthgen::random_hypergraph;
use hyperrcd::{all_curvatures, hyperedge_curvature, run_flow, run_flow_with, FlowParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curvature_is_at_most_one_and_scale_free(seed in any::<u64>(), c in 0.1f64..10.0, alpha in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hypergraph(&mut rng, 12, 14, 4, (0.2, 2.0));
        let scaled = g.with_weights(g.weights().iter().map(|w| c * w).collect()).unwrap();
        let (a, b) = (all_curvatures(&g, alpha).unwrap(), all_curvatures(&scaled, alpha).unwrap());
        for (x, y) in a.edges.iter().zip(&b.edges) {
            prop_assert!(x.kappa <= 1.0 + 1e-12);
            prop_assert!((x.kappa - y.kappa).abs() <= 1e-9);
        }
    }

    #[test]
    fn batch_and_single_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hypergraph(&mut rng, 10, 10, 4, (0.2, 2.0));
        let batch = all_curvatures(&g, 0.5).unwrap();
        for l in 0..g.num_edges() {
            prop_assert_eq!(batch.edges[l], hyperedge_curvature(&g, l, 0.5).unwrap());
        }
    }

    #[test]
    fn flow_commutes_with_scaling(seed in any::<u64>(), c in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hypergraph(&mut rng, 10, 12, 4, (0.2, 2.0));
        let scaled = g.with_weights(g.weights().iter().map(|w| c * w).collect()).unwrap();
        let (a, b) = (run_flow(&g, 0.5, 0.05, 5).unwrap(), run_flow(&scaled, 0.5, 0.05, 5).unwrap());
        for (x, y) in a.iter().zip(&b) {
            for (wx, wy) in x.weights.iter().zip(&y.weights) {
                prop_assert!((c * wx - wy).abs() <= 1e-9 * wy);
            }
        }
    }

    #[test]
    fn weights_stay_positive_and_sums_bounded(seed in any::<u64>(), eta in 0.01f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hypergraph(&mut rng, 10, 12, 5, (0.2, 2.0));
        let params = FlowParams { eta, iterations: 4, ..FlowParams::default() };
        let trajectory = run_flow_with(&g, &params).unwrap();
        let factor = 1.0 + eta * (g.num_vertices() * g.num_edges()) as f64;
        for pair in trajectory.windows(2) {
            prop_assert!(pair[1].weights.iter().all(|&w| w >= pair[1].floor && w > 0.0));
            let before: f64 = pair[0].weights.iter().sum();
            let after: f64 = pair[1].weights.iter().sum();
            prop_assert!(after <= factor * before);
        }
    }
}
