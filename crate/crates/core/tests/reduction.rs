mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{kron_reduce, preserves_resistances, random_network, random_step, StepKind};
use resist_core::network::{
    resistance_with_added_edge, substitute, weighted_resistance, Region, WeightedNetwork,
};
use resist_core::{resistance, Error, ExactRational, Graph};

const KINDS: [StepKind; 4] = [
    StepKind::Series,
    StepKind::Parallel,
    StepKind::Eliminate,
    StepKind::Substitute,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_step_preserves_surviving_resistances(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (before, after, map) = random_step(&mut rng, KINDS[kind]);
        prop_assert!(after.order() <= 9);
        prop_assert!(preserves_resistances(&before, &after, &map));
    }

    #[test]
    fn kron_reduction_is_accepted_as_equivalent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let net = { let n = rng.gen_range(3..=7); random_network(&mut rng, n) };
        let keep: Vec<usize> = (0..net.order()).filter(|_| rng.gen_bool(0.5)).collect();
        prop_assume!(keep.len() >= 2);
        let reduced = kron_reduce(&net, &keep);
        let rn = net.resistance_matrix().unwrap();
        let rr = reduced.resistance_matrix().unwrap();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                prop_assert_eq!(&rn[i][j], &rr[a][b]);
            }
        }
    }

    #[test]
    fn perturbed_replacement_is_rejected(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let net = { let n = rng.gen_range(2..=6); random_network(&mut rng, n) };
        let all: Vec<usize> = (0..net.order()).collect();
        let exact = kron_reduce(&net, &all);
        let mut edges = exact.edges().to_vec();
        let i = rng.gen_range(0..edges.len());
        edges[i].2 = &edges[i].2 + &ExactRational::new(1, 7);
        let wrong = WeightedNetwork::new(exact.order(), edges).unwrap();
        let is_not_equivalent = matches!(substitute(&net, &Region::terminals(all), &wrong), Err(Error::NotEquivalent { .. }));
        prop_assert!(is_not_equivalent);
    }

    #[test]
    fn adding_an_edge_gives_r_over_r_plus_one(seed in any::<u64>(), n in 3usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let net = random_network(&mut rng, n);
        let g = net.skeleton();
        let missing: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !g.has_edge(u, v)).collect();
        prop_assume!(!missing.is_empty());
        let (u, v) = missing[rng.gen_range(0..missing.len())];
        let r = resistance(&g, u, v).unwrap();
        let h = g.add_edge(u, v).unwrap();
        prop_assert_eq!(resistance(&h, u, v).unwrap(), resistance_with_added_edge(&r));
    }

    #[test]
    fn unit_weights_match_graph_engine(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_network(&mut rng, n).skeleton();
        let net = WeightedNetwork::from_graph(&g);
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        prop_assert_eq!(weighted_resistance(&net, u, v).unwrap(), resistance(&g, u, v).unwrap());
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let net = random_network(&mut rng, n);
        prop_assert_eq!(net.to_text().parse::<WeightedNetwork>().unwrap(), net);
    }
}

#[test]
fn kmn_same_side_pair_plus_edge() {
    // The two-over-n-plus-two instance: same-side vertices of K_{n,n}.
    for n in 2..=6usize {
        let g = Graph::complete_bipartite(n, n).unwrap();
        let joined = g.add_edge(n, n + 1).unwrap();
        assert_eq!(
            resistance(&joined, n, n + 1).unwrap(),
            ExactRational::new(2, n as i64 + 2)
        );
    }
}
