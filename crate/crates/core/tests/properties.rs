//! Randomized invariant checks against the brute-force references in
//! `common`.

mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use seg_core::graph::{extract_enclosing_subgraph, Graph};
use seg_core::heuristics::{heuristic_score, HeuristicKind};
use seg_core::labeling::path_label;
use seg_core::nn::tape::Tape;
use seg_core::paths::enumerate_simple_paths_capped;
use seg_core::train::sample_negatives;
use seg_core::{auc, hits_at_k, mrr, CandidateSet};

fn graph_from(seed: u64, n: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph(&mut rng, n, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_adjacency_invariants(
        n in 2usize..12,
        raw in prop::collection::vec((0usize..12, 0usize..12), 0..40),
    ) {
        let edges: Vec<(usize, usize)> =
            raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        let g = Graph::from_edges(n, &edges);
        for u in 0..g.num_nodes() {
            let nbrs = g.neighbors(u).unwrap();
            prop_assert!(nbrs.windows(2).all(|w| w[0] < w[1]), "sorted, unique");
            prop_assert!(!nbrs.contains(&u), "no self-loop");
            for &v in nbrs {
                prop_assert!(g.neighbors(v).unwrap().contains(&u), "symmetry");
            }
        }
    }

    #[test]
    fn enumeration_matches_bruteforce(
        seed in 0u64..1000,
        n in 4usize..12,
        p in 0.15f64..0.6,
        max_len in 2usize..5,
    ) {
        let g = graph_from(seed, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let (a, b) = random_distinct_pair(&mut rng, n);
        let sub = extract_enclosing_subgraph(&g, a, b, 4, false).unwrap();
        let ps = enumerate_simple_paths_capped(&sub, max_len, 1_000_000).unwrap();
        let mut got = ps.paths.clone();
        got.sort();
        let want = oracle_paths(&sub.local_graph, sub.target_a, sub.target_b, max_len);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn enumerated_paths_satisfy_definition(
        seed in 0u64..1000,
        n in 4usize..12,
        p in 0.1f64..0.7,
    ) {
        let g = graph_from(seed, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
        let (a, b) = random_distinct_pair(&mut rng, n);
        let sub = extract_enclosing_subgraph(&g, a, b, 3, false).unwrap();
        let ps = enumerate_simple_paths_capped(&sub, 4, 1_000_000).unwrap();
        for path in &ps.paths {
            prop_assert_eq!(path[0], sub.target_a);
            prop_assert_eq!(*path.last().unwrap(), sub.target_b);
            prop_assert!(path.len() >= 2 && path.len() - 1 <= 4);
            let mut seen = path.clone();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), path.len(), "vertex repeated");
            for w in path.windows(2) {
                prop_assert!(sub.local_graph.has_edge(w[0], w[1]));
            }
        }
    }

    #[test]
    fn path_labels_are_permutation_equivariant(
        seed in 0u64..1000,
        n in 4usize..12,
        p in 0.2f64..0.7,
    ) {
        let g = graph_from(seed, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e77);
        let (a, b) = random_distinct_pair(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let edges2: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        let g2 = Graph::from_edges(n, &edges2);

        let label_by_global = |g: &Graph, a: usize, b: usize| {
            let sub = extract_enclosing_subgraph(g, a, b, 1, false).unwrap();
            let ps = enumerate_simple_paths_capped(&sub, 4, 1_000_000).unwrap();
            let la = path_label(&sub, &ps, 4);
            sub.local_to_global
                .iter()
                .zip(&la.labels)
                .map(|(&gid, &c)| (gid, c))
                .collect::<std::collections::HashMap<usize, usize>>()
        };
        let l1 = label_by_global(&g, a, b);
        let l2 = label_by_global(&g2, perm[a], perm[b]);
        prop_assert_eq!(l1.len(), l2.len());
        for (gid, c) in l1 {
            prop_assert_eq!(l2[&perm[gid]], c, "node {} relabeled differently", gid);
        }
    }

    #[test]
    fn heuristics_are_symmetric(
        seed in 0u64..1000,
        n in 3usize..20,
        p in 0.1f64..0.6,
    ) {
        let g = graph_from(seed, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
        let (i, j) = random_distinct_pair(&mut rng, n);
        for kind in [
            HeuristicKind::Cn,
            HeuristicKind::Jaccard,
            HeuristicKind::Aa,
            HeuristicKind::Katz { alpha: 0.1, max_len: 4 },
        ] {
            let fwd = heuristic_score(&g, i, j, kind).unwrap();
            let rev = heuristic_score(&g, j, i, kind).unwrap();
            prop_assert_eq!(fwd.to_bits(), rev.to_bits(), "{:?}", kind);
        }
    }

    #[test]
    fn katz_matches_dense_oracle(
        seed in 0u64..1000,
        n in 3usize..16,
        p in 0.1f64..0.6,
        max_len in 1usize..6,
    ) {
        let g = graph_from(seed, n, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
        let (i, j) = random_distinct_pair(&mut rng, n);
        let alpha = 0.08;
        let got = heuristic_score(&g, i, j, HeuristicKind::Katz { alpha, max_len }).unwrap();
        let want = oracle_katz(&g, i, j, alpha, max_len);
        prop_assert!((got - want).abs() <= 1e-9, "got {} want {}", got, want);
    }

    #[test]
    fn hits_is_monotone_in_k(
        pos in prop::collection::vec(-100.0f64..100.0, 1..30),
        neg in prop::collection::vec(-100.0f64..100.0, 1..30),
    ) {
        let mut prev = 0.0;
        for k in 1..=neg.len() {
            let h = hits_at_k(&pos, &neg, k).unwrap();
            prop_assert!(h >= prev, "hits@{} = {} < hits@{} = {}", k, h, k - 1, prev);
            prev = h;
        }
    }

    #[test]
    fn metrics_ignore_input_order(
        pos in prop::collection::vec(-10.0f64..10.0, 1..20),
        neg in prop::collection::vec(-10.0f64..10.0, 1..20),
        seed in 0u64..1000,
        k in 1usize..10,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pos2 = pos.clone();
        let mut neg2 = neg.clone();
        pos2.shuffle(&mut rng);
        neg2.shuffle(&mut rng);
        let h1 = hits_at_k(&pos, &neg, k).unwrap();
        let h2 = hits_at_k(&pos2, &neg2, k).unwrap();
        prop_assert_eq!(h1.to_bits(), h2.to_bits());
        let a1 = auc(&pos, &neg).unwrap();
        let a2 = auc(&pos2, &neg2).unwrap();
        prop_assert_eq!(a1.to_bits(), a2.to_bits());
    }

    #[test]
    fn mrr_ignores_candidate_order(
        sets in prop::collection::vec(
            (-10.0f64..10.0, prop::collection::vec(-10.0f64..10.0, 1..20)),
            1..10,
        ),
        seed in 0u64..1000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let forward: Vec<CandidateSet> = sets
            .iter()
            .map(|(p, negs)| CandidateSet { positive: *p, negatives: negs.clone() })
            .collect();
        let mut shuffled: Vec<CandidateSet> = forward.clone();
        for s in &mut shuffled {
            s.negatives.shuffle(&mut rng);
        }
        let m1 = mrr(&forward).unwrap();
        let m2 = mrr(&shuffled).unwrap();
        prop_assert_eq!(m1.to_bits(), m2.to_bits());
        let want = oracle_mrr(&sets);
        prop_assert!((m1 - want).abs() < 1e-12);
    }

    #[test]
    fn sort_pooling_ignores_row_order_when_keys_are_distinct(
        rows in 1usize..12,
        cols in 2usize..6,
        k in 1usize..12,
        seed in 0u64..1000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = vec![0.0f64; rows * cols];
        for x in data.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
        // Distinct sort keys by construction.
        for r in 0..rows {
            data[r * cols + cols - 1] = r as f64 * 0.5 + rng.random_range(0.0..0.4);
        }
        let mut order: Vec<usize> = (0..rows).collect();
        order.shuffle(&mut rng);
        let permuted: Vec<f64> = order
            .iter()
            .flat_map(|&r| data[r * cols..(r + 1) * cols].to_vec())
            .collect();

        let pool = |values: Vec<f64>| {
            let mut tape = Tape::new();
            let t = tape.leaf(rows, cols, values).unwrap();
            let pooled = tape.sort_pool(t, k).unwrap();
            tape.value(pooled).to_vec()
        };
        let a = pool(data);
        let b = pool(permuted);
        let ab: Vec<u64> = a.iter().map(|v| v.to_bits()).collect();
        let bb: Vec<u64> = b.iter().map(|v| v.to_bits()).collect();
        prop_assert_eq!(ab, bb);
    }

    #[test]
    fn sampled_negatives_are_valid(
        seed in 0u64..1000,
        n in 6usize..20,
        p in 0.1f64..0.5,
    ) {
        let g = graph_from(seed, n, p);
        let non_edges = n * (n - 1) / 2 - g.num_edges();
        prop_assume!(non_edges >= 3);
        let count = non_edges.min(5);
        let negs = sample_negatives(&g, count, seed, &Default::default()).unwrap();
        prop_assert_eq!(negs.len(), count);
        let mut seen = std::collections::HashSet::new();
        for (u, v) in negs {
            prop_assert!(u < v);
            prop_assert!(!g.has_edge(u, v));
            prop_assert!(seen.insert((u, v)));
        }
    }
}
