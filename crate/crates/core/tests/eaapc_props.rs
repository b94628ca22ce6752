mod common;

use std::collections::VecDeque;

use imkit::eaapc::{
    combine_multi_seed, eaapc_select, max_level, multi_seed_probs, single_seed_probs, CumulativeSeedProbs,
};
use imkit::harness::figure2_graph;
use imkit::oracle::exact_influence_enumeration;
use imkit::{Graph, VertexId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight-line evaluation of the Q-path formula: plain BFS distances,
/// then shortest-path probabilities in distance order from arcs out of the
/// previous level, then Q-path probabilities from every arc whose tail was
/// expanded.
fn q_path_oracle(g: &Graph, u: VertexId, depth: usize, blocked: &[VertexId]) -> Vec<f64> {
    let n = g.num_vertices();
    let mut dist = vec![usize::MAX; n];
    dist[u] = 0;
    let mut queue = VecDeque::from([u]);
    while let Some(v) = queue.pop_front() {
        if dist[v] >= depth {
            continue;
        }
        for a in g.out_arcs(v) {
            if !blocked.contains(&a.dst) && dist[a.dst] == usize::MAX {
                dist[a.dst] = dist[v] + 1;
                queue.push_back(a.dst);
            }
        }
    }
    let mut by_dist: Vec<VertexId> = (0..n).filter(|&v| dist[v] != usize::MAX).collect();
    by_dist.sort_by_key(|&v| dist[v]);

    let mut s_ib = vec![0.0; n];
    s_ib[u] = 1.0;
    for &w in &by_dist {
        if w == u {
            continue;
        }
        let mut miss = 1.0;
        for (v, p) in g.in_neighbors(w).unwrap() {
            if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                miss *= 1.0 - p * s_ib[v];
            }
        }
        s_ib[w] = 1.0 - miss;
    }
    let mut q_ib = vec![0.0; n];
    for &w in &by_dist {
        if w == u {
            q_ib[w] = 1.0;
            continue;
        }
        let mut miss = 1.0;
        for (v, p) in g.in_neighbors(w).unwrap() {
            if dist[v] != usize::MAX && dist[v] < depth {
                miss *= 1.0 - p * s_ib[v];
            }
        }
        q_ib[w] = 1.0 - miss;
    }
    q_ib
}

#[test]
fn figure2_trace() {
    let g = figure2_graph();
    let probs = single_seed_probs(&g, g.vertex(1).unwrap(), 6, &[]).unwrap();
    let want = [(1, 1.0), (2, 0.1009), (3, 0.01099), (4, 0.1), (5, 0.01)];
    for (label, p) in want {
        let got = probs[g.vertex(label).unwrap()];
        assert!((got - p).abs() < 1e-12, "vertex {label}: {got}");
    }
    // depth 1 stops before the second hop
    let shallow = single_seed_probs(&g, g.vertex(1).unwrap(), 1, &[]).unwrap();
    assert_eq!(shallow[g.vertex(3).unwrap()], 0.0);
    assert_eq!(shallow[g.vertex(5).unwrap()], 0.0);
}

#[test]
fn trees_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let g = common::random_out_forest(&mut rng, 8);
        let u = rng.gen_range(0..8);
        let probs = single_seed_probs(&g, u, 8, &[]).unwrap();
        let exact = exact_influence_enumeration(&g, &[u]).unwrap();
        for v in 0..8 {
            assert!((probs[v] - exact.probs[v]).abs() < 1e-12);
        }
    }
}

#[test]
fn depth_from_eps() {
    assert_eq!(max_level(0.1, 1e-3).unwrap(), 3);
    assert_eq!(max_level(0.01, 1e-3).unwrap(), 2);
    assert_eq!(max_level(0.5, 1e-3).unwrap(), 10);
}

#[test]
fn figure2_picks_vertex_one() {
    let g = figure2_graph();
    let r = eaapc_select(&g, 1, 3).unwrap();
    assert_eq!(r.seeds, vec![g.vertex(1).unwrap()]);
}

#[test]
fn multi_seed_matches_selector_estimates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = common::random_graph(&mut rng, 30, 120, 0.0, 0.3);
    let r = eaapc_select(&g, 4, 4).unwrap();
    for i in 1..=4 {
        let cum = multi_seed_probs(&g, &r.seeds[..i], 4).unwrap();
        assert!((cum.total() - r.marginal_estimates[i - 1]).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bfs_matches_straight_line_oracle(seed in any::<u64>(), n in 2usize..20, m in 0usize..60, depth in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, n, m, 0.0, 1.0);
        let u = rng.gen_range(0..n);
        let mut blocked: Vec<VertexId> = (0..n).filter(|&v| v != u && rng.gen_bool(0.15)).collect();
        blocked.sort();
        let got = single_seed_probs(&g, u, depth, &blocked).unwrap();
        let want = q_path_oracle(&g, u, depth, &blocked);
        for v in 0..n {
            prop_assert!((got[v] - want[v]).abs() <= 1e-12, "v={} got {} want {}", v, got[v], want[v]);
            prop_assert!((0.0..=1.0).contains(&got[v]));
        }
        for &b in &blocked {
            prop_assert_eq!(got[b], 0.0);
        }
    }

    #[test]
    fn combine_is_order_invariant(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vectors: Vec<Vec<f64>> = (0..5).map(|_| (0..n).map(|_| rng.gen::<f64>()).collect()).collect();
        let fold = |order: &[usize]| {
            order.iter().fold(CumulativeSeedProbs::new(n), |acc, &i| combine_multi_seed(&acc, &vectors[i]).unwrap())
        };
        let base = fold(&[0, 1, 2, 3, 4]);
        let mut order = vec![0, 1, 2, 3, 4];
        for _ in 0..10 {
            order.shuffle(&mut rng);
            let other = fold(&order);
            for v in 0..n {
                prop_assert!((base.probs()[v] - other.probs()[v]).abs() <= 1e-12);
            }
        }
    }
}

