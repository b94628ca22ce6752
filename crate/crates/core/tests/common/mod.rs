#![allow(dead_code)]

use imkit::{Graph, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random directed graph over `n` vertices with up to `m` distinct arcs and
/// probabilities in `[lo, hi)`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize, lo: f64, hi: f64) -> Graph {
    let mut pairs: Vec<(VertexId, VertexId)> = (0..n)
        .flat_map(|s| (0..n).filter(move |&d| d != s).map(move |d| (s, d)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    Graph::from_arcs(n, pairs.into_iter().map(|(s, d)| (s, d, rng.gen_range(lo..hi)))).unwrap()
}

/// Random out-forest: every vertex has at most one parent and parents
/// precede children in a shuffled order, so there are no cycles.
pub fn random_out_forest<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for i in 1..n {
        if rng.gen_bool(0.8) {
            let parent = order[rng.gen_range(0..i)];
            arcs.push((parent, order[i], rng.gen_range(0.05..0.95)));
        }
    }
    Graph::from_arcs(n, arcs).unwrap()
}

/// Between one and `max` distinct seeds.
pub fn random_seeds<R: Rng>(rng: &mut R, n: usize, max: usize) -> Vec<VertexId> {
    let mut all: Vec<VertexId> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(rng.gen_range(1..=max.min(n)));
    all
}

/// True when every vertex has in-degree at most one and the graph has no
/// directed cycle.
pub fn is_out_forest(g: &Graph) -> bool {
    if (0..g.num_vertices()).any(|v| g.in_degree(v) > 1) {
        return false;
    }
    // with in-degree <= 1, following parents from any vertex must end at a root
    (0..g.num_vertices()).all(|start| {
        let mut v = start;
        for _ in 0..=g.num_vertices() {
            match g.in_arc_indices(v).first() {
                None => return true,
                Some(&idx) => v = g.arc(idx).src,
            }
        }
        false
    })
}
