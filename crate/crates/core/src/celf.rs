//! Greedy maximisation of a set function, exhaustively or with CELF lazy
//! re-evaluation.
//!
//! Both drivers pick, every round, the candidate with the largest value of
//! `f(S ∪ {w})`, ties going to the lowest vertex id. For a submodular `f`
//! the lazy driver returns the same sequence as the exhaustive one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::graph::VertexId;

/// A set function evaluated incrementally by the greedy drivers.
pub(crate) trait Objective: Sync {
    type Scratch: Send;

    fn scratch(&self) -> Self::Scratch;

    /// `f(seeds ∪ {candidate})`, with `candidate ∉ seeds`.
    fn value_with(&self, seeds: &[VertexId], candidate: VertexId, scratch: &mut Self::Scratch) -> f64;

    fn value(&self, seeds: &[VertexId], scratch: &mut Self::Scratch) -> f64;
}

/// Lazy-forward bookkeeping for one candidate.
#[derive(Clone, Copy, Debug)]
pub struct CelfEntry {
    pub vertex: VertexId,
    /// Gain over the seed set of round `round_stamp`.
    pub cached_marginal: f64,
    pub round_stamp: usize,
    value: f64,
}

impl PartialEq for CelfEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CelfEntry {}

impl PartialOrd for CelfEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CelfEntry {
    // max-heap on the marginal, lower id first among equals
    fn cmp(&self, other: &Self) -> Ordering {
        self.cached_marginal
            .total_cmp(&other.cached_marginal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// `(vertex, value)` with the larger value winning and the lower id
/// breaking ties.
fn better(a: (VertexId, f64), b: (VertexId, f64)) -> (VertexId, f64) {
    match a.1.total_cmp(&b.1) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.0 <= b.0 {
                a
            } else {
                b
            }
        }
    }
}

/// Evaluates every candidate each round. Returns `(seed, f(S_i))` pairs.
pub(crate) fn greedy_eager<O: Objective>(obj: &O, n: usize, k: usize) -> Vec<(VertexId, f64)> {
    let k = k.min(n);
    let mut chosen = Vec::with_capacity(k);
    let mut seeds = Vec::with_capacity(k);
    let mut in_set = vec![false; n];
    for _ in 0..k {
        let best = (0..n)
            .into_par_iter()
            .filter(|&w| !in_set[w])
            .map_init(|| obj.scratch(), |scratch, w| (w, obj.value_with(&seeds, w, scratch)))
            .reduce_with(better)
            .expect("k <= n leaves a candidate");
        in_set[best.0] = true;
        seeds.push(best.0);
        chosen.push(best);
    }
    chosen
}

/// CELF. Stale marginals are upper bounds under submodularity, so only
/// entries whose bound reaches the best fresh marginal are re-evaluated.
/// `tolerance` widens that reach so that floating-point noise cannot hide
/// a tie.
pub(crate) fn greedy_lazy<O: Objective>(obj: &O, n: usize, k: usize, tolerance: f64) -> Vec<(VertexId, f64)> {
    let k = k.min(n);
    let mut chosen = Vec::with_capacity(k);
    if k == 0 {
        return chosen;
    }
    let mut scratch = obj.scratch();
    let mut base = obj.value(&[], &mut scratch);
    let mut heap: BinaryHeap<CelfEntry> = (0..n)
        .into_par_iter()
        .map_init(
            || obj.scratch(),
            |s, w| {
                let value = obj.value_with(&[], w, s);
                CelfEntry {
                    vertex: w,
                    cached_marginal: value - base,
                    round_stamp: 0,
                    value,
                }
            },
        )
        .collect::<Vec<_>>()
        .into();

    let mut seeds: Vec<VertexId> = Vec::with_capacity(k);
    for round in 0..k {
        let mut fresh: Vec<CelfEntry> = Vec::new();
        let mut best_gain = f64::NEG_INFINITY;
        while let Some(top) = heap.peek() {
            if !fresh.is_empty() && top.cached_marginal < best_gain - tolerance {
                break;
            }
            let mut e = heap.pop().expect("peeked");
            if e.round_stamp == round {
                best_gain = best_gain.max(e.cached_marginal);
                fresh.push(e);
            } else {
                e.value = obj.value_with(&seeds, e.vertex, &mut scratch);
                e.cached_marginal = e.value - base;
                e.round_stamp = round;
                heap.push(e);
            }
        }
        let winner = fresh
            .iter()
            .map(|e| (e.vertex, e.value))
            .reduce(better)
            .expect("heap holds at least k - round entries");
        for e in fresh {
            if e.vertex != winner.0 {
                heap.push(e);
            }
        }
        seeds.push(winner.0);
        base = winner.1;
        chosen.push(winner);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Weighted coverage: each vertex covers a fixed set of items.
    struct Coverage {
        sets: Vec<Vec<usize>>,
        weights: Vec<f64>,
    }

    impl Objective for Coverage {
        type Scratch = ();

        fn scratch(&self) {}

        fn value_with(&self, seeds: &[VertexId], c: VertexId, _: &mut ()) -> f64 {
            let mut all = seeds.to_vec();
            all.push(c);
            self.value(&all, &mut ())
        }

        fn value(&self, seeds: &[VertexId], _: &mut ()) -> f64 {
            let mut covered = vec![false; self.weights.len()];
            for &s in seeds {
                for &i in &self.sets[s] {
                    covered[i] = true;
                }
            }
            covered.iter().zip(&self.weights).filter(|(c, _)| **c).map(|(_, w)| w).sum()
        }
    }

    #[test]
    fn lazy_matches_eager_on_coverage() {
        let obj = Coverage {
            sets: vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5], vec![6], vec![1, 6]],
            weights: vec![1.0, 2.0, 1.0, 3.0, 1.0, 1.0, 2.0],
        };
        for k in 1..=6 {
            assert_eq!(greedy_eager(&obj, 6, k), greedy_lazy(&obj, 6, k, 0.0));
        }
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let obj = Coverage {
            sets: vec![vec![0], vec![1], vec![2]],
            weights: vec![1.0; 3],
        };
        let picks: Vec<_> = greedy_lazy(&obj, 3, 3, 0.0).into_iter().map(|p| p.0).collect();
        assert_eq!(picks, vec![0, 1, 2]);
        assert_eq!(greedy_eager(&obj, 3, 2).len(), 2);
        assert_eq!(greedy_eager(&obj, 3, 9).len(), 3);
    }
}
