//! Ground-truth influence: Monte-Carlo cascades and exact live-edge
//! enumeration.
//!
//! Every replication of the Monte-Carlo estimator draws its coins from a
//! counter-based hash of `(master_seed, replication, arc)`. A replication
//! therefore corresponds to one fixed live-edge graph, independent of the
//! seed set being simulated and of how replications are spread over
//! threads. Greedy selection relies on this: evaluating different seed sets
//! under the same master seed compares them on identical samples.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Largest arc count accepted by [`exact_influence_enumeration`].
pub const MAX_ENUMERATION_ARCS: usize = 25;

const REPS_PER_CHUNK: usize = 128;

#[inline]
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Key of replication `r` under `master_seed`.
#[inline]
pub fn replication_key(master_seed: u64, r: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ r.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Whether arc `arc` is live in the replication identified by `key`.
#[inline]
fn coin(key: u64, arc: usize, prob: f64) -> bool {
    let bits = splitmix64(key ^ (arc as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    ((bits >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < prob
}

/// Reusable per-worker buffers for cascades.
pub(crate) struct CascadeScratch {
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<VertexId>,
    next: Vec<VertexId>,
}

impl CascadeScratch {
    pub(crate) fn new(n: usize) -> Self {
        CascadeScratch {
            stamp: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.frontier.clear();
        self.next.clear();
    }

    /// Runs one cascade from `seeds`, asking `trial(arc_index, prob)` once
    /// for every arc from a newly active vertex to a still inactive one.
    /// Returns the number of active vertices at termination.
    pub(crate) fn run<F>(&mut self, g: &Graph, seeds: &[VertexId], ordered: bool, mut trial: F) -> usize
    where
        F: FnMut(usize, f64) -> bool,
    {
        self.reset();
        let epoch = self.epoch;
        let mut active = 0;
        for &s in seeds {
            if self.stamp[s] != epoch {
                self.stamp[s] = epoch;
                self.frontier.push(s);
                active += 1;
            }
        }
        while !self.frontier.is_empty() {
            if ordered {
                self.frontier.sort_unstable();
            }
            for &u in &self.frontier {
                for idx in g.out_arc_range(u) {
                    let arc = g.arc(idx);
                    if self.stamp[arc.dst] != epoch && trial(idx, arc.prob) {
                        self.stamp[arc.dst] = epoch;
                        self.next.push(arc.dst);
                        active += 1;
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
            self.next.clear();
        }
        active
    }
}

/// One Independent Cascade run from `seeds` using `rng` for the activation
/// trials. Within a step, newly active vertices are processed in ascending
/// id order and their out-arcs in ascending destination order.
pub fn simulate_icm<R: Rng + ?Sized>(g: &Graph, seeds: &[VertexId], rng: &mut R) -> Result<usize> {
    g.check_vertices(seeds)?;
    let mut scratch = CascadeScratch::new(g.num_vertices());
    Ok(scratch.run(g, seeds, true, |_, p| rng.gen::<f64>() < p))
}

/// Activated-vertex count of a single counter-keyed replication.
pub(crate) fn keyed_cascade(g: &Graph, seeds: &[VertexId], key: u64, scratch: &mut CascadeScratch) -> usize {
    scratch.run(g, seeds, false, |arc, p| coin(key, arc, p))
}

/// Sum and sum of squares of activated counts over replications `0..reps`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct ReplicationTotals {
    pub sum: u64,
    pub sum_sq: u128,
    pub reps: u64,
}

impl ReplicationTotals {
    pub(crate) fn estimate(&self) -> SpreadEstimate {
        let r = self.reps as f64;
        let mean = self.sum as f64 / r;
        let std_error = if self.reps > 1 {
            // exact integer arithmetic for the centred sum of squares
            let centred = self.sum_sq * self.reps as u128 - (self.sum as u128) * (self.sum as u128);
            let var = centred as f64 / (r * (r - 1.0));
            (var / r).sqrt()
        } else {
            0.0
        };
        SpreadEstimate {
            mean,
            replications: self.reps as usize,
            std_error,
        }
    }
}

pub(crate) fn replication_totals(g: &Graph, seeds: &[VertexId], reps: usize, master_seed: u64) -> ReplicationTotals {
    let chunks = reps.div_ceil(REPS_PER_CHUNK);
    let n = g.num_vertices();
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut scratch = CascadeScratch::new(n);
            let lo = c * REPS_PER_CHUNK;
            let hi = (lo + REPS_PER_CHUNK).min(reps);
            let mut t = ReplicationTotals::default();
            for r in lo..hi {
                let x = keyed_cascade(g, seeds, replication_key(master_seed, r as u64), &mut scratch) as u64;
                t.sum += x;
                t.sum_sq += (x as u128) * (x as u128);
                t.reps += 1;
            }
            t
        })
        .reduce(ReplicationTotals::default, |a, b| ReplicationTotals {
            sum: a.sum + b.sum,
            sum_sq: a.sum_sq + b.sum_sq,
            reps: a.reps + b.reps,
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpreadEstimate {
    pub mean: f64,
    pub replications: usize,
    pub std_error: f64,
}

/// Mean activated count over `reps` cascades. The result depends only on
/// `(g, seeds, reps, master_seed)`, never on the thread count.
pub fn estimate_influence_mc(g: &Graph, seeds: &[VertexId], reps: usize, master_seed: u64) -> Result<SpreadEstimate> {
    if reps == 0 {
        return Err(Error::validation("replication count must be at least 1"));
    }
    g.check_vertices(seeds)?;
    Ok(replication_totals(g, seeds, reps, master_seed).estimate())
}

/// A live-edge graph: which arcs survived their coin flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiveEdgeSample {
    pub included: Vec<bool>,
}

impl LiveEdgeSample {
    pub fn sample<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        LiveEdgeSample {
            included: g.arcs().iter().map(|a| rng.gen::<f64>() < a.prob).collect(),
        }
    }

    fn from_mask(m: usize, mask: u64) -> Self {
        LiveEdgeSample {
            included: (0..m).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// Probability of drawing exactly this sample.
    pub fn probability(&self, g: &Graph) -> f64 {
        g.arcs()
            .iter()
            .zip(&self.included)
            .map(|(a, &live)| if live { a.prob } else { 1.0 - a.prob })
            .product()
    }

    /// Vertices reachable from `seeds` over live arcs.
    pub fn reachable(&self, g: &Graph, seeds: &[VertexId]) -> Vec<bool> {
        let mut seen = vec![false; g.num_vertices()];
        let mut queue = std::collections::VecDeque::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for idx in g.out_arc_range(u) {
                let dst = g.arc(idx).dst;
                if self.included[idx] && !seen[dst] {
                    seen[dst] = true;
                    queue.push_back(dst);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactInfluence {
    /// Probability that each vertex is active when the cascade stops.
    pub probs: Vec<f64>,
    pub sigma: f64,
}

/// Exact activation probabilities by summing over all `2^m` live-edge
/// graphs. Refuses graphs with more than [`MAX_ENUMERATION_ARCS`] arcs.
pub fn exact_influence_enumeration(g: &Graph, seeds: &[VertexId]) -> Result<ExactInfluence> {
    let m = g.num_arcs();
    if m > MAX_ENUMERATION_ARCS {
        return Err(Error::Capacity {
            arcs: m,
            limit: MAX_ENUMERATION_ARCS,
        });
    }
    g.check_vertices(seeds)?;
    let mut probs = vec![0.0; g.num_vertices()];
    if !seeds.is_empty() {
        for mask in 0..(1u64 << m) {
            let sample = LiveEdgeSample::from_mask(m, mask);
            let weight = sample.probability(g);
            if weight == 0.0 {
                continue;
            }
            for (v, hit) in sample.reachable(g, seeds).into_iter().enumerate() {
                if hit {
                    probs[v] += weight;
                }
            }
        }
    }
    let sigma = probs.iter().sum();
    Ok(ExactInfluence { probs, sigma })
}
