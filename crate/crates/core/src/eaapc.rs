//! Activation probabilities from a single candidate seed computed by a
//! level-bounded BFS, and the greedy selector that folds them into the
//! probabilities of the seeds chosen so far.
//!
//! During the BFS from `u`, the arc `(v, w)` scanned when `v` is dequeued
//! carries `p(v, w) * sIB(v)`, where `sIB(v)` is the probability that `v` is
//! reached along a shortest path. If `w` sits one level below `v` the
//! contribution belongs to the shortest-path product of `w`; any other arc
//! (back, cross or same-level) only adds to the Q-path product of `w`:
//!
//! ```text
//! 1 - sIB(w) = Π_{(v,w), level(v) = level(w) - 1} (1 - p(v,w) sIB(v))
//! 1 - qIB(w) = Π_{(v,w) scanned}                  (1 - p(v,w) sIB(v))
//! ```

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::selection::{validate_k, Algorithm, SeedSelectionResult, SelectionConfig};

/// Default tolerable error used to derive the BFS depth.
pub const DEFAULT_EPS: f64 = 1e-3;

/// Smallest `L` with `p_avg^L <= eps`, i.e. `⌈ln eps / ln p_avg⌉`.
pub fn max_level(p_avg: f64, eps: f64) -> Result<usize> {
    if !(p_avg > 0.0 && p_avg < 1.0) {
        return Err(Error::validation(format!("average probability {p_avg} is outside (0, 1)")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::validation(format!("eps {eps} is outside (0, 1)")));
    }
    let ratio = eps.ln() / p_avg.ln();
    // 0.1^3 is not exactly 0.001 in binary; absorb the rounding before ceil
    let level = (ratio - 1e-9).ceil().max(0.0);
    Ok(level as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VisitState {
    Unprocessed,
    InProcess,
    Processed,
}

/// Scratch space for one BFS propagation. Reused across candidates: a
/// version stamp marks which entries belong to the current run, so resetting
/// costs nothing.
#[derive(Clone, Debug)]
pub struct BfsPropagationState {
    stamp: Vec<u32>,
    epoch: u32,
    state: Vec<VisitState>,
    level: Vec<u32>,
    s_comp: Vec<f64>,
    // product of the non-shortest contributions; q_comp = s_comp * q_extra
    q_extra: Vec<f64>,
    order: Vec<VertexId>,
}

impl BfsPropagationState {
    pub fn new(n: usize) -> Self {
        BfsPropagationState {
            stamp: vec![0; n],
            epoch: 0,
            state: vec![VisitState::Unprocessed; n],
            level: vec![0; n],
            s_comp: vec![1.0; n],
            q_extra: vec![1.0; n],
            order: Vec::new(),
        }
    }

    #[inline]
    fn seen(&self, v: VertexId) -> bool {
        self.stamp[v] == self.epoch
    }

    pub fn state(&self, v: VertexId) -> VisitState {
        if self.seen(v) {
            self.state[v]
        } else {
            VisitState::Unprocessed
        }
    }

    pub fn level(&self, v: VertexId) -> Option<usize> {
        self.seen(v).then(|| self.level[v] as usize)
    }

    /// `P[¬sIB(u, v)]`.
    pub fn s_comp(&self, v: VertexId) -> f64 {
        if self.seen(v) {
            self.s_comp[v]
        } else {
            1.0
        }
    }

    /// `P[¬qIB(u, v)]`.
    pub fn q_comp(&self, v: VertexId) -> f64 {
        if self.seen(v) {
            self.s_comp[v] * self.q_extra[v]
        } else {
            1.0
        }
    }

    /// `P[qIB(u, v)]`.
    #[inline]
    pub fn prob(&self, v: VertexId) -> f64 {
        1.0 - self.q_comp(v)
    }

    /// Vertices reached by the last run, in BFS order.
    pub fn visited(&self) -> &[VertexId] {
        &self.order
    }

    fn touch(&mut self, v: VertexId, level: u32, s_comp: f64) {
        self.stamp[v] = self.epoch;
        self.state[v] = VisitState::InProcess;
        self.level[v] = level;
        self.s_comp[v] = s_comp;
        self.q_extra[v] = 1.0;
        self.order.push(v);
    }

    /// BFS from `u` down to `max_level`, never entering `blocked` vertices.
    pub(crate) fn propagate(&mut self, g: &Graph, u: VertexId, max_level: usize, blocked: &[bool]) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.order.clear();
        self.touch(u, 0, 0.0);

        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let lv = self.level[v];
            let reach_v = 1.0 - self.s_comp[v];
            if (lv as usize) < max_level {
                for a in g.out_arcs(v) {
                    let w = a.dst;
                    if blocked[w] {
                        continue;
                    }
                    if !self.seen(w) {
                        self.touch(w, lv + 1, 1.0);
                    }
                    let factor = 1.0 - a.prob * reach_v;
                    if self.state[w] == VisitState::InProcess && self.level[w] == lv + 1 {
                        self.s_comp[w] *= factor;
                    } else {
                        self.q_extra[w] *= factor;
                    }
                }
            }
            self.state[v] = VisitState::Processed;
        }
    }
}

fn blocked_mask(g: &Graph, blocked: &[VertexId]) -> Result<Vec<bool>> {
    g.check_vertices(blocked)?;
    let mut mask = vec![false; g.num_vertices()];
    for &b in blocked {
        mask[b] = true;
    }
    Ok(mask)
}

/// `P[qIB(u, v)]` for every vertex `v`, exploring at most `max_level` hops
/// from `u` and treating `blocked` vertices as absent.
pub fn single_seed_probs(g: &Graph, u: VertexId, max_level: usize, blocked: &[VertexId]) -> Result<Vec<f64>> {
    g.check_vertex(u)?;
    let mask = blocked_mask(g, blocked)?;
    if mask[u] {
        return Err(Error::validation(format!("candidate {u} is in the blocked set")));
    }
    let mut state = BfsPropagationState::new(g.num_vertices());
    state.propagate(g, u, max_level, &mask);
    Ok((0..g.num_vertices()).map(|v| state.prob(v)).collect())
}

/// `P[qIB(S_i, v)]` for the seed sequence chosen so far.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulativeSeedProbs {
    probs: Vec<f64>,
}

impl CumulativeSeedProbs {
    /// All zero: no seeds yet.
    pub fn new(n: usize) -> Self {
        CumulativeSeedProbs { probs: vec![0.0; n] }
    }

    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::validation(format!("probability {p} is outside [0, 1]")));
        }
        Ok(CumulativeSeedProbs { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// `P(S_i) = P(S_{i-1}) + (1 - P(S_{i-1})) * P(u_i)`, pointwise.
pub fn combine_multi_seed(prev: &CumulativeSeedProbs, new_probs: &[f64]) -> Result<CumulativeSeedProbs> {
    if prev.probs.len() != new_probs.len() {
        return Err(Error::LengthMismatch {
            expected: prev.probs.len(),
            actual: new_probs.len(),
        });
    }
    if let Some(p) = new_probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::validation(format!("probability {p} is outside [0, 1]")));
    }
    Ok(CumulativeSeedProbs {
        probs: prev
            .probs
            .iter()
            .zip(new_probs)
            .map(|(&old, &new)| old + (1.0 - old) * new)
            .collect(),
    })
}

/// Gain of candidate `u` over the cumulative vector, summed in BFS order.
fn candidate_gain(state: &BfsPropagationState, cumulative: &[f64]) -> f64 {
    state
        .visited()
        .iter()
        .map(|&v| (1.0 - cumulative[v]) * state.prob(v))
        .sum()
}

/// Greedy selection on the folded Q-path probabilities.
pub fn eaapc_select(g: &Graph, k: usize, max_level: usize) -> Result<SeedSelectionResult> {
    validate_k(k)?;
    let start = Instant::now();
    let n = g.num_vertices();
    let k_eff = k.min(n);
    let mut cumulative = vec![0.0; n];
    let mut blocked = vec![false; n];
    let mut seeds = Vec::with_capacity(k_eff);
    let mut estimates = Vec::with_capacity(k_eff);
    let mut state = BfsPropagationState::new(n);

    for _ in 0..k_eff {
        let (winner, _) = (0..n)
            .into_par_iter()
            .filter(|&u| !blocked[u])
            .map_init(
                || BfsPropagationState::new(n),
                |scratch, u| {
                    scratch.propagate(g, u, max_level, &blocked);
                    (u, candidate_gain(scratch, &cumulative))
                },
            )
            .reduce_with(|a, b| match a.1.total_cmp(&b.1) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Equal => {
                    if a.0 <= b.0 {
                        a
                    } else {
                        b
                    }
                }
            })
            .expect("k <= n leaves a candidate");

        state.propagate(g, winner, max_level, &blocked);
        for &v in state.visited() {
            let old = cumulative[v];
            cumulative[v] = old + (1.0 - old) * state.prob(v);
        }
        blocked[winner] = true;
        seeds.push(winner);
        estimates.push(cumulative.iter().sum());
    }

    Ok(SeedSelectionResult {
        algorithm: Algorithm::Eaapc,
        seeds,
        marginal_estimates: estimates,
        wall_time: start.elapsed(),
        config: SelectionConfig {
            k,
            max_level: Some(max_level),
            ..Default::default()
        },
    })
}

/// Folds the per-seed probabilities of `seeds` in order, each BFS blocked
/// by the seeds before it.
pub fn multi_seed_probs(g: &Graph, seeds: &[VertexId], max_level: usize) -> Result<CumulativeSeedProbs> {
    g.check_vertices(seeds)?;
    let n = g.num_vertices();
    let mut cumulative = CumulativeSeedProbs::new(n);
    let mut blocked = vec![false; n];
    let mut state = BfsPropagationState::new(n);
    for &s in seeds {
        if blocked[s] {
            continue;
        }
        state.propagate(g, s, max_level, &blocked);
        for &v in state.visited() {
            let old = cumulative.probs[v];
            cumulative.probs[v] = old + (1.0 - old) * state.prob(v);
        }
        blocked[s] = true;
    }
    Ok(cumulative)
}
