//! Step-indexed activation probabilities and the greedy selector built on
//! them, plus the steady-state fixed point used as a baseline.
//!
//! For a seed set `S` and step `t`:
//!
//! ```text
//! at(v, t)   = (1 - till(v, t-1)) * (1 - Π_{(u,v)} (1 - p(u,v) * at(u, t-1)))
//! till(v, t) = 1 - Π_{τ=0..t} (1 - at(v, τ))
//! at(v, 0)   = till(v, 0) = [v ∈ S]
//! ```
//!
//! and the spread estimate after `T` steps is `Σ_v till(v, T)`.

use std::time::Instant;

use crate::celf::{greedy_eager, greedy_lazy, Objective};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::selection::{validate_k, Algorithm, SeedSelectionResult, SelectionConfig};

/// Horizon recommended for accuracy.
pub const DEFAULT_HORIZON: usize = 6;
pub const STEADY_STATE_TOL: f64 = 1e-9;
pub const STEADY_STATE_MAX_ITER: usize = 10_000;

/// `at` and `till` for every vertex and step `0..=horizon`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbTable {
    n: usize,
    horizon: usize,
    // step-major: index t * n + v
    at: Vec<f64>,
    till: Vec<f64>,
}

impl ProbTable {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Probability that `v` becomes active exactly at step `t`.
    pub fn probat(&self, v: VertexId, t: usize) -> f64 {
        self.at[t * self.n + v]
    }

    /// Probability that `v` is active by step `t`.
    pub fn probtill(&self, v: VertexId, t: usize) -> f64 {
        self.till[t * self.n + v]
    }

    /// `till(·, horizon)`.
    pub fn final_probs(&self) -> &[f64] {
        &self.till[self.horizon * self.n..]
    }
}

/// Fills the full table step by step, pulling over in-arcs.
pub fn activation_probabilities(g: &Graph, seeds: &[VertexId], horizon: usize) -> Result<ProbTable> {
    g.check_vertices(seeds)?;
    let n = g.num_vertices();
    let mut at = vec![0.0; n * (horizon + 1)];
    let mut till = vec![0.0; n * (horizon + 1)];
    // running Π (1 - at(v, τ))
    let mut complement = vec![1.0; n];
    for &s in seeds {
        at[s] = 1.0;
        till[s] = 1.0;
        complement[s] = 0.0;
    }
    for t in 1..=horizon {
        let (prev, cur) = at.split_at_mut(t * n);
        let prev_at = &prev[(t - 1) * n..];
        let prev_till = &till[(t - 1) * n..t * n];
        let cur_at = &mut cur[..n];
        for v in 0..n {
            let miss: f64 = g
                .in_arc_indices(v)
                .iter()
                .map(|&i| {
                    let a = g.arc(i);
                    1.0 - a.prob * prev_at[a.src]
                })
                .product();
            cur_at[v] = (1.0 - prev_till[v]) * (1.0 - miss);
        }
        for v in 0..n {
            complement[v] *= 1.0 - cur_at[v];
            till[t * n + v] = 1.0 - complement[v];
        }
    }
    Ok(ProbTable { n, horizon, at, till })
}

/// `Σ_v till(v, T)`.
pub fn influence_estimate(table: &ProbTable) -> f64 {
    table.final_probs().iter().sum()
}

/// Rolling-buffer evaluator of `Σ_v till(v, T)`.
///
/// Pushes probability mass along out-arcs of vertices whose `at` value was
/// non-zero in the previous step, so untouched parts of the graph cost
/// nothing. Frontiers and the final sum are walked in ascending id order,
/// which makes the result bit-identical to
/// `influence_estimate(&activation_probabilities(..))`.
pub(crate) struct SpreadScratch {
    complement: Vec<f64>,
    at: Vec<f64>,
    miss: Vec<f64>,
    touched_mark: Vec<u32>,
    step_mark: Vec<u32>,
    epoch: u32,
    step_epoch: u32,
    touched: Vec<VertexId>,
    frontier: Vec<VertexId>,
    step_list: Vec<VertexId>,
}

impl SpreadScratch {
    pub(crate) fn new(n: usize) -> Self {
        SpreadScratch {
            complement: vec![1.0; n],
            at: vec![0.0; n],
            miss: vec![1.0; n],
            touched_mark: vec![0; n],
            step_mark: vec![0; n],
            epoch: 0,
            step_epoch: 0,
            touched: Vec::new(),
            frontier: Vec::new(),
            step_list: Vec::new(),
        }
    }

    fn bump(epoch: &mut u32, marks: &mut [u32]) {
        *epoch = epoch.wrapping_add(1);
        if *epoch == 0 {
            marks.iter_mut().for_each(|m| *m = 0);
            *epoch = 1;
        }
    }

    pub(crate) fn spread(&mut self, g: &Graph, seeds: &[VertexId], extra: Option<VertexId>, horizon: usize) -> f64 {
        Self::bump(&mut self.epoch, &mut self.touched_mark);
        self.touched.clear();
        self.frontier.clear();
        for s in seeds.iter().copied().chain(extra) {
            if self.touched_mark[s] != self.epoch {
                self.touched_mark[s] = self.epoch;
                self.touched.push(s);
                self.frontier.push(s);
                self.complement[s] = 0.0;
                self.at[s] = 1.0;
            }
        }
        self.frontier.sort_unstable();

        for _ in 1..=horizon {
            if self.frontier.is_empty() {
                break;
            }
            Self::bump(&mut self.step_epoch, &mut self.step_mark);
            self.step_list.clear();
            for &u in &self.frontier {
                let au = self.at[u];
                for a in g.out_arcs(u) {
                    if self.step_mark[a.dst] != self.step_epoch {
                        self.step_mark[a.dst] = self.step_epoch;
                        self.miss[a.dst] = 1.0;
                        self.step_list.push(a.dst);
                    }
                    self.miss[a.dst] *= 1.0 - a.prob * au;
                }
            }
            self.frontier.clear();
            for &v in &self.step_list {
                if self.touched_mark[v] != self.epoch {
                    self.touched_mark[v] = self.epoch;
                    self.touched.push(v);
                    self.complement[v] = 1.0;
                }
                // (1 - till) spelled out as in the table fill, to stay bit-identical
                let at = (1.0 - (1.0 - self.complement[v])) * (1.0 - self.miss[v]);
                if at > 0.0 {
                    self.complement[v] *= 1.0 - at;
                    self.at[v] = at;
                    self.frontier.push(v);
                }
            }
            self.frontier.sort_unstable();
        }
        self.touched.sort_unstable();
        self.touched.iter().map(|&v| 1.0 - self.complement[v]).sum()
    }
}

struct AapcObjective<'g> {
    g: &'g Graph,
    horizon: usize,
}

impl Objective for AapcObjective<'_> {
    type Scratch = SpreadScratch;

    fn scratch(&self) -> SpreadScratch {
        SpreadScratch::new(self.g.num_vertices())
    }

    fn value_with(&self, seeds: &[VertexId], w: VertexId, s: &mut SpreadScratch) -> f64 {
        s.spread(self.g, seeds, Some(w), self.horizon)
    }

    fn value(&self, seeds: &[VertexId], s: &mut SpreadScratch) -> f64 {
        s.spread(self.g, seeds, None, self.horizon)
    }
}

/// Relative slack used by the lazy drivers over floating-point objectives.
fn lazy_tolerance(g: &Graph) -> f64 {
    1e-9 * (g.num_vertices().max(1) as f64)
}

/// Greedy seed selection maximising the `T`-step spread estimate.
pub fn aapc_select(g: &Graph, k: usize, horizon: usize, lazy: bool) -> Result<SeedSelectionResult> {
    validate_k(k)?;
    if horizon == 0 {
        return Err(Error::validation("horizon T must be at least 1"));
    }
    let start = Instant::now();
    let obj = AapcObjective { g, horizon };
    let n = g.num_vertices();
    let picks = if lazy {
        greedy_lazy(&obj, n, k, lazy_tolerance(g))
    } else {
        greedy_eager(&obj, n, k)
    };
    Ok(SeedSelectionResult {
        algorithm: Algorithm::Aapc,
        seeds: picks.iter().map(|p| p.0).collect(),
        marginal_estimates: picks.iter().map(|p| p.1).collect(),
        wall_time: start.elapsed(),
        config: SelectionConfig {
            k,
            horizon: Some(horizon),
            lazy,
            ..Default::default()
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyState {
    pub probs: Vec<f64>,
    pub iterations: usize,
    /// Largest per-vertex change in the last sweep.
    pub residual: f64,
    pub converged: bool,
}

/// Jacobi iteration of `π(v) = 1 - Π_{(u,v)} (1 - p(u,v) π(u))` with
/// `π(s) = 1` on seeds, starting from the seed indicator.
pub fn steady_state_probabilities(g: &Graph, seeds: &[VertexId], tol: f64, max_iter: usize) -> Result<SteadyState> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::validation(format!("tolerance must be positive, got {tol}")));
    }
    g.check_vertices(seeds)?;
    let n = g.num_vertices();
    let mut is_seed = vec![false; n];
    for &s in seeds {
        is_seed[s] = true;
    }
    let mut pi: Vec<f64> = is_seed.iter().map(|&s| if s { 1.0 } else { 0.0 }).collect();
    let mut next = pi.clone();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        residual = 0.0;
        for v in 0..n {
            if is_seed[v] {
                continue;
            }
            let miss: f64 = g
                .in_arc_indices(v)
                .iter()
                .map(|&i| {
                    let a = g.arc(i);
                    1.0 - a.prob * pi[a.src]
                })
                .product();
            next[v] = 1.0 - miss;
            residual = f64::max(residual, (next[v] - pi[v]).abs());
        }
        std::mem::swap(&mut pi, &mut next);
        if residual < tol {
            break;
        }
    }
    Ok(SteadyState {
        probs: pi,
        iterations,
        converged: residual < tol,
        residual,
    })
}

struct SteadyStateObjective<'g> {
    g: &'g Graph,
}

impl Objective for SteadyStateObjective<'_> {
    type Scratch = ();

    fn scratch(&self) {}

    fn value_with(&self, seeds: &[VertexId], w: VertexId, _: &mut ()) -> f64 {
        let mut all = seeds.to_vec();
        all.push(w);
        self.value(&all, &mut ())
    }

    fn value(&self, seeds: &[VertexId], _: &mut ()) -> f64 {
        steady_state_probabilities(self.g, seeds, STEADY_STATE_TOL, STEADY_STATE_MAX_ITER)
            .map(|s| s.probs.iter().sum())
            .unwrap_or(f64::NAN)
    }
}

/// Greedy selection on the steady-state spread `Σ_v π(v)`.
pub fn steady_state_select(g: &Graph, k: usize, lazy: bool) -> Result<SeedSelectionResult> {
    validate_k(k)?;
    let start = Instant::now();
    let obj = SteadyStateObjective { g };
    let n = g.num_vertices();
    let picks = if lazy {
        greedy_lazy(&obj, n, k, lazy_tolerance(g))
    } else {
        greedy_eager(&obj, n, k)
    };
    Ok(SeedSelectionResult {
        algorithm: Algorithm::SteadyState,
        seeds: picks.iter().map(|p| p.0).collect(),
        marginal_estimates: picks.iter().map(|p| p.1).collect(),
        wall_time: start.elapsed(),
        config: SelectionConfig {
            k,
            lazy,
            ..Default::default()
        },
    })
}
