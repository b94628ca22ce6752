//! Comparison selectors: Monte-Carlo greedy hill climbing and top degree.

use std::time::Instant;

use crate::celf::{greedy_eager, greedy_lazy, Objective};
pub use crate::celf::CelfEntry;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::oracle::replication_totals;
use crate::selection::{validate_k, Algorithm, SeedSelectionResult, SelectionConfig};

/// Replications per spread estimate.
pub const DEFAULT_REPS: usize = 5000;

/// Total activated count over a fixed bank of replications. Every seed set
/// is simulated on the same live-edge samples, so the objective is an exact
/// coverage function: monotone, submodular and integer valued.
struct McObjective<'g> {
    g: &'g Graph,
    reps: usize,
    master_seed: u64,
}

impl Objective for McObjective<'_> {
    type Scratch = ();

    fn scratch(&self) {}

    fn value_with(&self, seeds: &[VertexId], w: VertexId, _: &mut ()) -> f64 {
        let mut all = Vec::with_capacity(seeds.len() + 1);
        all.extend_from_slice(seeds);
        all.push(w);
        self.value(&all, &mut ())
    }

    fn value(&self, seeds: &[VertexId], _: &mut ()) -> f64 {
        replication_totals(self.g, seeds, self.reps, self.master_seed).sum as f64
    }
}

/// Greedy hill climbing on the Monte-Carlo spread, using CELF.
pub fn greedy_mc_select(g: &Graph, k: usize, reps: usize, master_seed: u64) -> Result<SeedSelectionResult> {
    greedy_mc_select_with(g, k, reps, master_seed, true)
}

/// Greedy hill climbing with CELF switched on or off. Both modes return
/// the same seeds for the same `master_seed`.
pub fn greedy_mc_select_with(
    g: &Graph,
    k: usize,
    reps: usize,
    master_seed: u64,
    lazy: bool,
) -> Result<SeedSelectionResult> {
    validate_k(k)?;
    if reps == 0 {
        return Err(Error::validation("replication count must be at least 1"));
    }
    let start = Instant::now();
    let obj = McObjective { g, reps, master_seed };
    let n = g.num_vertices();
    // integer totals: no slack needed
    let picks = if lazy {
        greedy_lazy(&obj, n, k, 0.0)
    } else {
        greedy_eager(&obj, n, k)
    };
    Ok(SeedSelectionResult {
        algorithm: Algorithm::GreedyMc,
        seeds: picks.iter().map(|p| p.0).collect(),
        marginal_estimates: picks.iter().map(|p| p.1 / reps as f64).collect(),
        wall_time: start.elapsed(),
        config: SelectionConfig {
            k,
            reps: Some(reps),
            master_seed: Some(master_seed),
            lazy,
            ..Default::default()
        },
    })
}

/// Top `k` vertices by out-degree, lowest id first among equals.
pub fn degree_select(g: &Graph, k: usize) -> Result<SeedSelectionResult> {
    validate_k(k)?;
    let start = Instant::now();
    let mut order: Vec<VertexId> = (0..g.num_vertices()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.out_degree(v)), v));
    order.truncate(k);
    Ok(SeedSelectionResult {
        algorithm: Algorithm::Degree,
        seeds: order,
        marginal_estimates: Vec::new(),
        wall_time: start.elapsed(),
        config: SelectionConfig {
            k,
            ..Default::default()
        },
    })
}
