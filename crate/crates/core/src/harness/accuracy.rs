use std::fmt::Write as _;

use crate::aapc::{activation_probabilities, steady_state_probabilities, STEADY_STATE_MAX_ITER, STEADY_STATE_TOL};
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::oracle::exact_influence_enumeration;

/// Per-vertex comparison of the step recurrences against the steady state
/// and the exact probability.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyTable {
    pub labels: Vec<u64>,
    pub t_max: usize,
    /// `step[v][t]` is `till(v, t)` for `t = 0..=t_max`.
    pub step: Vec<Vec<f64>>,
    pub steady_state: Vec<f64>,
    pub exact: Vec<f64>,
}

pub fn accuracy_report(g: &Graph, seeds: &[VertexId], t_max: usize) -> Result<AccuracyTable> {
    let exact = exact_influence_enumeration(g, seeds)?.probs;
    let table = activation_probabilities(g, seeds, t_max)?;
    let steady = steady_state_probabilities(g, seeds, STEADY_STATE_TOL, STEADY_STATE_MAX_ITER)?;
    let n = g.num_vertices();
    Ok(AccuracyTable {
        labels: g.labels().to_vec(),
        t_max,
        step: (0..n).map(|v| (0..=t_max).map(|t| table.probtill(v, t)).collect()).collect(),
        steady_state: steady.probs,
        exact,
    })
}

impl AccuracyTable {
    /// `vertex,T=0,..,T=t_max,steady_state,exact`, nine decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex");
        for t in 0..=self.t_max {
            let _ = write!(out, ",T={t}");
        }
        out.push_str(",steady_state,exact\n");
        for (v, label) in self.labels.iter().enumerate() {
            let _ = write!(out, "{label}");
            for p in &self.step[v] {
                let _ = write!(out, ",{p:.9}");
            }
            let _ = writeln!(out, ",{:.9},{:.9}", self.steady_state[v], self.exact[v]);
        }
        out
    }
}
