use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Five-vertex graph with the 2-3-2 cycle, every arc at probability 0.1.
/// Vertices carry labels 1..=5; look them up with [`Graph::vertex`].
///
/// The arc set is reconstructed from the published activation
/// probabilities: it is the topology under which the step recurrences, the
/// steady-state fixed point and exact enumeration all reproduce them.
pub fn figure2_graph() -> Graph {
    const ARCS: [(u64, u64); 6] = [(1, 2), (2, 3), (3, 2), (1, 4), (4, 5), (5, 3)];
    let dense = |label: u64| (label - 1) as VertexId;
    Graph::build(5, ARCS.iter().map(|&(s, d)| (dense(s), dense(d), 0.1)), (1..=5).collect())
        .expect("static fixture")
        .0
}

/// Vertex names of [`figure1_graph`].
#[derive(Clone, Copy, Debug)]
pub struct Figure1;

impl Figure1 {
    pub const U: VertexId = 0;
    pub const V: VertexId = 1;
    pub const W: VertexId = 2;
    pub const X: VertexId = 3;
}

/// `u -> v -> w -> x -> v` with uniform probability `p`.
pub fn figure1_graph(p: f64) -> Result<Graph> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::validation(format!("p = {p} is outside (0, 1]")));
    }
    let (u, v, w, x) = (Figure1::U, Figure1::V, Figure1::W, Figure1::X);
    Graph::from_arcs(4, [(u, v, p), (v, w, p), (w, x, p), (x, v, p)])
}
