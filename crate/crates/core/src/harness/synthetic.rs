use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Undirected Barabási–Albert graph expanded into arcs both ways, every arc
/// at probability `p`. Starts from a clique on `attach + 1` vertices; each
/// later vertex links to `attach` distinct earlier vertices chosen with
/// probability proportional to degree.
pub fn preferential_attachment(n: usize, attach: usize, p: f64, seed: u64) -> Result<Graph> {
    if attach == 0 || n <= attach {
        return Err(Error::validation(format!(
            "need 0 < attach < n, got attach={attach} n={n}"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::validation(format!("p = {p} is outside (0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * attach);
    // every edge endpoint once: sampling from it is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * attach);
    for a in 0..=attach {
        for b in a + 1..=attach {
            edges.push((a, b));
            endpoints.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(attach);
    for v in attach + 1..n {
        targets.clear();
        while targets.len() < attach {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    Graph::from_arcs(n, edges.into_iter().flat_map(|(a, b)| [(a, b, p), (b, a, p)]))
}
