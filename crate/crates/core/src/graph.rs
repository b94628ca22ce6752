//! Immutable directed graph with a propagation probability on every arc.
//!
//! Arcs are stored sorted by `(src, dst)` so that the outgoing arcs of a
//! vertex form one contiguous run. Incoming arcs are indexed through a
//! second offset table that points back into the arc arrays, ordered by
//! ascending source id.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// One arc `src -> dst` with its propagation probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub src: VertexId,
    pub dst: VertexId,
    pub prob: f64,
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    arcs: Vec<Arc>,
    out_offsets: Vec<usize>,
    in_offsets: Vec<usize>,
    // arc indices grouped by destination, ascending src inside each group
    in_arcs: Vec<usize>,
    labels: Vec<u64>,
}

/// Counters collected while building a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl Graph {
    /// Builds a graph over vertices `0..n` from arcs in input order.
    ///
    /// Self-loops are dropped, and of several arcs with the same endpoints
    /// only the first is kept.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        Self::build(n, arcs, (0..n as u64).collect()).map(|(g, _)| g)
    }

    /// Like [`Graph::from_arcs`] but attaches an external label to every
    /// vertex and reports what was dropped.
    pub fn build<I>(n: usize, arcs: I, labels: Vec<u64>) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        if labels.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: labels.len(),
            });
        }
        let mut stats = BuildStats::default();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (src, dst, prob) in arcs {
            for v in [src, dst] {
                if v >= n {
                    return Err(Error::OutOfRange { vertex: v, n });
                }
            }
            if !(0.0..=1.0).contains(&prob) {
                return Err(Error::validation(format!(
                    "probability {prob} of arc {src}->{dst} is outside [0, 1]"
                )));
            }
            if src == dst {
                stats.self_loops_dropped += 1;
                continue;
            }
            if !seen.insert((src, dst)) {
                stats.duplicates_dropped += 1;
                continue;
            }
            kept.push(Arc { src, dst, prob });
        }
        kept.sort_by_key(|a| (a.src, a.dst));

        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for a in &kept {
            out_offsets[a.src + 1] += 1;
            in_offsets[a.dst + 1] += 1;
        }
        for v in 0..n {
            out_offsets[v + 1] += out_offsets[v];
            in_offsets[v + 1] += in_offsets[v];
        }
        let mut cursor = in_offsets.clone();
        let mut in_arcs = vec![0usize; kept.len()];
        // arcs are visited in ascending src order, so each group stays sorted
        for (idx, a) in kept.iter().enumerate() {
            in_arcs[cursor[a.dst]] = idx;
            cursor[a.dst] += 1;
        }

        Ok((
            Graph {
                n,
                arcs: kept,
                out_offsets,
                in_offsets,
                in_arcs,
                labels,
            },
            stats,
        ))
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, idx: usize) -> &Arc {
        &self.arcs[idx]
    }

    /// Range of arc indices leaving `v`. Panics if `v` is out of range.
    #[inline]
    pub fn out_arc_range(&self, v: VertexId) -> std::ops::Range<usize> {
        self.out_offsets[v]..self.out_offsets[v + 1]
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Outgoing arcs of `v` in ascending destination order.
    #[inline]
    pub fn out_arcs(&self, v: VertexId) -> &[Arc] {
        &self.arcs[self.out_arc_range(v)]
    }

    /// Indices of arcs entering `v`, ascending by source.
    #[inline]
    pub fn in_arc_indices(&self, v: VertexId) -> &[usize] {
        &self.in_arcs[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    /// The in-neighbours of `v` with the probability of the connecting arc,
    /// in ascending source order.
    pub fn in_neighbors(&self, v: VertexId) -> Result<Vec<(VertexId, f64)>> {
        self.check_vertex(v)?;
        Ok(self
            .in_arc_indices(v)
            .iter()
            .map(|&i| (self.arcs[i].src, self.arcs[i].prob))
            .collect())
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn check_vertices(&self, vs: &[VertexId]) -> Result<()> {
        vs.iter().try_for_each(|&v| self.check_vertex(v))
    }

    /// External id of vertex `v` as it appeared in the source file.
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id of the vertex carrying external id `label`.
    pub fn vertex(&self, label: u64) -> Option<VertexId> {
        // labels are strictly increasing for every graph this crate builds
        // from a file; fall back to a scan for hand-built label vectors
        match self.labels.binary_search(&label) {
            Ok(v) => Some(v),
            Err(_) => self.labels.iter().position(|&l| l == label),
        }
    }

    /// Mean of all arc probabilities, `None` for an arcless graph.
    pub fn mean_arc_prob(&self) -> Option<f64> {
        if self.arcs.is_empty() {
            None
        } else {
            Some(self.arcs.iter().map(|a| a.prob).sum::<f64>() / self.arcs.len() as f64)
        }
    }

    /// Copy of the graph with every arc set to probability `p`.
    pub fn with_uniform_prob(&self, p: f64) -> Result<Graph> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::validation(format!("uniform probability {p} is outside (0, 1]")));
        }
        let mut g = self.clone();
        g.arcs.iter_mut().for_each(|a| a.prob = p);
        Ok(g)
    }

    /// Same vertex count and the same arc list. Labels are ignored.
    pub fn structurally_eq(&self, other: &Graph) -> bool {
        self.n == other.n && self.arcs == other.arcs
    }

    /// Writes the graph in the edge-list fixture format: a header comment
    /// `# n=<n> arcs=<m>` followed by one `src dst prob` line per arc using
    /// dense ids.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 * (self.arcs.len() + 1));
        let _ = writeln!(out, "# n={} arcs={}", self.n, self.arcs.len());
        for a in &self.arcs {
            let _ = writeln!(out, "{} {} {}", a.src, a.dst, a.prob);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct LoadOptions {
    /// Expand every line into arcs in both directions.
    pub undirected: bool,
    /// Overrides every per-line probability when set.
    pub uniform_prob: Option<f64>,
    pub comment_prefix: char,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            undirected: false,
            uniform_prob: None,
            comment_prefix: '#',
        }
    }
}

impl LoadOptions {
    pub fn uniform(p: f64) -> Self {
        LoadOptions {
            uniform_prob: Some(p),
            ..Default::default()
        }
    }

    pub fn undirected(mut self, yes: bool) -> Self {
        self.undirected = yes;
        self
    }

    fn validate(&self) -> Result<()> {
        match self.uniform_prob {
            Some(p) if !(p > 0.0 && p <= 1.0) => Err(Error::validation(format!(
                "uniform probability {p} is outside (0, 1]"
            ))),
            _ => Ok(()),
        }
    }
}

/// What the loader saw besides the graph itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub lines: usize,
    pub edges_read: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

pub fn load_edge_list<R: BufRead>(source: R, opts: &LoadOptions) -> Result<Graph> {
    load_edge_list_with_stats(source, opts).map(|(g, _)| g)
}

/// Parses a whitespace separated `src dst [prob]` edge list.
///
/// External ids are compacted to `0..n` in ascending order. A leading
/// `# n=<n> arcs=<m>` header (as written by [`Graph::to_edge_list`]) switches
/// to dense mode: ids are taken verbatim and the vertex count comes from the
/// header, so isolated vertices survive a round trip.
pub fn load_edge_list_with_stats<R: BufRead>(
    source: R,
    opts: &LoadOptions,
) -> Result<(Graph, LoadStats)> {
    opts.validate()?;
    let mut stats = LoadStats::default();
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(u64, u64, f64)> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        stats.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with(opts.comment_prefix) {
            if edges.is_empty() && header.is_none() {
                header = parse_header(&trimmed[opts.comment_prefix.len_utf8()..]);
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let src = parse_id(tokens.next(), lineno)?;
        let dst = parse_id(tokens.next(), lineno)?;
        let prob = match tokens.next() {
            Some(tok) => Some(tok.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("probability {tok:?} is not a number"),
            })?),
            None => None,
        };
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected extra column {extra:?}"),
            });
        }
        let prob = match (opts.uniform_prob, prob) {
            (Some(p), _) => p,
            (None, Some(p)) if (0.0..=1.0).contains(&p) => p,
            (None, Some(p)) => {
                return Err(Error::validation(format!(
                    "line {lineno}: probability {p} is outside [0, 1]"
                )))
            }
            (None, None) => {
                return Err(Error::validation(format!(
                    "line {lineno}: no probability column and no uniform probability given"
                )))
            }
        };
        stats.edges_read += 1;
        edges.push((src, dst, prob));
    }

    let (n, labels, index): (usize, Vec<u64>, BTreeMap<u64, usize>) = match header {
        Some((n, _)) => {
            if let Some(&(s, d, _)) = edges.iter().find(|&&(s, d, _)| s.max(d) >= n as u64) {
                return Err(Error::validation(format!(
                    "arc {s}->{d} exceeds the declared vertex count {n}"
                )));
            }
            (n, (0..n as u64).collect(), BTreeMap::new())
        }
        None => {
            let mut index = BTreeMap::new();
            for &(s, d, _) in &edges {
                index.insert(s, 0);
                index.insert(d, 0);
            }
            for (dense, slot) in index.values_mut().enumerate() {
                *slot = dense;
            }
            let labels = index.keys().copied().collect();
            (index.len(), labels, index)
        }
    };
    let dense = |id: u64| -> usize {
        if index.is_empty() {
            id as usize
        } else {
            index[&id]
        }
    };

    let arcs = edges.iter().flat_map(|&(s, d, p)| {
        let (s, d) = (dense(s), dense(d));
        let back = opts.undirected.then_some((d, s, p));
        std::iter::once((s, d, p)).chain(back)
    });
    let (graph, build) = Graph::build(n, arcs, labels)?;
    stats.self_loops_dropped = build.self_loops_dropped;
    stats.duplicates_dropped = build.duplicates_dropped;
    if let Some((_, m)) = header {
        if m != graph.num_arcs() {
            return Err(Error::validation(format!(
                "header declares {m} arcs but {} were loaded",
                graph.num_arcs()
            )));
        }
    }
    Ok((graph, stats))
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: "expected at least two columns".into(),
    })?;
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        message: format!("vertex id {tok:?} is not a non-negative integer"),
    })
}

/// Recognises ` n=<n> arcs=<m>`.
fn parse_header(body: &str) -> Option<(usize, usize)> {
    let mut n = None;
    let mut m = None;
    for tok in body.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("arcs=") {
            m = v.parse().ok();
        } else {
            return None;
        }
    }
    n.zip(m)
}
