use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::aapc::{aapc_select, steady_state_select};
use crate::baselines::{degree_select, greedy_mc_select, DEFAULT_REPS};
use crate::eaapc::{eaapc_select, max_level};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, Graph, LoadOptions};
use crate::oracle::estimate_influence_mc;
use crate::selection::{Algorithm, SeedSelectionResult};

use super::fixtures::{figure1_graph, figure2_graph};
use super::synthetic::preferential_attachment;

/// Horizon used for comparison runs.
pub const COMPARISON_HORIZON: usize = 4;

/// Where the graph comes from.
///
/// Parsed from `fixture:figure1`, `fixture:figure2`,
/// `pa:<n>:<attach>:<seed>` (synthetic preferential attachment) or else a
/// file path.
#[derive(Clone, Debug, PartialEq)]
pub enum Dataset {
    Path(PathBuf),
    Figure1,
    Figure2,
    PreferentialAttachment { n: usize, attach: usize, seed: u64 },
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixture:figure1" => return Ok(Dataset::Figure1),
            "fixture:figure2" => return Ok(Dataset::Figure2),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("pa:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let bad = || Error::validation(format!("expected pa:<n>:<attach>:<seed>, got {s:?}"));
            if parts.len() != 3 {
                return Err(bad());
            }
            return Ok(Dataset::PreferentialAttachment {
                n: parts[0].parse().map_err(|_| bad())?,
                attach: parts[1].parse().map_err(|_| bad())?,
                seed: parts[2].parse().map_err(|_| bad())?,
            });
        }
        Ok(Dataset::Path(PathBuf::from(s)))
    }
}

/// How deep the EAAPC breadth-first search goes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Depth {
    /// Derive the level from the mean arc probability and this tolerance.
    Eps(f64),
    MaxLevel(usize),
}

impl Depth {
    pub fn resolve(self, g: &Graph) -> Result<usize> {
        match self {
            Depth::MaxLevel(l) => Ok(l),
            Depth::Eps(eps) => match g.mean_arc_prob() {
                Some(p) => max_level(p, eps),
                None => Ok(0),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" | "json" => Ok(OutputFormat::Jsonl),
            _ => Err(Error::validation(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: OutputFormat,
    /// Fill the wall-clock columns. Off by default so that reruns produce
    /// identical files.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: Dataset,
    pub undirected: bool,
    /// Uniform arc probability; `None` keeps the probabilities in the file.
    pub p: Option<f64>,
    pub algorithm: Algorithm,
    pub k: usize,
    pub horizon: usize,
    pub depth: Option<Depth>,
    pub reps_select: usize,
    pub reps_eval: usize,
    pub master_seed: u64,
    pub lazy: bool,
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn new(dataset: Dataset, algorithm: Algorithm, k: usize) -> Self {
        ExperimentConfig {
            dataset,
            undirected: false,
            p: None,
            algorithm,
            k,
            horizon: COMPARISON_HORIZON,
            depth: (algorithm == Algorithm::Eaapc).then_some(Depth::Eps(crate::eaapc::DEFAULT_EPS)),
            reps_select: DEFAULT_REPS,
            reps_eval: DEFAULT_REPS,
            master_seed: 0,
            lazy: false,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.p {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::validation(format!("p = {p} is outside (0, 1]")));
            }
        }
        if self.k == 0 {
            return Err(Error::validation("k must be at least 1"));
        }
        if self.reps_select == 0 || self.reps_eval == 0 {
            return Err(Error::validation("replication counts must be at least 1"));
        }
        if self.algorithm == Algorithm::Aapc && self.horizon == 0 {
            return Err(Error::validation("horizon T must be at least 1"));
        }
        if self.algorithm == Algorithm::Eaapc && self.depth.is_none() {
            return Err(Error::validation("eaapc needs either eps or max_level"));
        }
        Ok(())
    }
}

/// One evaluated seed prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    pub k_prefix: usize,
    pub spread_mean: f64,
    pub spread_stderr: f64,
    pub select_time: Duration,
    pub eval_time: Duration,
}

#[derive(Serialize)]
struct JsonRow {
    algorithm: Algorithm,
    k_prefix: usize,
    spread_mean: f64,
    spread_stderr: f64,
    select_time: Option<f64>,
    eval_time: Option<f64>,
}

pub fn load_dataset(cfg: &ExperimentConfig) -> Result<Graph> {
    match &cfg.dataset {
        Dataset::Path(path) => {
            let file = File::open(path).map_err(|e| {
                Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
            })?;
            let opts = LoadOptions {
                undirected: cfg.undirected,
                uniform_prob: cfg.p,
                ..Default::default()
            };
            load_edge_list(BufReader::new(file), &opts)
        }
        Dataset::Figure1 => figure1_graph(cfg.p.unwrap_or(0.1)),
        Dataset::Figure2 => {
            let g = figure2_graph();
            match cfg.p {
                Some(p) => g.with_uniform_prob(p),
                None => Ok(g),
            }
        }
        &Dataset::PreferentialAttachment { n, attach, seed } => {
            preferential_attachment(n, attach, cfg.p.unwrap_or(0.01), seed)
        }
    }
}

/// Runs the configured selector on `g`.
pub fn select_seeds(g: &Graph, cfg: &ExperimentConfig) -> Result<SeedSelectionResult> {
    match cfg.algorithm {
        Algorithm::Aapc => aapc_select(g, cfg.k, cfg.horizon, cfg.lazy),
        Algorithm::Eaapc => {
            let depth = cfg
                .depth
                .ok_or_else(|| Error::validation("eaapc needs either eps or max_level"))?;
            eaapc_select(g, cfg.k, depth.resolve(g)?)
        }
        Algorithm::GreedyMc => greedy_mc_select(g, cfg.k, cfg.reps_select, cfg.master_seed),
        Algorithm::SteadyState => steady_state_select(g, cfg.k, cfg.lazy),
        Algorithm::Degree => degree_select(g, cfg.k),
    }
}

/// Selects seeds, then evaluates every prefix `1..=k` by Monte-Carlo under
/// the same master seed.
pub fn run_on_graph(g: &Graph, cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let start = Instant::now();
    let selection = select_seeds(g, cfg)?;
    let select_time = start.elapsed();
    (1..=selection.seeds.len())
        .map(|i| {
            let t0 = Instant::now();
            let est = estimate_influence_mc(g, &selection.seeds[..i], cfg.reps_eval, cfg.master_seed)?;
            Ok(ReportRow {
                algorithm: cfg.algorithm,
                k_prefix: i,
                spread_mean: est.mean,
                spread_stderr: est.std_error,
                select_time,
                eval_time: t0.elapsed(),
            })
        })
        .collect()
}

/// Loads the dataset, runs it, and writes the rows if an output is set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let g = load_dataset(cfg)?;
    let rows = run_on_graph(&g, cfg)?;
    if let Some(out) = &cfg.output {
        let mut w = BufWriter::new(File::create(&out.path)?);
        write_rows(&rows, out.format, out.timing, &mut w)?;
        w.flush()?;
    }
    Ok(rows)
}

/// Writes report rows. Columns: algorithm, k_prefix, spread_mean,
/// spread_stderr, select_time, eval_time (seconds; blank or null unless
/// `timing`).
pub fn write_rows<W: Write>(rows: &[ReportRow], format: OutputFormat, timing: bool, w: &mut W) -> io::Result<()> {
    let secs = |d: Duration| timing.then_some(d.as_secs_f64());
    match format {
        OutputFormat::Csv => {
            writeln!(w, "algorithm,k_prefix,spread_mean,spread_stderr,select_time,eval_time")?;
            for r in rows {
                let fmt = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.algorithm,
                    r.k_prefix,
                    r.spread_mean,
                    r.spread_stderr,
                    fmt(secs(r.select_time)),
                    fmt(secs(r.eval_time))
                )?;
            }
        }
        OutputFormat::Jsonl => {
            for r in rows {
                let row = JsonRow {
                    algorithm: r.algorithm,
                    k_prefix: r.k_prefix,
                    spread_mean: r.spread_mean,
                    spread_stderr: r.spread_stderr,
                    select_time: secs(r.select_time),
                    eval_time: secs(r.eval_time),
                };
                serde_json::to_writer(&mut *w, &row)?;
                writeln!(w)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_names() {
        assert_eq!("fixture:figure2".parse::<Dataset>().unwrap(), Dataset::Figure2);
        assert_eq!(
            "pa:100:3:7".parse::<Dataset>().unwrap(),
            Dataset::PreferentialAttachment {
                n: 100,
                attach: 3,
                seed: 7
            }
        );
        assert!("pa:100:x:7".parse::<Dataset>().is_err());
        assert_eq!("data/hep.txt".parse::<Dataset>().unwrap(), Dataset::Path("data/hep.txt".into()));
    }

    #[test]
    fn degree_on_arcless_graph() {
        let g = Graph::from_arcs(4, []).unwrap();
        let mut cfg = ExperimentConfig::new(Dataset::Figure2, Algorithm::Degree, 2);
        cfg.reps_eval = 1;
        let rows = run_on_graph(&g, &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].spread_mean, 2.0);
    }

    #[test]
    fn validation_errors() {
        let mut cfg = ExperimentConfig::new(Dataset::Figure2, Algorithm::Eaapc, 1);
        cfg.depth = None;
        assert!(matches!(cfg.validate(), Err(Error::Validation(_))));
        let mut cfg = ExperimentConfig::new(Dataset::Figure2, Algorithm::Aapc, 1);
        cfg.p = Some(0.0);
        assert!(cfg.validate().is_err());
        cfg.p = Some(0.5);
        cfg.k = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let cfg = ExperimentConfig::new(Dataset::Path("/nonexistent/graph.txt".into()), Algorithm::Degree, 1);
        let err = run_experiment(&cfg).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn csv_without_timing_leaves_columns_blank() {
        let rows = vec![ReportRow {
            algorithm: Algorithm::Aapc,
            k_prefix: 1,
            spread_mean: 1.5,
            spread_stderr: 0.25,
            select_time: Duration::from_millis(3),
            eval_time: Duration::from_millis(4),
        }];
        let mut buf = Vec::new();
        write_rows(&rows, OutputFormat::Csv, false, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "algorithm,k_prefix,spread_mean,spread_stderr,select_time,eval_time\naapc,1,1.5,0.25,,\n"
        );
        let mut buf = Vec::new();
        write_rows(&rows, OutputFormat::Jsonl, true, &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(line.starts_with("{\"algorithm\":\"aapc\",\"k_prefix\":1,"), "{line}");
        assert!(line.contains("\"select_time\":0.003"));
    }
}
