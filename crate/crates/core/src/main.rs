use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use imkit::aapc::{activation_probabilities, steady_state_probabilities, STEADY_STATE_MAX_ITER, STEADY_STATE_TOL};
use imkit::eaapc::{multi_seed_probs, DEFAULT_EPS};
use imkit::harness::{
    accuracy_report, figure1_graph, figure2_graph, load_dataset, run_on_graph, select_seeds, write_rows,
    Depth, ExperimentConfig, Figure1, OutputFormat,
};
use imkit::oracle::estimate_influence_mc;
use imkit::{Algorithm, Error, Graph, Result, VertexId};

#[derive(Parser)]
#[command(name = "imkit", version, about = "Influence maximization under the Independent Cascade Model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list path, `fixture:figure1`, `fixture:figure2` or `pa:<n>:<attach>:<seed>`
    #[arg(long)]
    input: String,
    /// Treat every line as an undirected edge
    #[arg(long)]
    undirected: bool,
    /// Uniform propagation probability; overrides any probability column
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct DepthArgs {
    /// Tolerable error used to derive the EAAPC depth
    #[arg(long, conflicts_with = "max_level")]
    eps: Option<f64>,
    /// EAAPC BFS depth
    #[arg(long = "max-level")]
    max_level: Option<usize>,
}

impl DepthArgs {
    fn depth(&self) -> Depth {
        match (self.max_level, self.eps) {
            (Some(l), _) => Depth::MaxLevel(l),
            (None, Some(e)) => Depth::Eps(e),
            (None, None) => Depth::Eps(DEFAULT_EPS),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pick k seeds with one algorithm
    Select {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        #[arg(long)]
        k: usize,
        #[arg(long = "T", default_value_t = 6)]
        horizon: usize,
        #[command(flatten)]
        depth: DepthArgs,
        #[arg(long, default_value_t = 5000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CELF lazy evaluation for aapc and steady-state
        #[arg(long)]
        lazy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo spread of a seed set
    Evaluate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma separated vertex ids as they appear in the input
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value_t = 5000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-vertex activation probabilities for a seed set
    Probs {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        seeds: String,
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        #[arg(long = "T", default_value_t = 6)]
        horizon: usize,
        #[command(flatten)]
        depth: DepthArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Step probabilities vs steady state vs exact on a fixture
    Accuracy {
        #[arg(long, value_parser = ["figure1", "figure2"])]
        fixture: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "T", default_value_t = 6)]
        t_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several selectors on one graph and evaluate their seed prefixes
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        #[arg(long = "T", default_value_t = 4)]
        horizon: usize,
        #[command(flatten)]
        depth: DepthArgs,
        /// Replications per estimate inside greedy-mc
        #[arg(long, default_value_t = 5000)]
        reps: usize,
        /// Replications for evaluating seed prefixes
        #[arg(long = "eval-reps", default_value_t = 5000)]
        eval_reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "aapc,eaapc,greedy-mc,degree")]
        algos: Vec<Algorithm>,
        #[arg(long)]
        lazy: bool,
        #[arg(long, value_parser = parse_format, default_value = "csv")]
        format: OutputFormat,
        /// Fill the select_time and eval_time columns
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn base_config(graph: &GraphArgs, algorithm: Algorithm, k: usize) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(graph.input.parse()?, algorithm, k);
    cfg.undirected = graph.undirected;
    cfg.p = graph.p;
    Ok(cfg)
}

fn load(graph: &GraphArgs) -> Result<Graph> {
    let cfg = base_config(graph, Algorithm::Degree, 1)?;
    cfg.validate()?;
    load_dataset(&cfg)
}

fn parse_seeds(g: &Graph, list: &str) -> Result<Vec<VertexId>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|tok| {
            let label: u64 = tok
                .parse()
                .map_err(|_| Error::Validation(format!("seed {tok:?} is not a vertex id")))?;
            g.vertex(label)
                .ok_or_else(|| Error::Validation(format!("seed {label} is not a vertex of the graph")))
        })
        .collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Select {
            graph,
            algo,
            k,
            horizon,
            depth,
            reps,
            seed,
            lazy,
            out,
        } => {
            let mut cfg = base_config(&graph, algo, k)?;
            cfg.horizon = horizon;
            cfg.depth = Some(depth.depth());
            cfg.reps_select = reps;
            cfg.master_seed = seed;
            cfg.lazy = lazy;
            cfg.validate()?;
            let g = load_dataset(&cfg)?;
            let result = select_seeds(&g, &cfg)?;
            eprintln!(
                "{}: {} seeds in {:.3} s",
                result.algorithm,
                result.seeds.len(),
                result.wall_time.as_secs_f64()
            );
            let mut text = String::from("round,vertex,estimate\n");
            for (i, &s) in result.seeds.iter().enumerate() {
                let est = result.marginal_estimates.get(i).map(|e| e.to_string()).unwrap_or_default();
                text.push_str(&format!("{},{},{}\n", i + 1, g.label(s), est));
            }
            emit(&out, &text)
        }
        Command::Evaluate {
            graph,
            seeds,
            reps,
            seed,
            out,
        } => {
            let g = load(&graph)?;
            let seeds = parse_seeds(&g, &seeds)?;
            let est = estimate_influence_mc(&g, &seeds, reps, seed)?;
            emit(
                &out,
                &format!(
                    "replications,mean,std_error\n{},{},{}\n",
                    est.replications, est.mean, est.std_error
                ),
            )
        }
        Command::Probs {
            graph,
            seeds,
            algo,
            horizon,
            depth,
            out,
        } => {
            let g = load(&graph)?;
            let seeds = parse_seeds(&g, &seeds)?;
            let probs = match algo {
                Algorithm::Aapc => activation_probabilities(&g, &seeds, horizon)?.final_probs().to_vec(),
                Algorithm::SteadyState => {
                    let ss = steady_state_probabilities(&g, &seeds, STEADY_STATE_TOL, STEADY_STATE_MAX_ITER)?;
                    eprintln!(
                        "steady state: converged={} iterations={} residual={:e}",
                        ss.converged, ss.iterations, ss.residual
                    );
                    ss.probs
                }
                Algorithm::Eaapc => multi_seed_probs(&g, &seeds, depth.depth().resolve(&g)?)?.probs().to_vec(),
                other => {
                    return Err(Error::Validation(format!(
                        "probs supports aapc, eaapc and steady-state, not {other}"
                    )))
                }
            };
            let mut text = String::from("vertex,prob\n");
            for (v, p) in probs.iter().enumerate() {
                text.push_str(&format!("{},{}\n", g.label(v), p));
            }
            emit(&out, &text)
        }
        Command::Accuracy { fixture, p, t_max, out } => {
            let (g, seeds) = match fixture.as_str() {
                "figure1" => (figure1_graph(p.unwrap_or(0.1))?, vec![Figure1::U]),
                _ => {
                    let g = match p {
                        Some(p) => figure2_graph().with_uniform_prob(p)?,
                        None => figure2_graph(),
                    };
                    let one = g.vertex(1).expect("fixture has vertex 1");
                    (g, vec![one])
                }
            };
            emit(&out, &accuracy_report(&g, &seeds, t_max)?.to_csv())
        }
        Command::Bench {
            graph,
            k,
            horizon,
            depth,
            reps,
            eval_reps,
            seed,
            algos,
            lazy,
            format,
            timing,
            out,
        } => {
            let g = load(&graph)?;
            let mut rows = Vec::new();
            for algo in algos {
                let mut cfg = base_config(&graph, algo, k)?;
                cfg.horizon = horizon;
                cfg.depth = Some(depth.depth());
                cfg.reps_select = reps;
                cfg.reps_eval = eval_reps;
                cfg.master_seed = seed;
                cfg.lazy = lazy;
                let algo_rows = run_on_graph(&g, &cfg)?;
                if let Some(last) = algo_rows.last() {
                    eprintln!(
                        "{algo}: select {:.3} s, spread {:.3} ± {:.3}",
                        last.select_time.as_secs_f64(),
                        last.spread_mean,
                        last.spread_stderr
                    );
                }
                rows.extend(algo_rows);
            }
            let mut buf = Vec::new();
            write_rows(&rows, format, timing, &mut buf)?;
            emit(&out, &String::from_utf8(buf).expect("writer emits utf-8"))
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("IMKIT_THREADS") {
        let threads: usize = raw
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Validation(format!("IMKIT_THREADS={raw:?} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Validation(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
