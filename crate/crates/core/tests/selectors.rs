mod common;

use imkit::aapc::aapc_select;
use imkit::baselines::{degree_select, greedy_mc_select, greedy_mc_select_with};
use imkit::eaapc::eaapc_select;
use imkit::harness::{
    figure2_graph, run_experiment, write_rows, Dataset, ExperimentConfig, OutputFormat, OutputSpec,
};
use imkit::oracle::exact_influence_enumeration;
use imkit::{Algorithm, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn every_selector_starts_with_vertex_one_on_figure2() {
    let g = figure2_graph();
    let one = g.vertex(1).unwrap();
    assert_eq!(aapc_select(&g, 1, 6, false).unwrap().seeds, vec![one]);
    assert_eq!(eaapc_select(&g, 1, 3).unwrap().seeds, vec![one]);
    assert_eq!(greedy_mc_select(&g, 1, 5000, 0).unwrap().seeds, vec![one]);
    assert_eq!(degree_select(&g, 1).unwrap().seeds, vec![one]);
}

#[test]
fn lazy_and_eager_greedy_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..10 {
        let g = common::random_graph(&mut rng, 40, 150, 0.0, 0.4);
        let lazy = greedy_mc_select_with(&g, 5, 200, case, true).unwrap();
        let eager = greedy_mc_select_with(&g, 5, 200, case, false).unwrap();
        assert_eq!(lazy.seeds, eager.seeds, "case {case}");
        assert_eq!(lazy.marginal_estimates, eager.marginal_estimates);
        let a = aapc_select(&g, 5, 4, true).unwrap();
        let b = aapc_select(&g, 5, 4, false).unwrap();
        assert_eq!(a.seeds, b.seeds, "case {case}");
    }
}

#[test]
fn k_larger_than_n_returns_every_vertex() {
    let g = figure2_graph();
    for r in [
        aapc_select(&g, 9, 4, true).unwrap(),
        eaapc_select(&g, 9, 3).unwrap(),
        greedy_mc_select(&g, 9, 100, 1).unwrap(),
        degree_select(&g, 9).unwrap(),
    ] {
        let mut s = r.seeds.clone();
        s.sort();
        assert_eq!(s, vec![0, 1, 2, 3, 4], "{}", r.algorithm);
    }
}

#[test]
fn experiment_spread_matches_exact() {
    let g = figure2_graph();
    let exact = exact_influence_enumeration(&g, &[g.vertex(1).unwrap()]).unwrap().sigma;
    let mut cfg = ExperimentConfig::new(Dataset::Figure2, Algorithm::Aapc, 1);
    cfg.reps_eval = 100_000;
    cfg.master_seed = 9;
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert!((row.spread_mean - exact).abs() <= 3.0 * row.spread_stderr, "{} vs {exact}", row.spread_mean);
}

#[test]
fn experiment_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, format: OutputFormat| {
        let mut cfg = ExperimentConfig::new("pa:300:3:5".parse().unwrap(), Algorithm::Eaapc, 3);
        cfg.p = Some(0.05);
        cfg.reps_eval = 500;
        let path = dir.path().join(name);
        cfg.output = Some(OutputSpec {
            path: path.clone(),
            format,
            timing: false,
        });
        run_experiment(&cfg).unwrap();
        std::fs::read_to_string(path).unwrap()
    };
    let a = run("a.csv", OutputFormat::Csv);
    let b = run("b.csv", OutputFormat::Csv);
    assert_eq!(a, b);
    assert!(a.starts_with("algorithm,k_prefix,spread_mean,spread_stderr,select_time,eval_time\n"));
    assert_eq!(a.lines().count(), 4);
    let j = run("a.jsonl", OutputFormat::Jsonl);
    for line in j.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["algorithm"], "eaapc");
        assert!(v["select_time"].is_null());
    }
}

#[test]
fn timing_columns_are_filled_on_request() {
    let mut cfg = ExperimentConfig::new(Dataset::Figure2, Algorithm::Degree, 2);
    cfg.reps_eval = 10;
    let rows = run_experiment(&cfg).unwrap();
    let mut out = Vec::new();
    write_rows(&rows, OutputFormat::Csv, true, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let last = text.lines().last().unwrap();
    assert!(!last.ends_with(','));
    assert_eq!(last.split(',').count(), 6);
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = ExperimentConfig::new(Dataset::Figure2, Algorithm::Aapc, 0);
    assert!(matches!(run_experiment(&cfg), Err(Error::Validation(_))));
    cfg.k = 1;
    cfg.p = Some(1.5);
    assert!(matches!(run_experiment(&cfg), Err(Error::Validation(_))));
    let missing = ExperimentConfig::new(Dataset::Path("/definitely/not/here".into()), Algorithm::Degree, 1);
    let err = run_experiment(&missing).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!("pa:1:2".parse::<Dataset>().is_err());
}
