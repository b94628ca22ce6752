use std::process::{Command, Output};

fn imkit(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imkit"))
        .args(args)
        .env("IMKIT_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn accuracy_prints_the_table() {
    let text = stdout(&imkit(&["accuracy", "--fixture", "figure2"], "1"));
    let row2 = text.lines().find(|l| l.starts_with("2,")).unwrap();
    assert!(row2.contains("0.100810000"));
    assert!(row2.ends_with("0.100998074,0.100090000"));
}

#[test]
fn select_and_evaluate_use_input_ids() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "# toy\n100 200\n100 300\n200 300\n300 400\n").unwrap();
    let p = path.to_str().unwrap();
    let text = stdout(&imkit(&["select", "--input", p, "--p", "0.5", "--algo", "degree", "--k", "1"], "1"));
    assert_eq!(text, "round,vertex,estimate\n1,100,\n");
    let eval = stdout(&imkit(&["evaluate", "--input", p, "--p", "1", "--seeds", "200", "--reps", "10"], "1"));
    assert_eq!(eval, "replications,mean,std_error\n10,3,0\n");
    let probs = stdout(&imkit(
        &["probs", "--input", p, "--p", "0.5", "--seeds", "100", "--algo", "aapc", "--T", "1"],
        "1",
    ));
    assert_eq!(probs, "vertex,prob\n100,1\n200,0.5\n300,0.5\n400,0\n");
}

#[test]
fn errors_map_to_exit_codes() {
    let missing = imkit(&["evaluate", "--input", "/no/such/file", "--p", "0.1", "--seeds", "1"], "1");
    assert_eq!(missing.status.code(), Some(3));
    let bad_k = imkit(&["select", "--input", "fixture:figure2", "--algo", "aapc", "--k", "0"], "1");
    assert_eq!(bad_k.status.code(), Some(2));
    let bad_seed = imkit(&["evaluate", "--input", "fixture:figure2", "--seeds", "42"], "1");
    assert_eq!(bad_seed.status.code(), Some(2));
    let bad_algo = imkit(&["select", "--input", "fixture:figure2", "--algo", "magic", "--k", "1"], "1");
    assert_eq!(bad_algo.status.code(), Some(2));
    let bad_threads = imkit(&["accuracy", "--fixture", "figure1"], "zero");
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn output_file_equals_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let args = ["select", "--input", "fixture:figure2", "--algo", "greedy-mc", "--k", "2", "--reps", "300"];
    let printed = stdout(&imkit(&args, "2"));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(stdout(&imkit(&with_out, "2")), "");
    assert_eq!(std::fs::read_to_string(out).unwrap(), printed);
}
