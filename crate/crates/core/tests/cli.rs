use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_robust-knapsack"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("robust-knapsack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no '{key}' in output:\n{text}"))
}

#[test]
fn eval_examples() {
    let ex1 = data("ex1.json");
    let ex3 = data("ex3.json");
    for (file, alg, items, value) in [
        (&ex1, "agreedy", "b", "1.9"),
        (&ex1, "opt", "b", "1.9"),
        (&ex3, "mgreedy", "b", "1.9"),
        (&ex3, "agreedy", "a", "1"),
        (&ex3, "policy", "a", "1"),
    ] {
        let out = run(&[
            "eval",
            "-i",
            file.to_str().unwrap(),
            "--gamma",
            "2",
            "--alg",
            alg,
        ]);
        assert!(out.status.success(), "{alg}");
        let text = stdout(&out);
        assert_eq!(field(&text, "items"), items, "{alg}");
        assert_eq!(field(&text, "value"), value, "{alg}");
    }
}

#[test]
fn eval_policy_prints_trace() {
    let out = run(&[
        "eval",
        "-i",
        data("ex1.json").to_str().unwrap(),
        "--gamma",
        "2",
        "--alg",
        "policy",
    ]);
    let text = stdout(&out);
    assert!(text.contains("trace:"));
    assert_eq!(field(&text, "fit_queries"), "2");
    assert_eq!(field(&text, "items"), "b");
}

#[test]
fn sweep_examples() {
    for (file, robustness) in [("ex1.json", 1.0), ("ex3.json", 1.0 / 1.9)] {
        let out = run(&["sweep", "-i", data(file).to_str().unwrap()]);
        assert!(out.status.success());
        let text = stdout(&out);
        let value: f64 = text
            .lines()
            .find_map(|l| l.strip_prefix("# empirical_robustness="))
            .unwrap()
            .parse()
            .unwrap();
        assert!((value - robustness).abs() < 1e-9, "{file}: {value}");
    }
}

#[test]
fn sweep_parallel_matches_sequential() {
    let inst = scratch("par.json");
    let gen = run(&[
        "gen",
        "--kind",
        "coverage",
        "--n",
        "9",
        "--seed",
        "3",
        "-o",
        inst.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let seq = run(&["sweep", "-i", inst.to_str().unwrap()]);
    let par = run(&["sweep", "-i", inst.to_str().unwrap(), "--parallel"]);
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn gen_is_deterministic_and_planted_is_robust() {
    let a = run(&[
        "gen",
        "--kind",
        "modular",
        "--n",
        "5",
        "--size-max",
        "10",
        "--seed",
        "42",
    ]);
    let b = run(&[
        "gen",
        "--kind",
        "modular",
        "--n",
        "5",
        "--size-max",
        "10",
        "--seed",
        "42",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let planted = scratch("planted.json");
    let out = run(&[
        "gen",
        "--kind",
        "planted",
        "--n",
        "6",
        "--seed",
        "7",
        "-o",
        planted.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let sweep = stdout(&run(&["sweep", "-i", planted.to_str().unwrap()]));
    let get = |key: &str| -> f64 {
        sweep
            .lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(get("# empirical_robustness=") >= get("# alpha_bound=") - 1e-9);
}

#[test]
fn bound_examples() {
    let out = run(&["bound", "--grid", "1:1:1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[2] - 0.3578).abs() <= 5e-4);

    let text = stdout(&run(&["bound", "--grid", "0:0:1"]));
    assert_eq!(text.lines().nth(1).unwrap(), "0,0.5,0.5");
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "-i", data("ex1.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify", "-i", data("ex3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("strict MGreedy > AGreedy at gamma=2"));

    let out = run(&[
        "verify",
        "-i",
        data("not_submodular.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not submodular"));
}

#[test]
fn configuration_errors_exit_2() {
    let missing = scratch("does-not-exist.json");
    assert_eq!(
        run(&["sweep", "-i", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bound", "--grid", "0:1"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--grid", "0:2:0.5"]).status.code(), Some(2));
    let ex1 = data("ex1.json");
    assert_eq!(
        run(&[
            "eval",
            "-i",
            ex1.to_str().unwrap(),
            "--gamma",
            "0",
            "--alg",
            "opt"
        ])
        .status
        .code(),
        Some(2)
    );
    let bad = data("not_submodular.json");
    assert_eq!(
        run(&[
            "eval",
            "-i",
            bad.to_str().unwrap(),
            "--gamma",
            "2",
            "--alg",
            "opt"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["gen", "--kind", "planted", "--n", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let unwritable = "/nonexistent-dir/out.csv";
    assert_eq!(run(&["bound", "-o", unwritable]).status.code(), Some(2));
}
