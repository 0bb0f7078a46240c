use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expander-lp")).args(args).output().expect("binary runs")
}

fn code_args<'a>(owned: &'a [String; 3], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--graph", &owned[0], "--code-a", &owned[1], "--code-b", &owned[2]];
    v.extend_from_slice(extra);
    v
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn decode_corrects_four_errors() {
    let files = [data("k66.graph"), data("rep6_gf3.code"), data("rep6_gf3.code")];
    let recv = data("k66_received.word");
    let mut args = vec!["decode"];
    args.extend(code_args(&files, &["--received", &recv]));
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "codeword");
    assert_eq!(v["distance"], 4);
}

#[test]
fn fractional_optimum_exits_with_one() {
    let files = [data("k33.graph"), data("spc3_gf3.code"), data("spc3_gf3.code")];
    let recv = data("k33_fractional.word");
    let mut args = vec!["decode"];
    args.extend(code_args(&files, &["--received", &recv]));
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "fractional_failure");
}

#[test]
fn input_errors_exit_with_two() {
    let out = run(&["decode", "--graph", "/no/such/file", "--code-a", "x", "--code-b", "y", "--received", "z"]);
    assert_eq!(out.status.code(), Some(2));
    let files = [data("k66.graph"), data("rep6_gf3.code"), data("rep2_gf3.code")];
    let recv = data("k66_received.word");
    let mut args = vec!["decode"];
    args.extend(code_args(&files, &["--received", &recv]));
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn certify_core_and_orient() {
    let files = [data("k66.graph"), data("rep6_gf3.code"), data("rep6_gf3.code")];
    let (sent, recv) = (data("k66_sent.word"), data("k66_received.word"));
    for mode in ["peel", "orient"] {
        let mut args = vec!["certify"];
        args.extend(code_args(&files, &["--sent", &sent, "--received", &recv, "--mode", mode]));
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["witness_found"], true, "{mode}");
    }
    let mut args = vec!["core"];
    args.extend(code_args(&files, &["--sent", &sent, "--received", &recv]));
    let v = json(&run(&args));
    assert_eq!(v["core_found"], false);
    assert_eq!(v["terminated_empty"], true);

    let edges = data("k66_errors.edges");
    let ok = json(&run(&["orient", "--graph", &files[0], "--edges", &edges, "--cap-a", "1", "--cap-b", "1"]));
    assert_eq!(ok["feasible"], true);
    assert_eq!(ok["directions"].as_array().unwrap().len(), 6);
    let blocked = json(&run(&["orient", "--graph", &files[0], "--edges", &edges, "--cap-a", "0", "--cap-b", "0"]));
    assert_eq!(blocked["feasible"], false);
    assert!(!blocked["blocking_set"].as_array().unwrap().is_empty());
}

#[test]
fn scan_bounds_and_tables() {
    let files = [data("c4.graph"), data("rep2_gf3.code"), data("rep2_gf3.code")];
    let mut args = vec!["scan"];
    args.extend(code_args(&files, &[]));
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 82);
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["violations"], 0);

    let files = [data("k66.graph"), data("rep6_gf3.code"), data("rep6_gf3.code")];
    let mut args = vec!["bounds"];
    args.extend(code_args(&files, &[]));
    let v = json(&run(&args));
    assert_eq!(v["gamma"], 0.0);
    assert_eq!(v["theta_a"]["value"], "2/3");

    let out = run(&["tables"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("22.14") && text.contains("5.0625"));
}

#[test]
fn sweep_writes_identical_csv_for_equal_seeds() {
    let dir = std::env::temp_dir().join(format!("expander-lp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"q": 2, "graph": {"kind": "complete", "n": 6}, "code_a": {"kind": "repetition"},
            "code_b": {"kind": "repetition"}, "weights": [0, 2, 4], "trials": 3, "seed": 1}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.join(name);
        let out = run(&["sweep", "--config", cfg.to_str().unwrap(), "--seed", "9", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(&path).unwrap());
        assert!(path.with_extension("summary.json").exists());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(String::from_utf8_lossy(&outputs[0]).lines().count(), 10);
    std::fs::remove_dir_all(&dir).unwrap();
}
