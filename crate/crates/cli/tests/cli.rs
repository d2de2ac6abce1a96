use std::process::Command;

use serde_json::Value;

fn usd(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_usd"))
        .args(args)
        .output()
        .expect("run usd");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = usd(args);
    (code, serde_json::from_str(&text).unwrap_or(Value::Null))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn bounds_verdicts() {
    for (n, expect) in [("4", "Impossible"), ("3", "Guaranteed")] {
        let (code, v) = json(&["bounds", "--n", n, "--c", "2", "--d", "2"]);
        assert_eq!(code, 0);
        assert_eq!(v["verdict"], expect);
        assert_eq!(v["schema"], 1);
    }
    let (_, v) = json(&["bounds", "--n", "5", "--c", "2", "--d", "3"]);
    assert_eq!(v["verdict"], "Indeterminate");
    assert_eq!(
        (v["necessary_max"].as_u64(), v["sufficient_max"].as_u64()),
        (Some(6), Some(4))
    );

    let (code, text) = usd(&[
        "bounds", "--n", "5", "--c", "2", "--d", "3", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        text,
        "N,C,D,verdict,necessary_max,sufficient_max\n5,2,3,Indeterminate,6,4\n"
    );
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(usd(&["bounds", "--n", "0", "--c", "2", "--d", "2"]).0, 2);
    assert_eq!(usd(&["bounds", "--n", "3"]).0, 2);
    assert_eq!(usd(&["lifted-curve", "--grid", "1"]).0, 2);
    assert_eq!(usd(&["trine-table", "--c-max", "1"]).0, 2);
    assert_eq!(usd(&["verify-povm", "--c", "1", "--p", "0.5"]).0, 2);
    assert_eq!(usd(&["verify-povm", "--c", "2", "--p", "1.5"]).0, 2);
    assert_eq!(usd(&["simulate", "--c", "1", "--trials", "10"]).0, 2);
    assert_eq!(usd(&["witness", "depend", "--c", "2", "--d", "1"]).0, 2);
    assert_eq!(usd(&["simulate", "--c", "2", "--format", "csv"]).0, 2);
    assert_eq!(usd(&["--tol", "0", "trine-table"]).0, 2);
}

#[test]
fn lifted_curve_rows() {
    let (code, text) = usd(&["lifted-curve"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("lambda,p_max\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 201);
    let parse = |r: &Vec<String>| (r[0].parse::<f64>().unwrap(), r[1].parse::<f64>().unwrap());
    assert_eq!(parse(&rows[0]), (0.0, 0.0));
    let (l, p) = parse(&rows[180]);
    assert!((l - 0.9).abs() < 1e-15 && (p - 0.285).abs() < 1e-12);
    let peak = rows
        .iter()
        .map(parse)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((peak.0 - 0.5774).abs() < 1e-4 && (peak.1 - 1.0).abs() < 1e-12);
    // 17 significant digits.
    assert_eq!(rows[1][0], "5.0000000000000001e-3");

    let (_, text) = usd(&["lifted-curve", "--uniform"]);
    let rows = csv_rows(&text);
    assert_eq!(rows[115][0].parse::<f64>().unwrap(), 0.575);
}

#[test]
fn trine_table_rows() {
    let (code, text) = usd(&["trine-table", "--c-max", "10"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10);
    let f = |r: usize, c: usize| rows[r][c].parse::<f64>().unwrap();
    assert!((f(1, 1) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert_eq!(f(1, 2), 0.75);
    assert_eq!(f(2, 2), 0.75);
    assert_eq!(f(9, 2), 1.0 - 2f64.powi(-10));
    assert_eq!(f(0, 2), 0.0);

    let (_, v) = json(&["trine-table", "--c-max", "3", "--format", "json"]);
    assert_eq!(v["rows"][1]["p_max"], 0.75);
}

#[test]
fn verify_povm_exit_codes() {
    let (code, v) = json(&["verify-povm", "--c", "2", "--p", "0.75"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let (code, v) = json(&["verify-povm", "--c", "2", "--p", "0.80"]);
    assert_eq!(code, 3);
    assert_eq!(v["report"]["psd_ok"], false);
    let (code, _) = json(&["verify-povm", "--c", "4", "--p", "0.9375"]);
    assert_eq!(code, 0);
}

#[test]
fn witnesses_self_certify() {
    let (code, v) = json(&["witness", "achieve", "--c", "2", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["ensemble"]["states"].as_array().unwrap().len(), 3);
    assert_eq!(v["verification"]["rank"], 3);
    assert_eq!(v["passed"], true);

    let (code, v) = json(&["witness", "depend", "--c", "2", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["ensemble"]["states"].as_array().unwrap().len(), 4);
    assert!(v["verification"]["rank"].as_u64().unwrap() <= 3);

    let (code, v) = json(&["witness", "achieve", "--c", "1", "--d", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verification"]["rank"], 4);
    assert_eq!(v["ensemble"]["states"][0]["dim"], 4);
}

#[test]
fn simulate_strategies() {
    let (code, v) = json(&["simulate", "--c", "4", "--trials", "200000", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["error_count"], 0);
    assert_eq!(v["analytic_success"], 0.9375);
    assert_eq!(v["n_trials"], 200000);
    assert_eq!(v["config"]["strategy"], "collective");
    let sigma = (0.9375f64 * 0.0625 / 200000.0).sqrt();
    assert!((v["success_rate"].as_f64().unwrap() - 0.9375).abs() < 4.0 * sigma);

    let (code, v) = json(&[
        "simulate",
        "--c",
        "3",
        "--trials",
        "1000",
        "--strategy",
        "pairwise",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["copies_used"], 2);
    assert_eq!(v["analytic_success"], 0.75);
    assert_eq!(v["counts"].as_array().unwrap().len(), 4);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["simulate", "--c", "3", "--trials", "100000"],
        vec!["witness", "depend", "--c", "3", "--d", "3"],
        vec!["lifted-curve"],
    ] {
        let mut files = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("{}-{i}", args[0]));
            let mut full: Vec<&str> = args.clone();
            let p = path.to_str().unwrap().to_string();
            full.push("--out");
            full.push(&p);
            assert_eq!(usd(&full).0, 0);
            files.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(files[0], files[1], "{args:?}");
    }
}

#[test]
fn unwritable_output_path_fails() {
    let (code, _) = usd(&["trine-table", "--out", "/nonexistent-dir/x.csv"]);
    assert_ne!(code, 0);
}
