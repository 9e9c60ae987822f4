use std::fs;

use digitsum::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("digitsum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn eval_cumulative_sum() {
    let (code, out, _) = invoke(&["eval", "S", "--base", "2", "--n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(out, "12\n");
}

#[test]
fn eval_matches_hand_values() {
    assert_eq!(invoke(&["eval", "s", "--base", "10", "--n", "1234"]).1, "10\n");
    assert_eq!(invoke(&["eval", "digits", "--base", "3", "--n", "11"]).1, "[2,0,1]\n");
    assert_eq!(invoke(&["eval", "block", "--base", "10", "--m", "10", "--n", "20"]).1, "55\n");
    assert_eq!(invoke(&["eval", "h", "--base", "2", "--k", "1", "--level", "1"]).1, "1/4\n");
    assert_eq!(invoke(&["eval", "g", "--base", "3", "--k", "1", "--level", "1"]).1, "1/3\n");
    assert_eq!(invoke(&["eval", "ternary", "--k", "1", "--l", "1", "--m", "1"]).1, "0\n");
}

#[test]
fn eval_json_carries_bound_for_delange() {
    let (code, out, _) = invoke(&["eval", "delange", "--base", "10", "--n", "1000", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "0");
    assert!(v["error_bound"].as_f64().unwrap() < 1e-6);
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        &["eval", "S", "--base", "1", "--n", "8"][..],
        &["eval", "S", "--n", "eight"],
        &["eval", "S", "--base", "2"],
        &["eval", "ternary", "--k", "2", "--l", "3", "--m", "4"],
        &["verify", "nonsense"],
        &["verify", "ternary", "--max-n", "3"],
        &["plot", "h", "--base", "2", "--level", "13"],
        &["frobnicate"],
    ] {
        let (code, out, err) = invoke(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn verify_ternary_reports_json() {
    let (code, out, _) = invoke(&["verify", "ternary", "--max-m", "50"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["theorem_id"], "ternary");
    assert_eq!(v["counterexample_count"], 0);
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
}

#[test]
fn verify_is_deterministic_across_jobs() {
    let base = ["verify", "general-bound", "--base", "2,3,7", "--max-m", "80", "--witness-cap", "20"];
    let (_, one, _) = invoke(&[&base[..], &["--jobs", "1"]].concat());
    let (_, four, _) = invoke(&[&base[..], &["--jobs", "4"]].concat());
    let (_, default, _) = invoke(&base);
    assert_eq!(one, four);
    assert_eq!(one, default);
}

#[test]
fn tableau_a5_shape() {
    let (code, out, _) = invoke(&["tableau", "--base", "3", "--k", "5"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 5));
    assert!(rows[0].split_whitespace().eq(["0", "1", "2", "3", "4"]));

    let (_, json, _) = invoke(&["tableau", "--base", "3", "--k", "5", "--format", "json"]);
    let grid: Vec<Vec<u64>> = serde_json::from_str(&json).unwrap();
    let mut all: Vec<u64> = grid.concat();
    all.sort_unstable();
    assert_eq!(all, (0..15).collect::<Vec<_>>());
}

#[test]
fn sharpness_table() {
    let (code, out, _) = invoke(&["sharpness", "--base", "3", "--max-n", "8", "--format", "csv"]);
    assert_eq!(code, 0);
    let last = out.lines().last().unwrap();
    assert_eq!(last, "8,819/410,819/410,1/410,true");
}

fn plot_rows(args: &[&str]) -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plot.csv");
    let path_str = path.to_str().unwrap();
    let (code, out, _) = invoke(&[args, &["--out", path_str]].concat());
    assert_eq!(code, 0);
    assert!(out.is_empty());
    fs::read_to_string(&path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn plot_h_binary_level_one() {
    let rows = plot_rows(&["plot", "h", "--base", "2", "--level", "1"]);
    assert_eq!(rows, ["x_num,x_den,y_num,y_den", "0,1,0,1", "1,2,1,4", "1,1,0,1"]);
}

#[test]
fn plot_omega_ternary_level_one() {
    let rows = plot_rows(&["plot", "omega", "--base", "3", "--level", "1"]);
    assert_eq!(rows, ["x_num,x_den,y_num,y_den", "0,1,0,1", "1,3,1,3", "2,3,1,3", "1,1,0,1"]);
}

#[test]
fn plot_g_breakpoints() {
    let rows = plot_rows(&["plot", "g", "--base", "3", "--level", "1"]);
    // g_3(i/3) = i(3-i)/6
    assert_eq!(rows, ["x_num,x_den,y_num,y_den", "0,1,0,1", "1,3,1,3", "2,3,1,3", "1,1,0,1"]);
}

#[test]
fn plot_delange_is_periodic() {
    let rows = plot_rows(&["plot", "F", "--base", "10", "--level", "1"]);
    assert_eq!(rows[0], "x,value");
    assert_eq!(rows.len(), 12);
    let value = |r: &str| r.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert_eq!(value(&rows[1]), value(&rows[11]));
}

#[test]
fn plot_to_unwritable_path_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("plot.csv");
    let (code, _, err) = invoke(&["plot", "h", "--base", "2", "--level", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify", "times-b", "--max-n", "40", "--max-k", "40", "--format", "text"];
    assert_eq!(invoke(&args), invoke(&args));
}
