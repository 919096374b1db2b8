use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pantslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pantslab"))
        .args(args)
        .env_remove("PANTSLAB_CAP_CLASSES")
        .output()
        .expect("binary runs")
}

fn json_result(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(v["provenance"]["tool"], "pantslab");
    v["result"].clone()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const THETA: &str = r#"{"vertices":2,"pairs":[[0,1],[2,3],[4,5]],"owner":[0,1,0,1,0,1]}"#;
const DUMBBELL: &str = r#"{"vertices":2,"pairs":[[0,1],[2,3],[4,5]],"owner":[0,0,0,1,1,1]}"#;

#[test]
fn diameter_of_six_punctured_sphere() {
    let out = pantslab(&["diameter", "--g", "0", "--n", "6", "--metric", "cubical", "--quotient"]);
    assert!(out.status.success());
    let r = json_result(&out);
    assert_eq!(r["diameter"].as_f64().unwrap(), 1.0);
    assert_eq!(r["class_count"], 2);
    assert_eq!(r["connected"], true);
}

#[test]
fn labeled_diameter_is_refused() {
    let out = pantslab(&["diameter", "--g", "0", "--n", "6"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn reduce_theta_writes_replayable_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.json", THETA);
    let sched = dir.path().join("s.json");
    let trace = dir.path().join("t.csv");
    let out = pantslab(&[
        "reduce",
        &input,
        "--target",
        "treelike",
        "--out",
        sched.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("# provenance: "));
    assert!(csv.contains("phase,batch_sizes,cost,effective_genus\n"));
    assert!(csv.contains("genus_reduce,1,1,2\n"));

    let out = pantslab(&["replay", sched.to_str().unwrap()]);
    assert!(out.status.success());
    let r = json_result(&out);
    assert_eq!(r["total_cost"].as_f64().unwrap(), 1.0);
    // the end graph is the dumbbell
    let end = write(dir.path(), "end.json", &r["end"].to_string());
    let dumb = write(dir.path(), "dumb.json", DUMBBELL);
    let out = pantslab(&["distance", &end, &dumb, "--quotient"]);
    assert_eq!(json_result(&out)["distance"].as_f64().unwrap(), 0.0);
}

#[test]
fn tampered_schedule_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.json", THETA);
    let out = pantslab(&["reduce", &input, "--target", "treelike"]);
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["result"]["total_cost"] = Value::from(7.0);
    let path = write(dir.path(), "bad.json", &v.to_string());
    let out = pantslab(&["replay", &path]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn linear_target_requires_tree() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.json", THETA);
    let out = pantslab(&["reduce", &input, "--target", "linear"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn wolpert_at_zero() {
    let out = pantslab(&["bounds", "wolpert", "--L", "0"]);
    assert!(out.status.success());
    assert_eq!(json_result(&out)["value"].as_f64().unwrap(), 0.0);
    let out = pantslab(&["bounds", "wolpert", "--param", "L=-1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bounds_sweep_is_csv() {
    let out = pantslab(&["bounds", "sweep", "bers", "--over", "n=4,5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "n,value,satisfied");
    assert_eq!(body.len(), 3);
}

#[test]
fn cap_exceeded_has_own_code() {
    let out = pantslab(&["enumerate", "--g", "0", "--n", "9", "--cap-classes", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_pantslab"))
        .args(["enumerate", "--g", "0", "--n", "9"])
        .env("PANTSLAB_CAP_CLASSES", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_counts() {
    let out = pantslab(&["enumerate", "--g", "2", "--n", "0"]);
    assert_eq!(json_result(&out)["count"], 2);
    let out = pantslab(&["enumerate", "--g", "0", "--n", "6", "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("graph pants {").count(), 2);
}

#[test]
fn invalid_graph_reports() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"vertices":2,"pairs":[[0,1]],"owner":[0,0]}"#);
    let out = pantslab(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let out = pantslab(&["metrics", &bad]);
    assert_eq!(out.status.code(), Some(4));
    let junk = write(dir.path(), "junk.json", "not json");
    assert_eq!(pantslab(&["metrics", &junk]).status.code(), Some(4));
}

#[test]
fn metrics_of_theta() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.json", THETA);
    let r = json_result(&pantslab(&["metrics", &input]));
    assert_eq!(r["genus"], 2);
    assert_eq!(r["girth"], 2);
}

#[test]
fn sweeps_reproduce_across_worker_counts() {
    let run = |workers: &str| {
        let out = pantslab(&["sweep", "--kind", "trees", "--sizes", "16,32", "--samples", "3", "--seed", "5", "--workers", workers]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one.lines().count(), 7);
}

#[test]
fn diameter_sweep() {
    let out = pantslab(&["sweep", "--kind", "diameters", "--g", "0", "--n", "4..7", "--quotient"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0,7,2,1,true"));
}

#[test]
fn unknown_arguments_are_input_errors() {
    assert_eq!(pantslab(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(pantslab(&["--version"]).status.code(), Some(0));
}
