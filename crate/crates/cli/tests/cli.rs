mod support;

use std::fs;

use serde_json::Value;
use support::{code, ok, solvency};
use tempfile::TempDir;

fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "--quiet",
            "synth",
            "--table2",
            "--seed",
            "7",
            "-o",
            "train.csv",
        ],
    );
    dir
}

#[test]
fn label_appends_class_and_action_level() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("in.csv"),
        "company_id,V1,car\nA,0.3,1.1\nB,0.5,2.0\n",
    )
    .unwrap();
    let out = ok(dir.path(), &["label", "in.csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "company_id,V1,car,class,action_level");
    assert_eq!(lines[1], "A,0.3,1.1,Weak,Regulatory action level");
    assert_eq!(lines[2], "B,0.5,2.0,Strong,No action level");
}

#[test]
fn label_tca_tcr_columns() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("in.csv"), "V1,tca,tcr\n1,90,100\n").unwrap();
    let out = ok(dir.path(), &["label", "in.csv", "--label-mode", "tca-tcr"]);
    assert!(
        out.ends_with("1,90,100,Insolvency,Authorized control & Mandatory control level\n"),
        "{out}"
    );
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("empty.csv"), "").unwrap();
    fs::write(dir.path().join("bad.csv"), "V1,car\n0.1,oops\n").unwrap();
    for args in [
        vec!["label", "empty.csv"],
        vec!["label", "bad.csv"],
        vec!["label", "missing.csv"],
        vec!["synth", "--counts", "1,-1,2,3"],
        vec!["evaluate", "bad.csv", "--protocol", "loo"],
        vec!["--seed", "abc", "synth"],
    ] {
        let out = solvency(dir.path(), &args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = solvency(dir.path(), &["label", "bad.csv"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 1") && err.contains("`car`"), "{err}");
}

#[test]
fn synth_counts_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = ok(dir.path(), &["synth", "--counts", "0,0,0,5"]);
    assert_eq!(a.lines().count(), 6);
    assert!(a.lines().skip(1).all(|l| l.ends_with(",Strong")));
    assert_eq!(a, ok(dir.path(), &["synth", "--counts", "0,0,0,5"]));
    assert_ne!(
        a,
        ok(dir.path(), &["--seed", "2", "synth", "--counts", "0,0,0,5"])
    );
    let t = ok(dir.path(), &["synth", "--table2"]);
    assert_eq!(t.lines().count(), 617);
}

#[test]
fn train_writes_ordinal_model_and_summary() {
    let dir = workspace();
    let summary = ok(
        dir.path(),
        &["--format", "json", "train", "train.csv", "-o", "m.json"],
    );
    let model: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(model["kind"], "ordinal");
    assert_eq!(model["trees"].as_array().unwrap().len(), 3);
    let s: Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(
        s["summary"]["training_class_counts"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
    assert_eq!(s["config"]["command"]["name"], "train");

    ok(
        dir.path(),
        &["-q", "train", "train.csv", "-o", "b.json", "--no-ordinal"],
    );
    let base: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(base["kind"], "multiclass");

    ok(dir.path(), &["-q", "train", "train.csv", "-o", "m2.json"]);
    assert_eq!(
        fs::read(dir.path().join("m.json")).unwrap(),
        fs::read(dir.path().join("m2.json")).unwrap()
    );
}

#[test]
fn evaluate_protocols() {
    let dir = workspace();
    let text = ok(
        dir.path(),
        &[
            "evaluate",
            "train.csv",
            "--protocol",
            "cv10",
            "--paper-protocol",
        ],
    );
    assert!(text.contains("Classified Correctly (%)"));
    assert!(text.contains("I = Insolvency, W = Weak, M = Moderate, S = Strong"));

    let json = ok(
        dir.path(),
        &[
            "--format",
            "json",
            "evaluate",
            "train.csv",
            "--protocol",
            "split30",
        ],
    );
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["report"]["n"], 185);

    fs::write(dir.path().join("narrow.csv"), "V1,V2,class\n1,2,Strong\n").unwrap();
    let out = solvency(
        dir.path(),
        &["evaluate", "train.csv", "--protocol", "holdout:narrow.csv"],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
}

#[test]
fn holdout_on_separate_file() {
    let dir = workspace();
    ok(
        dir.path(),
        &[
            "-q",
            "--seed",
            "8",
            "synth",
            "--counts",
            "10,5,5,45",
            "-o",
            "test.csv",
        ],
    );
    let json = ok(
        dir.path(),
        &[
            "--format",
            "json",
            "evaluate",
            "train.csv",
            "--protocol",
            "holdout:test.csv",
        ],
    );
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["report"]["n"], 65);
    assert_eq!(v["report"]["protocol"]["type"], "holdout");
}

#[test]
fn classify_appends_predictions() {
    let dir = workspace();
    ok(dir.path(), &["-q", "train", "train.csv", "-o", "m.json"]);
    let out = ok(dir.path(), &["classify", "-m", "m.json", "train.csv"]);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    let header = rows.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (class, pred, level) = (col("class"), col("predicted_class"), col("action_level"));
    let scores: Vec<usize> = ["Insolvency", "Weak", "Moderate", "Strong"]
        .iter()
        .map(|c| col(&format!("score_{c}")))
        .collect();
    let mut strong_hits = 0;
    for r in rows.records() {
        let r = r.unwrap();
        let sum: f64 = scores.iter().map(|&i| r[i].parse::<f64>().unwrap()).sum();
        assert!(sum >= 1.0 - 1e-9);
        if &r[class] == "Strong" && &r[pred] == "Strong" {
            assert_eq!(&r[level], "No action level");
            strong_hits += 1;
        }
    }
    assert!(strong_hits > 500);
}

#[test]
fn classify_edge_cases() {
    let dir = workspace();
    ok(
        dir.path(),
        &["-q", "train", "train.csv", "-o", "m.json", "--no-select"],
    );
    fs::write(dir.path().join("empty.csv"), "").unwrap();
    let out = ok(dir.path(), &["classify", "-m", "m.json", "empty.csv"]);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("V1,V2,") && out.trim_end().ends_with("predicted_class,score_Insolvency,score_Weak,score_Moderate,score_Strong,action_level"));

    fs::write(dir.path().join("head.csv"), "V1,V2\n").unwrap();
    let out = solvency(dir.path(), &["classify", "-m", "m.json", "head.csv"]);
    assert_eq!(code(&out), 2);

    fs::write(dir.path().join("junk.json"), "{\"kind\":\"ordinal\"}").unwrap();
    let out = solvency(dir.path(), &["classify", "-m", "junk.json", "train.csv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn json_report_replays_from_embedded_config() {
    let dir = workspace();
    let first = ok(
        dir.path(),
        &[
            "--format",
            "json",
            "--seed",
            "3",
            "evaluate",
            "train.csv",
            "--protocol",
            "cv5",
            "--bias",
            "0.5",
        ],
    );
    fs::write(dir.path().join("report.json"), &first).unwrap();
    let again = ok(dir.path(), &["--from-config", "report.json"]);
    assert_eq!(first, again);
}

#[test]
fn random_seed_is_recorded_for_replay() {
    let dir = workspace();
    let first = ok(
        dir.path(),
        &[
            "-q",
            "--seed",
            "random",
            "--format",
            "json",
            "evaluate",
            "train.csv",
            "--protocol",
            "cv3",
        ],
    );
    let v: Value = serde_json::from_str(&first).unwrap();
    assert!(v["config"]["seed"].is_u64());
    fs::write(dir.path().join("r.json"), &first).unwrap();
    assert_eq!(first, ok(dir.path(), &["--from-config", "r.json"]));
}

#[test]
fn select_prints_names() {
    let dir = workspace();
    let out = ok(dir.path(), &["select", "train.csv"]);
    let names: Vec<String> = serde_json::from_str(&out).unwrap();
    assert!(!names.is_empty() && names.iter().all(|n| n.starts_with('V')));
}
