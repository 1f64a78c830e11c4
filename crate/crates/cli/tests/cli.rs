use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pcanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcanon"))
        .arg("--quiet")
        .args(args)
        .env_remove("PCANON_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = pcanon(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn fails_with(args: &[&str], code: i32, needle: &str) {
    let o = pcanon(args);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {err}");
    assert!(err.contains(needle), "{args:?}: {err}");
}

#[test]
fn verify_report_shape() {
    let r: Value = serde_json::from_str(&ok(&["verify", "lemma-rho", "--type", "A1"])).unwrap();
    assert_eq!(r["status"], "pass");
    assert_eq!(r["suite"], "lemma-rho");
    assert_eq!(r["failed"], 0);
    assert_eq!(r["checks"].as_array().unwrap().len() as u64, r["passed"].as_u64().unwrap());
    assert!(r.get("timing_ms").is_none());
    let r: Value = serde_json::from_str(&ok(&["verify", "lemma-rho", "--type", "A1", "--timing"])).unwrap();
    assert!(r["timing_ms"].is_object());
}

#[test]
fn errors_exit_with_two() {
    fails_with(&["verify", "main", "--type", "Q7"], 2, "pcanon: error:");
    fails_with(&["verify", "main", "--type", "A1", "--format", "csv"], 2, "JSON only");
    fails_with(&["verify", "main", "--type", "A1", "--threads", "0"], 2, "positive");
    fails_with(&["compute", "simplechar", "--type", "A1", "--weight", "3"], 2, "--p");
    fails_with(&["compute", "simplechar", "--type", "A2", "--weight", "3", "--p", "5"], 2, "rank 2");
    fails_with(&["compute", "kl", "--type", "A1", "--elem", "s7"], 2, "s7");
    fails_with(&["draw", "--type", "A1"], 2, "rank");
    fails_with(&["verify", "main", "--type", "A1", "--table", "/nonexistent/table.json"], 2, "table");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"cartan": [[2, -1], [-1]]}"#).unwrap();
    fails_with(&["verify", "main", "--datum", bad.to_str().unwrap()], 2, "pcanon: error:");
    std::fs::write(&bad, "not json").unwrap();
    fails_with(&["verify", "main", "--datum", bad.to_str().unwrap()], 2, "pcanon: error:");
}

#[test]
fn datum_from_file_matches_type() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c2.json");
    std::fs::write(&path, r#"{"schema": 1, "type": "C2", "lattice": "simply_connected"}"#).unwrap();
    let a = ok(&["compute", "kl", "--type", "C2", "--elem", "s0 s1 s2", "--format", "csv"]);
    let b = ok(&["compute", "kl", "--datum", path.to_str().unwrap(), "--elem", "s0 s1 s2", "--format", "csv"]);
    assert_eq!(a, b);
}

#[test]
fn compute_formats() {
    let text = ok(&["compute", "kl", "--type", "A1~", "--elem", "s0 s1"]);
    assert_eq!(text, "w: e\tv^2\nw: s0\tv\nw: s1\tv\nw: s0 s1\t1\n");
    let csv = ok(&["compute", "kl", "--type", "A1", "--elem", "s0 s1", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("y,coeff"));
    assert_eq!(lines.count(), 4);
    let j: Value = serde_json::from_str(&ok(&["compute", "kl", "--type", "A1", "--elem", "s0 s1", "--format", "json"])).unwrap();
    assert_eq!(j["kind"], "kl");
    assert_eq!(j["rows"][0]["y"], "w: e");
    assert_eq!(j["rows"][0]["coeff"], serde_json::json!([[2, 1]]));
    fails_with(&["compute", "bounds", "--type", "C2", "--format", "svg"], 2, "svg");
}

#[test]
fn compute_characters() {
    assert_eq!(ok(&["compute", "bounds", "--type", "C2"]), "7 / 10 / 3\n");
    assert_eq!(ok(&["compute", "simplechar", "--type", "A1", "--weight", "3", "--p", "5"]), "(1)\t1\n(3)\t1\n");
    assert_eq!(ok(&["compute", "projmult", "--type", "A1", "--weight", "(1)", "--p", "5"]), "(1)\t1\n(7)\t1\n");
    let j: Value = serde_json::from_str(&ok(&[
        "compute", "babyverma", "--type", "A1", "--weight", "0", "--p", "5", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(j["p"], 5);
    let total: i64 = j["rows"].as_array().unwrap().iter().map(|r| r["mult"].as_i64().unwrap()).sum();
    assert_eq!(total, 5);
    let j: Value = serde_json::from_str(&ok(&["compute", "bounds", "--type", "C2", "--format", "json"])).unwrap();
    assert_eq!(j["rows"][0], serde_json::json!({"orig": 7, "orig_upper": 10, "improved": 3}));
}

#[test]
fn compute_modules() {
    let asph = ok(&["compute", "asph", "--type", "A1", "--elem", "s0"]);
    assert_eq!(asph, "w: e\tv\nw: s0\t1\n");
    fails_with(&["compute", "asph", "--type", "A1", "--elem", "s1"], 2, "s1");
    let per = ok(&["compute", "periodic", "--type", "A1", "--alcove", "e"]);
    assert!(per.lines().count() >= 2, "{per}");
    let qa = ok(&["compute", "qa", "--type", "C2", "--alcove", "e", "--format", "csv"]);
    assert!(qa.starts_with("alcove,mult\n"), "{qa}");
}

#[test]
fn draw_shading_and_labels() {
    let svg = ok(&["draw", "--type", "C2", "--window", "4", "--shade", "restricted"]);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r##"fill="#c8c8c8""##).count(), 4);
    let svg = ok(&["draw", "--type", "A2", "--window", "4", "--shade", "restricted", "--shade", "list(A=s0;D=s0 s1)"]);
    assert_eq!(svg.matches(r##"fill="#c8c8c8""##).count() + svg.matches(r##"fill="#9ecae1""##).count(), 3);
    assert!(svg.contains(">A</text>") && svg.contains(">D</text>"));
    let tikz = ok(&["draw", "--type", "G2", "--window", "3", "--format", "tikz", "--shade", "fW-window(2)"]);
    assert!(tikz.contains("\\begin{tikzpicture}") && tikz.contains("\\filldraw"));
    fails_with(&["draw", "--type", "C2", "--shade", "hexagon"], 2, "hexagon");
    fails_with(&["draw", "--type", "C2", "--format", "json"], 2, "svg or tikz");
}

fn cache(dir: &Path, args: &[&str]) -> String {
    let mut all = vec!["cache"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--type", "A2", "--cache-dir", dir.to_str().unwrap()]);
    ok(&all)
}

#[test]
fn cache_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("kl");
    assert!(cache(&dir, &["info"]).contains("columns: 0"));
    let warm = cache(&dir, &["warm", "--max-len", "4"]);
    assert!(warm.contains("new)"), "{warm}");
    let info = cache(&dir, &["info"]);
    assert!(!info.contains("columns: 0\n"), "{info}");
    // Cached columns give the same answers.
    let a = ok(&["compute", "kl", "--type", "A2", "--elem", "s0 s1 s2 s0", "--cache-dir", dir.to_str().unwrap()]);
    assert_eq!(a, ok(&["compute", "kl", "--type", "A2", "--elem", "s0 s1 s2 s0"]));
    assert!(cache(&dir, &["clear"]).starts_with("removed"));
    assert_eq!(cache(&dir, &["clear"]), "nothing to remove\n");
    fails_with(&["cache", "info", "--type", "A2"], 2, "cache");
}

#[test]
fn threads_do_not_change_output() {
    let a = ok(&["verify", "periodic", "--type", "A1", "--threads", "1"]);
    let b = ok(&["verify", "periodic", "--type", "A1", "--threads", "3"]);
    assert_eq!(a, b);
}
