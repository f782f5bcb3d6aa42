use std::path::Path;
use std::process::{Command, Output};

fn cglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cglab"))
        .args(args)
        .env_remove("CGLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = cglab(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn growth_count_csv() {
    let out = ok(&["growth", "count", "--group", "free:2", "--kind", "conj", "--mode", "cumulative", "--max-n", "3"]);
    assert_eq!(out, "0,1\n1,5\n2,13\n3,25\n");
    let out = ok(&["growth", "count", "--group", "free:2", "--kind", "ball", "--max-n", "3", "--engine", "formula"]);
    assert_eq!(out, "0,1\n1,5\n2,17\n3,53\n");
}

#[test]
fn growth_count_json_is_deterministic() {
    let args = ["growth", "count", "--group", "zm*zn:2,3", "--kind", "pconj", "--max-n", "6", "--format", "json"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["group"], "zm*zn:2,3");
    assert!(v["coeffs"].as_array().unwrap().iter().all(|c| c.is_string()));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["coeffs", "engine", "group", "kind", "mode", "schema"]);
    assert!(a.find("\"coeffs\"").unwrap() < a.find("\"schema\"").unwrap());
}

#[test]
fn cache_reuse_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["growth", "count", "--group", "zm*zn:2,2", "--kind", "conj", "--mode", "strict", "--max-n", "29", "--cache-dir", d];
    let first = ok(&args);
    let file = dir.path().join("zm-zn-2-2_conj_strict.json");
    assert!(file.exists());
    assert_eq!(ok(&args), first);

    // the cache file itself is a valid analysis input
    let report = ok(&["series", "analyze", "--input", file.to_str().unwrap(), "--max-order", "4"]);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["report"]["recurrence"]["found"], true);

    // the environment variable works as well
    let o = Command::new(env!("CARGO_BIN_EXE_cglab"))
        .args(&args[..args.len() - 2])
        .env("CGLAB_CACHE", d)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), first);

    let text = std::fs::read_to_string(&file).unwrap();
    std::fs::write(&file, text.replacen("\"1\"", "\"7\"", 1)).unwrap();
    let o = cglab(&args);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
}

#[test]
fn series_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f2.json");
    let table = ok(&["growth", "count", "--group", "free:2", "--kind", "conj", "--mode", "strict", "--engine", "formula", "--max-n", "23", "--format", "json"]);
    std::fs::write(&path, table).unwrap();
    let p = path.to_str().unwrap();

    let v: serde_json::Value = serde_json::from_str(&ok(&["series", "analyze", "--input", p])).unwrap();
    assert_eq!(v["report"]["recurrence"]["found"], false);

    let out = ok(&["series", "asymptotics", "--input", p, "--base", "exact", "--range", "10:18"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let p_hat = v["fit"]["p_hat"].as_f64().unwrap();
    assert!((-1.3..=-0.7).contains(&p_hat));
    assert_eq!(v["fit"]["lambda"], 3.0);
    // twelve significant digits at most
    for line in out.lines().filter(|l| l.contains('.')) {
        let num: String = line.chars().filter(|c| c.is_ascii_digit()).collect();
        assert!(num.trim_start_matches('0').len() <= 12, "{line}");
    }
    assert_eq!(out, ok(&["series", "asymptotics", "--input", p, "--base", "3", "--range", "10:18"]));

    let o = cglab(&["series", "asymptotics", "--input", p, "--range", "10-18"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fsa_build() {
    let dot = ok(&["fsa", "build", "--which", "lex", "--group", "free:2", "--out", "dot"]);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("3 states"));
    let json = ok(&["fsa", "build", "--which", "lex", "--group", "free:2", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["states"], 3);

    let s = ok(&["fsa", "build", "--which", "S", "--group", "free:2", "--out", "json"]);
    assert!(serde_json::from_str::<serde_json::Value>(&s).is_ok());
    let bcd = ok(&["fsa", "build", "--which", "bcd", "--group", "free:2", "--K", "1"]);
    assert_eq!(bcd, ok(&["fsa", "build", "--which", "bcd", "--group", "free:2", "--K", "1"]));
    let delta = ok(&["fsa", "build", "--which", "delta", "--group", "free:2", "--K", "1", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&delta).unwrap();
    assert!(v["states"].as_u64().unwrap() > 3);
}

#[test]
fn delta_apply() {
    let out = ok(&["delta", "apply", "--group", "free:2", "--K", "2", "--word", "ba"]);
    assert_eq!(out, "delta: ab\npartner: ab\nconjugator: a\n");
    let out = ok(&["delta", "apply", "--group", "free:2", "--K", "2", "--word", ""]);
    assert!(out.starts_with("delta: 1\n"));
    let o = cglab(&["delta", "apply", "--group", "free:2", "--word", "abA"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not of minimal length"));
}

#[test]
fn exit_codes() {
    assert_eq!(cglab(&["growth", "count", "--group", "free:x"]).status.code(), Some(2));
    assert_eq!(cglab(&["growth", "count", "--group", "free:2", "--kind", "nope"]).status.code(), Some(2));
    assert_eq!(cglab(&["delta", "apply", "--word", "q"]).status.code(), Some(2));
    assert_eq!(cglab(&["growth", "count", "--group", "free:2", "--max-n", "40"]).status.code(), Some(3));
    assert_eq!(cglab(&["fsa", "build", "--which", "bcd", "--K", "9"]).status.code(), Some(3));
    assert_eq!(cglab(&["growth", "count", "--group", "zm*zn:2,3", "--engine", "formula"]).status.code(), Some(1));
}

#[test]
fn help_has_examples() {
    for sub in [&["growth", "count"][..], &["series", "analyze"], &["series", "asymptotics"], &["fsa", "build"], &["delta", "apply"]] {
        let mut args = sub.to_vec();
        args.push("--help");
        let out = ok(&args);
        assert!(out.contains("Examples:"), "{sub:?}");
        assert!(out.contains("cglab "), "{sub:?}");
    }
    assert!(ok(&["growth", "count", "--help"]).contains("CGLAB_CACHE"));
    assert!(Path::new(env!("CARGO_BIN_EXE_cglab")).exists());
}
