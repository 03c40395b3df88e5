//! End-to-end runs of the `verify` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--out", "json", "--no-timings"]);
    let out = verify(&all);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

#[test]
fn carlsson_rank_eight_is_a_counterexample() {
    let (v, code) =
        json(&["carlsson", "--p", "3", "--r", "8", "--exponents", "2", "--tier", "fast", "--expect", "counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(v["computed"], "252");
    assert_eq!(v["bound"], "256");
    assert_eq!(v["verdict"], "counterexample-confirmed");
    let trusted = v["trusted_range"].as_array().unwrap();
    assert!(!trusted.is_empty() && trusted.iter().all(|c| c["holds"] == true));
}

#[test]
fn carlsson_small_rank_holds_the_bound() {
    let (v, code) = json(&["carlsson", "--p", "3", "--r", "4", "--exponents", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["computed"], "20");
    assert_eq!(v["bound"], "16");
    assert_eq!(v["verdict"], "bound-holds");
    // asking for the wrong outcome is a mismatch
    let (_, code) = json(&["carlsson", "--p", "3", "--r", "4", "--exponents", "3", "--expect", "counterexample"]);
    assert_eq!(code, 2);
}

#[test]
fn lefschetz_markdown_report() {
    let out = verify(&["lefschetz", "--n", "4", "--char", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("computed value: 252"), "{md}");
    assert!(md.contains("counterexample-confirmed"));
    assert!(md.contains("hilbert_series_coker: t^-2 + 8t^-1 + 27 + 48t + 42t^2"), "{md}");
    assert!(md.contains("injective"), "{md}");
}

#[test]
fn char0_flag_matches_char_zero() {
    let (a, _) = json(&["lefschetz", "--n", "2", "--char0"]);
    let (b, _) = json(&["lefschetz", "--n", "2", "--p", "0"]);
    assert_eq!(a, b);
}

#[test]
fn invalid_input_exits_four() {
    // characteristic two has no Lefschetz element
    let out = verify(&["carlsson", "--p", "2", "--r", "4", "--exponents", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));
    assert_eq!(verify(&["carlsson", "--p", "4"]).status.code(), Some(4));
    assert_eq!(verify(&["carlsson", "--bogus"]).status.code(), Some(4));
    assert_eq!(verify(&["growth", "--r", "3"]).status.code(), Some(4));
    assert_eq!(verify(&["--help"]).status.code(), Some(0));
}

#[test]
fn slow_runs_need_the_slow_tier() {
    let out = verify(&["carlsson", "--p", "3", "--r", "8", "--exponents", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("slow"));
}

#[test]
fn reports_are_reproducible() {
    let args = ["betti-degree", "--p", "3", "--e", "2"];
    let (a, _) = json(&args);
    let (b, _) = json(&args);
    assert_eq!(a, b);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn empty_campaign() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("empty.toml", ""), ("empty.json", "[]")] {
        let cfg = write(dir.path(), name, text);
        let (v, code) = json(&["campaign", &cfg]);
        assert_eq!(code, 0);
        assert!(v["entries"].as_array().unwrap().is_empty());
    }
}

#[test]
fn campaign_duplicates_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "dup.toml",
        "[[run]]\nname = \"a\"\nconjecture = \"growth\"\nn = 40\nexpect = \"counterexample\"\n\
         [[run]]\nname = \"b\"\nconjecture = \"growth\"\nn = 40\nexpect = \"counterexample\"\n",
    );
    let cache = dir.path().join("cache");
    let reports = dir.path().join("out");
    let cache_s = cache.to_str().unwrap();
    let (v, code) = json(&["campaign", &cfg, "--cache-dir", cache_s, "--report-dir", reports.to_str().unwrap()]);
    assert_eq!(code, 0);
    let e = v["entries"].as_array().unwrap();
    assert_eq!(e[0]["report"]["cached"], false);
    assert_eq!(e[1]["report"]["cached"], true);
    assert!(reports.join("campaign.md").exists() && reports.join("campaign.json").exists());
    // a second invocation is served entirely from the on-disk cache
    let (v, _) = json(&["campaign", &cfg, "--cache-dir", cache_s]);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["report"]["cached"] == true));
}

#[test]
fn campaign_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "mixed.json",
        r#"[{"conjecture":"carlsson","p":2,"r":2,"exponents":[2]},{"conjecture":"growth","n":30,"expect":"counterexample"}]"#,
    );
    let (v, code) = json(&["campaign", &cfg, "--sequential"]);
    assert_eq!(code, 4);
    let e = v["entries"].as_array().unwrap();
    assert!(e[0]["error"].is_string());
    assert_eq!(e[1]["exit_code"], 0);
}

#[test]
fn list_names_every_verifier() {
    let out = String::from_utf8(verify(&["list"]).stdout).unwrap();
    for name in ["carlsson", "rank", "differential-module", "trc", "betti-degree", "lefschetz", "growth"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn shipped_suite_passes_at_the_fast_tier() {
    let suite = concat!(env!("CARGO_MANIFEST_DIR"), "/../../paper-suite.toml");
    let (v, code) = json(&["campaign", suite]);
    assert_eq!(code, 0, "{v:#}");
    assert!(v["entries"].as_array().unwrap().len() >= 20);
    let skipped: Vec<&str> = v["skipped"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(skipped, ["carlsson-r8-a3", "betti-degree-e8"]);
}
