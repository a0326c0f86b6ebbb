use std::fs;
use std::path::Path;

use otf_cli::{run, Outcome, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE, EXIT_VIOLATION};
use serde_json::Value;

fn otf(args: &[&str]) -> Outcome {
    run(std::iter::once("otf").chain(args.iter().copied()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn rank_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    assert_eq!(otf(&["rank", "build", "--delta", "eta", "--seed", "3", "--out", p(&chi)]).code, EXIT_OK);
    let applied = otf(&["rank", "apply", "--chi", p(&chi), "--element", "-1@0"]);
    assert_eq!(applied.code, EXIT_OK, "{}", applied.stderr);
    let class = otf(&["rank", "class", "--chi", p(&chi), "--element", "-2@0 + 1@5"]);
    assert_eq!(class.code, EXIT_OK);
    let shift = otf(&["rank", "shift", "--chi", p(&chi), "--element", "-1@0"]);
    assert_eq!(shift.code, EXIT_OK);
    // ζ(q) is the exponent of χ(-𝟙_q)
    assert!(applied.stdout.trim().ends_with(&format!("@{}", shift.stdout.trim())), "{} vs {}", applied.stdout, shift.stdout);
    assert_eq!(otf(&["rank", "check", "--chi", p(&chi), "--samples", "100"]).code, EXIT_OK);
    assert_eq!(otf(&["rank", "apply", "--chi", p(&chi), "--element", "1@0"]).code, EXIT_USAGE);
}

#[test]
fn queries_extend_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    otf(&["rank", "build", "--delta", "eta", "--out", p(&chi)]);
    let before = fs::read_to_string(&chi).unwrap();
    let first = otf(&["rank", "apply", "--chi", p(&chi), "--element", "-1@7/3"]);
    let after = fs::read_to_string(&chi).unwrap();
    assert_ne!(before, after);
    let again = otf(&["rank", "apply", "--chi", p(&chi), "--element", "-1@7/3"]);
    assert_eq!(first, again);
    assert_eq!(after, fs::read_to_string(&chi).unwrap());
}

#[test]
fn synth_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    let phi = dir.path().join("phi.json");
    otf(&["rank", "build", "--delta", "eta", "--out", p(&chi)]);
    let built = otf(&["--seed", "5", "synth", "phi", "--chi", p(&chi), "--mode", "growth", "--out", p(&phi)]);
    assert_eq!(built.code, EXIT_OK, "{}", built.stderr);
    let tl = otf(&["synth", "tl", "--phi", p(&phi), "--a", "1@0", "--b", "7/2"]);
    assert!(tl.stdout.starts_with("1@0|3|1/2\n"), "{}", tl.stdout);
    let cmp = otf(&["synth", "compare", "--phi", p(&phi), "1@0|2|3/4", "1@0|3|0"]);
    assert_eq!(cmp.stdout, "LT\n");
    let cmp = otf(&["synth", "compare", "--phi", p(&phi), "1@-1|0|0", "1@0|9|1/2"]);
    assert_eq!(cmp.stdout, "GT\n");
    let xt = otf(&["--emit", "json", "synth", "xt", "--phi", p(&phi), "--g", "-1@2"]);
    let v: Value = serde_json::from_str(&xt.stdout).unwrap();
    assert_eq!(v["above"], true);
    assert_eq!(otf(&["synth", "check", "--phi", p(&phi), "--samples", "100"]).code, EXIT_OK);
    assert_eq!(otf(&["synth", "xt", "--phi", p(&phi), "--g", "1@2"]).code, EXIT_USAGE);
}

#[test]
fn nogrowth_check_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    let phi = dir.path().join("phi.json");
    otf(&["rank", "build", "--delta", "eta", "--out", p(&chi)]);
    otf(&["synth", "phi", "--chi", p(&chi), "--mode", "nogrowth", "--out", p(&phi)]);
    let o = otf(&["synth", "check", "--phi", p(&phi), "--samples", "20"]);
    assert_eq!(o.code, EXIT_VIOLATION);
    assert!(o.stdout.contains("FAIL g=-1@0 "), "{}", o.stdout);
}

#[test]
fn synthesis_over_finite_rank_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    let phi = dir.path().join("phi.json");
    assert_eq!(otf(&["rank", "build", "--delta", "3", "--out", p(&chi)]).code, EXIT_OK);
    let o = otf(&["synth", "phi", "--chi", p(&chi), "--mode", "growth", "--out", p(&phi)]);
    assert_eq!(o.code, EXIT_UNSUPPORTED);
    assert!(!phi.exists());
}

#[test]
fn tr_suites() {
    assert_eq!(otf(&["tr", "check", "--suite", "axioms", "--samples", "200", "--seed", "4"]).code, EXIT_OK);
    assert_eq!(otf(&["tr", "check", "--suite", "growth"]).code, EXIT_OK);
    assert_eq!(otf(&["tr", "check", "--suite", "derivative"]).code, EXIT_OK);
    let j = otf(&["--emit", "json", "tr", "check", "--suite", "axioms", "--samples", "10"]);
    let v: Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["suite"], "axioms");
    assert_eq!(v["failures"], Value::Array(vec![]));
}

#[test]
fn tampered_artifact_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let chi = dir.path().join("chi.json");
    otf(&["rank", "build", "--delta", "eta", "--out", p(&chi)]);
    otf(&["rank", "apply", "--chi", p(&chi), "--element", "-1@1/2"]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&chi).unwrap()).unwrap();
    v["seed"] = Value::from(99u64);
    fs::write(&chi, v.to_string()).unwrap();
    assert_eq!(otf(&["rank", "apply", "--chi", p(&chi), "--element", "-1@0"]).code, EXIT_USAGE);
}

#[test]
fn same_argv_same_bytes() {
    let run_all = || {
        let dir = tempfile::tempdir().unwrap();
        let chi = dir.path().join("chi.json");
        let phi = dir.path().join("phi.json");
        let mut out = String::new();
        for args in [
            vec!["--seed", "7", "rank", "build", "--delta", "eta + eta", "--out", p(&chi)],
            vec!["rank", "apply", "--chi", p(&chi), "--element", "-3@1/7"],
            vec!["--seed", "7", "synth", "phi", "--chi", p(&chi), "--mode", "growth", "--out", p(&phi)],
            vec!["--emit", "json", "synth", "tl", "--phi", p(&phi), "--a", "2@1/3", "--b", "-5/2"],
            vec!["--emit", "json", "synth", "xt", "--phi", p(&phi), "--g", "-1@4"],
            vec!["--seed", "1", "synth", "check", "--phi", p(&phi), "--samples", "30"],
        ] {
            let o = otf(&args);
            out += &o.stdout.replace(p(dir.path()), "<dir>");
        }
        (out, fs::read_to_string(&chi).unwrap(), fs::read_to_string(&phi).unwrap())
    };
    assert_eq!(run_all(), run_all());
}
