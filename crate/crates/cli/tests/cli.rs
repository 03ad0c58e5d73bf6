use std::path::PathBuf;
use std::process::{Command, Output};

fn g3() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/g3.arena")
}

fn esl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_arena(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("esl-cli-test-{}-{name}.arena", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn solve_g3() {
    let o = esl(&["solve", g3().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(&lines[..4], ["0 2", "1 5", "2 0", "iterations 2"]);
    assert!(lines.contains(&"threshold 1 mp<=0"));
    assert!(lines.contains(&"strategy 0 MIN edge 0 (0 -> 2)"));
    assert!(lines.contains(&"strategy 1 MAX edge 2 (1 -> 2)"));
}

#[test]
fn oracle_check_agrees_on_g3() {
    for variant in ["esl", "dual", "alternating"] {
        let o = esl(&["solve", g3().to_str().unwrap(), "--oracle-check", "--variant", variant]);
        assert_eq!(o.status.code(), Some(0), "{variant}: {}", stderr(&o));
        assert!(stdout(&o).lines().any(|l| l == "oracle: agree"), "{variant}");
    }
}

#[test]
fn trace_prints_potentials() {
    let out = stdout(&esl(&["solve", g3().to_str().unwrap(), "--trace"]));
    let expected = "iteration 0\npotential 0 2\npotential 1 5\npotential 2 0\nseeds 2\nnewly-infinite -\niteration 1\n";
    assert!(out.starts_with(expected), "{out}");
}

#[test]
fn ndjson_report() {
    let out = stdout(&esl(&["solve", g3().to_str().unwrap(), "--format", "ndjson"]));
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["en_values"], serde_json::json!([2, 5, 0]));
    assert_eq!(v["iterations"], 2);
}

#[test]
fn dual_and_alternating_variants() {
    let out = stdout(&esl(&["solve", g3().to_str().unwrap(), "--variant", "dual"]));
    assert!(out.starts_with("0 -inf\n1 -inf\n2 -inf\n"), "{out}");
    assert!(out.contains("threshold 0 mp<0"));

    let out = stdout(&esl(&["solve", g3().to_str().unwrap(), "--variant", "alternating"]));
    assert!(out.starts_with("0 2\n1 5\n2 0\nsteps 2\n"), "{out}");

    let o = esl(&["solve", g3().to_str().unwrap(), "--variant", "alternating", "--cap", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no termination within 1 steps"));
}

#[test]
fn non_simple_input() {
    let path = temp_arena("zero-loop", "arena 1 1\nvertex 0 MIN\nedge 0 0 0\n");
    let o = esl(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("arena not simple"));

    let o = esl(&["solve", path.to_str().unwrap(), "--auto-lift", "--oracle-check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("values withheld"));
    assert!(out.contains("threshold 0 mp<=0"));
    assert!(out.contains("oracle: agree"));
}

#[test]
fn invalid_input() {
    let path = temp_arena("bad", "arena 1 1\nvertex 0 MIN\nedge 0 0 x\n");
    let o = esl(&["solve", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = esl(&["solve", "/nonexistent/arena"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let args = ["gen", "--n", "6", "--m", "14", "--w", "3", "--seed", "42"];
    let a = stdout(&esl(&args));
    assert_eq!(a, stdout(&esl(&args)));
    assert!(a.starts_with("arena 6 14\n"));
    let path = temp_arena("gen", &a);
    let o = esl(&["check", path.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)), "{}", stderr(&o));

    let o = esl(&["gen", "--n", "5", "--m", "3", "--w", "1", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_g3() {
    let o = esl(&["check", g3().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["value-iteration: agree", "brute-force: agree", "dual: agree", "alternating: agree", "oracle: agree"] {
        assert!(out.lines().any(|l| l == line), "missing {line}: {out}");
    }
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--count", "60", "--seed", "7"];
    let a = esl(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&esl(&args)));
    let lines: Vec<serde_json::Value> =
        stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 61);
    assert_eq!(lines[3]["index"], 3);
    assert!(lines[0].get("timings_us").is_none());
    let summary = &lines[60]["summary"];
    assert_eq!(summary["disagreements"], 0);
    assert_eq!(summary["instances"], 60);
    assert!(summary["alternating_win_rate"].is_number());
    assert!(stderr(&a).contains("disagreements: 0"));
}

#[test]
fn sweep_record_reproduces_with_gen() {
    let out = stdout(&esl(&["sweep", "--count", "3", "--seed", "11", "--timings"]));
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert!(first["timings_us"]["esl"].is_number());
    let text = stdout(&esl(&[
        "gen",
        "--n",
        &first["n"].to_string(),
        "--m",
        &first["m"].to_string(),
        "--w",
        &first["w"].to_string(),
        "--seed",
        &first["arena_seed"].to_string(),
    ]));
    assert!(text.starts_with(&format!("arena {} {}\n", first["n"], first["m"])));
}

#[test]
fn medium_sweep_runs() {
    let o = esl(&["sweep", "--family", "medium", "--count", "40", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
