use std::path::PathBuf;
use std::process::{Command, Output};

use polyterm_cli::report::{BoundReport, Report, SimulationReport, Status};

fn corpus(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "corpus",
        &format!("{name}.mpp"),
    ]
    .iter()
    .collect();
    p.to_string_lossy().into_owned()
}

fn polyterm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyterm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(args: &[&str]) -> (Report, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = polyterm(&all);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (r, o.status.code().unwrap())
}

#[test]
fn analyze_running_point_is_non_terminating() {
    let f = corpus("running");
    let (r, code) = report(&["analyze", &f, "--algorithm", "gb", "--point", "1,-1"]);
    assert_eq!(code, 0);
    assert_eq!(r.report_version, 1);
    assert_eq!(r.status, Status::Ok);
    assert_eq!(r.analyses[0].index, Some(1));
    assert_eq!(r.points[0].verdict, "NonTerminating");
    let lasso = r.points[0].lasso.as_ref().unwrap();
    assert_eq!((lasso.stem.as_str(), lasso.cycle.as_str()), ("2", "1"));
}

#[test]
fn analyze_terminating_point() {
    let f = corpus("running");
    let (r, code) = report(&["analyze", &f, "--point", "2,0", "--point", "1/2,-1/2"]);
    assert_eq!(code, 0);
    assert!(r.points.iter().all(|p| p.verdict == "Terminating"));
    assert_eq!(r.points[1].point, vec!["1/2", "-1/2"]);
}

#[test]
fn analyze_both_algorithms_on_liu1() {
    let f = corpus("liu1");
    let (r, code) = report(&["analyze", &f, "--algorithm", "both"]);
    assert_eq!(code, 0);
    let idx: Vec<_> = r.analyses.iter().map(|a| (a.algorithm.as_str(), a.index)).collect();
    assert_eq!(idx, vec![("groebner", Some(0)), ("variety", Some(0))]);
}

#[test]
fn analyze_constraint_meets_input_set() {
    let f = corpus("running");
    let (r, _) = report(&["analyze", &f, "--constraint", "x^2+y"]);
    assert_eq!(r.constraints.unwrap().status, "NonEmpty");
    // x = 5 misses every non-terminating input.
    let (r, _) = report(&["analyze", &f, "--constraint", "x - 5"]);
    assert_eq!(r.constraints.unwrap().status, "Empty");
}

#[test]
fn text_output_shows_index_and_basis() {
    let o = polyterm(&["analyze", &corpus("running")]);
    let out = stdout(&o);
    assert!(out.contains("N̂ = 1"), "{out}");
    assert!(out.contains("x + y"), "{out}");
    assert!(out.contains("iteration bound: 70"), "{out}");
}

#[test]
fn json_report_round_trips() {
    let o = polyterm(&[
        "analyze",
        &corpus("loop"),
        "--algorithm",
        "both",
        "--point",
        "2,0",
        "--json",
    ]);
    let text = stdout(&o);
    let first: Report = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&first).unwrap();
    let second: Report = serde_json::from_str(&again).unwrap();
    assert_eq!(first, second);
    assert_eq!(again.trim(), text.trim());
}

#[test]
fn report_hash_is_sha256_of_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.mpp");
    let src = "vars: x;\nwhile (x == 0) { x := x; }\n";
    std::fs::write(&path, src).unwrap();
    let (r, _) = report(&["analyze", path.to_str().unwrap()]);
    // Reference digest from sha256sum.
    assert_eq!(
        r.program.sha256,
        "83b0e73060a2c95cb2bddf749812bff6daf47b3d6ac3f4772451e9fdcc04d651"
    );
}

#[test]
fn bound_examples() {
    for (args, want) in [
        (vec!["bound", "--d", "2", "--affine", "1,1"], "11"),
        (vec!["bound", "--d", "2", "--geometric", "2,3"], "4382"),
        (vec!["bound", "--d", "1", "--affine", "0,2"], "3"),
    ] {
        let o = polyterm(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), want);
    }
    let f = corpus("running");
    let o = polyterm(&["bound", "--file", &f]);
    assert_eq!(stdout(&o).trim(), "70");
}

#[test]
fn bound_cap_is_a_limit_status() {
    let o = polyterm(&["bound", "--d", "2", "--affine", "1,1", "--cap", "10", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let r: BoundReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.status, Status::ResourceLimitExceeded);
    assert!(r.value.is_none());
    let o = polyterm(&["bound", "--d", "2", "--affine", "1,1", "--cap", "10"]);
    assert_eq!(stdout(&o).trim(), "exceeds cap 10");
}

#[test]
fn bound_flag_errors_exit_one() {
    assert_eq!(polyterm(&["bound", "--d", "2"]).status.code(), Some(1));
    assert_eq!(
        polyterm(&["bound", "--d", "2", "--affine", "1,1", "--geometric", "2,3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(polyterm(&["bound", "--affine", "1,1"]).status.code(), Some(1));
    assert_eq!(polyterm(&["bound", "--d", "2", "--affine", "1"]).status.code(), Some(1));
}

fn simulate(args: &[&str]) -> SimulationReport {
    let mut all = vec!["simulate"];
    all.extend_from_slice(args);
    all.push("--json");
    let o = polyterm(&all);
    assert_eq!(o.status.code(), Some(0));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn simulate_examples() {
    let f = corpus("running");
    let r = simulate(&[&f, "--point", "1,-1", "--depth", "3", "--lasso"]);
    let l = r.lasso.unwrap();
    assert_eq!((l.stem.as_str(), l.cycle.as_str()), ("2", "1"));

    let r = simulate(&[&f, "--point", "2,0", "--depth", "3"]);
    assert_eq!(r.nodes, 1);
    assert_eq!(r.longest_alive, None);

    let r = simulate(&[&f, "--point", "-1,1", "--depth", "3"]);
    assert_eq!(r.longest_alive, Some(3));
}

#[test]
fn simulate_node_cap_exits_two() {
    let f = corpus("running");
    let o = polyterm(&["simulate", &f, "--point", "1,-1", "--depth", "12", "--max-nodes", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_for_limit_statuses() {
    let running = corpus("running");
    let (r, code) = report(&["analyze", &running, "--algorithm", "variety", "--semantics", "real"]);
    assert_eq!((r.status, code), (Status::UnsupportedSemantics, 2));

    let (r, code) = report(&["analyze", &corpus("loop"), "--max-iter", "0"]);
    assert_eq!((r.status, code), (Status::IterationLimitExceeded, 2));
    assert_eq!(r.analyses[0].index, Some(1));

    let (r, code) = report(&["analyze", &running, "--max-degree", "1"]);
    assert_eq!((r.status, code), (Status::ResourceLimitExceeded, 2));
}

#[test]
fn real_semantics_still_runs_groebner_chain() {
    let (r, code) = report(&["analyze", &corpus("running"), "--semantics", "real"]);
    assert_eq!(code, 0);
    assert_eq!(r.semantics, "real");
    assert_eq!(r.analyses[0].index, Some(1));
}

#[test]
fn exit_codes_for_usage_and_parse_errors() {
    assert_eq!(polyterm(&["analyze", "/nonexistent/p.mpp"]).status.code(), Some(1));
    assert_eq!(polyterm(&["analyze", "--bogus"]).status.code(), Some(1));
    assert_eq!(polyterm(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(polyterm(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mpp");
    std::fs::write(&bad, "vars: x;\nwhile (x == 0) { x := y; }\n").unwrap();
    let o = polyterm(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown variable"));

    let running = corpus("running");
    assert_eq!(
        polyterm(&["analyze", &running, "--point", "1,2,3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        polyterm(&["analyze", &running, "--point", "0.5,1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        polyterm(&["analyze", &running, "--constraint", "z + 1"]).status.code(),
        Some(1)
    );
}

#[test]
fn bad_memory_cap_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_polyterm"))
        .args(["analyze", &corpus("running")])
        .env("POLYTERM_MAX_MEM", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_polyterm"))
        .args(["analyze", &corpus("running")])
        .env("POLYTERM_MAX_MEM", "4000000000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn whole_corpus_with_defaults() {
    let names = [
        "running", "liu1", "liu2", "loop", "liu3", "ineq", "prod", "liu4", "var4",
    ];
    let expected = [1, 0, 0, 2, 2, 2, 4, 4, 5];
    let files: Vec<String> = names.iter().map(|n| corpus(n)).collect();
    let mut args = vec!["analyze", "--jobs", "2", "--json"];
    args.extend(files.iter().map(String::as_str));
    let o = polyterm(&args);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<Report> = serde_json::from_str(&stdout(&o)).unwrap();
    for ((r, name), want) in reports.iter().zip(names).zip(expected) {
        assert!(r.program.file.ends_with(&format!("{name}.mpp")), "order preserved");
        assert_eq!(r.status, Status::Ok, "{name}");
        assert_eq!(r.analyses[0].index, Some(want), "{name}");
    }
}
