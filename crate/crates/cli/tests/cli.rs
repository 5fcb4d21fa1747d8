//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

use gerrygraph::io::{DecompositionFile, InstanceFile};
use gerrygraph::treewidth::heuristic_decomposition;
use gerrygraph::{ElectionGraph, KMode, Objective, SolveRequest};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gerrygraph"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn blue_red_blue(dir: &Path) -> std::path::PathBuf {
    let graph = ElectionGraph::new(2, vec![1, 2, 1], vec![1; 3], &[(0, 1), (1, 2)]).unwrap();
    let request = SolveRequest {
        k: 2,
        k_mode: KMode::Exactly,
        objective: Objective::AllWinning,
        bounds: None,
        candidate: 1,
    };
    let path = dir.join("brb.json");
    std::fs::write(&path, InstanceFile::from_parts(&graph, &request, None, None).to_json())
        .unwrap();
    path
}

#[test]
fn solve_reports_one_seat_on_blue_red_blue() {
    let dir = tempfile::tempdir().unwrap();
    blue_red_blue(dir.path());
    let output = run(dir.path(), &["solve", "brb.json", "--k", "2"]);
    let solution = stdout_json(&output);
    assert_eq!(solution["w"], 1);
    assert_eq!(solution["verified"], true);
    assert_eq!(solution["algorithm"], "exact-dp");
}

#[test]
fn generated_grid_flows_through_solve_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(
        dir.path(),
        &["gen", "--kind", "grid", "--rows", "2", "--cols", "3", "--seed", "5", "--k", "2",
          "--out", "grid.json"],
    );
    assert!(output.status.success());
    let output = run(dir.path(), &["solve", "grid.json", "--out", "sol.json"]);
    assert!(output.status.success());
    let output = run(dir.path(), &["verify", "grid.json", "sol.json"]);
    let report = stdout_json(&output);
    assert_eq!(report["verified"], true);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_flags_a_tampered_solution_but_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    blue_red_blue(dir.path());
    let output = run(dir.path(), &["solve", "brb.json", "--out", "sol.json"]);
    assert!(output.status.success());

    let text = std::fs::read_to_string(dir.path().join("sol.json")).unwrap();
    let mut solution: serde_json::Value = serde_json::from_str(&text).unwrap();
    let districts = solution["districts"].as_array_mut().unwrap();
    let moved = districts[1].as_array_mut().unwrap().pop().unwrap();
    districts[0].as_array_mut().unwrap().push(moved);
    std::fs::write(dir.path().join("bad.json"), solution.to_string()).unwrap();

    let output = run(dir.path(), &["verify", "brb.json", "bad.json"]);
    assert_eq!(exit_code(&output), 0);
    let report = stdout_json(&output);
    assert_eq!(report["verified"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn is_reduction_of_k2_has_six_vertices_and_two_districts() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k2.txt"), "2\n0 1\n").unwrap();
    let output = run(
        dir.path(),
        &["gen", "--kind", "is-reduction", "--source", "k2.txt"],
    );
    let instance = stdout_json(&output);
    assert_eq!(instance["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(instance["k"], 2);
    let parsed = InstanceFile::from_json(&String::from_utf8_lossy(&output.stdout)).unwrap();
    let (graph, request, _, meta) = parsed.to_parts().unwrap();
    assert_eq!(graph.vertex_count(), 6);
    assert_eq!(request.k, 2);
    assert_eq!(meta.unwrap().districts, 2);
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    let dir = tempfile::tempdir().unwrap();
    blue_red_blue(dir.path());

    let output = run(dir.path(), &["solve", "brb.json", "--k", "99"]);
    assert_eq!(exit_code(&output), 2);

    let output = run(dir.path(), &["solve", "nothere.json"]);
    assert_eq!(exit_code(&output), 1);

    std::fs::write(dir.path().join("garbage.json"), "{not json").unwrap();
    let output = run(dir.path(), &["solve", "garbage.json"]);
    assert_eq!(exit_code(&output), 1);

    let output = run(dir.path(), &["solve", "brb.json", "--no-such-flag"]);
    assert_eq!(exit_code(&output), 1);

    // 13 isolated vertices overflow the enumeration cap
    let big = ElectionGraph::new(2, vec![1; 13], vec![1; 13], &[]).unwrap();
    let request = SolveRequest {
        k: 13,
        k_mode: KMode::Exactly,
        objective: Objective::AllWinning,
        bounds: None,
        candidate: 1,
    };
    std::fs::write(
        dir.path().join("big.json"),
        InstanceFile::from_parts(&big, &request, None, None).to_json(),
    )
    .unwrap();
    let output = run(dir.path(), &["oracle", "big.json"]);
    assert_eq!(exit_code(&output), 3);
}

#[test]
fn edgelist_instances_solve_directly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("path.txt"), "# p3\n3\n0 1\n1 2\n").unwrap();
    let output = run(
        dir.path(),
        &["solve", "path.txt", "--format", "edgelist", "--k", "1"],
    );
    let solution = stdout_json(&output);
    assert_eq!(solution["w"], 1);
    assert_eq!(solution["verified"], true);
}

#[test]
fn ptas_runs_on_embedded_instances_and_requires_an_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(
        dir.path(),
        &["gen", "--kind", "outerplanar-ring", "--n", "6", "--seed", "1", "--k", "3",
          "--out", "ring.json"],
    );
    assert!(output.status.success());
    let output = run(dir.path(), &["ptas", "ring.json", "--epsilon", "1.0"]);
    let solution = stdout_json(&output);
    assert_eq!(solution["algorithm"], "ptas");
    assert_eq!(solution["verified"], true);
    assert_eq!(solution["parameters"]["lambda"], 2);

    blue_red_blue(dir.path());
    let output = run(dir.path(), &["ptas", "brb.json", "--epsilon", "1.0"]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn solve_accepts_and_rejects_supplied_decompositions() {
    let dir = tempfile::tempdir().unwrap();
    let path = blue_red_blue(dir.path());
    let text = std::fs::read_to_string(&path).unwrap();
    let (graph, ..) = InstanceFile::from_json(&text).unwrap().to_parts().unwrap();
    let td = heuristic_decomposition(&graph);
    std::fs::write(
        dir.path().join("td.json"),
        DecompositionFile::from_decomposition(&td).to_json(),
    )
    .unwrap();
    let output = run(
        dir.path(),
        &["solve", "brb.json", "--decomposition", "td.json"],
    );
    let solution = stdout_json(&output);
    assert_eq!(solution["w"], 1);

    // a decomposition that forgets vertex 2 is rejected up front
    std::fs::write(
        dir.path().join("broken.json"),
        "{\"bags\": [[0, 1]], \"edges\": []}\n",
    )
    .unwrap();
    let output = run(
        dir.path(),
        &["solve", "brb.json", "--decomposition", "broken.json"],
    );
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn bench_emits_one_verified_row_per_cell_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (name, kind, dims) in [
        ("a.json", "grid", ["--rows", "2", "--cols", "2"]),
        ("b.json", "grid", ["--rows", "2", "--cols", "3"]),
        ("c.json", "outerplanar-ring", ["--n", "5", "", ""]),
    ] {
        let mut args = vec!["gen", "--kind", kind, "--seed", "3", "--k", "2", "--out", name];
        for d in dims.iter().filter(|d| !d.is_empty()) {
            args.push(d);
        }
        let output = run(dir.path(), &args);
        assert!(output.status.success());
    }
    std::fs::write(
        dir.path().join("suite.json"),
        "{\"instances\": [\"a.json\", \"b.json\", \"c.json\"], \
          \"algorithms\": [\"exact\", \"approx\", \"oracle\"]}\n",
    )
    .unwrap();
    let output = run(
        dir.path(),
        &["bench", "--suite", "suite.json", "--out", "one.csv", "--no-timing"],
    );
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "instance,n,m,algorithm,k,w,w_oracle,ratio,runtime_ms,verified"
    );
    assert_eq!(lines.len(), 10);
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[9], "true", "row {row}");
        let ratio: f64 = cells[7].parse().unwrap();
        assert!(ratio <= 1.0, "row {row}");
        if cells[3] == "exact" {
            assert_eq!(cells[7], "1.000", "row {row}");
        }
    }

    let output = run(
        dir.path(),
        &["bench", "--suite", "suite.json", "--out", "two.csv", "--no-timing"],
    );
    assert!(output.status.success());
    let again = std::fs::read_to_string(dir.path().join("two.csv")).unwrap();
    assert_eq!(csv, again);
}
