//! End-to-end CLI behavior: flags, exit codes, file formats, and the
//! solve -> verify round trip.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn minids(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minids"))
        .args(args)
        .output()
        .expect("spawn minids")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    let out = minids(&["solve", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = minids(&["solve", "--gen", "grid:3x3", "--k", "7", "--max-iterations", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.clq");
    fs::write(&bad, "p edge 3 1\ne 1 9\n").unwrap();
    let out = minids(&[
        "solve", "--input", bad.to_str().unwrap(), "--k", "2", "--max-iterations", "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));

    // Missing both limits is a config error.
    let out = minids(&["solve", "--gen", "grid:3x3"]);
    assert_eq!(out.status.code(), Some(1));

    // Oracle refuses large instances.
    let out = minids(&["oracle", "--gen", "random:100:0.2:seed=5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("refuses"));
}

#[test]
fn gen_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.clq");
    let out = minids(&["gen", "random:30:0.2:seed=4", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p edge 30 "));
    // Complement of the complement restores the edge count.
    let out2 = minids(&["gen", "random:30:0.2:seed=4", "--complement"]);
    let m: usize = stdout(&out2)
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    let m_raw: usize = text
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(m + m_raw, 30 * 29 / 2);
}

#[test]
fn solve_solutions_always_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (i, spec) in ["random:40:0.15:seed=8", "random:25:0.5:seed=9", "grid:6x5"]
        .iter()
        .enumerate()
    {
        for k in ["2", "3"] {
            let out = minids(&[
                "solve", "--gen", spec, "--k", k, "--max-iterations", "50",
                "--seed", "3", "--output", "json",
            ]);
            assert!(out.status.success(), "{spec} k={k}: {}", String::from_utf8_lossy(&out.stderr));
            let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
            let solution: Vec<u64> = report["runs"][0]["solution"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect();
            let sol_path = dir.path().join(format!("sol_{i}_{k}.txt"));
            let ids: Vec<String> = solution.iter().map(|v| v.to_string()).collect();
            fs::write(&sol_path, ids.join("\n")).unwrap();
            let verify = minids(&[
                "verify", "--gen", spec, "--solution", sol_path.to_str().unwrap(),
            ]);
            assert!(
                verify.status.success(),
                "verify rejected a solver solution: {}",
                String::from_utf8_lossy(&verify.stderr)
            );
        }
    }
}

#[test]
fn solve_matches_oracle_on_small_instance() {
    // Same generated graph for both commands (the gen seed defaults to
    // --seed); enough iterations for a size-8 instance.
    let solve = minids(&[
        "solve", "--gen", "random:8:0.5", "--k", "3", "--seed", "3",
        "--max-iterations", "200", "--output", "json",
    ]);
    assert!(solve.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&solve)).unwrap();
    let best = report["runs"][0]["best_size"].as_u64().unwrap();
    let oracle = minids(&["oracle", "--gen", "random:8:0.5", "--seed", "3", "--output", "json"]);
    assert!(oracle.status.success());
    let oracle_report: serde_json::Value = serde_json::from_str(&stdout(&oracle)).unwrap();
    assert_eq!(best, oracle_report["minimum_size"].as_u64().unwrap());

    // Frozen golden value for the 4x4 grid.
    let grid = minids(&["oracle", "--gen", "grid:4x4", "--output", "json"]);
    let grid_report: serde_json::Value = serde_json::from_str(&stdout(&grid)).unwrap();
    assert_eq!(grid_report["minimum_size"].as_u64().unwrap(), 4);
}

#[test]
fn verify_rejects_non_solution() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p3.clq");
    fs::write(&graph, "p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
    let good = dir.path().join("good.txt");
    fs::write(&good, "1\n3\n").unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1\n2\n").unwrap();
    let out = minids(&["verify", "--input", graph.to_str().unwrap(), "--solution", good.to_str().unwrap()]);
    assert!(out.status.success());
    let out = minids(&["verify", "--input", graph.to_str().unwrap(), "--solution", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("adjacent"));
}

#[test]
fn json_schema_stable_across_flag_order() {
    let a = minids(&[
        "solve", "--gen", "grid:5x5", "--k", "2", "--max-iterations", "20",
        "--seed", "2", "--output", "json",
    ]);
    let b = minids(&[
        "solve", "--output", "json", "--seed", "2", "--max-iterations", "20",
        "--k", "2", "--gen", "grid:5x5",
    ]);
    let norm = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        for run in v["runs"].as_array_mut().unwrap() {
            run["ttb_s"] = 0.into();
        }
        v
    };
    assert_eq!(norm(&a), norm(&b));
}

#[test]
fn trace_is_one_json_record_per_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let out = minids(&[
        "solve", "--gen", "grid:6x6", "--k", "2", "--max-iterations", "12",
        "--seed", "1", "--trace", trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&trace).unwrap();
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|line| serde_json::from_str(line).unwrap())
        .collect();
    assert_eq!(records.len(), 12);
    for (i, record) in records.iter().enumerate() {
        assert_eq!(record["iteration"].as_u64().unwrap(), i as u64 + 1);
        assert!(record["after_local_search"].as_u64().unwrap()
            >= record["best_size"].as_u64().unwrap());
        assert!(record["after_plateau"].is_u64());
        assert!(record["elapsed_s"].is_f64() || record["elapsed_s"].is_u64());
    }
    // Trace demands a single run.
    let out = minids(&[
        "solve", "--gen", "grid:3x3", "--k", "2", "--max-iterations", "2",
        "--runs", "2", "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn experiment_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{
            "instances": [{"gen": "grid:5x5", "id": "g55"}],
            "mode": "full_ilps",
            "ks": [2],
            "deltas": [8],
            "nus": [1],
            "runs_per_cell": 2,
            "max_iterations": 30,
            "base_seed": 3
        }"#,
    )
    .unwrap();
    let out = minids(&[
        "experiment", spec.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["runs.csv", "runs.json", "aggregates.csv"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    let csv = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert!(csv.starts_with("instance,n,p_or_density,k,delta,nu,run,seed,best_size,ttb_s,iterations"));
    assert_eq!(csv.lines().count(), 3); // header + 2 runs

    // Cover-study mode writes its own table.
    let cover_spec = dir.path().join("cover.json");
    fs::write(
        &cover_spec,
        r#"{
            "instances": [{"gen": "grid:4x4", "id": "g44"}],
            "mode": "cover_study",
            "ks": [2],
            "deltas": [8],
            "nus": [1],
            "runs_per_cell": 3,
            "max_iterations": 500,
            "base_seed": 1,
            "cover_target": "all_covered"
        }"#,
    )
    .unwrap();
    let out = minids(&[
        "experiment", cover_spec.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cover = fs::read_to_string(dir.path().join("cover.csv")).unwrap();
    assert!(cover.starts_with("instance,k,delta,nu,runs,mean_iterations,censored"));
}

#[test]
fn duplicate_edges_warn_but_parse() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("dup.clq");
    fs::write(&graph, "p edge 3 3\ne 1 2\ne 2 3\ne 1 2\n").unwrap();
    let out = minids(&[
        "solve", "--input", graph.to_str().unwrap(), "--k", "2", "--max-iterations", "3",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn thread_cap_env_is_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_minids"))
        .env("MINIDS_THREADS", "1")
        .args([
            "solve", "--gen", "grid:5x5", "--k", "2", "--max-iterations", "10",
            "--runs", "4",
        ])
        .output()
        .expect("spawn minids");
    assert!(out.status.success());
    assert!(stdout(&out).contains("best over 4 runs"));
}

/// Keeps the checked-in published-solution fixtures well-formed.
#[test]
fn solution_fixtures_have_published_sizes() {
    let count = |name: &str| {
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name))
            .unwrap()
            .split_whitespace()
            .count()
    };
    assert_eq!(count("keller6.sol"), 15);
    assert_eq!(count("C2000.9.sol"), 31);
}
