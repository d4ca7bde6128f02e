//! End-to-end runs of the binary: outputs, determinism and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use netcentral::io::{read_edge_list, read_scores};
use netcentral::spectral::top_eigenpair;
use tempfile::TempDir;

fn netcentral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcentral"))
        .args(args)
        .env("NETCENTRAL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn generate_complete_graph_and_repeat_bit_identically() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "er.toml", "n = 10\nseed = 5\n[model]\nkind = \"erdos_renyi\"\np = 1.0\n");
    let (a, b) = (path(dir.path(), "a"), path(dir.path(), "b"));
    for out in [&a, &b] {
        let run = netcentral(&["generate", "--config", &cfg, "--out", out]);
        assert_eq!(code(&run), 0, "{}", stderr(&run));
    }
    let text = fs::read(Path::new(&a).join("network.csv")).unwrap();
    assert_eq!(text, fs::read(Path::new(&b).join("network.csv")).unwrap());
    let g = read_edge_list(text.as_slice(), Some(10), 0).unwrap();
    assert_eq!(g.edges().len(), 45);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&a).join("network.json")).unwrap()).unwrap();
    assert_eq!(sidecar["n"], 10);
    assert_eq!(sidecar["seed"], 5);
    assert_eq!(sidecar["model"]["kind"], "erdos_renyi");
}

#[test]
fn malformed_config_names_the_field() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "n = 10\n[model]\nkind = \"homophily\"\nshares = [0.5, 0.6]\np_s = 0.5\np_d = 0.1\n",
    );
    let run = netcentral(&["generate", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("shares"), "{}", stderr(&run));

    let cfg = write(dir.path(), "syntax.toml", "n = \n");
    let run = netcentral(&["generate", "--config", &cfg]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("line 1"), "{}", stderr(&run));
}

#[test]
fn mean_field_er_scores_are_equal() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "er.toml", "n = 50\n[model]\nkind = \"erdos_renyi\"\np = 0.3\n");
    let out = path(dir.path(), "out");
    for kind in ["eig", "katz"] {
        let run = netcentral(&["centrality", "--config", &cfg, "--kind", kind, "--phi", "0.05", "--out", &out]);
        assert_eq!(code(&run), 0, "{}", stderr(&run));
        let scores = read_scores(fs::read(Path::new(&out).join("scores.csv")).unwrap().as_slice()).unwrap();
        assert_eq!(scores.len(), 50);
        assert!(scores.iter().all(|s| (s - scores[0]).abs() < 1e-12 * scores[0]));
    }
    let diag: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&out).join("diagnostics.json")).unwrap()).unwrap();
    assert!((diag["info"]["lambda1"].as_f64().unwrap() - 15.0).abs() < 1e-9);
}

#[test]
fn infeasible_phi_reports_lambda1() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "er.toml", "n = 50\n[model]\nkind = \"erdos_renyi\"\np = 0.3\n");
    let run = netcentral(&["centrality", "--config", &cfg, "--kind", "katz", "--phi", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&run), 2);
    let msg = stderr(&run);
    assert!(msg.contains("phi infeasible"), "{msg}");
    assert!(msg.contains("lambda1 = 15"), "{msg}");
}

#[test]
fn eigenvector_of_generated_file_matches_library() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "sbm.toml",
        "n = 120\nseed = 3\n[model]\nkind = \"homophily\"\nshares = [0.6, 0.4]\np_s = 0.4\np_d = 0.1\n",
    );
    let gen = path(dir.path(), "gen");
    assert_eq!(code(&netcentral(&["generate", "--config", &cfg, "--out", &gen])), 0);
    let edges = Path::new(&gen).join("network.csv");
    let out = path(dir.path(), "out");
    let run = netcentral(&["centrality", "--edges", edges.to_str().unwrap(), "--n", "120", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let scores = read_scores(fs::read(Path::new(&out).join("scores.csv")).unwrap().as_slice()).unwrap();
    let g = read_edge_list(fs::read(&edges).unwrap().as_slice(), Some(120), 0).unwrap();
    assert_eq!(scores, top_eigenpair(&g, 1e-10, 100_000).unwrap().vector);
}

fn katz_scores(dir: &Path, name: &str, p_s: f64, p_d: f64) -> String {
    let cfg = write(
        dir,
        &format!("{name}.toml"),
        &format!("n = 100\n[model]\nkind = \"homophily\"\nshares = [0.75, 0.25]\np_s = {p_s}\np_d = {p_d}\n"),
    );
    let out = path(dir, name);
    let run = netcentral(&["centrality", "--config", &cfg, "--kind", "katz", "--phi", "0.02", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    path(Path::new(&out), "scores.csv")
}

#[test]
fn compare_verdicts_and_curves() {
    let dir = TempDir::new().unwrap();
    let segregated = katz_scores(dir.path(), "seg", 0.5, 0.05);
    let mixed = katz_scores(dir.path(), "mix", 0.4, 0.1);
    let out = path(dir.path(), "cmp");

    let run = netcentral(&["compare", &segregated, &segregated, "--out", &out]);
    assert_eq!(stdout(&run).trim(), "EQUAL");
    let run = netcentral(&["compare", &segregated, &mixed, "--out", &out]);
    assert_eq!(code(&run), 0);
    assert_eq!(stdout(&run).trim(), "DOMINATED");
    let run = netcentral(&["compare", &mixed, &segregated, "--out", &out]);
    assert_eq!(stdout(&run).trim(), "DOMINATES");
    let curve = fs::read_to_string(Path::new(&out).join("lorenz_first.csv")).unwrap();
    assert!(curve.starts_with("k,share\n1,"));
    assert_eq!(curve.lines().count(), 101);
    assert!(curve.trim_end().ends_with("100,1.0000000000000000e0"));

    let short = write(dir.path(), "short.csv", "agent,group,score\n0,,1.0\n1,,2.0\n");
    let run = netcentral(&["compare", &segregated, &short, "--out", &out]);
    assert_eq!(code(&run), 2);
}

#[test]
fn derivative_report_and_scan() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "three.toml",
        "n = 300\n[model]\nkind = \"homophily\"\nshares = [0.5, 0.3, 0.2]\np_s = 0.5\np_d = 0.1\n",
    );
    let out = path(dir.path(), "d");
    let run = netcentral(&[
        "derivative", "--config", &cfg, "--phi", "0.005", "--target", "2", "--wrt", "between", "--scan", "4", "--out", &out,
    ]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let report: serde_json::Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert!(report["agreement"].as_f64().unwrap() <= 1e-5);
    assert_eq!(report["parameter"], "between");
    let scan = fs::read_to_string(Path::new(&out).join("phi_scan.csv")).unwrap();
    assert_eq!(scan.lines().count(), 1 + 4 * 3);

    let run = netcentral(&["derivative", "--config", &cfg, "--phi", "1.0", "--wrt", "0,1"]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("phi infeasible"));
    let run = netcentral(&["derivative", "--config", &cfg, "--phi", "0.001", "--wrt", "sideways"]);
    assert_eq!(code(&run), 2);
}

#[test]
fn unknown_study_lists_valid_ids() {
    let run = netcentral(&["study", "nonsense"]);
    assert_eq!(code(&run), 2);
    let msg = stderr(&run);
    for id in ["convergence", "rate", "counterexamples", "spatial", "kronecker", "dominance", "statics"] {
        assert!(msg.contains(id), "{msg}");
    }
}

#[test]
fn dominance_study_passes_and_writes_outputs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = netcentral(&["study", "dominance", "--out", out, "--quiet"]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    assert!(stderr(&run).is_empty());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("dominance.json")).unwrap()).unwrap();
    assert_eq!(summary["study"], "dominance");
    assert!(summary["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let csv = fs::read_to_string(dir.path().join("dominance.csv")).unwrap();
    assert!(csv.starts_with("study,n,rep,quantity,value\n"));
}

#[test]
fn spatial_study_emits_ranking_table_and_reports_failed_checks() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = netcentral(&["study", "spatial", "--k", "20", "--out", out]);
    // the edge agent does not outrank the interior one at rho = 0.5
    assert_eq!(code(&run), 1, "{}", stderr(&run));
    assert!(stderr(&run).contains("FAIL edge_outranks_interior_rho0.5"));
    let csv = fs::read_to_string(dir.path().join("spatial.csv")).unwrap();
    let rhos = csv.lines().filter(|l| l.starts_with("spatial,441,") && l.contains(",rho,")).count();
    assert_eq!(rhos, 8);
    assert!(csv.contains(",katz_edge,") && csv.contains(",katz_interior,"));
}

#[test]
fn study_config_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    let printed = netcentral(&["study", "rate", "--print-config", "--reps", "3", "--n", "60", "--seed", "11"]);
    assert_eq!(code(&printed), 0);
    let cfg = write(dir.path(), "rate.toml", &stdout(&printed));
    let out = dir.path().to_str().unwrap();
    let run = netcentral(&["study", "rate", "--config", &cfg, "--out", out, "--quiet"]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rate.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 11);
    let first = fs::read(dir.path().join("rate.csv")).unwrap();
    netcentral(&["study", "rate", "--config", &cfg, "--out", out, "--quiet"]);
    assert_eq!(first, fs::read(dir.path().join("rate.csv")).unwrap());

    let run = netcentral(&["study", "kronecker", "--config", &cfg]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("rate"));
}
