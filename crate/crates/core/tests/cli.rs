use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use twodist::cli::{parse_configuration_csv, sidecar_path, EmbeddingDocument, ReportDocument};
use twodist::edm::{Centering, Configuration};
use twodist::graphs::{parse_edge_list, Graph};
use twodist::oracle::verify_two_distance;

const BOW_TIE: &str = "5\n0 1\n0 2\n0 3\n0 4\n1 3\n2 4\n";
const C5: &str = "# five-cycle\n5\n0 1\n1 2\n2 3\n3 4\n4 0\n";

fn twodist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twodist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1, "one JSON document on one line");
    serde_json::from_str(&text).unwrap()
}

fn write_edges(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_c5() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_edges(dir.path(), "c5.txt", C5);
    let out = twodist(&["analyze", "--edges", &path]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let r = &doc["report"];
    assert_eq!(r["dim_e"], 2);
    assert_eq!(r["dim_s"], 2);
    assert_eq!(r["dim_j"], 4);
    assert_eq!(doc["degenerate"], false);
    assert_eq!(doc["input"]["graph6"], "Dhc");
    assert_eq!(doc["tolerances"]["residual"], 1e-8);
}

#[test]
fn analyze_bow_tie() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_edges(dir.path(), "bowtie.txt", BOW_TIE);
    let out = twodist(&["analyze", "--edges", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = &stdout_json(&out)["report"];
    assert_eq!(r["dim_s"], 3);
    assert_eq!(r["spherical_at_l"], true);
    assert_eq!(r["spherical_at_u"], false);
    assert!(r["rho_u"].is_null());
}

#[test]
fn analyze_null_graph_is_degenerate() {
    let out = twodist(&["analyze", "--g6", "D??"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["degenerate"], true);
    assert!(doc["report"].is_null());
    assert_eq!(doc["class"]["tag"], "Null");
}

#[test]
fn tolerance_flags_are_recorded() {
    let out = twodist(&["analyze", "--g6", "Dhc", "--tol-eig", "1e-10", "--tol-residual", "1e-7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["tolerances"]["eig"], 1e-10);
    assert_eq!(doc["tolerances"]["psd"], 1e-9);
    assert_eq!(doc["tolerances"]["residual"], 1e-7);
}

#[test]
fn pretty_output_is_one_document() {
    let out = twodist(&["analyze", "--g6", "Dhc", "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: ReportDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.report.unwrap().dim_j, 4);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(twodist(&["analyze", "--g6", "D!!"]).status.code(), Some(2));
    assert_eq!(twodist(&["analyze"]).status.code(), Some(2));
    assert_eq!(twodist(&["analyze", "--g6", "Dhc", "--edges", "x"]).status.code(), Some(2));
    assert_eq!(twodist(&["analyze", "--edges", "/nonexistent/graph.txt"]).status.code(), Some(2));
    assert_eq!(twodist(&["analyze", "--g6", "Dhc", "--tol-eig", "-1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = write_edges(dir.path(), "bad.txt", "3\n0 1\n1 7\n");
    let out = twodist(&["analyze", "--edges", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

fn reverify(csv: &Path, g: &Graph) -> (EmbeddingDocument, Configuration) {
    let doc: EmbeddingDocument = serde_json::from_str(&std::fs::read_to_string(sidecar_path(csv)).unwrap()).unwrap();
    let points = parse_configuration_csv(&std::fs::read_to_string(csv).unwrap()).unwrap();
    let config = Configuration {
        points,
        centering: Centering::Centroid,
    };
    let v = verify_two_distance(&config, g, doc.alpha, doc.beta, 1e-7);
    assert!(v.pass, "{v:?}");
    assert!(v.max_deviation < 1e-12 + doc.verification.max_deviation * 2.0);
    (doc, config)
}

#[test]
fn embed_c5_jspherical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c5.csv");
    let out = twodist(&["embed", "--g6", "Dhc", "--mode", "jspherical", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (doc, config) = reverify(&csv, &Graph::cycle(5));
    assert_eq!((config.len(), config.dim()), (5, 4));
    for row in config.points.row_iter() {
        assert!((row.norm() - 1.0).abs() < 1e-12);
    }
    assert_eq!(doc.alpha, 2.0);
    assert!((doc.beta - 3.0).abs() < 1e-12);
    assert_eq!(doc.radius, Some(1.0));
    let printed: EmbeddingDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed, doc);
}

#[test]
fn embed_c5_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write_edges(dir.path(), "c5.txt", C5);
    let csv = dir.path().join("pentagon.csv");
    let out = twodist(&["embed", "--edges", &edges, "--mode", "euclidean", "--beta", "lower", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (doc, config) = reverify(&csv, &Graph::cycle(5));
    assert_eq!(config.dim(), 2);
    assert!((doc.beta - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    let r = doc.radius.unwrap();
    for row in config.points.row_iter() {
        assert!((row.norm() - r).abs() < 1e-10);
    }
}

#[test]
fn embed_numeric_beta_and_spherical_lower() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write_edges(dir.path(), "bowtie.txt", BOW_TIE);
    let g = parse_edge_list(BOW_TIE).unwrap();
    let csv = dir.path().join("interior.csv");
    let out = twodist(&["embed", "--edges", &edges, "--mode", "euclidean", "--beta", "2.5", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (_, config) = reverify(&csv, &g);
    assert_eq!(config.dim(), 4);

    let csv = dir.path().join("sphere.csv");
    let out = twodist(&["embed", "--edges", &edges, "--mode", "spherical", "--side", "lower", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (doc, config) = reverify(&csv, &g);
    assert_eq!(config.dim(), 3);
    assert!((doc.radius.unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-9);
    for row in config.points.row_iter() {
        assert!((row.norm() - doc.radius.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn embed_refusals_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write_edges(dir.path(), "bowtie.txt", BOW_TIE);
    let k23 = write_edges(dir.path(), "k23.txt", "5\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n");
    let csv = dir.path().join("x.csv");
    let csv = csv.to_str().unwrap();
    let cases: [&[&str]; 4] = [
        &["embed", "--edges", &edges, "--mode", "spherical", "--side", "upper", "--out", csv],
        &["embed", "--edges", &edges, "--mode", "euclidean", "--beta", "4", "--out", csv],
        &["embed", "--g6", "D??", "--mode", "jspherical", "--out", csv],
        &["embed", "--edges", &k23, "--mode", "euclidean", "--beta", "lower", "--out", csv],
    ];
    for args in cases {
        let out = twodist(args);
        assert_eq!(out.status.code(), Some(4), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    assert!(!Path::new(csv).exists());
    let out = twodist(&["embed", "--edges", &edges, "--mode", "euclidean", "--beta", "big", "--out", csv]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_order_four() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.json");
    let out = twodist(&["sweep", "--n", "4", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["graphs"], 74);
    assert_eq!(doc["violations"], 0);
    assert!(doc["counterexample"].is_null());
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(saved, doc);
}

#[test]
fn sweep_order_nine_is_rejected() {
    let out = twodist(&["sweep", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_max too large"));
}
