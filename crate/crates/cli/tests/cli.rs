use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn dgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn schema() -> Value {
    let text = std::fs::read_to_string(root().join("schema/dgs-certificate.schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn assert_valid(cert: &Value) {
    let schema = schema();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(cert).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{cert:#}");
}

#[test]
fn certify_even_degree_pair_member() {
    let o = dgs(&["certify", &fixture("example1-G.g6"), "--json"]);
    assert_eq!(code(&o), 0);
    let c = json(&o);
    assert_eq!(c["verdict"], "DGS-among-Eulerian");
    assert_eq!(c["odd_part"], "-43");
    assert_eq!(c["detW"], "-352256");
    assert_eq!(c["v2"], 13);
    assert_eq!(c["snf_shape_matches"], true);
    assert_valid(&c);
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let mut bad = c.clone();
    bad["detW"] = Value::from(-352256);
    assert!(!validator.is_valid(&bad));
    let mut extra = c.clone();
    extra["level"] = Value::from("2");
    assert!(!validator.is_valid(&extra));
}

#[test]
fn certify_accepts_every_input_form() {
    let g6 = std::fs::read_to_string(fixture("example1-G.g6")).unwrap();
    let from_file = stdout(&dgs(&["certify", &fixture("example1-G.g6"), "--json"]));
    let inline = stdout(&dgs(&["certify", g6.trim(), "--json"]));
    let edges = stdout(&dgs(&["certify", &fixture("example1-G.edges"), "--json"]));
    let explicit = stdout(&dgs(&["certify", &fixture("example1-G.edges"), "--json", "--format", "edge-list"]));
    assert_eq!(from_file, inline);
    assert_eq!(from_file, edges);
    assert_eq!(from_file, explicit);
}

#[test]
fn certify_json_covers_schema_and_round_trips() {
    let required: Vec<String> =
        schema()["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    for graph in [fixture("example1-G.g6"), fixture("example1-H.g6"), fixture("k3.edges"), "Bg".into(), "Dhc".into()] {
        for theorem in ["best", "wang", "eulerian"] {
            let o = dgs(&["certify", &graph, "--json", "--theorem", theorem]);
            let c = json(&o);
            let keys: Vec<&String> = c.as_object().unwrap().keys().collect();
            assert_eq!(keys.len(), required.len(), "{graph} {theorem}");
            assert!(required.iter().all(|k| c.get(k).is_some()), "{graph} {theorem}: {keys:?}");
            assert_valid(&c);
            let back: dgs_core::cert::DgsCertificate = serde_json::from_value(c.clone()).unwrap();
            assert_eq!(serde_json::to_value(&back).unwrap(), c);
        }
    }
}

#[test]
fn certify_text_and_exit_codes() {
    let o = dgs(&["certify", &fixture("example1-G.g6")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: DGS-among-Eulerian"));
    assert!(stdout(&o).contains("odd part: -43"));
    // Path on three vertices: singular walk matrix.
    let o = dgs(&["certify", "Bg"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("verdict: inconclusive"));
}

#[test]
fn general_test_certifies_through_cli() {
    let pairs: Vec<(usize, usize)> = (1..6).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let g = (0u32..1 << 15)
        .map(|mask| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            dgs_core::Graph::from_edges(6, &edges).unwrap()
        })
        .find(|g| dgs_core::cert::certify_wang(g).verdict == dgs_core::cert::Verdict::Dgs)
        .expect("some 6-vertex graph passes the general test");
    let g6 = dgs_core::graph::write_graph6(&g).unwrap();
    let o = dgs(&["certify", &g6, "--json"]);
    assert_eq!(code(&o), 0);
    let c = json(&o);
    assert_eq!((c["verdict"].as_str(), c["theorem"].as_str(), c["v2"].as_u64()), (Some("DGS"), Some("wang"), Some(3)));
    assert_valid(&c);
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(code(&dgs(&["certify", "zzz"])), 1);
    assert_eq!(code(&dgs(&["certify", "/nonexistent/graph.g6", "--format", "edge-list"])), 1);
    assert_eq!(code(&dgs(&["frobnicate"])), 1);
    assert_eq!(code(&dgs(&["certify", "Bw", "--budget", "0"])), 1);
    assert_eq!(code(&dgs(&["mates", "9"])), 1);
    assert_eq!(code(&dgs(&["gen", "5", "--seed", "1", "--connected", "--format", "graph6"])), 0);
    assert_eq!(code(&dgs(&["--help"])), 0);
}

#[test]
fn charpoly_of_triangle() {
    let o = dgs(&["charpoly", &fixture("k3.edges")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "x^3 - 3x - 2\n");
    let j = json(&dgs(&["charpoly", "Bw", "--json"]));
    assert_eq!(j["charpoly"], "x^3 - 3x - 2");
    // Complement of K3 is the empty graph.
    assert_eq!(stdout(&dgs(&["charpoly", "Bw", "--complement"])), "x^3\n");
}

#[test]
fn walkmatrix_reports_determinants() {
    let j = json(&dgs(&["walkmatrix", &fixture("example1-G.g6"), "--json"]));
    assert_eq!(j["detW"], "-352256");
    assert_eq!(j["detWbar"], "-688");
    assert_eq!(j["detWhat"], "-43");
    assert_eq!(j["W"].as_array().unwrap().len(), 10);
    let last = j["snf_W"]["invariant_factors"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last, "172");
    // Odd degrees: only W is defined.
    let j = json(&dgs(&["walkmatrix", "Bg", "--json"]));
    assert!(j["Wbar"].is_null());
}

#[test]
fn annihilate_reports() {
    let o = dgs(&["annihilate", &fixture("example1-G.g6"), "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["varphi"], "x^5 + x^4 + x^3");
    assert_eq!(r["k"], 6);
    assert_eq!(r["varphi_at_a_is_zero"], true);
    let o = dgs(&["annihilate", "Bw", "--json"]);
    assert_eq!(json(&o)["remark2_holds"], true);
    assert_eq!(code(&dgs(&["annihilate", "Bg"])), 2);
}

#[test]
fn cospectral_and_level() {
    let (g, h) = (fixture("example1-G.g6"), fixture("example1-H.edges"));
    assert_eq!(stdout(&dgs(&["cospectral", &g, &h])), "true\n");
    assert_eq!(stdout(&dgs(&["cospectral", &g, "Bw"])), "false\n");
    let o = dgs(&["level", &g, &h, "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["level"], "2");
    assert_eq!(r["level_divides_d_n"], true);
    assert!(stdout(&dgs(&["level", &g, &h])).starts_with("level: 2\n"));
    // Singular W(G).
    assert_eq!(code(&dgs(&["level", "Bg", "Bg"])), 2);
}

#[test]
fn level_of_matrix_files() {
    let r = json(&dgs(&["level", "--matrix", &fixture("q1.txt"), "--json"]));
    assert_eq!(r["level"], "2");
    assert_eq!(r["orthogonal"], true);
    let r = json(&dgs(&["level", "--matrix", &fixture("q2.txt"), "--json"]));
    assert_eq!(r["level"], "3");
    assert_eq!(code(&dgs(&["level"])), 1);
}

#[test]
fn gen_is_seeded_and_even() {
    let a = stdout(&dgs(&["gen", "12", "--seed", "9"]));
    assert_eq!(a, stdout(&dgs(&["gen", "12", "--seed", "9"])));
    let g = dgs_core::graph::parse_graph6(a.trim()).unwrap();
    assert_eq!(g.n(), 12);
    assert!(g.degrees().iter().all(|d| d % 2 == 0));
    let e = stdout(&dgs(&["gen", "12", "--seed", "9", "--format", "edge-list"]));
    assert_eq!(dgs_core::graph::parse_edge_list(&e).unwrap(), g);
    let j = json(&dgs(&["gen", "12", "--seed", "9", "--json"]));
    assert_eq!(j["graph"], a.trim());
}

#[test]
fn mates_output_is_worker_invariant() {
    let one = dgs(&["mates", "6", "--json", "--workers", "1"]);
    let three = dgs(&["mates", "6", "--json", "--workers", "3"]);
    assert_eq!(code(&one), 0);
    let (mut a, mut b) = (json(&one), json(&three));
    assert_eq!(a["isomorphism_classes"], 156);
    a["workers"] = Value::Null;
    b["workers"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn oracle_suite_runs_and_is_worker_invariant() {
    let args = |w: &'static str| ["oracle", "--suite", "thm4", "--samples", "16", "--seed", "4", "--json", "--workers", w];
    let one = dgs(&args("1"));
    let two = dgs(&args("2"));
    assert_eq!(code(&one), 0);
    assert_eq!(stdout(&one), stdout(&two));
    let r = json(&one);
    assert_eq!(r["suite"], "thm4");
    assert_eq!(r["failed"], 0);
    assert_eq!(code(&dgs(&["oracle", "--suite", "thm5"])), 1);
}
