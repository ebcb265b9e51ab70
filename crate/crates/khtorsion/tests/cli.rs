use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khtorsion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_trefoil_text() {
    let o = run(&["compute", "--knot", "3_1", "--coeffs", "Z"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("1₂"), "{s}");
    assert!(s.contains("a,b₂,c₄ = Z^a ⊕ Z₂^b ⊕ Z₄^c"));
}

#[test]
fn compute_unknot_over_q() {
    let o = run(&["compute", "--pd", "PD[]", "--coeffs", "Q", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let groups = &v[0]["groups"];
    assert_eq!(groups.as_array().unwrap().len(), 2);
    assert_eq!(groups[0]["j"], -1);
    assert_eq!(groups[1]["j"], 1);
}

#[test]
fn json_is_deterministic_and_matches_schema() {
    let args = ["compute", "--knot", "3_1", "--coeffs", "Z,Z2,Z4", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let tables = v.as_array().unwrap();
    assert_eq!(tables.len(), 3);
    assert_eq!(tables[0]["ring"], "Z");
    assert_eq!(tables[0]["writhe"], 3);
    let tors: Vec<_> = tables[0]["groups"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| !g["torsion"].as_array().unwrap().is_empty())
        .map(|g| (g["i"].as_i64().unwrap(), g["j"].as_i64().unwrap()))
        .collect();
    assert_eq!(tors, [(3, 7)]);
}

#[test]
fn cached_and_fresh_tables_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let fresh = run(&["compute", "--knot", "5_2", "--coeffs", "Z,Z2", "--format", "json"]);
    let first = run(&["compute", "--knot", "5_2", "--coeffs", "Z,Z2", "--format", "json", "--cache", cache]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    let second = run(&["compute", "--knot", "5_2", "--coeffs", "Z,Z2", "--format", "json", "--cache", cache]);
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(fresh.stdout, second.stdout);
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--knot", "3_1", "--checks", "euler"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pass"));

    let o = run(&["verify", "--knot", "unknot", "--checks", "pages"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("E_inf dim 2"), "{s}");
    assert!(s.contains("collapsed at page 1"), "{s}");

    let o = run(&["verify", "--max-crossings", "6", "--checks", "lemma19,theorem7", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 0);
}

#[test]
fn classify_examples() {
    let o = run(&["classify", "--knot", "3_1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("ZH-thin") && s.contains("H-slim"), "{s}");
    let s = stdout(&run(&["classify", "--knot", "4_1"]));
    assert!(s.contains("H-slim") && !s.contains("not H-slim"), "{s}");
}

#[test]
fn jones_of_figure_eight() {
    let s = stdout(&run(&["jones", "--knot", "4_1"]));
    assert!(s.contains('5'), "{s}");
}

#[test]
fn catalog_list_filters() {
    let o = run(&["catalog", "list", "--max-crossings", "4", "--format", "json"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("4_1") && !s.contains("5_1"), "{s}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["compute", "--knot", "no_such_knot"][..],
        &["compute", "--knot", "3_1", "--pd", "PD[]"],
        &["compute", "--knot", "9_1", "--max-crossings", "5"],
        &["compute", "--pd", "PD[X(1,2,3"],
        &["compute", "--knot", "3_1", "--coeffs", "Z6"],
        &["verify", "--knot", "3_1", "--checks", "bogus"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn extra_catalog_entries_are_selectable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.jsonl");
    let line = serde_json::json!({
        "name": "left_trefoil",
        "pd": "PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]",
        "signature": 2,
        "components": 1,
        "alternating": true,
    });
    std::fs::write(&path, format!("{line}\n")).unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["classify", "--knot", "left_trefoil", "--catalog", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["classify", "--knot", "left_trefoil"]).status.code(), Some(2));
}
