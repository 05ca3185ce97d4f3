use std::process::{Command, Output};

use serde_json::Value;

fn klcy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klcy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn kl_a1_all_pairs() {
    let v = json(&klcy(&["kl", "--type", "A1", "--pairs", "all"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let find = |x: &str, y: &str| rows.iter().find(|r| r["x"] == x && r["y"] == y).unwrap().clone();
    assert_eq!(find("e", "s1")["h"], serde_json::json!({"1": 1}));
    assert_eq!(find("e", "s1")["mu"], 1);
    assert_eq!(find("e", "e")["h"], serde_json::json!({"0": 1}));
    assert_eq!(find("s1", "s1")["h"], serde_json::json!({"0": 1}));
}

#[test]
fn kl_single_pair_in_a3() {
    let v = json(&klcy(&["kl", "--type", "A3", "--pairs", "s2,s2s1s3s2"]));
    assert_eq!(v[0]["h"], serde_json::json!({"1": 1, "3": 1}));
}

#[test]
fn output_is_byte_deterministic() {
    let a = klcy(&["cells", "--type", "A3", "--kind", "left"]);
    let b = klcy(&["cells", "--type", "A3", "--kind", "left"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cells.json");
    let o = klcy(&["cells", "--type", "A3", "--kind", "two-sided", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let sizes: Vec<usize> = v["cells"].as_array().unwrap().iter().map(|c| c.as_array().unwrap().len()).collect();
    let mut sorted = sizes.clone();
    sorted.sort();
    // squares of the dimensions of the irreducibles of S4
    assert_eq!(sorted, vec![1, 1, 4, 9, 9]);
}

fn partition_n(p: &str) -> usize {
    p.trim_matches(|c| c == '(' || c == ')').split(',').enumerate().map(|(i, x)| i * x.parse::<usize>().unwrap()).sum()
}

#[test]
fn shifts_table_a6_has_fifteen_rows() {
    let o = klcy(&["shifts-table", "--type", "A6"]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 15);
    for row in &rows {
        let a: i64 = row[2].parse().unwrap();
        let a_w0: i64 = row[3].parse().unwrap();
        assert_eq!(a as usize, partition_n(&row[0]));
        assert_eq!(a_w0 as usize, partition_n(&row[1]));
        assert_eq!(row[4].parse::<i64>().unwrap(), 2 * a_w0);
        assert_eq!(row[5].parse::<i64>().unwrap(), 2 * (a - a_w0));
    }
    let sum: i64 = rows.iter().map(|r| r[2].parse::<i64>().unwrap()).sum();
    assert_eq!(sum, 103);
}

#[test]
fn rs_prints_rows_and_json() {
    let o = klcy(&["rs", "--perm", "4,2,3,1"]);
    let text = stdout(&o);
    assert!(text.starts_with("P\n1 3\n2\n4\n"));
    let v = json(&klcy(&["rs", "--perm", "4,2,3,1", "--format", "json"]));
    assert_eq!(v["shape"], serde_json::json!([2, 1, 1]));
}

#[test]
fn resolve_costandard_of_sl2() {
    let v = json(&klcy(&["resolve", "--algebra", "sl2.json", "--module", "nabla_e", "--max", "20"]));
    let terms: Vec<(i64, Value)> =
        v["resolution"].as_array().unwrap().iter().map(|t| (t["position"].as_i64().unwrap(), t["summands"].clone())).collect();
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[0], (0, serde_json::json!([["s", 1]])));
    assert_eq!(terms[1], (1, serde_json::json!([["s", -1]])));
    assert_eq!(terms[2], (2, serde_json::json!([["e", -2]])));
    assert!(v["truncated"].is_null());
}

#[test]
fn ext_between_simples() {
    let v = json(&klcy(&["ext", "--algebra", "sl2", "--from", "L_e", "--to", "L_e", "--max-deg", "2"]));
    let ext = v["ext"].as_array().unwrap();
    assert!(ext.iter().any(|r| r["m"] == 2 && r["dim"] == 1));
}

#[test]
fn cy_check_classifies_sl2() {
    let v = json(&klcy(&["cy-check", "--algebra", "sl2", "--module", "all", "--json"]));
    assert_eq!(v["by_dimension"], serde_json::json!({"0": ["P_s"], "2": ["L_e"]}));
    let one = json(&klcy(&["cy-check", "--algebra", "sl2", "--module", "L_e", "--json"]));
    assert_eq!(one["status"], "cy");
    assert_eq!((one["hom_shift"].as_i64(), one["grade_shift"].as_i64()), (Some(2), Some(-2)));
}

#[test]
fn verify_cy_suite_on_sl2_succeeds() {
    let o = klcy(&["verify", "--suite", "thmA", "--algebra", "sl2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn failing_suite_exits_two() {
    let o = klcy(&["verify", "--suite", "auslander", "--algebra", "dual"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn algebra_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl2.json");
    let shown = klcy(&["catalog", "show", "sl2"]);
    assert!(shown.status.success());
    std::fs::write(&path, &shown.stdout).unwrap();
    let v = json(&klcy(&["resolve", "--algebra", path.to_str().unwrap(), "--module", "L_s"]));
    assert_eq!(v["resolution"].as_array().unwrap().len(), 2);
}

#[test]
fn catalog_lists_bundled_algebras() {
    let text = stdout(&klcy(&["catalog", "list"]));
    for name in ["sl2", "sl4_cell", "parabolic3", "coinvariant3_O"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn domain_and_usage_errors_exit_one() {
    let o = klcy(&["resolve", "--algebra", "nonesuch", "--module", "P_s"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("catalog list"));
    assert_eq!(klcy(&["kl"]).status.code(), Some(1));
    assert_eq!(klcy(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(klcy(&["resolve", "--algebra", "sl2", "--module", "Q_s"]).status.code(), Some(1));
    assert_eq!(klcy(&["shifts-table", "--type", "A3", "--format", "svg"]).status.code(), Some(1));
    assert_eq!(klcy(&["--help"]).status.code(), Some(0));
}

#[test]
fn figure1_reports_collisions_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let v = json(&klcy(&["figure1", "--n", "7", "--svg", svg.to_str().unwrap()]));
    assert_eq!(v["dots"].as_array().unwrap().len(), 15);
    let positions: Vec<i64> = v["collisions"].as_array().unwrap().iter().map(|c| c["hom_shift"].as_i64().unwrap()).collect();
    assert_eq!(positions, vec![6, 12]);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn afun_sample_is_seeded() {
    let a = klcy(&["afun", "--type", "A3", "--sample", "5", "--seed", "3"]);
    let b = klcy(&["afun", "--type", "A3", "--sample", "5", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for r in v.as_array().unwrap() {
        assert_eq!(r["a"].as_u64().unwrap() as usize, partition_n(r["shape"].as_str().unwrap()));
    }
}

#[test]
fn matrix_file_defines_the_group() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    std::fs::write(&path, r#"{"rank": 2, "matrix": [[1, 6], [6, 1]]}"#).unwrap();
    let v = json(&klcy(&["cells", "--matrix-file", path.to_str().unwrap(), "--kind", "two-sided"]));
    let sizes: Vec<usize> = v["cells"].as_array().unwrap().iter().map(|c| c.as_array().unwrap().len()).collect();
    assert_eq!(sizes.iter().sum::<usize>(), 12);
    assert_eq!(sizes.len(), 3);
    let table = stdout(&klcy(&["shifts-table", "--matrix-file", path.to_str().unwrap()]));
    assert_eq!(table.lines().count(), 4);
}
