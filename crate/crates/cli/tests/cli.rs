use std::process::{Command, Output};

use serde_json::Value;

use cycnorm_core::scheme::CoherentConfiguration;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycnorm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn classify_named_instances() {
    let o = run(&["classify", "--ring", "Z/9", "--K", "gens:8", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["K"], serde_json::json!([1, 8]));
    assert_eq!(v["theorem_verdict"], "normal");
    assert_eq!(v["bruteforce_verdict"], "normal");
    assert_eq!(v["consistent"], true);

    let o = run(&["classify", "--ring", "Z/9", "--K", "elems:1,4,7", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["theorem_verdict"], "not_normal");
    assert_eq!(v["bruteforce_verdict"], "not_normal");
    assert_eq!(v["aut_order"], "81");
    assert_eq!(v["witness"].as_array().unwrap().len(), 9);
}

#[test]
fn json_keys_are_sorted() {
    let o = run(&["classify", "--ring", "GF(7)", "--format", "json", "--no-timestamp"]);
    for v in json_lines(&o) {
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
    let line = stdout(&o).lines().next().unwrap().to_string();
    assert!(line.starts_with(r#"{"K":[1],"agammal_order":"42""#), "{line}");
}

#[test]
fn verify_suite_by_alias_and_name() {
    let o = run(&["verify", "--suite", "f290705c", "--ring", "POLY(3,2)", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let by_alias = json_lines(&o);
    assert!(by_alias.iter().any(|r| r["outcome"] == "pass"));
    assert!(by_alias.iter().all(|r| r["outcome"] != "fail"));
    let o = run(&[
        "verify",
        "--suite",
        "socle-coset-intersection",
        "--ring",
        "POLY(3,2)",
        "--format",
        "json",
        "--no-timestamp",
    ]);
    assert_eq!(json_lines(&o), by_alias);
}

#[test]
fn csv_and_json_agree() {
    let base = ["classify", "--ring", "Z/27", "--ring", "GF(25)", "--ring", "Z/9*GF(3)", "--no-timestamp"];
    let json = json_lines(&run(&[&base[..], &["--format", "json"]].concat()));
    let csv_out = stdout(&run(&[&base[..], &["--format", "csv"]].concat()));
    let mut reader = csv::Reader::from_reader(csv_out.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "ring,K,rank,pure,strongly_pure,theorem,bruteforce,aut_order,agammal_order,consistent"
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), json.len());
    let keys = [
        "ring",
        "K",
        "rank",
        "pure",
        "strongly_pure",
        "theorem_verdict",
        "bruteforce_verdict",
        "aut_order",
        "agammal_order",
        "consistent",
    ];
    for (row, v) in rows.iter().zip(&json) {
        for (i, key) in keys.iter().enumerate() {
            let expected = match &v[*key] {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(&row[i], expected, "{key}");
        }
    }
}

#[test]
fn output_is_reproducible() {
    let args = ["classify", "--sweep", "--format", "json", "--no-timestamp"];
    let a = run(&args);
    let b = run(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);

    let stamped = json_lines(&run(&["classify", "--ring", "GF(3)", "--format", "json"]));
    assert!(stamped.iter().all(|v| v["generated_at"].is_string()));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scheme.txt");
    let o = run(&["scheme", "--ring", "Z/9", "--K", "gens:8", "--no-timestamp", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let c = CoherentConfiguration::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((c.degree(), c.rank()), (9, 5));
}

#[test]
fn aut_listing() {
    let o = run(&["aut", "--ring", "Z/9", "--K", "elems:1,4,7", "--elements", "--format", "json", "--no-timestamp"]);
    let v = &json_lines(&o)[0];
    assert_eq!(v["order"], "81");
    assert_eq!(v["elements"].as_array().unwrap().len(), 81);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["classify", "--ring", "GR(3^2"][..],
        &["classify", "--ring", "Z/9", "--K", "elems:1,4"],
        &["verify", "--suite", "no-such-suite", "--ring", "Z/9"],
        &["classify"],
        &["aut", "--ring", "GF(169)", "--K", "1"],
        &["ring"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["classify", "--ring", "GR(3^2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
}
