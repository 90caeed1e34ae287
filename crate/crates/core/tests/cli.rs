use std::process::{Command, Output};

use zonal::cli::TableDoc;

fn zonal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn table_degree_two_csv() {
    let o = zonal(&[
        "table", "--f", "2", "--basis", "powersum", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "kappa,\"s2\",\"s1^2\",chi\n\"2\",2,1,1\n\"1,1\",-1,1,2\n"
    );
}

#[test]
fn table_degree_one() {
    let o = zonal(&["table", "--f", "1", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["rows"][0]["kappa"], "1");
    assert_eq!(v["rows"][0]["chi"], 1);
    assert_eq!(v["rows"][0]["coefficients"][0], "1");
}

#[test]
fn table_degree_six_grid() {
    let o = zonal(&[
        "table", "--f", "6", "--basis", "powersum", "--format", "csv",
    ]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    // (3,2,1) row; columns in partitions_of order: 6, 51, 42, 411, 33, 321, 3111, 222, 2211, 21111, 1^6
    assert_eq!(lines[6], "\"3,2,1\",16,32,-4,-18,-24,0,-8,-2,3,4,1,2673");
}

#[test]
fn json_table_round_trips() {
    for basis in ["monomial", "powersum"] {
        let o = zonal(&["table", "--f", "5", "--basis", basis, "--format", "json"]);
        let text = stdout(&o);
        let doc: TableDoc = serde_json::from_str(&text).unwrap();
        let again = format!("{}\n", serde_json::to_string_pretty(&doc).unwrap());
        assert_eq!(again, text);
    }
}

#[test]
fn unsupported_format_is_a_usage_error() {
    let o = zonal(&["table", "--f", "2", "--format", "yaml"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(zonal(&["table"]).status.code(), Some(2));
}

#[test]
fn verify_passes_through_six() {
    let o = zonal(&["verify", "--f", "1..6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with(" pass")).count(), 6 * 7);
    assert!(text.contains("f=6 golden          pass"));
}

#[test]
fn verify_single_degree() {
    assert_eq!(zonal(&["verify", "--f", "1"]).status.code(), Some(0));
}

#[test]
fn corrupted_table_fails_verification() {
    let dir = std::env::temp_dir().join(format!("zonal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = stdout(&zonal(&[
        "table", "--f", "3", "--basis", "powersum", "--format", "json",
    ]));
    let mut doc: TableDoc = serde_json::from_str(&good).unwrap();
    let row = doc
        .rows
        .iter_mut()
        .find(|r| r.kappa.to_string() == "2,1")
        .unwrap();
    row.coefficients[0] = "-3".into();
    let path = dir.join("corrupt.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let o = zonal(&["verify", "--f", "3", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("f=3 golden          FAIL"), "{text}");
    assert!(text.contains("(2,1): expected"), "{text}");
    assert!(text.contains("f=3 trace-identity  FAIL"), "{text}");

    let clean = dir.join("clean.json");
    std::fs::write(&clean, &good).unwrap();
    let o = zonal(&["verify", "--f", "3", "--table", clean.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // degree in the file must match --f
    let o = zonal(&["verify", "--f", "4", "--table", clean.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn estimate_trace_power_first_degree() {
    let o = zonal(&[
        "estimate",
        "trace-power",
        "--f",
        "1",
        "--A",
        "1,2",
        "--B",
        "3,1",
        "--samples",
        "100000",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["exactValue"], "6");
    assert_eq!(v["samples"], 100000);
    assert_eq!(v["seed"], 7);
    assert!(v["zScore"].as_f64().unwrap().abs() <= 4.0, "{v}");
}

#[test]
fn estimate_trace_power_degree_zero() {
    let o = zonal(&[
        "estimate",
        "trace-power",
        "--f",
        "0",
        "--A",
        "1,2",
        "--B",
        "3,1",
        "--samples",
        "50",
    ]);
    let v = json(&o);
    assert_eq!(v["exactValue"], "1");
    assert_eq!(v["mcStdErr"].as_f64(), Some(0.0));
}

#[test]
fn estimate_zonal_split_exact_value() {
    let o = zonal(&[
        "estimate",
        "zonal-split",
        "--kappa",
        "2",
        "--A",
        "1,2",
        "--B",
        "3,1",
        "--samples",
        "100000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // Z_(2)(1,2)·Z_(2)(3,1)/Z_(2)(1,1) = 19·36/8
    assert_eq!(v["exactValue"], "171/2");
    assert!(v["zScore"].as_f64().unwrap().abs() <= 4.0, "{v}");
}

#[test]
fn estimate_trace_ah_and_series() {
    let o = zonal(&["estimate", "trace-AH", "--f", "3", "--A", "1,2;3,4"]);
    assert_eq!(json(&o)["exactValue"], "0");
    let o = zonal(&[
        "estimate",
        "trace-AH",
        "--f",
        "2",
        "--A",
        "1,1",
        "--samples",
        "20000",
    ]);
    assert_eq!(json(&o)["exactValue"], "1");
    let o = zonal(&[
        "estimate",
        "exp-series",
        "--A",
        "0,0",
        "--B",
        "1,3",
        "--max-degree",
        "5",
        "--samples",
        "100",
    ]);
    let v = json(&o);
    assert_eq!(v["series"]["partialSum"], "1");
    assert_eq!(v["series"]["terms"].as_array().unwrap().len(), 6);
}

#[test]
fn estimate_usage_errors() {
    let mismatch = zonal(&["estimate", "trace-power", "--A", "1,2", "--B", "3"]);
    assert_eq!(mismatch.status.code(), Some(2));
    let wrong_n = zonal(&[
        "estimate",
        "trace-power",
        "--n",
        "3",
        "--A",
        "1,2",
        "--B",
        "3,1",
    ]);
    assert_eq!(wrong_n.status.code(), Some(2));
    let no_kappa = zonal(&["estimate", "zonal-split", "--A", "1,2", "--B", "3,1"]);
    assert_eq!(no_kappa.status.code(), Some(2));
    let few = zonal(&[
        "estimate",
        "trace-power",
        "--A",
        "1",
        "--B",
        "1",
        "--samples",
        "1",
    ]);
    assert_eq!(few.status.code(), Some(2));
}

#[test]
fn tolerance_gate_exits_one() {
    // the truncated series is far below the true mean, so |z| is large
    let o = zonal(&[
        "estimate",
        "exp-series",
        "--A",
        "1,2",
        "--B",
        "1,3",
        "--max-degree",
        "2",
        "--samples",
        "20000",
        "--max-z",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_reproducible_and_thread_independent() {
    let base = [
        "estimate",
        "trace-power",
        "--f",
        "3",
        "--A",
        "1,2,3",
        "--B",
        "1,1,2",
        "--samples",
        "30000",
        "--seed",
        "11",
    ];
    let a = zonal(&base);
    let b = zonal(&base);
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let c = zonal(&one);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let s1 = zonal(&["sample", "--n", "4", "--count", "3", "--seed", "5"]);
    let s2 = zonal(&["sample", "--n", "4", "--count", "3", "--seed", "5"]);
    assert_eq!(s1.stdout, s2.stdout);
    assert_eq!(json(&s1)["samples"].as_array().unwrap().len(), 3);
}
