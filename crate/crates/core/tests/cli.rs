use std::process::Command;

use g2zeta::cli::{run, CSV_HEADER};
use g2zeta::Certificate;

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_g2zeta")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn args<'a>(rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["g2zeta"];
    v.extend_from_slice(rest);
    v
}

#[test]
fn exit_codes() {
    let (code, out, _) = bin(&["reduce", "1", "0", "0", "1", "0", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("42 terms"));
    let (code, _, err) = bin(&["reduce", "2", "0", "0", "0", "0", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("divergent: w>2 fails"));
    let (code, _, _) = bin(&["eval", "1", "2", "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = bin(&["classify", "0", "0", "0", "0", "0", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = bin(&["verify", "--item", "bogus"]);
    assert_eq!(code, 2);
    let (code, out, _) = bin(&["verify", "--item", "identities"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("PASS identities"));
}

#[test]
fn reduce_json_round_trips() {
    let o = run(args(&["reduce", "1", "0", "0", "1", "0", "1", "--json"]));
    assert_eq!(o.code, 0);
    let cert = Certificate::from_json(&o.stdout).unwrap();
    assert!(cert.all_rational);
    assert_eq!(cert.result.len(), 42);
    assert_eq!(Certificate::from_json(&cert.to_json()).unwrap(), cert);
}

#[test]
fn irrational_shape_warns() {
    let o = run(args(&["reduce", "0", "0", "0", "0", "3", "0"]));
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("all_rational=false"));
    assert!(o.stderr.starts_with("warning: all_rational=false"));
    assert!(o.stdout.lines().any(|l| l.starts_with('[') && l.contains(" * Li_{3}(mu12^")));
}

#[test]
fn eval_prints_value_and_bound() {
    let o = run(args(&["eval", "2", "2", "2", "2", "2", "2"]));
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("0.00007135906438752907355938750633729"), "{}", o.stdout);
    assert!(o.stdout.contains(" ±"));
    let o = run(args(&["eval", "1", "0", "0", "1", "0", "1", "--digits", "60", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(v["value"].as_str().unwrap().starts_with("0.2911820407405167027998140491004921513787218645588744495"));
    assert!(v["error_bound"].as_f64().unwrap() < 1e-50);
}

#[test]
fn witten_values() {
    let o = run(args(&["witten", "2", "--digits", "20"]));
    assert!(o.stdout.starts_with("1.0275705271804"), "{}", o.stdout);
    let o = run(args(&["witten", "1", "--digits", "20"]));
    assert!(o.stdout.starts_with("1.33200962450443"), "{}", o.stdout);
    assert_eq!(run(args(&["witten", "0"])).code, 2);
}

#[test]
fn oracle_output() {
    let o = run(args(&["oracle", "1", "1", "1", "1", "1", "1", "--m", "300", "--levels", "0", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["M"], 300);
    assert!((v["partial"].as_f64().unwrap() - 0.01110008013).abs() < 5e-11);
    assert_eq!(v["partial"], v["extrapolated"]);
}

#[test]
fn tabulate_rows_and_file_output() {
    let o = run(args(&["tabulate", "--max-weight", "2"]));
    assert_eq!(o.stdout, format!("{CSV_HEADER}\n"));

    let path = std::env::temp_dir().join(format!("g2zeta-tab-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(args(&["tabulate", "--max-weight", "6", "--uniform", "--digits", "20", "--out", p]));
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("1,1,1,1,1,1,regular,true,0.01110008020420360"), "{}", rows[1]);

    let first = run(args(&["tabulate", "--max-weight", "3", "--digits", "20", "--oracle-m", "100"]));
    let again = run(args(&["tabulate", "--max-weight", "3", "--digits", "20", "--oracle-m", "100"]));
    assert_eq!(first, again);
    let lines: Vec<&str> = first.stdout.lines().skip(1).collect();
    let keys: Vec<&str> = lines.iter().map(|l| &l[..11]).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for want in ["1,0,0,1,0,1", "0,0,3,0,0,0", "1,0,0,0,2,0"] {
        assert!(lines.iter().any(|l| l.starts_with(want)));
    }
}
