use std::process::{Command, Output};

use heegner_forge::keygen::{deserialize_keypair, deserialize_public_key, recover_zk};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_heegner-forge"));
    c.env_remove("HEEGNER_FORGE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn sweep_csv_reproduces_table_rows() {
    let o = run(&[
        "sweep", "--Z", "1", "--H", "163", "--k-from", "0", "--k-to", "100", "--n-from", "0", "--n-to", "99",
        "--output-format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,prime_count");
    assert_eq!(lines.len(), 102);
    assert!(lines.contains(&"40,95"));
    assert!(lines.contains(&"50,92"));
}

#[test]
fn channels_json_contains_the_mirrored_pair() {
    let o = run(&["channels", "--n2", "19", "--H", "163", "--output-format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pair = v["pairs"].as_array().unwrap().iter().find(|p| p["pair"] == serde_json::json!([4, 15])).unwrap();
    assert_eq!(pair["frequency"], "71");
    assert_eq!(v["polynomial"], "n^2 - 19n + 131");

    let table = stdout(&run(&["channels", "--n2", "19", "--H", "163"]));
    assert!(table.lines().any(|l| l.starts_with("[4,15]") && l.contains(" 71 ")));
}

#[test]
fn domain_errors_exit_one() {
    let o = run(&["scan", "--Z", "1", "--k", "0", "--H", "1", "--from", "0", "--to", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NonIntegralConstant"));
    assert!(o.stdout.is_empty());

    let o = run(&["channels", "--n2", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("EvenUpperIndex"));

    let o = run(&["recover", "--p", "42"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NotStructured"));

    let o = run(&["optimize", "--from", "5", "--to", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("InvalidRange"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--from", "0"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--output-format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--k-from", "x", "--k-to", "1", "--n-from", "0", "--n-to", "1"]).status.code(), Some(2));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("keygen"));
}

#[test]
fn scan_exports() {
    let csv = stdout(&run(&["scan", "--Z", "2", "--k", "40", "--from", "0", "--to", "159", "--output-format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,value,is_prime");
    assert_eq!(lines.len(), 161);
    assert_eq!(lines.iter().filter(|l| l.ends_with(",false")).count(), 14);

    let json = stdout(&run(&["scan", "--Z", "2", "--k", "40", "--from", "0", "--to", "159", "--output-format", "json"]));
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["prime_count"], 146);
    assert_eq!(v["poly"]["B"], "6361");
    assert_eq!(v["params"]["Z"], "2");
}

#[test]
fn optimize_labels_both_optima() {
    let o = run(&["optimize", "--from", "0", "--to", "99", "--sweep-window", "50", "--output-format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["candidates"], serde_json::json!([50]));
    assert_eq!(v["best"]["prime_count"], 92);
    assert_eq!(v["empirical_best"]["prime_count"], 95);

    let v: Value =
        serde_json::from_str(&stdout(&run(&["optimize", "--from", "21", "--to", "95", "--output-format", "json"]))).unwrap();
    assert_eq!(v["candidates"], serde_json::json!([58, 59]));
    assert_eq!(v["best"]["zk"], 58);
    assert_eq!(v["best"]["composite_count"], 0);
}

#[test]
fn constant_and_approx() {
    let v: Value = serde_json::from_str(&stdout(&run(&[
        "constant", "--Z", "2", "--k", "40", "--cutoff", "100000", "--output-format", "json",
    ])))
    .unwrap();
    assert!((v["constant"].as_f64().unwrap() - 3.3204).abs() < 0.02);

    let v: Value = serde_json::from_str(&stdout(&run(&[
        "approx", "--x", "6361", "--delta-p", "0.03023", "--output-format", "json",
    ])))
    .unwrap();
    assert!((v["constant"].as_f64().unwrap() - 3.326106183).abs() < 1e-6);
    assert_eq!(v["census"]["qr_count"], 401);

    let v: Value = serde_json::from_str(&stdout(&run(&[
        "richness", "--Z", "1", "--k", "100", "--from", "0", "--to", "199", "--cutoff", "100000", "--output-format", "json",
    ])))
    .unwrap();
    assert_eq!(v["actual"], 172);
}

const DESK: [&str; 10] = ["--z-lo", "1e8", "--z-hi", "1e9", "--k-lo", "1e8", "--k-hi", "1e9", "--min-bits", "100"];

#[test]
fn seeded_keygen_is_byte_identical() {
    let mut args = vec!["keygen", "--seed", "17", "--output-format", "json"];
    args.extend(DESK);
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let kp = deserialize_keypair(&a.stdout).unwrap();
    assert_eq!(recover_zk(&kp.sp1.p, kp.h).unwrap(), kp.sp1.zk());
    // Timing goes to stderr only.
    assert!(stderr(&a).contains("ms"));

    let mut other = vec!["keygen", "--seed", "18", "--output-format", "json"];
    other.extend(DESK);
    assert_ne!(run(&other).stdout, a.stdout);
}

#[test]
fn keygen_out_file_holds_secrets() {
    let dir = std::env::temp_dir().join(format!("heegner-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("key.json");
    let path_s = path.to_str().unwrap();
    let mut args = vec!["keygen", "--seed", "3", "--paper-faithful", "--output-format", "json", "--out", path_s];
    args.extend(DESK);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let kp = deserialize_keypair(&std::fs::read(&path).unwrap()).unwrap();
    let public = deserialize_public_key(&o.stdout).unwrap();
    assert_eq!(public, kp.public_key());
    assert!(!stdout(&o).contains("Z1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn keygen_exhaustion_is_a_domain_error() {
    let o = run(&[
        "keygen", "--seed", "1", "--z-lo", "1e8", "--z-hi", "1e9", "--k-lo", "1e8", "--k-hi", "1e9", "--min-bits", "1000000",
        "--max-attempts", "20",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ExhaustedAttempts"));
}

#[test]
fn threads_do_not_change_output() {
    let args = ["sweep", "--k-from", "0", "--k-to", "30", "--n-from", "0", "--n-to", "99", "--output-format", "json"];
    let one = run(&args).stdout;
    let mut four = args.to_vec();
    four.extend(["--threads", "4"]);
    assert_eq!(run(&four).stdout, one);
    let env = bin().args(args).env("HEEGNER_FORGE_THREADS", "3").output().unwrap();
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(env.stdout, one);
    assert_eq!(run(&["catalog", "--threads", "0"]).status.code(), Some(2));
}

#[test]
fn catalog_and_baseline() {
    let v: Value = serde_json::from_str(&stdout(&run(&["catalog", "--output-format", "json"]))).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["Euler", "Legendre", "Ribenboim"]);

    let a = run(&["baseline", "--bits", "128", "--seed", "9", "--output-format", "json"]);
    let b = run(&["baseline", "--bits", "128", "--seed", "9", "--output-format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let p: num_bigint::BigUint = v["prime"].as_str().unwrap().parse().unwrap();
    assert_eq!(p.bits(), 128);
    assert!(heegner_forge::primality::is_prime(&p));
    assert!(stderr(&a).contains("ms"));
}

#[test]
fn in_process_entry_point() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = heegner_forge_cli::run(["heegner-forge", "recover", "--p", "41"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("Zk  1"));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(heegner_forge_cli::run(["heegner-forge", "recover"], &mut out, &mut err), 2);
    assert!(out.is_empty() && !err.is_empty());
}
