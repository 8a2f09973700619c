//! End-to-end tests of the command surface: golden output, exit codes,
//! formats and reproducibility. Commands run in-process through `run`.

use super::run;

struct Output {
    code: i32,
    stdout: Vec<u8>,
}

fn ulam(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ulam").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output { code, stdout: out }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_matches_golden_file() {
    let o = ulam(&["table", "--A", "--nmax", "6", "--jmax", "4"]);
    assert_eq!(o.code, 0);
    let golden = include_str!("../tests/golden/table_A_nmax6_jmax4.csv");
    assert_eq!(stdout(&o), golden);
    assert_eq!(golden.lines().count(), 36);
}

#[test]
fn verify_all_exits_zero() {
    let o = ulam(&["verify", "--suite", "all"]);
    assert_eq!(o.code, 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("suite,check,status,detail\n"));
    assert!(!text.lines().any(|l| l.split(',').nth(2) == Some("fail")));
}

#[test]
fn monte_carlo_is_byte_identical_across_runs_and_workers() {
    let args = ["mc", "--N", "6", "--j", "2", "--samples", "1000000", "--seed", "42"];
    let a = ulam(&args);
    let b = ulam(&args);
    let mut one = args.to_vec();
    one.extend(["--workers", "1"]);
    let c = ulam(&one);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn zdist_output_is_worker_independent() {
    let a = ulam(&["table", "--zdist", "--n", "8", "--k", "3", "--workers", "1"]);
    let b = ulam(&["table", "--zdist", "--n", "8", "--k", "3", "--workers", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let total: u64 = stdout(&a).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 40_320);
}

#[test]
fn seed_is_required_for_mc() {
    let o = ulam(&["mc", "--N", "2", "--j", "1"]);
    assert_eq!(o.code, 64);
}

#[test]
fn malformed_flags_exit_64() {
    assert_eq!(ulam(&["table", "--A", "--bogus"]).code, 64);
    assert_eq!(ulam(&["verify", "--suite", "nope"]).code, 64);
    assert_eq!(ulam(&["frobnicate"]).code, 64);
    assert_eq!(ulam(&["genfun", "--x", "abc"]).code, 64);
}

#[test]
fn help_exits_zero() {
    let o = ulam(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn domain_errors_exit_1() {
    assert_eq!(ulam(&["bounds", "stirling", "--n", "100", "--k", "99"]).code, 1);
    assert_eq!(ulam(&["elliptic", "--x", "0.3"]).code, 1);
    assert_eq!(ulam(&["table", "--zdist", "--n", "10", "--k", "2"]).code, 1);
}

#[test]
fn bonferroni_rows_follow_parity() {
    let o = ulam(&["bounds", "bonferroni", "--n", "4", "--k", "2", "--R", "1,2"]);
    assert_eq!(stdout(&o), "n,k,r,R,lower,upper,exact\n4,2,1,1,,3/1,23/24\n4,2,1,2,-13/12,,23/24\n");
}

#[test]
fn json_format_and_out_file() {
    let dir = std::env::temp_dir().join(format!("ulam-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.json");
    let o = ulam(&["table", "--A", "--nmax", "1", "--jmax", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[3]["A"], "10");
    assert_eq!(v[3]["N"], "1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn elliptic_routes_agree_and_reduction_dumps() {
    let o = ulam(&["elliptic", "--x", "0.1", "--w", "0.2"]);
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        let residual: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(residual < 1e-10, "{line}");
    }
    let o = ulam(&["elliptic", "--x", "0.1", "--w", "0.2", "--reduction"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["reduction"]["modulus_k"].as_f64().unwrap() < 1.0);
    assert!(v["pi_combination"]["terms"].as_array().unwrap().len() <= 4);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let o = ulam(&["polya", "--z", "0.4"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let series = row.split(',').nth(2).unwrap();
    let mantissa = series.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
    let parsed: f64 = series.parse().unwrap();
    assert!((parsed - 1.044_056_341_289_53).abs() < 1e-13);
}

#[test]
fn polya_probabilities_match_enumeration() {
    let o = ulam(&["polya", "--nmax", "4"]);
    for line in stdout(&o).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], cols[2]);
    }
}
