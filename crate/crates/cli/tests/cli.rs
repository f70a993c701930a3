use std::path::PathBuf;
use std::process::{Command, Output};

use bianchi_cli::commands::{parse_grid, parse_point};
use bianchi_cli::{run, CliError, RunConfig};
use clap::Parser;
use serde_json::Value;

fn bianchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bianchi")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    let _ = std::fs::remove_file(&p);
    p
}

fn cfg(args: &[&str]) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("bianchi").chain(args.iter().copied())).unwrap()
}

#[test]
fn unsupported_field_exits_2() {
    let o = bianchi(&["ring", "--D", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("D = 5"));
}

#[test]
fn ring_data_for_d3() {
    let o = bianchi(&["ring", "--D", "3"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"]["units"].as_array().unwrap().len(), 6);
    assert_eq!(v["result"]["index_psl"], 3);
    assert_eq!(v["config"]["D"], 3);
    assert!(v["config"].get("threads").is_none());
}

#[test]
fn eisenstein_output_has_the_documented_fields() {
    let o = bianchi(&["eisenstein", "--l", "1", "--k", "0", "--m", "1", "--point", "0.1,0.2,0.9", "--bound", "20"]);
    assert!(o.status.success());
    let v = json(&o);
    for key in ["D", "l", "k", "m", "s_re", "s_im", "point", "bound", "n_terms", "value_re", "value_im", "tail_estimate"] {
        assert!(v["result"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn strict_turns_warnings_into_exit_4() {
    // At P = j the (2, 1, 0) series vanishes by symmetry, so its tail dominates.
    let args = ["eisenstein", "--l", "2", "--k", "1", "--m", "0", "--bound", "10"];
    let loose = bianchi(&args);
    assert_eq!(loose.status.code(), Some(0));
    assert!(!json(&loose)["metadata"]["warnings"].as_array().unwrap().is_empty());
    let mut strict = vec!["--strict"];
    strict.extend_from_slice(&args);
    assert_eq!(bianchi(&strict).status.code(), Some(4));
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["equidist", "--grid", "1,2"][..],
        &["eisenstein", "--s-re", "0.9"],
        &["eisenstein", "--point", "0,0,-1"],
        &["eisenstein", "--series", "classical", "--l", "1"],
        &["fourier", "--w", "1"],
        &["zeta", "--s-re", "1"],
        &["--threads", "0", "ring"],
    ] {
        assert_eq!(bianchi(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn certificate_failure_exits_3() {
    let o = bianchi(&["equidist", "--grid", "1,0.5", "--max-rows", "2", "--order", "4"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unwritable_output_exits_1() {
    assert_eq!(bianchi(&["--out", "/nonexistent/dir/x.json", "ring"]).status.code(), Some(1));
}

#[test]
fn cache_is_reused() {
    let path = scratch("rows.bcos");
    let p = path.to_str().unwrap();
    let args = ["cosets", "--point", "0.1,0.3,0.8", "--bound", "25", "--cache", p];
    let first = json(&bianchi(&args));
    let second = json(&bianchi(&args));
    assert_eq!(first["metadata"]["cache"]["hit"], false);
    assert_eq!(second["metadata"]["cache"]["hit"], true);
    assert_eq!(first["result"], second["result"]);
    let other = json(&bianchi(&["cosets", "--point", "0.1,0.3,0.8", "--bound", "30", "--cache", p]));
    assert_eq!(other["metadata"]["cache"]["hit"], false);

    let series = ["eisenstein", "--point", "0.1,0.3,0.8", "--bound", "25"];
    let plain = json(&bianchi(&series));
    let mut cached_args = series.to_vec();
    cached_args.extend_from_slice(&["--cache", p]);
    bianchi(&cached_args);
    let cached = json(&bianchi(&cached_args));
    assert_eq!(cached["metadata"]["cache"]["hit"], true);
    assert_eq!(plain["result"], cached["result"]);
}

#[test]
fn equidist_writes_csv_and_json() {
    let csv = scratch("nu.csv");
    let out = scratch("nu.json");
    let o = bianchi(&[
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
        "equidist",
        "--grid",
        "1,0.5",
        "--order",
        "24",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,value_re,value_im,delta_abs"));
    assert_eq!(lines.count(), 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 3);
    assert!(v["result"]["interpretation"].as_str().unwrap().contains("not an estimate"));
}

#[test]
fn seeds_move_the_bump() {
    let a = run(&cfg(&["--seed", "1", "equidist", "--grid", "1,0.5", "--order", "16"])).unwrap();
    let b = run(&cfg(&["--seed", "2", "equidist", "--grid", "1,0.5", "--order", "16"])).unwrap();
    let c = run(&cfg(&["--seed", "1", "equidist", "--grid", "1,0.5", "--order", "16"])).unwrap();
    let center = |o: &bianchi_cli::Output| serde_json::from_str::<Value>(&o.json).unwrap()["result"]["center"].clone();
    assert_ne!(center(&a), center(&b));
    assert_eq!(a.json, c.json);
}

#[test]
fn parsers() {
    assert!(parse_point("0.1, 0.2, 3").is_ok());
    assert!(parse_point("0.1,0.2").is_err());
    assert!(parse_point("a,b,c").is_err());
    assert_eq!(parse_grid("1,0.5").unwrap(), vec![1.0, 0.5]);
    assert!(parse_grid("1,1").is_err());
    assert!(parse_grid("1,-0.5").is_err());
    assert!(matches!(run(&cfg(&["ring", "--D", "6"])), Err(CliError::Validation(_))));
}

#[test]
fn psl_convention_halves_the_classical_series() {
    let sl = run(&cfg(&["eisenstein", "--series", "classical", "--bound", "20"])).unwrap();
    let psl = run(&cfg(&["--index-convention", "psl", "eisenstein", "--series", "classical", "--bound", "20"])).unwrap();
    let v = |o: &bianchi_cli::Output| serde_json::from_str::<Value>(&o.json).unwrap()["result"]["value_re"].as_f64().unwrap();
    assert!((v(&sl) - 2.0 * v(&psl)).abs() < 1e-12 * v(&sl));
}
