use std::process::Command;

use brody::commands::{run, Cli};
use clap::Parser;
use serde_json::Value;

fn records(args: &[&str]) -> Vec<Value> {
    let cli = Cli::try_parse_from(std::iter::once("brody").chain(args.iter().copied())).unwrap();
    let (mut out, mut log) = (Vec::new(), Vec::new());
    run(&cli, &mut out, &mut log).unwrap();
    String::from_utf8(out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn raw(args: &[&str]) -> Vec<u8> {
    let cli = Cli::try_parse_from(std::iter::once("brody").chain(args.iter().copied())).unwrap();
    let (mut out, mut log) = (Vec::new(), Vec::new());
    run(&cli, &mut out, &mut log).unwrap();
    out
}

fn exit_code(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_brody")).args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn constants_record() {
    let r = &records(&["constants"])[0];
    assert!((r["value"].as_f64().unwrap() - 0.6150198678198).abs() < 1e-9);
    assert!(r["error"].as_f64().unwrap() >= 0.0);
    assert_eq!(r["config"]["command"], "constants");
}

#[test]
fn eval_constant_is_zero() {
    let r = &records(&["eval", "constant", "--z", "0,0"])[0];
    assert_eq!(r["value"].as_f64().unwrap(), 0.0);
    assert_eq!(r["params"]["z"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn energy_identity_unit_disk() {
    let r = &records(&["energy", "identity", "--disk", "0,0,1"])[0];
    assert!((r["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!(r["error"].is_number());
    assert_eq!(r["region"]["disk"]["radius"], 1.0);
}

#[test]
fn negative_coordinates_parse() {
    let r = &records(&["sup", "exp_unit", "--square", "-2,-2,4", "--resolution", "0.05"])[0];
    assert!((r["value"].as_f64().unwrap() - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
}

#[test]
fn tiling_the_constant_glues_nine_tiles() {
    let recs = records(&["glue", "tile", "constant", "--eps", "1e-3", "--tau", "0.5", "--R", "32", "--window", "3"]);
    let tiles: Vec<_> = recs.iter().filter(|r| r["op"] == "glue_tile").collect();
    assert_eq!(tiles.len(), 9);
    assert!(tiles.iter().all(|r| r["value"] == "Glued"));
    let summary = recs.iter().find(|r| r["op"] == "glue_summary").unwrap();
    assert_eq!(summary["params"]["bumps"], 9);
}

#[test]
fn glue_once_saves_a_reloadable_curve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let r = &records(&["glue", "once", "exp_quarter", "--p", "-40,0", "--R", "6", "--save", p])[0];
    assert!(r["value"].as_f64().unwrap() < 1.0 / 96.0);
    // The saved document stores the normalization explicitly; the corpus entry recomputes it.
    let direct = records(&["eval", "glued_exp", "--z", "-38,1"])[0]["value"].as_f64().unwrap();
    let saved = records(&["eval", p, "--z", "-38,1"])[0]["value"].as_f64().unwrap();
    assert!((direct - saved).abs() <= 1e-14 * direct, "{direct} {saved}");
}

#[test]
fn field_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let p = path.to_str().unwrap();
    let r = &records(&["field", "identity", "--square", "-1,-1,2", "--step", "0.5", "--csv", p])[0];
    assert_eq!(r["params"]["points"], 25);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,value"));
    assert_eq!(lines.count(), 25);
    assert!((r["value"].as_f64().unwrap() - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
}

#[test]
fn output_is_independent_of_threads() {
    for args in [
        vec!["energy", "wp_hex", "--square", "-1,-1,3"],
        vec!["nondeg", "exp_quarter", "--r", "2", "--half-widths", "4,8"],
        vec!["dist", "identity", "exp_unit", "--n-max", "4"],
    ] {
        let mut one = vec!["--threads", "1"];
        one.extend(&args);
        let mut four = vec!["--threads", "4"];
        four.extend(&args);
        assert_eq!(raw(&one), raw(&four), "{args:?}");
    }
}

#[test]
fn rho_modes() {
    let e = &records(&["rho", "wp_hex", "--elliptic", "--cell", "2"])[0];
    assert!((e["value"].as_f64().unwrap() - 0.1414226).abs() < 1e-6);
    let n = &records(&["rho", "constant", "--nsa", "8"])[0];
    assert_eq!(n["value"].as_f64().unwrap(), 0.0);
    let d = records(&["rho", "identity", "--sizes", "1,2"]);
    assert_eq!(d.len(), 2);
    assert!(d[0]["value"].as_f64().unwrap() > d[1]["value"].as_f64().unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["eval", "constant", "--z", "0,0"]), 0);
    assert_eq!(exit_code(&["eval", "no_such_curve", "--z", "0,0"]), 2);
    assert_eq!(exit_code(&["energy", "identity", "--disk", "0,0,-1"]), 2);
    // Gluing onto a curve that is not small on the disk violates the precondition.
    assert_eq!(exit_code(&["glue", "once", "identity", "--p", "0,0", "--R", "6"]), 2);
    let starved = ["--quad-order", "2", "--max-depth", "1", "--rel-tol", "1e-14", "--abs-tol", "0"];
    assert_eq!(exit_code(&[&starved[..], &["energy", "glued_exp", "--disk", "-40,0,12"]].concat()), 3);
    assert_eq!(exit_code(&["acceptance", "--only", "8", "--seed", "1"]), 0);
}

#[test]
fn corpus_listing() {
    let recs = records(&["corpus"]);
    assert_eq!(recs.len(), brody::corpus::CORPUS.len());
    assert!(recs.iter().all(|r| r["params"]["type"].is_string()));
}
