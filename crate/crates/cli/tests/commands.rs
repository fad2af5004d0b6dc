use std::fs;
use std::process::Command;

use gfg_cli::{run, TRUSTED_GFG_WARNING};
use gfg_core::format::{parse_automaton, parse_graph};
use gfg_core::reduction::{build_cover_automaton, min_vertex_cover_bruteforce};
use gfg_core::report::RunReport;
use gfg_core::{gfg_equivalent, Kind};

fn gfg(args: &[&str]) -> gfg_cli::Invocation {
    run(std::iter::once("gfg").chain(args.iter().copied()))
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gfg")).args(args).output().unwrap()
}

#[test]
fn binary_accepts_stop_word() {
    let out = binary(&["accepts", "--aut", "tests/data/b_g2.txt", "--word", "♮ v0 ; v0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = RunReport::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.verdict, "ACCEPT");
}

#[test]
fn binary_path_covers_are_equivalent() {
    let out = binary(&[
        "gfg-equiv",
        "--candidate",
        "tests/data/path5_c1.txt",
        "--reference",
        "tests/data/path5_c2.txt",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = RunReport::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.verdict, "EQUIVALENT");
    assert!(out.stderr.is_empty(), "deterministic reference needs no warning");
}

#[test]
fn binary_one_state_search_is_exhausted() {
    let out = binary(&["min-search", "--ref", "tests/data/inf_a.txt", "--k", "1", "--measure", "states", "--deterministic-only"]);
    assert_eq!(out.status.code(), Some(1));
    let report = RunReport::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.verdict, "NONE");
}

#[test]
fn binary_rejects_unknown_subcommand() {
    let out = binary(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("Usage"));
}

#[test]
fn help_exits_zero() {
    let out = gfg(&["--help"]);
    assert_eq!(out.exit_code, 0);
    assert!(out.stdout.contains("min-search"));
}

#[test]
fn reports_round_trip_through_text_and_json() {
    let text = gfg(&["check-structure", "--aut", "tests/data/path5_c1.txt", "--graph", "tests/data/path5.txt"]);
    let report = text.report.clone().unwrap();
    assert_eq!(RunReport::parse(&text.stdout).unwrap(), report);
    let json = gfg(&["--json", "check-structure", "--aut", "tests/data/path5_c1.txt", "--graph", "tests/data/path5.txt"]);
    let parsed: RunReport = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(parsed, report);
}

#[test]
fn input_digests_are_sha256_of_the_file() {
    let out = gfg(&["validate", "--aut", "tests/data/b_g2.txt"]);
    let report = out.report.unwrap();
    let bytes = fs::read("tests/data/b_g2.txt").unwrap();
    use sha2::Digest;
    let expected = format!("{:x}", sha2::Sha256::digest(&bytes));
    assert_eq!(report.inputs[0].sha256, expected);
    assert_eq!(report.inputs[0].name, "aut");
}

#[test]
fn trusted_warning_goes_to_both_channels() {
    let out = gfg(&["gfg-equiv", "--candidate", "tests/data/inf_a.txt", "--reference", "tests/data/fin_b.txt"]);
    assert!(out.stderr.contains(TRUSTED_GFG_WARNING));
    assert_eq!(out.report.unwrap().warnings, vec![TRUSTED_GFG_WARNING.to_string()]);

    let out = gfg(&["gfg-equiv", "--candidate", "tests/data/fin_b.txt", "--reference", "tests/data/inf_a.txt"]);
    assert!(out.stderr.is_empty());
    assert!(out.report.unwrap().warnings.is_empty());
}

#[test]
fn gen_reduction_writes_the_cover_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aut.txt");
    let out = gfg(&["gen-reduction", "--graph", "tests/data/path5.txt", "--out", path.to_str().unwrap()]);
    assert_eq!(out.exit_code, 0);
    let written = parse_automaton(&fs::read_to_string(&path).unwrap()).unwrap();
    let g = parse_graph(&fs::read_to_string("tests/data/path5.txt").unwrap()).unwrap();
    let cover = min_vertex_cover_bruteforce(&g).unwrap();
    assert_eq!(written, build_cover_automaton(&g, &cover, Kind::Buchi).unwrap());
}

#[test]
fn found_automaton_is_equivalent_to_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.txt");
    let out = gfg(&[
        "min-search",
        "--ref",
        "tests/data/inf_a.txt",
        "--k",
        "2",
        "--deterministic-only",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.exit_code, 0);
    let found = parse_automaton(&fs::read_to_string(&path).unwrap()).unwrap();
    let reference = parse_automaton(&fs::read_to_string("tests/data/inf_a.txt").unwrap()).unwrap();
    assert!(found.state_count() <= 2);
    assert!(gfg_equivalent(&found, &reference).unwrap());
}

#[test]
fn timings_are_opt_in() {
    let args = ["min-search", "--ref", "tests/data/inf_a.txt", "--k", "1"];
    let plain = gfg(&args).report.unwrap();
    assert!(plain.detail_value("elapsed-ms").is_none());
    let timed = gfg(&[&["--timings"][..], &args[..]].concat()).report.unwrap();
    assert!(timed.detail_value("elapsed-ms").is_some());
}

#[test]
fn unwritable_output_is_an_error() {
    let out = gfg(&["gen-reduction", "--graph", "tests/data/g2.txt", "--out", "/nonexistent/dir/aut.txt"]);
    assert_eq!(out.exit_code, 2);
    assert_eq!(out.report.unwrap().verdict, "ERROR");
}
