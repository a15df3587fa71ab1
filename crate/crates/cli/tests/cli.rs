use std::process::{Command, Output};

use roundlab_cli::parse_records;

fn roundlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roundlab"))
        .args(args)
        .env_remove("ROUNDLAB_SEED")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<roundlab_cli::Record> {
    parse_records(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn address_without_rounds_needs_p_queries() {
    let out = roundlab(&["address", "--p", "3", "--rounds", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let min = recs.iter().find(|r| r.experiment == "address").unwrap();
    assert_eq!(min.get("min_queries").and_then(|v| v.as_u64()), Some(3));
}

#[test]
fn graphs_report_gap_fields() {
    let out = roundlab(&[
        "graphs", "--n", "1000", "--k", "2", "--trials", "300", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let gap = recs.iter().find(|r| r.experiment == "graphs").unwrap();
    for key in ["acc_yes", "acc_no", "gap", "ci"] {
        assert!(gap.f64(key).is_some(), "missing {key}");
    }
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(roundlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        roundlab(&["address", "--p", "three"]).status.code(),
        Some(1)
    );
    assert_eq!(roundlab(&["address", "--p", "4"]).status.code(), Some(1));
    assert_eq!(roundlab(&["graphs", "--k", "0"]).status.code(), Some(1));
    assert_eq!(roundlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["codes", "--trials", "2000", "--seed", "5"];
    let (a, b) = (roundlab(&args), roundlab(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = roundlab(&["codes", "--trials", "2000", "--seed", "6"]);
    assert_ne!(a.stdout, other.stdout);

    let from_env = Command::new(env!("CARGO_BIN_EXE_roundlab"))
        .args(["codes", "--trials", "2000"])
        .env("ROUNDLAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
}

#[test]
fn records_go_to_the_out_file() {
    let path = std::env::temp_dir().join(format!("roundlab-{}.records", std::process::id()));
    let out = roundlab(&[
        "comm",
        "--k",
        "1",
        "--trials",
        "50",
        "--m",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let recs = parse_records(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    let comm = recs.iter().find(|r| r.experiment == "comm").unwrap();
    assert_eq!(comm.get("output_errors").and_then(|v| v.as_u64()), Some(0));
}

#[test]
fn small_runs_of_every_experiment() {
    for args in [
        vec!["transfer", "--trials", "20"],
        vec!["rounds", "--n", "6", "--k", "1", "--trials", "50"],
        vec!["codes", "--p", "3", "--n", "3", "--trials", "100"],
    ] {
        let out = roundlab(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!records(&out).is_empty());
    }
}

#[test]
fn suite_passes_with_seed_seven() {
    let out = roundlab(&["suite", "--seed", "7"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(0), "{stderr}");
    assert_eq!(
        stderr
            .lines()
            .filter(|l| l.starts_with("PASS criterion"))
            .count(),
        11
    );
}
