use std::path::PathBuf;
use std::process::{Command, Output};

use cho_spectra::hamiltonian::{market, HamiltonianMatrix, OscillatorConfig, SparsityPattern};
use cho_spectra::linalg::{relative_max_diff, SymmetricOperator};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cho-spectra")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cho-spectra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn eigenvalues(v: &serde_json::Value) -> Vec<f64> {
    v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn free_box_levels() {
    let o = cli(&["eigs", "--d", "1", "--N", "40", "--lambda", "0", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(eigenvalues(&json(&o)), [1.0, 4.0, 9.0, 16.0, 25.0]);
}

#[test]
fn lanczos_matches_dense() {
    let base = ["eigs", "--d", "2", "--N", "10", "--lambda", "1", "--k", "3"];
    let dense = eigenvalues(&json(&cli(&base)));
    let o = cli(&[&base[..], &["--solver", "lanczos"]].concat());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["solver_metadata"]["solver"], "lanczos");
    for (a, b) in eigenvalues(&v).iter().zip(&dense) {
        assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }
}

#[test]
fn unconfined_ground_level() {
    let o = cli(&["eigs", "--d", "1", "--N", "200", "--lambda", "100", "--k", "1"]);
    let e = eigenvalues(&json(&o))[0];
    assert!((e - 50.0).abs() / 50.0 < 1e-3);
}

#[test]
fn json_is_deterministic_apart_from_timestamp() {
    let args = ["eigs", "--d", "3", "--N", "5", "--lambda", "0.7", "--solver", "lanczos", "--k", "4", "--seed", "17"];
    let strip = |o: Output| {
        let mut v = json(&o);
        assert!(v.as_object_mut().unwrap().remove("timestamp").is_some());
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(cli(&args)), strip(cli(&args)));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cli(args).status.code();
    assert_eq!(code(&["eigs", "--N", "4", "--lambda", "1"]), Some(0));
    assert_eq!(code(&["eigs", "--N", "4", "--lambda", "-1"]), Some(2));
    assert_eq!(code(&["eigs", "--N", "4", "--lambda", "1", "--physical", "hbar=1,m=1,L=1,omega=1"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["perturb", "--d", "2", "--N", "6", "--lambda", "1"]), Some(2));
    assert_eq!(code(&["eigs", "--d", "4", "--N", "9", "--lambda", "1"]), Some(3));
    assert_eq!(code(&["eigs", "--d", "30", "--N", "30", "--lambda", "1", "--solver", "lanczos"]), Some(3));
    assert_eq!(
        code(&["eigs", "--d", "2", "--N", "10", "--lambda", "1", "--solver", "lanczos", "--tol", "1e-300"]),
        Some(4)
    );
    assert_eq!(code(&["verify", "--suite", "algebra"]), Some(0));
}

#[test]
fn perturb_table() {
    let o = cli(&["perturb", "--N", "60", "--lambda", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,E0,E1,E2,E3,series,dense,diff"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0][7].abs() < 1e-4);

    let free = stdout(&cli(&["perturb", "--N", "20", "--lambda", "0"]));
    for (r, line) in free.lines().skip(1).enumerate() {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let exact = ((r + 1) * (r + 1)) as f64;
        assert_eq!((cols[5], cols[6], cols[7]), (exact, exact, 0.0));
    }
}

#[test]
fn converge_is_monotone() {
    for (d, lambda, ns) in [("1", "2", "4,8,16,32"), ("2", "1", "4,8,16"), ("1", "0", "4,8")] {
        let o = cli(&["converge", "--d", d, "--N", ns, "--lambda", lambda]);
        assert_eq!(o.status.code(), Some(0));
        let ground: Vec<f64> =
            stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert!(ground.windows(2).all(|w| w[1] <= w[0]), "{ground:?}");
        if lambda == "0" {
            assert!(ground.iter().all(|&e| e == d.parse::<f64>().unwrap()));
        }
    }
}

#[test]
fn export_file_round_trip() {
    let path = scratch("h.mtx");
    let o = cli(&["export", "--d", "2", "--N", "4", "--lambda", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(market::HEADER));

    let cfg = OscillatorConfig::new(2, 4, 1.0).unwrap();
    let pattern = SparsityPattern::of(&cfg);
    let back = market::read(text.as_bytes()).unwrap();
    assert_eq!(back.nnz_upper(), pattern.lower_nnz());

    let h = HamiltonianMatrix::assemble_sparse(&cfg).unwrap();
    let v: Vec<f64> = (0..cfg.dim()).map(|i| (i as f64 * 0.37).sin()).collect();
    assert!(relative_max_diff(&h.matvec(&v).unwrap(), &back.matvec(&v).unwrap()) <= 1e-13);

    let free = cli(&["export", "--d", "2", "--N", "4", "--lambda", "0"]);
    let body = stdout(&free);
    let entries: Vec<&str> = body.lines().filter(|l| !l.starts_with('%')).skip(1).collect();
    assert_eq!(entries.len(), 16);
    assert!(entries.iter().all(|l| {
        let f: Vec<&str> = l.split_whitespace().collect();
        f[0] == f[1]
    }));
    std::fs::remove_file(path).ok();
}

#[test]
fn physical_units_are_reported() {
    let o = cli(&["eigs", "--N", "200", "--physical", "hbar=1,m=1,L=1,omega=100", "--k", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("epsilon="), "{err}");
    assert!(err.contains("physical"), "{err}");
}
