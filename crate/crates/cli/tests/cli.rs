use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphene-landau"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("LANDAU_THREADS").output().unwrap()
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn error_record(out: &Output) -> Value {
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    let line = err.lines().last().unwrap();
    serde_json::from_str(line).unwrap()
}

#[test]
fn spectrum_at_w_100() {
    let out = run(&["spectrum", "--z", "-100", "--n-max", "3"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["valley", "n", "s", "energy_epsB"]);
    assert_eq!(rows.len(), 2 * 9);
    assert_eq!(rows[0][..3], ["K", "0", "0"]);
    let e0: f64 = rows[0][3].parse().unwrap();
    assert!((e0 + 0.005).abs() < 1e-15);
    let k: Vec<f64> = rows[..9].iter().map(|r| r[3].parse().unwrap()).collect();
    let kp: Vec<f64> = rows[9..].iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(k.iter().zip(&kp).all(|(a, b)| a == &-b));
}

#[test]
fn hall_staircase_plateaus() {
    let out = run(&["hall", "--z", "-1000", "--mu-min", "-3", "--mu-max", "3", "--points", "6001"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["mu_epsB", "sigma_e2_over_h", "reduced"]);
    let reduced: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    for plateau in [0.5, 1.5, 2.5] {
        assert!(reduced.contains(&plateau) && reduced.contains(&-plateau), "{plateau}");
    }
    assert!(reduced.iter().all(|r| (2.0 * r).fract() == 0.0));
    assert!(reduced.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn json_has_provenance_and_edges() {
    let out = run(&["--format", "json", "hall", "--z", "-1000", "--mu-min", "0", "--mu-max", "1.5", "--points", "4"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["provenance"]["tool"], "graphene-landau");
    assert_eq!(v["provenance"]["arguments"]["command"], "hall");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    let edges = v["plateau_edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert_eq!(edges[0]["reduced_above"], 0.5);
}

#[test]
fn config_file_and_output_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.toml");
    let mut f = std::fs::File::create(&cfg).unwrap();
    writeln!(f, "# graphene at 10 T\nB_tesla = 10\nt_eV = 2.8\n").unwrap();
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("out{i}.csv"));
            let status = bin()
                .args(["--config", cfg.to_str().unwrap(), "--out", path.to_str().unwrap(), "spectrum", "--n-max", "4"])
                .env("LANDAU_THREADS", "2")
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let text = String::from_utf8(outs[0].clone()).unwrap();
    assert!(text.starts_with("valley,n,s,energy_epsB,energy_eV\n"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["spectrum"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_record(&out)["error"]["kind"], "usage");

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["perturb-check", "--z", "1", "--order", "x.y"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["--config", "/definitely/missing.toml", "spectrum"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_record(&out)["error"]["kind"], "config");
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "B_tesla = 1\nwidth = 3\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "spectrum"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = error_record(&out)["error"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("line 2"), "{msg}");
}

#[test]
fn numeric_failures_exit_two() {
    let out = run(&["hall", "--z", "1", "--mu-max", "1e9", "--points", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"]["kind"], "domain");
}

#[test]
fn perturbation_table_diagonal_vanishes() {
    let out = run(&["perturb-check", "--z", "-1000", "--n-max", "3", "--order", "all", "--diagonal"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 24 * 9);
    for r in rows {
        let (re, scale): (f64, f64) = (r[5].parse().unwrap(), r[7].parse().unwrap());
        assert!(re.abs() < 1e-12 * scale);
    }
}

#[test]
fn crossed_shift_is_rigid() {
    let out = run(&["crossed", "--z", "-3", "--e-over-vfb", "0.05", "--k", "0.4", "--n-max", "4"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&out);
    let shifts: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(shifts.iter().all(|s| *s == shifts[0]));
    let expect = 0.05 * (0.4 + 3.0 * 0.05 / 2.0);
    assert!((shifts[0] - expect).abs() < 1e-14);
}

#[test]
fn bands_and_free_dispersion() {
    let out = run(&["bands", "--per-segment", "10"]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&out).1.len(), 31);
    let out = run(&["free-dispersion", "--z", "-100", "--k-max", "2", "--points", "5"]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&out).1.len(), 5);
}

#[test]
fn validate_passes() {
    let out = run(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().filter(|l| l.contains(" PASS: ")).count(), 8);
}
