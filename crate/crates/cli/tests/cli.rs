use std::process::{Command, Output};

fn minlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minlen")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<f64>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

const SWANSON_CLEAN: [&str; 8] = ["--model", "swanson", "--lambda", "0.2", "--delta", "0.2", "--beta", "0.5"];

#[test]
fn spectrum_defaults() {
    let o = minlen(&["spectrum", "--levels", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "n,E_closed,E_q,E_p_re,E_p_im,err_q,err_p");
    let r = rows(&o);
    assert_eq!(r.len(), 4);
    assert!((r[0][1] - 0.65062461).abs() < 5e-9);
    for row in &r {
        assert!(row[5] < 1e-6 && row[6] < 1e-5, "{row:?}");
    }
}

#[test]
fn spectrum_swanson_clean_point() {
    let mut args = SWANSON_CLEAN.to_vec();
    args.extend(["spectrum", "--levels", "2"]);
    let r = rows(&minlen(&args));
    assert!((r[0][1] - 0.45).abs() < 1e-15);
}

#[test]
fn zero_levels_is_header_only() {
    let o = minlen(&["spectrum", "--levels", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,E_closed,E_q,E_p_re,E_p_im,err_q,err_p\n");
}

#[test]
fn sweep_crosses_critical_beta() {
    let mut args = SWANSON_CLEAN[..6].to_vec();
    args.extend(["sweep", "--param", "beta", "--from", "1.5", "--to", "2.5", "--steps", "11", "--levels", "3"]);
    let o = minlen(&args);
    assert_eq!(o.status.code(), Some(0));
    let header = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(header, "beta,E_0_re,E_0_im,E_1_re,E_1_im,E_2_re,E_2_im,beta_c");
    for r in rows(&o) {
        let beta = r[0];
        let worst_im = (0..3).map(|k| r[2 + 2 * k].abs() / r[1 + 2 * k].abs().max(1.0)).fold(0.0, f64::max);
        if beta <= 2.0 + 1e-12 {
            assert!(worst_im <= 1e-7, "beta={beta}: {worst_im}");
        } else {
            assert!(worst_im > 1e-3, "beta={beta}: {worst_im}");
        }
        assert!((r[7] - 2.0).abs() < 1e-12);
    }
}

#[test]
fn displaced_numeric_sweep_stays_real() {
    let o = minlen(&[
        "--grid", "400", "sweep", "--param", "beta", "--from", "0.05", "--to", "0.3", "--steps", "3", "--levels", "3",
        "--source", "p-space",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for r in rows(&o) {
        for k in 0..3 {
            assert!(r[2 + 2 * k].abs() <= 1e-7 * r[1 + 2 * k].abs(), "{r:?}");
        }
        assert!(r[7].is_nan());
    }
}

#[test]
fn degenerate_sweep_is_a_usage_error() {
    assert_eq!(minlen(&["sweep", "--param", "beta", "--from", "1", "--to", "1"]).status.code(), Some(2));
    assert_eq!(minlen(&["sweep", "--param", "beta", "--from", "0.1", "--to", "0.2", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(minlen(&["sweep", "--param", "delta", "--from", "0.1", "--to", "0.2"]).status.code(), Some(2));
}

#[test]
fn wavefunction_columns() {
    let o = minlen(&["--lambda", "0", "--beta", "0.25", "wavefunction", "--n", "0", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "p,re_psi,im_psi,eta_of_p,q_of_p");
    let r = rows(&o);
    for row in &r {
        assert_eq!(row[2], 0.0);
        assert!(row[1] > 0.0);
    }
    // sample 7 of 10 sits at q = π/2, p = 2
    assert!((r[7][0] - 2.0).abs() < 1e-14);
    assert!((r[7][4] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn second_state_has_two_nodes() {
    let r = rows(&minlen(&["wavefunction", "--n", "2", "--samples", "400"]));
    let changes = r.windows(2).filter(|w| w[0][1].signum() != w[1][1].signum()).count();
    assert_eq!(changes, 2);
}

#[test]
fn verify_list_and_defaults() {
    let o = minlen(&["verify", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "commutator\npseudo_hermiticity\ngram\node_residual\ngamma_independence\n");

    let o = minlen(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let records: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 5);
    for r in &records {
        assert_eq!(r["pass"], true);
        assert!(r["params"].is_object() && r["grid"].is_object());
    }
}

#[test]
fn verify_with_wrong_metric_fails() {
    let o = minlen(&["--grid", "1000", "verify", "--metric-override", "swanson"]);
    assert_eq!(o.status.code(), Some(1));
    // all records are still emitted
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model": "swanson", "lambda": 0.2, "delta": 0.2, "beta": 0.5, "levels": 1}"#).unwrap();
    let path = cfg.to_str().unwrap();
    let r = rows(&minlen(&["--config", path, "spectrum"]));
    assert_eq!(r.len(), 1);
    assert!((r[0][1] - 0.45).abs() < 1e-15);
    // flag wins over file
    let r = rows(&minlen(&["--config", path, "--levels", "2", "--beta", "0.0001", "spectrum"]));
    assert_eq!(r.len(), 2);
    assert!((r[0][1] - 0.45).abs() > 1e-3);

    std::fs::write(&cfg, r#"{"model": "swanson", "colour": 3}"#).unwrap();
    let o = minlen(&["--config", path, "spectrum"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn invalid_parameters_exit_2() {
    assert_eq!(minlen(&["--beta", "-1", "spectrum"]).status.code(), Some(2));
    assert_eq!(minlen(&["--model", "swanson", "--lambda", "0.5", "--delta", "0.5", "spectrum"]).status.code(), Some(2));
    assert_eq!(minlen(&["--model", "displaced", "--delta", "0.1", "spectrum"]).status.code(), Some(2));
}

#[test]
fn complex_regime_wavefunction_is_a_numeric_failure() {
    let o = minlen(&["--model", "swanson", "--lambda", "0.2", "--delta", "0.2", "--beta", "2.5", "wavefunction"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_file_json_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = minlen(&["--format", "json", "--output", p.to_str().unwrap(), "spectrum", "--levels", "3"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[0]["n"], 0);
    assert!((v[0]["E_closed"].as_f64().unwrap() - 0.65062461).abs() < 5e-9);
}

#[test]
fn numbers_round_trip() {
    let text = stdout(&minlen(&["spectrum", "--levels", "1"]));
    let field = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().to_string();
    let x: f64 = field.parse().unwrap();
    assert_eq!(format!("{x:.16e}"), field);
    let digits = field.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(digits.len(), 17);
}
