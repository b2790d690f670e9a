use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kinstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kinstab"))
        .args(args)
        .env_remove("KINSTAB_THREADS")
        .output()
        .expect("spawn kinstab")
}

fn small_rates(out: &Path, extra: &[&str]) -> Output {
    let out = out.to_str().unwrap();
    let mut args = vec![
        "rates",
        "--paths",
        "30",
        "--n-fine",
        "1024",
        "--n-list",
        "8,16,32,64",
        "--seed",
        "5",
        "--out",
        out,
    ];
    args.extend_from_slice(extra);
    kinstab(&args)
}

#[test]
fn config_errors_exit_two_with_one_line() {
    for args in [
        vec!["rates", "--alpha", "2.5", "--out", "x"],
        vec!["rates", "--alpha", "1.5", "--beta", "0.2", "--out", "x"],
        vec!["rates", "--n-list", "16,24", "--out", "x"],
        vec!["rates"],
        vec!["rates", "--bogus", "1"],
    ] {
        let o = kinstab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(err.starts_with("error[config]: "), "{err}");
    }
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha = 1.5\nwidth = 3\n").unwrap();
    let o = kinstab(&["rates", "--config", cfg.to_str().unwrap(), "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("`width`"));
}

#[test]
fn zero_drift_rates_report_exactness() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_rates(dir.path(), &["--drift", "zero"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("degenerate: exact"), "{stdout}");
    assert!(stdout.contains("theoretical_rate=0.6600"));
}

#[test]
fn rates_outputs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(small_rates(a.path(), &["--threads", "1"]).status.success());
    assert!(small_rates(b.path(), &["--threads", "3"]).status.success());
    for f in ["rates.csv", "summary.csv"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs");
    }
    let manifest = fs::read_to_string(a.path().join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed=5\n"));
    let summary = fs::read_to_string(a.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("slope,slope_lo,slope_hi,theoretical_rate,xi_hat,r_squared\n"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "# small run\nn-fine = 1024\nn_list = 8,16,32\npaths = 10\ndrift = separable\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = kinstab(&["rates", "--config", cfg.to_str().unwrap(), "--paths", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("rates.csv")).unwrap();
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("1.5,0.6,separable,8,1024,12,2,"));
}

#[test]
fn simulate_writes_coarse_and_reference_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = kinstab(&[
        "simulate",
        "--n-fine",
        "256",
        "--n-list",
        "8,16",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,i,t,x_0,v_0"));
    assert_eq!(lines.count(), 9 + 17 + 257);
}

#[test]
fn noise_diagnostics_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = kinstab(&[
        "diagnose-noise",
        "--alpha",
        "1.5",
        "--samples",
        "100000",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("diagnostics_noise.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("test,param,value,expected,tolerance,pass")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 10);
    for r in rows {
        assert!(r.ends_with(",true"), "{r}");
    }
}

#[test]
fn drift_diagnostics_all_pass() {
    for drift in ["separable", "multiscale"] {
        let dir = tempfile::tempdir().unwrap();
        let o = kinstab(&[
            "diagnose-drift",
            "--drift",
            drift,
            "--samples",
            "20000",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
        let csv = fs::read_to_string(dir.path().join("diagnostics_drift.csv")).unwrap();
        for r in csv.lines().skip(1) {
            assert!(r.ends_with(",true"), "{drift}: {r}");
        }
    }
}
