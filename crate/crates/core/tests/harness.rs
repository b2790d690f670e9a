use kinstab::drift::{DriftKind, DriftSpec};
use kinstab::harness::{
    collect_path_errors, report_csv, strong_error_experiment, summarize, summary_csv,
    ExperimentConfig, RateStatus,
};
use kinstab::kinetic::PhasePoint;
use kinstab::scheme::Quadrature;
use kinstab::Error;

fn config(drift: DriftSpec, paths: usize, threads: usize) -> ExperimentConfig {
    ExperimentConfig {
        alpha: 1.5,
        beta: 0.6,
        drift,
        n_list: vec![8, 16, 32, 64],
        n_fine: 1024,
        paths,
        moment: 2.0,
        seed: 42,
        z0: PhasePoint::new(vec![0.1], vec![-0.2]).unwrap(),
        threads,
        quad: Quadrature::Aligned,
    }
}

fn multiscale() -> DriftSpec {
    DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 12, 0).unwrap()
}

#[test]
fn zero_drift_is_flagged_exact() {
    let r = strong_error_experiment(&config(DriftSpec::zero(1), 20, 1)).unwrap();
    assert_eq!(r.status, RateStatus::DegenerateExact);
    assert!(r.rows.iter().all(|row| row.error <= 1e-12));
    assert!(r.status_line().starts_with("degenerate: exact"));
    assert!(summary_csv(&r)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("NaN,NaN,NaN,"));
}

#[test]
fn constant_drift_is_flagged_exact() {
    let r =
        strong_error_experiment(&config(DriftSpec::constant(vec![2.0]).unwrap(), 20, 1)).unwrap();
    assert!(r.is_degenerate());
    assert_eq!(r.drift_kind, DriftKind::Constant);
}

#[test]
fn lm_norm_grows_with_moment() {
    let cfg = config(multiscale(), 100, 1);
    let pe = collect_path_errors(&cfg).unwrap();
    let by_m: Vec<_> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&m| summarize(&cfg, &pe, m).unwrap())
        .collect();
    for k in 0..cfg.n_list.len() {
        assert!(by_m[0].rows[k].error <= by_m[1].rows[k].error);
        assert!(by_m[1].rows[k].error <= by_m[2].rows[k].error);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let one = strong_error_experiment(&config(multiscale(), 40, 1)).unwrap();
    let four = strong_error_experiment(&config(multiscale(), 40, 4)).unwrap();
    assert_eq!(one, four);
    assert_eq!(report_csv(&one), report_csv(&four));
    assert_eq!(summary_csv(&one), summary_csv(&four));
}

#[test]
fn report_is_consistent() {
    let r = strong_error_experiment(&config(multiscale(), 100, 2)).unwrap();
    assert!(r.rows.windows(2).all(|w| w[0].n < w[1].n));
    assert!(r
        .rows
        .iter()
        .all(|row| row.error > 0.0 && row.stderr > 0.0 && row.median > 0.0));
    assert!(!r.non_monotone());
    let (lo, hi) = r.slope_ci().unwrap();
    let s = r.slope().unwrap();
    assert!(lo <= s && s <= hi, "{lo} {s} {hi}");
    assert!((r.theoretical - 0.66).abs() < 1e-12);
    let rho = r.theoretical - 0.1;
    let expect = r
        .rows
        .iter()
        .map(|row| row.error * (row.n as f64).powf(rho))
        .fold(0.0, f64::max);
    assert!((r.xi_hat - expect).abs() <= 1e-15 * expect.max(1.0));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = config(multiscale(), 10, 1);
    c.n_list = vec![8, 24];
    assert!(matches!(
        c.validate(),
        Err(Error::GridMismatch { n: 24, .. })
    ));
    let mut c = config(multiscale(), 10, 1);
    c.n_list = vec![16, 8];
    assert!(c.validate().is_err());
    let mut c = config(multiscale(), 10, 1);
    c.n_list = vec![64, 256];
    assert!(c.validate().is_err(), "256 > 1024 / 8");
    let c = config(multiscale(), 1, 1);
    assert!(c.validate().is_err());
    let mut c = config(multiscale(), 10, 1);
    c.moment = 0.5;
    assert!(c.validate().is_err());
    let mut c = config(multiscale(), 10, 1);
    c.n_fine = 1000;
    assert!(c.validate().is_err());
    let mut c = config(multiscale(), 10, 1);
    c.quad = Quadrature::Fixed(0);
    assert!(c.validate().is_err());
}

#[test]
fn csv_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let r = strong_error_experiment(&config(multiscale(), 10, 1)).unwrap();
    let p = dir.path().join("rates.csv");
    kinstab::harness::write_csv(&r, &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("alpha,beta,drift_kind,n,n_fine,paths,moment,error,stderr,seed\n"));
    assert!(kinstab::harness::write_csv(&r, &dir.path().join("missing/rates.csv")).is_err());
}
