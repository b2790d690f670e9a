//! Strong-error Monte Carlo, log-log rate regression and CSV output.
//!
//! Path `p` always draws its noise from `RngStream::new(seed, p)`, and
//! per-path errors are reduced in path order after all workers finish, so
//! every number in a report is independent of the worker count.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::drift::{DriftKind, DriftSpec};
use crate::error::{Error, Result};
use crate::kinetic::{build_master_path, PhasePoint};
use crate::rng::RngStream;
use crate::scheme::{run_euler, run_reference, sup_node_error, Quadrature, SchemeConfig};
use crate::stable::StableParams;
use crate::stats::{self, LinearFit};

/// `ε` used for the almost-sure normalized-error diagnostic.
pub const XI_EPSILON: f64 = 0.05;
/// Errors at or below this level are treated as exact (zero or constant drift).
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Bootstrap resamples for standard errors and the slope interval.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Stream index reserved for bootstrap resampling.
const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// `ρ(α, β) = 1/2 + min(β / (α(1+α)), 1/2)`.
///
/// Only `α ∈ (1, 2)` and `β > 0` are checked here, so the cap can be
/// exercised; under the admissible `β` range the cap is never active because
/// `β/(α(1+α)) < (α-1)/α < 1/2`.
pub fn theoretical_rate(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::param("alpha", format!("{alpha} is outside (1, 2)")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param("beta", format!("{beta} must be positive")));
    }
    Ok(0.5 + (beta / (alpha * (1.0 + alpha))).min(0.5))
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub beta: f64,
    pub drift: DriftSpec,
    pub n_list: Vec<usize>,
    pub n_fine: usize,
    pub paths: usize,
    /// Order `m` of the `L_m(Ω)` norm.
    pub moment: f64,
    pub seed: u64,
    pub z0: PhasePoint,
    /// Worker count; `0` means available parallelism.
    pub threads: usize,
    pub quad: Quadrature,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        StableParams::new(self.alpha, self.z0.dim())?;
        if self.drift.dim() != self.z0.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.z0.dim(),
                got: self.drift.dim(),
            });
        }
        if self.n_fine < 2 || !self.n_fine.is_power_of_two() {
            return Err(Error::param(
                "n_fine",
                format!("{} must be a power of two ≥ 2", self.n_fine),
            ));
        }
        if self.n_list.is_empty() {
            return Err(Error::param(
                "n_list",
                "at least one coarse grid is required",
            ));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("n_list", "must be strictly increasing"));
        }
        for &n in &self.n_list {
            if n == 0 || !self.n_fine.is_multiple_of(n) {
                return Err(Error::GridMismatch {
                    n,
                    n_fine: self.n_fine,
                });
            }
        }
        let max_n = *self.n_list.last().expect("non-empty");
        if max_n * 8 > self.n_fine {
            return Err(Error::param(
                "n_list",
                format!(
                    "largest coarse grid {max_n} exceeds n_fine / 8 = {}",
                    self.n_fine / 8
                ),
            ));
        }
        if self.paths < 2 {
            return Err(Error::param("paths", format!("{} < 2", self.paths)));
        }
        if !(self.moment >= 1.0 && self.moment.is_finite()) {
            return Err(Error::param(
                "moment",
                format!("{} must be ≥ 1", self.moment),
            ));
        }
        if let Quadrature::Fixed(0) = self.quad {
            return Err(Error::param("quad", "quadrature needs at least one node"));
        }
        Ok(())
    }
}

/// Per-path sup-node errors, `errors[p][k]` for path `p` and grid `n_list[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathErrors {
    pub n_list: Vec<usize>,
    pub errors: Vec<Vec<f64>>,
}

impl PathErrors {
    pub fn paths(&self) -> usize {
        self.errors.len()
    }

    /// `(mean_p e_{p,k}^m)^{1/m}` over the paths listed in `idx`.
    fn lm_norm(&self, k: usize, moment: f64, idx: impl Iterator<Item = usize>) -> f64 {
        let (mut acc, mut count) = (0.0, 0usize);
        for p in idx {
            acc += self.errors[p][k].powf(moment);
            count += 1;
        }
        (acc / count as f64).powf(1.0 / moment)
    }

    /// `ê_m(n_k)` over all paths.
    pub fn strong_error(&self, k: usize, moment: f64) -> f64 {
        self.lm_norm(k, moment, 0..self.paths())
    }
}

fn path_errors(cfg: &ExperimentConfig, params: &StableParams, p: usize) -> Result<Vec<f64>> {
    let mut rng = RngStream::new(cfg.seed, p as u64);
    let master = build_master_path(cfg.n_fine, params, &mut rng)?;
    let reference = run_reference(&master, &cfg.drift, &cfg.z0, cfg.quad)?;
    cfg.n_list
        .iter()
        .map(|&n| {
            let sc = SchemeConfig::with_quadrature(n, cfg.quad, cfg.n_fine);
            let coarse = run_euler(&sc, &master, &cfg.drift, &cfg.z0)?;
            sup_node_error(&reference, &coarse)
        })
        .collect()
}

pub fn resolve_threads(threads: usize) -> usize {
    if threads > 0 {
        threads
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Simulates every path and returns the raw error matrix.
pub fn collect_path_errors(cfg: &ExperimentConfig) -> Result<PathErrors> {
    cfg.validate()?;
    let params = StableParams::new(cfg.alpha, cfg.z0.dim())?;
    let errors = run_paths(cfg, &params)?;
    Ok(PathErrors {
        n_list: cfg.n_list.clone(),
        errors,
    })
}

#[cfg(feature = "parallel")]
fn run_paths(cfg: &ExperimentConfig, params: &StableParams) -> Result<Vec<Vec<f64>>> {
    use rayon::prelude::*;
    let threads = resolve_threads(cfg.threads);
    if threads == 1 {
        return (0..cfg.paths)
            .map(|p| path_errors(cfg, params, p))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param("threads", e.to_string()))?;
    pool.install(|| {
        (0..cfg.paths)
            .into_par_iter()
            .map(|p| path_errors(cfg, params, p))
            .collect()
    })
}

#[cfg(not(feature = "parallel"))]
fn run_paths(cfg: &ExperimentConfig, params: &StableParams) -> Result<Vec<Vec<f64>>> {
    (0..cfg.paths)
        .map(|p| path_errors(cfg, params, p))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRow {
    pub n: usize,
    /// `ê_m(n)`.
    pub error: f64,
    /// Bootstrap standard error of `ê_m(n)`.
    pub stderr: f64,
    /// Median of the per-path errors, exposing tail sensitivity.
    pub median: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateStatus {
    Fitted {
        fit: LinearFit,
        slope_lo: f64,
        slope_hi: f64,
    },
    /// Every error vanishes up to rounding: the scheme is exact for this drift.
    DegenerateExact,
    /// Too few grids to fit a line.
    Insufficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    pub alpha: f64,
    pub beta: f64,
    pub drift_kind: DriftKind,
    pub n_fine: usize,
    pub paths: usize,
    pub moment: f64,
    pub seed: u64,
    pub rows: Vec<RateRow>,
    pub status: RateStatus,
    pub theoretical: f64,
    /// `max_n ê(n) n^{ρ - 2ε}`.
    pub xi_hat: f64,
    /// Number of increases of `ê` along `n_list`.
    pub inversions: usize,
}

impl RateReport {
    pub fn slope(&self) -> Option<f64> {
        match self.status {
            RateStatus::Fitted { fit, .. } => Some(fit.slope),
            _ => None,
        }
    }

    pub fn r_squared(&self) -> Option<f64> {
        match self.status {
            RateStatus::Fitted { fit, .. } => Some(fit.r_squared),
            _ => None,
        }
    }

    pub fn slope_ci(&self) -> Option<(f64, f64)> {
        match self.status {
            RateStatus::Fitted {
                slope_lo, slope_hi, ..
            } => Some((slope_lo, slope_hi)),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.status == RateStatus::DegenerateExact
    }

    /// More than one increase of `ê` along `n_list`.
    pub fn non_monotone(&self) -> bool {
        self.inversions > 1
    }

    /// One-line status for logs.
    pub fn status_line(&self) -> String {
        match self.status {
            RateStatus::Fitted {
                fit,
                slope_lo,
                slope_hi,
            } => format!(
                "slope={:.4} ci=[{:.4},{:.4}] r2={:.4} theoretical={:.4} xi_hat={:.4}{}",
                fit.slope,
                slope_lo,
                slope_hi,
                fit.r_squared,
                self.theoretical,
                self.xi_hat,
                if self.non_monotone() {
                    " non-monotone"
                } else {
                    ""
                }
            ),
            RateStatus::DegenerateExact => {
                format!("degenerate: exact (theoretical={:.4})", self.theoretical)
            }
            RateStatus::Insufficient => format!(
                "insufficient grids for a fit (theoretical={:.4})",
                self.theoretical
            ),
        }
    }
}

/// OLS of `-log ê` against `log n`; the slope is the observed order.
pub fn fit_rate(rows: &[(usize, f64)]) -> Result<LinearFit> {
    if rows.len() < 3 {
        return Err(Error::Degenerate(format!(
            "need at least 3 rows, got {}",
            rows.len()
        )));
    }
    if let Some((n, e)) = rows.iter().find(|(_, e)| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Degenerate(format!(
            "error {e} at n = {n} is not positive"
        )));
    }
    let x: Vec<f64> = rows.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|(_, e)| -e.ln()).collect();
    stats::ols(&x, &y)
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Aggregates a raw error matrix into a report for `L_m` order `moment`.
pub fn summarize(cfg: &ExperimentConfig, pe: &PathErrors, moment: f64) -> Result<RateReport> {
    let theoretical = theoretical_rate(cfg.alpha, cfg.beta)?;
    let k_count = pe.n_list.len();
    let paths = pe.paths();
    if paths < 2 {
        return Err(Error::param("paths", format!("{paths} < 2")));
    }

    let point: Vec<f64> = (0..k_count).map(|k| pe.strong_error(k, moment)).collect();

    let mut rng = RngStream::new(cfg.seed, BOOTSTRAP_STREAM);
    let mut boot_err = vec![Vec::with_capacity(BOOTSTRAP_RESAMPLES); k_count];
    let mut boot_slope = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut idx = vec![0usize; paths];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for i in idx.iter_mut() {
            *i = ((rng.open01() * paths as f64) as usize).min(paths - 1);
        }
        let e: Vec<f64> = (0..k_count)
            .map(|k| pe.lm_norm(k, moment, idx.iter().copied()))
            .collect();
        for (b, v) in boot_err.iter_mut().zip(&e) {
            b.push(*v);
        }
        let rows: Vec<(usize, f64)> = pe.n_list.iter().copied().zip(e).collect();
        if let Ok(f) = fit_rate(&rows) {
            boot_slope.push(f.slope);
        }
    }

    let rows: Vec<RateRow> = (0..k_count)
        .map(|k| {
            let b = &boot_err[k];
            let mean = b.iter().sum::<f64>() / b.len() as f64;
            let var = b.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b.len() - 1) as f64;
            let col: Vec<f64> = pe.errors.iter().map(|r| r[k]).collect();
            RateRow {
                n: pe.n_list[k],
                error: point[k],
                stderr: var.sqrt(),
                median: stats::median(&col).unwrap_or(f64::NAN),
            }
        })
        .collect();

    let status = if point.iter().all(|e| *e <= EXACT_TOLERANCE) {
        RateStatus::DegenerateExact
    } else if k_count < 3 {
        RateStatus::Insufficient
    } else {
        let fit = fit_rate(
            &pe.n_list
                .iter()
                .copied()
                .zip(point.iter().copied())
                .collect::<Vec<_>>(),
        )?;
        boot_slope.sort_by(f64::total_cmp);
        let (slope_lo, slope_hi) = if boot_slope.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (
                percentile(&boot_slope, 0.025),
                percentile(&boot_slope, 0.975),
            )
        };
        RateStatus::Fitted {
            fit,
            slope_lo,
            slope_hi,
        }
    };

    let xi_hat = rows
        .iter()
        .map(|r| r.error * (r.n as f64).powf(theoretical - 2.0 * XI_EPSILON))
        .fold(0.0, f64::max);
    let inversions = point.windows(2).filter(|w| w[1] > w[0]).count();

    Ok(RateReport {
        alpha: cfg.alpha,
        beta: cfg.beta,
        drift_kind: cfg.drift.kind(),
        n_fine: cfg.n_fine,
        paths,
        moment,
        seed: cfg.seed,
        rows,
        status,
        theoretical,
        xi_hat,
        inversions,
    })
}

/// Runs the full experiment: simulate every path, then summarize at `cfg.moment`.
pub fn strong_error_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    let pe = collect_path_errors(cfg)?;
    summarize(cfg, &pe, cfg.moment)
}

pub const REPORT_HEADER: &str = "alpha,beta,drift_kind,n,n_fine,paths,moment,error,stderr,seed";
pub const SUMMARY_HEADER: &str = "slope,slope_lo,slope_hi,theoretical_rate,xi_hat,r_squared";
pub const DIAGNOSTICS_HEADER: &str = "test,param,value,expected,tolerance,pass";

/// Report CSV body: header plus one row per coarse grid.
pub fn report_csv(report: &RateReport) -> String {
    let mut s = String::new();
    s.push_str(REPORT_HEADER);
    s.push('\n');
    for r in &report.rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{:.12e},{:.12e},{}",
            report.alpha,
            report.beta,
            report.drift_kind,
            r.n,
            report.n_fine,
            report.paths,
            report.moment,
            r.error,
            r.stderr,
            report.seed
        )
        .expect("writing to a String");
    }
    s
}

/// Summary CSV: one data row; undefined fit fields are written as `NaN`.
pub fn summary_csv(report: &RateReport) -> String {
    let (slope, r2) = (
        report.slope().unwrap_or(f64::NAN),
        report.r_squared().unwrap_or(f64::NAN),
    );
    let (lo, hi) = report.slope_ci().unwrap_or((f64::NAN, f64::NAN));
    format!(
        "{SUMMARY_HEADER}\n{slope:.6},{lo:.6},{hi:.6},{:.6},{:.6},{r2:.6}\n",
        report.theoretical, report.xi_hat
    )
}

pub fn write_csv(report: &RateReport, path: &Path) -> Result<()> {
    fs::write(path, report_csv(report))?;
    Ok(())
}

pub fn write_summary_csv(report: &RateReport, path: &Path) -> Result<()> {
    fs::write(path, summary_csv(report))?;
    Ok(())
}
