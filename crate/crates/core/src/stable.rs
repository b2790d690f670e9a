//! Isotropic α-stable increments via Gaussian subordination.
//!
//! The characteristic exponent is normalized to `|ξ|^α`, so that
//! `E exp(i ξ·L_t) = exp(-t |ξ|^α)`. Any other constant in front of `|ξ|^α`
//! is a deterministic time change and leaves convergence orders untouched.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Stability index and spatial dimension of the driving noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StableParams {
    alpha: f64,
    dim: usize,
}

impl StableParams {
    /// `alpha` must lie in `(1, 2]`; `alpha = 2` is the Gaussian limit, kept for debugging.
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::param(
                "alpha",
                format!("{alpha} is outside the stable range (1, 2]"),
            ));
        }
        if dim == 0 {
            return Err(Error::param("dim", "dimension must be at least 1"));
        }
        Ok(Self { alpha, dim })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes one increment `L_{t+dt} - L_t` into `out` (length `dim`).
    ///
    /// Hot-path variant of [`sample_isotropic_stable_increment`]: `dt > 0` and
    /// `out.len() == dim` are the caller's responsibility.
    pub fn sample_increment_into(&self, dt: f64, rng: &mut RngStream, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        let radius = if self.alpha == 2.0 {
            (2.0 * dt).sqrt()
        } else {
            let s = one_sided_unchecked(0.5 * self.alpha, rng);
            (2.0 * dt.powf(2.0 / self.alpha) * s).sqrt()
        };
        for o in out.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *o = radius * g;
        }
    }
}

/// Positive stable variable with `E exp(-λS) = exp(-λ^a)`, `0 < a < 1`.
///
/// Kanter's representation: `U ~ Unif(0, π)`, `E ~ Exp(1)`,
/// `S = sin(aU) / sin(U)^{1/a} · (sin((1-a)U) / E)^{(1-a)/a}`.
pub fn sample_one_sided_stable(a: f64, rng: &mut RngStream) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::param(
            "a",
            format!("one-sided stability index {a} is outside (0, 1)"),
        ));
    }
    Ok(one_sided_unchecked(a, rng))
}

fn one_sided_unchecked(a: f64, rng: &mut RngStream) -> f64 {
    loop {
        // open01 never returns 0 or 1, so U avoids both endpoints of (0, π).
        let u = PI * rng.open01();
        let e: f64 = Exp1.sample(rng);
        let su = u.sin();
        if su <= 0.0 || e <= 0.0 {
            continue;
        }
        let s = (a * u).sin() / su.powf(1.0 / a) * (((1.0 - a) * u).sin() / e).powf((1.0 - a) / a);
        if s.is_finite() && s > 0.0 {
            return s;
        }
    }
}

/// One increment of the isotropic α-stable process over a step of length `dt`.
///
/// Returns `sqrt(2 S) N` with `S = dt^{2/α} S'`, `S'` one-sided stable of index
/// `α/2` and `N` standard Gaussian in `R^d`; its characteristic function is
/// `exp(-dt |ξ|^α)`. For `α = 2` this is `N(0, 2 dt I)`.
pub fn sample_isotropic_stable_increment(
    params: &StableParams,
    dt: f64,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param(
            "dt",
            format!("time step {dt} must be positive"),
        ));
    }
    let mut out = vec![0.0; params.dim];
    params.sample_increment_into(dt, rng, &mut out);
    Ok(out)
}

/// Empirical characteristic function `(1/M) Σ exp(i ξ·X_m)`.
pub fn empirical_cf<S: AsRef<[f64]>>(samples: &[S], xi: &[f64]) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(Error::Empty("empirical_cf needs at least one sample"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for s in samples {
        let s = s.as_ref();
        if s.len() != xi.len() {
            return Err(Error::DimensionMismatch {
                expected: xi.len(),
                got: s.len(),
            });
        }
        let phase: f64 = s.iter().zip(xi).map(|(a, b)| a * b).sum();
        acc += Complex64::new(phase.cos(), phase.sin());
    }
    Ok(acc / samples.len() as f64)
}

/// Exact characteristic function `exp(-t |ξ|^α)` of `L_t`.
pub fn exact_cf(alpha: f64, t: f64, xi: &[f64]) -> f64 {
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    (-t * norm.powf(alpha)).exp()
}
