//! Browser bindings for three interactive views: the stable sampler's
//! characteristic function, one coupled coarse/reference path, and a
//! small strong-error rate study.
//!
//! Each view has a plain Rust constructor returning `kinstab::Result` so it
//! can be tested natively; the `#[wasm_bindgen]` wrappers only map errors
//! and take `u32` seeds so JS can pass plain numbers.

use kinstab::diagnostics::scalar_increments;
use kinstab::drift::DriftSpec;
use kinstab::harness::{strong_error_experiment, ExperimentConfig};
use kinstab::kinetic::build_master_path;
use kinstab::stable::{empirical_cf, exact_cf};
use kinstab::{
    run_euler, run_reference, PhasePoint, Quadrature, RngStream, SchemeConfig, StableParams,
};
use wasm_bindgen::prelude::*;

const CF_POINTS: usize = 61;
const CF_XI_MAX: f64 = 3.0;
const DRIFT_SCALES: usize = 12;

fn js_err(e: kinstab::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn multiscale(alpha: f64, beta: f64) -> kinstab::Result<DriftSpec> {
    DriftSpec::multiscale(1.0, alpha, beta, 1, DRIFT_SCALES, 0)
}

/// Empirical vs exact characteristic function of L_1 on a grid of frequencies.
#[wasm_bindgen]
pub struct CfView {
    xi: Vec<f64>,
    empirical: Vec<f64>,
    exact: Vec<f64>,
}

impl CfView {
    pub fn compute(alpha: f64, samples: usize, seed: u64) -> kinstab::Result<Self> {
        let xs: Vec<[f64; 1]> = scalar_increments(alpha, 1.0, samples, seed, 0)?
            .into_iter()
            .map(|x| [x])
            .collect();
        let xi: Vec<f64> = (0..CF_POINTS)
            .map(|k| CF_XI_MAX * k as f64 / (CF_POINTS - 1) as f64)
            .collect();
        let mut empirical = Vec::with_capacity(CF_POINTS);
        for &q in &xi {
            empirical.push(empirical_cf(&xs, &[q])?.re);
        }
        let exact = xi.iter().map(|&q| exact_cf(alpha, 1.0, &[q])).collect();
        Ok(Self {
            xi,
            empirical,
            exact,
        })
    }

    /// Largest pointwise gap between the two curves.
    pub fn max_gap(&self) -> f64 {
        self.empirical
            .iter()
            .zip(&self.exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[wasm_bindgen]
impl CfView {
    #[wasm_bindgen(getter)]
    pub fn xi(&self) -> Vec<f64> {
        self.xi.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn empirical(&self) -> Vec<f64> {
        self.empirical.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    #[wasm_bindgen(getter, js_name = maxGap)]
    pub fn max_gap_js(&self) -> f64 {
        self.max_gap()
    }
}

#[wasm_bindgen(js_name = stableCf)]
pub fn stable_cf(alpha: f64, samples: usize, seed: u32) -> Result<CfView, JsError> {
    CfView::compute(alpha, samples, seed.into()).map_err(js_err)
}

/// Coarse scheme and reference solution driven by the same noise path.
#[wasm_bindgen]
pub struct PathView {
    coarse_t: Vec<f64>,
    coarse_x: Vec<f64>,
    coarse_v: Vec<f64>,
    ref_t: Vec<f64>,
    ref_x: Vec<f64>,
    ref_v: Vec<f64>,
    sup_error: f64,
}

impl PathView {
    pub fn compute(
        alpha: f64,
        beta: f64,
        n: usize,
        n_fine: usize,
        seed: u64,
    ) -> kinstab::Result<Self> {
        let spec = multiscale(alpha, beta)?;
        let params = StableParams::new(alpha, 1)?;
        let master = build_master_path(n_fine, &params, &mut RngStream::new(seed, 0))?;
        let z0 = PhasePoint::origin(1);
        let cfg = SchemeConfig::with_quadrature(n, Quadrature::Aligned, n_fine);
        let coarse = run_euler(&cfg, &master, &spec, &z0)?;
        let reference = run_reference(&master, &spec, &z0, Quadrature::Aligned)?;
        let sup_error = kinstab::scheme::sup_node_error(&reference, &coarse)?;
        let column = |tr: &kinstab::Trajectory| {
            let t = (0..tr.len()).map(|i| tr.time(i)).collect();
            let x = (0..tr.len()).map(|i| tr.x(i)[0]).collect();
            let v = (0..tr.len()).map(|i| tr.v(i)[0]).collect();
            (t, x, v)
        };
        let (coarse_t, coarse_x, coarse_v) = column(&coarse);
        let (ref_t, ref_x, ref_v) = column(&reference);
        Ok(Self {
            coarse_t,
            coarse_x,
            coarse_v,
            ref_t,
            ref_x,
            ref_v,
            sup_error,
        })
    }
}

#[wasm_bindgen]
impl PathView {
    #[wasm_bindgen(getter, js_name = coarseT)]
    pub fn coarse_t(&self) -> Vec<f64> {
        self.coarse_t.clone()
    }

    #[wasm_bindgen(getter, js_name = coarseX)]
    pub fn coarse_x(&self) -> Vec<f64> {
        self.coarse_x.clone()
    }

    #[wasm_bindgen(getter, js_name = coarseV)]
    pub fn coarse_v(&self) -> Vec<f64> {
        self.coarse_v.clone()
    }

    #[wasm_bindgen(getter, js_name = refT)]
    pub fn ref_t(&self) -> Vec<f64> {
        self.ref_t.clone()
    }

    #[wasm_bindgen(getter, js_name = refX)]
    pub fn ref_x(&self) -> Vec<f64> {
        self.ref_x.clone()
    }

    #[wasm_bindgen(getter, js_name = refV)]
    pub fn ref_v(&self) -> Vec<f64> {
        self.ref_v.clone()
    }

    #[wasm_bindgen(getter, js_name = supError)]
    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }
}

#[wasm_bindgen(js_name = simulatePath)]
pub fn simulate_path(
    alpha: f64,
    beta: f64,
    n: usize,
    n_fine: usize,
    seed: u32,
) -> Result<PathView, JsError> {
    PathView::compute(alpha, beta, n, n_fine, seed.into()).map_err(js_err)
}

/// Strong error per step count with the fitted and theoretical rates.
#[wasm_bindgen]
pub struct RateView {
    n: Vec<f64>,
    error: Vec<f64>,
    slope: f64,
    r_squared: f64,
    theoretical: f64,
}

impl RateView {
    pub fn compute(alpha: f64, beta: f64, paths: usize, seed: u64) -> kinstab::Result<Self> {
        let cfg = ExperimentConfig {
            alpha,
            beta,
            drift: multiscale(alpha, beta)?,
            n_list: vec![8, 16, 32, 64, 128],
            n_fine: 1024,
            paths,
            moment: 2.0,
            seed,
            z0: PhasePoint::origin(1),
            threads: 1,
            quad: Quadrature::Aligned,
        };
        let report = strong_error_experiment(&cfg)?;
        Ok(Self {
            n: report.rows.iter().map(|r| r.n as f64).collect(),
            error: report.rows.iter().map(|r| r.error).collect(),
            slope: report.slope().unwrap_or(f64::NAN),
            r_squared: report.r_squared().unwrap_or(f64::NAN),
            theoretical: report.theoretical,
        })
    }
}

#[wasm_bindgen]
impl RateView {
    #[wasm_bindgen(getter)]
    pub fn n(&self) -> Vec<f64> {
        self.n.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn error(&self) -> Vec<f64> {
        self.error.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn slope(&self) -> f64 {
        self.slope
    }

    #[wasm_bindgen(getter, js_name = rSquared)]
    pub fn r_squared(&self) -> f64 {
        self.r_squared
    }

    #[wasm_bindgen(getter)]
    pub fn theoretical(&self) -> f64 {
        self.theoretical
    }
}

#[wasm_bindgen(js_name = rateCurve)]
pub fn rate_curve(alpha: f64, beta: f64, paths: usize, seed: u32) -> Result<RateView, JsError> {
    RateView::compute(alpha, beta, paths, seed.into()).map_err(js_err)
}
