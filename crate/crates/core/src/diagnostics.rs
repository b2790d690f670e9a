//! Distributional checks of the noise sampler and of the drift families,
//! emitted as rows of the diagnostics CSV.

use std::fmt::Write as _;

use crate::drift::{
    holder_ratio_at_scale, holder_seminorm_estimate, DriftKind, DriftSpec, Perturbation,
};
use crate::error::Result;
use crate::harness::DIAGNOSTICS_HEADER;
use crate::kinetic::{build_master_path, moment_diagnostic, shifted_increment, MasterPath};
use crate::rng::RngStream;
use crate::stable::{
    empirical_cf, exact_cf, sample_isotropic_stable_increment, sample_one_sided_stable,
    StableParams,
};
use crate::stats::{self, ks_critical, ks_two_sample};

/// One line of the diagnostics CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticRow {
    pub test: String,
    pub param: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl DiagnosticRow {
    fn within(test: &str, param: String, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            test: test.into(),
            param,
            value,
            expected,
            tolerance,
            pass: (value - expected).abs() <= tolerance,
        }
    }

    fn at_least(test: &str, param: String, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            test: test.into(),
            param,
            value,
            expected,
            tolerance,
            pass: value >= expected - tolerance,
        }
    }

    fn at_most(test: &str, param: String, value: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            test: test.into(),
            param,
            value,
            expected: bound,
            tolerance,
            pass: value <= bound + tolerance,
        }
    }
}

pub fn diagnostics_csv(rows: &[DiagnosticRow]) -> String {
    let mut s = format!("{DIAGNOSTICS_HEADER}\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{:.6},{:.6},{:.6},{}",
            r.test, r.param, r.value, r.expected, r.tolerance, r.pass
        )
        .expect("writing to a String");
    }
    s
}

/// Stream index block reserved for diagnostic `id`.
fn stream(id: u64, i: u64) -> u64 {
    (id << 40) | i
}

/// Draws `count` scalar increments of `L_dt` (d = 1) from consecutive streams.
pub fn scalar_increments(
    alpha: f64,
    dt: f64,
    count: usize,
    seed: u64,
    block: u64,
) -> Result<Vec<f64>> {
    let params = StableParams::new(alpha, 1)?;
    let mut rng = RngStream::new(seed, stream(block, 0));
    (0..count)
        .map(|_| sample_isotropic_stable_increment(&params, dt, &mut rng).map(|v| v[0]))
        .collect()
}

/// Dyadic times `2^{-10}, …, 2^{-3}`.
pub fn dyadic_gaps() -> Vec<f64> {
    (3..=10).rev().map(|k| (-(k as f64)).exp2()).collect()
}

/// Log-log slope of `‖|L_t|^γ ∧ 1‖_{L_p}` against `t` over [`dyadic_gaps`].
pub fn noise_moment_slope(
    alpha: f64,
    gamma: f64,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for (i, t) in dyadic_gaps().into_iter().enumerate() {
        let xs = scalar_increments(alpha, t, samples, seed, 100 + i as u64)?;
        let norm = (xs
            .iter()
            .map(|x| x.abs().powf(gamma).min(1.0).powf(p))
            .sum::<f64>()
            / samples as f64)
            .powf(1.0 / p);
        lx.push(t.ln());
        ly.push(norm.ln());
    }
    Ok(stats::ols(&lx, &ly)?.slope)
}

/// Master paths on streams `(seed, block·2^40 + k)`.
pub fn master_paths(
    alpha: f64,
    n_fine: usize,
    count: usize,
    seed: u64,
    block: u64,
) -> Result<Vec<MasterPath>> {
    let params = StableParams::new(alpha, 1)?;
    (0..count)
        .map(|k| {
            build_master_path(
                n_fine,
                &params,
                &mut RngStream::new(seed, stream(block, k as u64)),
            )
        })
        .collect()
}

/// Log-log slope of the kinetic moment `‖|M_t - Γ_{t-s}M_s|_a^γ ∧ 1‖_{L_p}`
/// against `t - s` over [`dyadic_gaps`], with `s = 1/4`.
pub fn kinetic_moment_slope(paths: &[MasterPath], gamma: f64, p: f64) -> Result<f64> {
    let s = 0.25;
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for gap in dyadic_gaps() {
        let v = moment_diagnostic(paths, s, s + gap, gamma, p)?;
        lx.push(gap.ln());
        ly.push(v.ln());
    }
    Ok(stats::ols(&lx, &ly)?.slope)
}

/// Per-coordinate KS statistics between `M_t - Γ_{t-s}M_s` on `shifted`
/// and `M_{t-s}` on `fresh` (coordinates ordered `x` then `v`).
pub fn shift_markov_ks(
    shifted: &[MasterPath],
    fresh: &[MasterPath],
    s: f64,
    t: f64,
) -> Result<Vec<f64>> {
    let a: Vec<_> = shifted
        .iter()
        .map(|p| shifted_increment(p, s, t))
        .collect::<Result<_>>()?;
    let b: Vec<_> = fresh
        .iter()
        .map(|p| shifted_increment(p, 0.0, t - s))
        .collect::<Result<_>>()?;
    let d = shifted.first().map_or(1, |p| p.dim());
    let mut out = Vec::with_capacity(2 * d);
    for c in 0..2 * d {
        let pick = |z: &crate::kinetic::PhasePoint| if c < d { z.x[c] } else { z.v[c - d] };
        let ca: Vec<f64> = a.iter().map(pick).collect();
        let cb: Vec<f64> = b.iter().map(pick).collect();
        out.push(ks_two_sample(&ca, &cb)?);
    }
    Ok(out)
}

/// The full sampler suite at `samples` draws per check (d = 1).
pub fn noise_diagnostics(alpha: f64, samples: usize, seed: u64) -> Result<Vec<DiagnosticRow>> {
    let mut rows = Vec::new();

    let l1: Vec<Vec<f64>> = scalar_increments(alpha, 1.0, samples, seed, 1)?
        .into_iter()
        .map(|x| vec![x])
        .collect();
    let mut worst_imag = 0.0f64;
    for xi in [0.5, 1.0, 2.0] {
        let cf = empirical_cf(&l1, &[xi])?;
        worst_imag = worst_imag.max(cf.im.abs());
        rows.push(DiagnosticRow::within(
            "cf_real",
            format!("xi={xi}"),
            cf.re,
            exact_cf(alpha, 1.0, &[xi]),
            0.01,
        ));
    }
    rows.push(DiagnosticRow::at_most(
        "cf_imag",
        "xi=0.5|1|2".into(),
        worst_imag,
        0.0,
        3.0 / (samples as f64).sqrt(),
    ));

    let a = 0.5 * alpha;
    let mut rng = RngStream::new(seed, stream(2, 0));
    let mut acc = 0.0;
    for _ in 0..samples {
        acc += (-sample_one_sided_stable(a, &mut rng)?).exp();
    }
    rows.push(DiagnosticRow::within(
        "subordinator_laplace",
        format!("a={a};lambda=1"),
        acc / samples as f64,
        (-1.0f64).exp(),
        0.01,
    ));

    let short = scalar_increments(alpha, 0.25, samples, seed, 3)?;
    let scaled: Vec<f64> = scalar_increments(alpha, 1.0, samples, seed, 4)?
        .into_iter()
        .map(|x| 0.25f64.powf(1.0 / alpha) * x)
        .collect();
    rows.push(DiagnosticRow::at_most(
        "self_similarity_ks",
        "t=0.25".into(),
        ks_two_sample(&short, &scaled)?,
        0.0,
        ks_critical(0.01, samples, samples),
    ));

    let abs: Vec<f64> = l1.iter().map(|v| v[0].abs()).collect();
    let tail = stats::tail_slope(&abs, 2.0, 50.0, 20)?;
    rows.push(DiagnosticRow::within(
        "tail_index",
        "x=[2,50]".into(),
        tail.slope,
        -alpha,
        0.15,
    ));

    rows.push(DiagnosticRow::at_least(
        "noise_moment_slope",
        "gamma=1;p=2".into(),
        noise_moment_slope(alpha, 1.0, 2.0, samples / 4, seed)?,
        (1.0 / alpha).min(0.5),
        0.1,
    ));

    let count = (samples / 10).max(100);
    let paths = master_paths(alpha, 1024, count, seed, 5)?;
    let gamma = 0.6;
    rows.push(DiagnosticRow::at_least(
        "kinetic_moment_slope",
        format!("gamma={gamma};p=2"),
        kinetic_moment_slope(&paths, gamma, 2.0)?,
        (gamma / alpha).min(0.5),
        0.1,
    ));

    let fresh = master_paths(alpha, 1024, count, seed, 6)?;
    let crit = ks_critical(0.01, count, count);
    for (c, d) in shift_markov_ks(&paths, &fresh, 0.25, 0.75)?
        .into_iter()
        .enumerate()
    {
        let coord = if c == 0 { "x" } else { "v" };
        rows.push(DiagnosticRow::at_most(
            "shift_markov_ks",
            format!("coord={coord};s=0.25;t=0.75"),
            d,
            0.0,
            crit,
        ));
    }
    Ok(rows)
}

/// `(ratio at 2^{-4}, ratio at 2^{-10})` of velocity difference quotients
/// with the given exponent; a ratio growing as the scale shrinks certifies
/// the drift is no smoother than `exponent` in `v`.
pub fn regularity_witness(
    spec: &DriftSpec,
    exponent: f64,
    n_pairs: usize,
    radius: f64,
    seed: u64,
) -> (f64, f64) {
    let coarse = holder_ratio_at_scale(
        spec,
        exponent,
        (-4.0f64).exp2(),
        Perturbation::Velocity,
        n_pairs,
        radius,
        &mut RngStream::new(seed, stream(20, 0)),
    );
    let fine = holder_ratio_at_scale(
        spec,
        exponent,
        (-10.0f64).exp2(),
        Perturbation::Velocity,
        n_pairs,
        radius,
        &mut RngStream::new(seed, stream(20, 1)),
    );
    (coarse, fine)
}

/// Boundedness, seminorm and structural checks for one drift.
pub fn drift_diagnostics(spec: &DriftSpec, samples: usize, seed: u64) -> Vec<DiagnosticRow> {
    let d = spec.dim();
    let radius = 4.0;
    let mut rows = Vec::new();

    let mut rng = RngStream::new(seed, stream(10, 0));
    let (mut sup, mut odd) = (0.0f64, 0.0f64);
    let (mut b, mut bneg) = (vec![0.0; d], vec![0.0; d]);
    for k in 0..samples {
        // Every other draw comes from a much larger box to probe the tails.
        let r = if k % 2 == 0 { radius } else { 1e3 };
        let x: Vec<f64> = (0..d).map(|_| r * (2.0 * rng.open01() - 1.0)).collect();
        let v: Vec<f64> = (0..d).map(|_| r * (2.0 * rng.open01() - 1.0)).collect();
        spec.eval_into(&x, &v, &mut b);
        sup = sup.max(b.iter().map(|c| c * c).sum::<f64>().sqrt());
        let (nx, nv): (Vec<f64>, Vec<f64>) = (
            x.iter().map(|c| -c).collect(),
            v.iter().map(|c| -c).collect(),
        );
        spec.eval_into(&nx, &nv, &mut bneg);
        odd = odd.max(
            b.iter()
                .zip(&bneg)
                .map(|(p, q)| (p + q).abs())
                .fold(0.0, f64::max),
        );
    }
    rows.push(DiagnosticRow::at_most(
        "drift_bounded",
        format!("kind={}", spec.kind()),
        sup,
        spec.sup_bound(),
        1e-12 * spec.sup_bound(),
    ));
    if spec.kind() == DriftKind::SeparableHolder {
        rows.push(DiagnosticRow::at_most(
            "drift_odd",
            "kind=separable".into(),
            odd,
            0.0,
            0.0,
        ));
    }

    if !matches!(spec.kind(), DriftKind::Zero | DriftKind::Constant) {
        let small = holder_seminorm_estimate(
            spec,
            (samples / 100).max(13),
            radius,
            &mut RngStream::new(seed, stream(11, 0)),
        );
        let large = holder_seminorm_estimate(
            spec,
            samples.max(13),
            radius,
            &mut RngStream::new(seed, stream(11, 1)),
        );
        if spec.kind() == DriftKind::SeparableHolder {
            rows.push(DiagnosticRow::at_most(
                "holder_seminorm",
                format!("beta={};pairs={samples}", spec.beta()),
                large,
                4.0 * (d as f64).sqrt() * spec.amplitude(),
                0.01,
            ));
        }
        rows.push(DiagnosticRow::at_most(
            "holder_seminorm_stability",
            format!("pairs={}->{}", (samples / 100).max(13), samples.max(13)),
            large / small,
            1.5,
            0.0,
        ));
    }

    if spec.kind() == DriftKind::Multiscale {
        let pairs = (samples / 10).max(1000);
        let (c, f) = regularity_witness(spec, spec.beta() + 0.2, pairs, radius, seed);
        rows.push(DiagnosticRow::at_least(
            "regularity_witness_rough",
            format!("exponent={:.3};scale=2^-4->2^-10", spec.beta() + 0.2),
            f / c,
            2.0,
            0.0,
        ));
        let (c, f) = regularity_witness(spec, spec.beta(), pairs, radius, seed);
        rows.push(DiagnosticRow::at_most(
            "regularity_witness_exact",
            format!("exponent={:.3};scale=2^-4->2^-10", spec.beta()),
            f / c,
            1.5,
            0.0,
        ));
    }
    rows
}
