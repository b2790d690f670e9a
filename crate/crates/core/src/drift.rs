//! Bounded drift families with prescribed anisotropic Hölder regularity.
//!
//! Both non-trivial families are sums of an `x`-part and a `v`-part, applied
//! coordinatewise. The `x`-part is Hölder of order `(α+β)/(1+α)` and the
//! `v`-part of order `β`, which places `b` in the anisotropic class `C^β_a`
//! together with the extra `C_x^{(α+β)/(1+α)}` regularity.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::kinetic::{aniso_dist_raw, PhasePoint};
use crate::rng::RngStream;

/// Open interval of admissible `β` for a given `α`:
/// `(1 - α/2, min(1, (α-1)(1+α)))`.
pub fn admissible_beta_range(alpha: f64) -> (f64, f64) {
    (1.0 - 0.5 * alpha, ((alpha - 1.0) * (1.0 + alpha)).min(1.0))
}

/// Checks `α ∈ (1, 2)` and `β` inside [`admissible_beta_range`].
pub fn check_regularity(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::param(
            "alpha",
            format!("{alpha} is outside the range (1, 2)"),
        ));
    }
    let (lo, hi) = admissible_beta_range(alpha);
    if !(beta > lo && beta < hi) {
        return Err(Error::param(
            "beta",
            format!(
                "{beta} must satisfy 1 - alpha/2 < beta < min(1, (alpha-1)(1+alpha)), \
                 i.e. beta in ({lo:.4}, {hi:.4}) for alpha = {alpha}"
            ),
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriftKind {
    Zero,
    Constant,
    SeparableHolder,
    Multiscale,
}

impl DriftKind {
    pub fn name(&self) -> &'static str {
        match self {
            DriftKind::Zero => "zero",
            DriftKind::Constant => "constant",
            DriftKind::SeparableHolder => "separable",
            DriftKind::Multiscale => "multiscale",
        }
    }
}

impl fmt::Display for DriftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DriftKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(DriftKind::Zero),
            "constant" => Ok(DriftKind::Constant),
            "separable" | "separable_holder" => Ok(DriftKind::SeparableHolder),
            "multiscale" => Ok(DriftKind::Multiscale),
            other => Err(Error::param(
                "drift",
                format!("unknown drift `{other}`, expected zero|constant|separable|multiscale"),
            )),
        }
    }
}

/// Weierstrass-type sum data: for scale `k`, frequency `2^k`, normalized
/// weights and phase offsets for the position and velocity parts.
#[derive(Clone, Debug, PartialEq)]
struct Multiscale {
    freq: Vec<f64>,
    wx: Vec<f64>,
    wv: Vec<f64>,
    phase_x: Vec<f64>,
    phase_v: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriftSpec {
    kind: DriftKind,
    dim: usize,
    amplitude: f64,
    alpha: f64,
    beta: f64,
    constant: Vec<f64>,
    multiscale: Option<Multiscale>,
}

/// `sign(u) · min(|u|^γ, 1)`.
#[inline]
fn clipped_power(u: f64, gamma: f64) -> f64 {
    let a = u.abs();
    let m = if a >= 1.0 { 1.0 } else { a.powf(gamma) };
    m.copysign(u)
}

impl DriftSpec {
    pub fn zero(dim: usize) -> Self {
        Self {
            kind: DriftKind::Zero,
            dim,
            amplitude: 0.0,
            alpha: f64::NAN,
            beta: f64::NAN,
            constant: vec![0.0; dim],
            multiscale: None,
        }
    }

    pub fn constant(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("c", "constant drift needs finite components"));
        }
        Ok(Self {
            kind: DriftKind::Constant,
            dim: c.len(),
            amplitude: c.iter().map(|v| v * v).sum::<f64>().sqrt(),
            alpha: f64::NAN,
            beta: f64::NAN,
            constant: c,
            multiscale: None,
        })
    }

    /// Component `j`: `A [h_{γx}(x_j) + h_β(v_j)]`, `h_γ(u) = sign(u)(|u|^γ ∧ 1)`.
    pub fn separable_holder(amplitude: f64, alpha: f64, beta: f64, dim: usize) -> Result<Self> {
        Self::check_common(amplitude, alpha, beta, dim)?;
        Ok(Self {
            kind: DriftKind::SeparableHolder,
            dim,
            amplitude,
            alpha,
            beta,
            constant: Vec::new(),
            multiscale: None,
        })
    }

    /// Component `j`:
    /// `A Σ_{k=0}^{K} [w^x_k cos(2^k x_j + φ_k) + w^v_k cos(2^k v_j + ψ_k)]`
    /// with `w^x_k ∝ 2^{-k γx}`, `w^v_k ∝ 2^{-k β}`, each weight family
    /// normalized to sum to one. Phases are uniform on `[0, 2π)`, drawn from
    /// the stream `(phase_seed, 0)`.
    pub fn multiscale(
        amplitude: f64,
        alpha: f64,
        beta: f64,
        dim: usize,
        scales: usize,
        phase_seed: u64,
    ) -> Result<Self> {
        Self::check_common(amplitude, alpha, beta, dim)?;
        if scales == 0 || scales > 40 {
            return Err(Error::param(
                "scales",
                format!("{scales} must lie in 1..=40"),
            ));
        }
        let gx = (alpha + beta) / (1.0 + alpha);
        let ks = 0..=scales;
        let freq: Vec<f64> = ks.clone().map(|k| (k as f64).exp2()).collect();
        let mut wx: Vec<f64> = ks.clone().map(|k| (-(k as f64) * gx).exp2()).collect();
        let mut wv: Vec<f64> = ks.map(|k| (-(k as f64) * beta).exp2()).collect();
        for w in [&mut wx, &mut wv] {
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|c| *c /= s);
        }
        let mut rng = RngStream::new(phase_seed, 0);
        let mut phase_x = Vec::with_capacity(scales + 1);
        let mut phase_v = Vec::with_capacity(scales + 1);
        for _ in 0..=scales {
            phase_x.push(2.0 * PI * rng.open01());
            phase_v.push(2.0 * PI * rng.open01());
        }
        Ok(Self {
            kind: DriftKind::Multiscale,
            dim,
            amplitude,
            alpha,
            beta,
            constant: Vec::new(),
            multiscale: Some(Multiscale {
                freq,
                wx,
                wv,
                phase_x,
                phase_v,
            }),
        })
    }

    fn check_common(amplitude: f64, alpha: f64, beta: f64, dim: usize) -> Result<()> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::param(
                "amplitude",
                format!("{amplitude} must be positive"),
            ));
        }
        if dim == 0 {
            return Err(Error::param("dim", "dimension must be at least 1"));
        }
        check_regularity(alpha, beta)
    }

    pub fn kind(&self) -> DriftKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of scales `K` (multiscale only).
    pub fn scales(&self) -> Option<usize> {
        self.multiscale.as_ref().map(|m| m.freq.len() - 1)
    }

    /// Hölder exponent of the position part, `(α+β)/(1+α)`.
    pub fn gamma_x(&self) -> f64 {
        (self.alpha + self.beta) / (1.0 + self.alpha)
    }

    /// Documented bound on `sup_z |b(z)|`.
    pub fn sup_bound(&self) -> f64 {
        match self.kind {
            DriftKind::Zero => 0.0,
            DriftKind::Constant => self.amplitude,
            // 2 A √d, written as the norm of a vector with entries 2A.
            _ => (self.dim as f64 * (2.0 * self.amplitude).powi(2)).sqrt(),
        }
    }

    /// Position part of component `j`; `b_j(x, v) = position_part + velocity_part`.
    #[inline]
    pub fn position_part(&self, j: usize, xj: f64) -> f64 {
        match self.kind {
            DriftKind::Zero => 0.0,
            DriftKind::Constant => self.constant[j],
            DriftKind::SeparableHolder => self.amplitude * clipped_power(xj, self.gamma_x()),
            DriftKind::Multiscale => {
                let m = self.multiscale.as_ref().expect("multiscale data");
                let mut acc = 0.0;
                for k in 0..m.freq.len() {
                    acc += m.wx[k] * (m.freq[k] * xj + m.phase_x[k]).cos();
                }
                self.amplitude * acc
            }
        }
    }

    /// Velocity part of component `j`.
    #[inline]
    pub fn velocity_part(&self, _j: usize, vj: f64) -> f64 {
        match self.kind {
            DriftKind::Zero | DriftKind::Constant => 0.0,
            DriftKind::SeparableHolder => self.amplitude * clipped_power(vj, self.beta),
            DriftKind::Multiscale => {
                let m = self.multiscale.as_ref().expect("multiscale data");
                let mut acc = 0.0;
                for k in 0..m.freq.len() {
                    acc += m.wv[k] * (m.freq[k] * vj + m.phase_v[k]).cos();
                }
                self.amplitude * acc
            }
        }
    }

    /// Evaluates `b(x, v)` into `out`. Slices must have length `dim`.
    #[inline]
    pub fn eval_into(&self, x: &[f64], v: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = self.position_part(j, x[j]) + self.velocity_part(j, v[j]);
        }
    }
}

/// `b(z)` as a fresh vector.
pub fn drift_eval(spec: &DriftSpec, z: &PhasePoint) -> Result<Vec<f64>> {
    if z.dim() != spec.dim {
        return Err(Error::DimensionMismatch {
            expected: spec.dim,
            got: z.dim(),
        });
    }
    let mut out = vec![0.0; spec.dim];
    spec.eval_into(&z.x, &z.v, &mut out);
    Ok(out)
}

/// How a sampled pair `(z, z')` is separated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturbation {
    /// `|v - v'| = r`, `x = x'`.
    Velocity,
    /// `|x - x'| = r^{1+α}`, `v = v'`.
    Position,
    /// Both of the above.
    Joint,
}

fn unit_vector(dim: usize, rng: &mut RngStream) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = g.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.0 {
            return g.into_iter().map(|c| c / n).collect();
        }
    }
}

/// Largest ratio `|b(z) - b(z')| / |z - z'|_a^exponent` over `n_pairs`
/// pairs at anisotropic separation scale `r`, with `z` uniform in the box
/// `[-radius, radius]^{2d}`.
pub fn holder_ratio_at_scale(
    spec: &DriftSpec,
    exponent: f64,
    scale: f64,
    mode: Perturbation,
    n_pairs: usize,
    radius: f64,
    rng: &mut RngStream,
) -> f64 {
    let d = spec.dim;
    let alpha = if spec.alpha.is_nan() { 1.5 } else { spec.alpha };
    let (mut b1, mut b2) = (vec![0.0; d], vec![0.0; d]);
    let mut best = 0.0f64;
    for _ in 0..n_pairs {
        let x: Vec<f64> = (0..d)
            .map(|_| radius * (2.0 * rng.open01() - 1.0))
            .collect();
        let v: Vec<f64> = (0..d)
            .map(|_| radius * (2.0 * rng.open01() - 1.0))
            .collect();
        let (mut x2, mut v2) = (x.clone(), v.clone());
        if mode != Perturbation::Position {
            let e = unit_vector(d, rng);
            v2.iter_mut().zip(&e).for_each(|(c, u)| *c += scale * u);
        }
        if mode != Perturbation::Velocity {
            let e = unit_vector(d, rng);
            let sx = scale.powf(1.0 + alpha);
            x2.iter_mut().zip(&e).for_each(|(c, u)| *c += sx * u);
        }
        let dist = aniso_dist_raw(&x, &v, &x2, &v2, alpha);
        if dist == 0.0 {
            continue;
        }
        spec.eval_into(&x, &v, &mut b1);
        spec.eval_into(&x2, &v2, &mut b2);
        let diff = b1
            .iter()
            .zip(&b2)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt();
        best = best.max(diff / dist.powf(exponent));
    }
    best
}

/// Lower estimate of the anisotropic seminorm `[b]_{C^β_a}`: the maximum
/// difference quotient over `n_pairs` pairs spread across the dyadic scales
/// `2^0, …, 2^{-12}` and all three perturbation modes.
pub fn holder_seminorm_estimate(
    spec: &DriftSpec,
    n_pairs: usize,
    radius: f64,
    rng: &mut RngStream,
) -> f64 {
    if matches!(spec.kind, DriftKind::Zero | DriftKind::Constant) {
        return 0.0;
    }
    const SCALES: usize = 13;
    const MODES: [Perturbation; 3] = [
        Perturbation::Velocity,
        Perturbation::Position,
        Perturbation::Joint,
    ];
    let mut best = 0.0f64;
    for p in 0..n_pairs {
        let scale = (-((p % SCALES) as f64)).exp2();
        let mode = MODES[(p / SCALES) % 3];
        best = best.max(holder_ratio_at_scale(
            spec, spec.beta, scale, mode, 1, radius, rng,
        ));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1(x: f64, v: f64) -> PhasePoint {
        PhasePoint::new(vec![x], vec![v]).unwrap()
    }

    #[test]
    fn clipped_power_shape() {
        assert_eq!(clipped_power(0.0, 0.6), 0.0);
        assert_eq!(clipped_power(1.0, 0.6), 1.0);
        assert_eq!(clipped_power(-3.0, 0.6), -1.0);
        assert!((clipped_power(0.25, 0.5) - 0.5).abs() < 1e-15);
        assert!((clipped_power(-0.25, 0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_and_constant() {
        let z = z1(0.4, -9.0);
        assert_eq!(drift_eval(&DriftSpec::zero(1), &z).unwrap(), vec![0.0]);
        let c = DriftSpec::constant(vec![2.5]).unwrap();
        assert_eq!(drift_eval(&c, &z).unwrap(), vec![2.5]);
    }

    #[test]
    fn separable_examples() {
        let s = DriftSpec::separable_holder(1.0, 1.5, 0.6, 1).unwrap();
        assert_eq!(drift_eval(&s, &z1(0.0, 0.0)).unwrap(), vec![0.0]);
        assert_eq!(drift_eval(&s, &z1(0.0, 1.0)).unwrap(), vec![1.0]);
        assert!((s.gamma_x() - 0.84).abs() < 1e-15);
    }

    #[test]
    fn separable_is_odd() {
        let s = DriftSpec::separable_holder(1.3, 1.5, 0.6, 2).unwrap();
        let mut rng = RngStream::new(5, 0);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..2).map(|_| 4.0 * rng.open01() - 2.0).collect();
            let v: Vec<f64> = (0..2).map(|_| 4.0 * rng.open01() - 2.0).collect();
            let p = drift_eval(&s, &PhasePoint::new(x.clone(), v.clone()).unwrap()).unwrap();
            let neg = PhasePoint::new(
                x.iter().map(|c| -c).collect(),
                v.iter().map(|c| -c).collect(),
            )
            .unwrap();
            let m = drift_eval(&s, &neg).unwrap();
            for (a, b) in p.iter().zip(&m) {
                assert_eq!(*a, -*b);
            }
        }
    }

    #[test]
    fn beta_range_is_enforced() {
        assert!(DriftSpec::separable_holder(1.0, 1.5, 0.25, 1).is_err());
        assert!(DriftSpec::separable_holder(1.0, 1.5, 1.0, 1).is_err());
        assert!(DriftSpec::separable_holder(1.0, 1.5, 0.26, 1).is_ok());
        // (α-1)(1+α) caps β below 1 when α is close to 1.
        let (lo, hi) = admissible_beta_range(1.2);
        assert!((lo - 0.4).abs() < 1e-15 && (hi - 0.44).abs() < 1e-12);
        assert!(DriftSpec::multiscale(1.0, 1.2, 0.5, 1, 8, 0).is_err());
        assert!(DriftSpec::multiscale(1.0, 2.0, 0.5, 1, 8, 0).is_err());
        assert!(DriftSpec::multiscale(0.0, 1.5, 0.6, 1, 8, 0).is_err());
        assert!(DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 0, 0).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "separable".parse::<DriftKind>().unwrap(),
            DriftKind::SeparableHolder
        );
        assert_eq!(
            "multiscale".parse::<DriftKind>().unwrap(),
            DriftKind::Multiscale
        );
        assert!("smooth".parse::<DriftKind>().is_err());
    }

    #[test]
    fn multiscale_phases_are_seeded() {
        let a = DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 6, 11).unwrap();
        let b = DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 6, 11).unwrap();
        let c = DriftSpec::multiscale(1.0, 1.5, 0.6, 1, 6, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.scales(), Some(6));
    }

    #[test]
    fn trivial_seminorms_vanish() {
        let mut rng = RngStream::new(1, 1);
        assert_eq!(
            holder_seminorm_estimate(&DriftSpec::zero(1), 100, 2.0, &mut rng),
            0.0
        );
        let c = DriftSpec::constant(vec![1.0, -1.0]).unwrap();
        assert_eq!(holder_seminorm_estimate(&c, 100, 2.0, &mut rng), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let s = DriftSpec::separable_holder(1.0, 1.5, 0.6, 2).unwrap();
        assert!(drift_eval(&s, &z1(0.0, 0.0)).is_err());
    }
}
