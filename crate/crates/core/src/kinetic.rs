//! Kinetic noise `M_t = (∫₀ᵗ L_r dr, L_t)` on a dyadic master grid, the free
//! transport `Γ_t(x, v) = (x + t v, v)` and the anisotropic distance.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stable::StableParams;

/// A point `(x, v)` of phase space `R^d × R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if x.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: v.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::param("dim", "phase point must have dimension ≥ 1"));
        }
        if x.iter().chain(&v).any(|c| !c.is_finite()) {
            return Err(Error::param("z", "phase point components must be finite"));
        }
        Ok(Self { x, v })
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            x: vec![0.0; dim],
            v: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Euclidean norm of `self - other` on `R^{2d}`.
    pub fn euclid_dist(&self, other: &PhasePoint) -> f64 {
        self.x
            .iter()
            .zip(&other.x)
            .chain(self.v.iter().zip(&other.v))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// `Γ_t z = (x + t v, v)`.
pub fn gamma_shift(t: f64, z: &PhasePoint) -> PhasePoint {
    PhasePoint {
        x: z.x.iter().zip(&z.v).map(|(x, v)| x + t * v).collect(),
        v: z.v.clone(),
    }
}

/// `k_n(t) = ⌊n t⌋ / n`, the last grid node at or before `t`.
pub fn grid_map_kn(t: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::param("t", format!("{t} is outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::param("n", "grid needs at least one step"));
    }
    let n = n as f64;
    Ok((n * t).floor() / n)
}

fn norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// `|z - z'|_a = |x - x'|^{1/(1+α)} + |v - v'|`.
pub fn aniso_dist(z: &PhasePoint, z2: &PhasePoint, alpha: f64) -> Result<f64> {
    if z.x.len() != z2.x.len() || z.v.len() != z2.v.len() {
        return Err(Error::DimensionMismatch {
            expected: z.dim(),
            got: z2.dim(),
        });
    }
    Ok(aniso_dist_raw(&z.x, &z.v, &z2.x, &z2.v, alpha))
}

pub(crate) fn aniso_dist_raw(x: &[f64], v: &[f64], x2: &[f64], v2: &[f64], alpha: f64) -> f64 {
    norm(x, x2).powf(1.0 / (1.0 + alpha)) + norm(v, v2)
}

/// One sampled realization of `(L, ∫L)` on the grid `t_i = i / n_fine`.
///
/// `L` and `I` are stored as flat row-major arrays of `(n_fine + 1) × dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterPath {
    n_fine: usize,
    dim: usize,
    alpha: f64,
    l: Vec<f64>,
    i: Vec<f64>,
}

impl MasterPath {
    /// Builds the path from explicit increments `L_{t_{k+1}} - L_{t_k}`
    /// (`n_fine × dim`, row-major). `I` is the running trapezoid integral.
    pub fn from_increments(alpha: f64, dim: usize, increments: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "dimension must be at least 1"));
        }
        if !increments.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: increments.len() % dim,
            });
        }
        let n_fine = increments.len() / dim;
        check_power_of_two(n_fine)?;
        let h = 1.0 / n_fine as f64;
        let mut l = vec![0.0; (n_fine + 1) * dim];
        let mut i = vec![0.0; (n_fine + 1) * dim];
        for k in 0..n_fine {
            for c in 0..dim {
                let cur = k * dim + c;
                let next = cur + dim;
                l[next] = l[cur] + increments[cur];
                i[next] = i[cur] + 0.5 * h * (l[cur] + l[next]);
            }
        }
        Ok(Self {
            n_fine,
            dim,
            alpha,
            l,
            i,
        })
    }

    pub fn n_fine(&self) -> usize {
        self.n_fine
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `L_{t_k}`.
    pub fn l(&self, k: usize) -> &[f64] {
        &self.l[k * self.dim..(k + 1) * self.dim]
    }

    /// `(∫₀ᵗ L)_{t_k}`.
    pub fn integral(&self, k: usize) -> &[f64] {
        &self.i[k * self.dim..(k + 1) * self.dim]
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.n_fine as f64
    }

    /// `M_{t_k} = (I_{t_k}, L_{t_k})` as a phase point.
    pub fn m(&self, k: usize) -> PhasePoint {
        PhasePoint {
            x: self.integral(k).to_vec(),
            v: self.l(k).to_vec(),
        }
    }

    /// Index of the fine node at time `t`, if `t` lies on the grid.
    pub fn node_of(&self, t: f64) -> Result<usize> {
        let k = t * self.n_fine as f64;
        if !(0.0..=1.0).contains(&t) || k.fract() != 0.0 {
            return Err(Error::OffGrid {
                t,
                n_fine: self.n_fine,
            });
        }
        Ok(k as usize)
    }
}

fn check_power_of_two(n_fine: usize) -> Result<()> {
    if n_fine < 2 || !n_fine.is_power_of_two() {
        return Err(Error::param(
            "n_fine",
            format!("{n_fine} must be a power of two ≥ 2"),
        ));
    }
    Ok(())
}

/// Samples a master path with `n_fine` independent stable increments of step `1/n_fine`.
pub fn build_master_path(
    n_fine: usize,
    params: &StableParams,
    rng: &mut RngStream,
) -> Result<MasterPath> {
    check_power_of_two(n_fine)?;
    let dim = params.dim();
    let h = 1.0 / n_fine as f64;
    let mut incr = vec![0.0; n_fine * dim];
    for chunk in incr.chunks_exact_mut(dim) {
        params.sample_increment_into(h, rng, chunk);
    }
    MasterPath::from_increments(params.alpha(), dim, &incr)
}

/// `M_t - Γ_{t-s} M_s` for grid times `s ≤ t`, as a phase point.
pub fn shifted_increment(path: &MasterPath, s: f64, t: f64) -> Result<PhasePoint> {
    let (ks, kt) = (path.node_of(s)?, path.node_of(t)?);
    let shifted = gamma_shift(t - s, &path.m(ks));
    let mt = path.m(kt);
    Ok(PhasePoint {
        x: mt.x.iter().zip(&shifted.x).map(|(a, b)| a - b).collect(),
        v: mt.v.iter().zip(&shifted.v).map(|(a, b)| a - b).collect(),
    })
}

/// Empirical `L_p(Ω)` norm of `|M_t - Γ_{t-s} M_s|_a^γ ∧ 1` over `paths`.
pub fn moment_diagnostic(paths: &[MasterPath], s: f64, t: f64, gamma: f64, p: f64) -> Result<f64> {
    if paths.is_empty() {
        return Err(Error::Empty("moment diagnostic needs paths"));
    }
    if !(s <= t) {
        return Err(Error::param(
            "s",
            format!("need s ≤ t, got s = {s}, t = {t}"),
        ));
    }
    if !(p >= 1.0) {
        return Err(Error::param("p", format!("{p} must be ≥ 1")));
    }
    if !(gamma > 0.0) {
        return Err(Error::param("gamma", format!("{gamma} must be positive")));
    }
    let mut acc = 0.0;
    for path in paths {
        let d = shifted_increment(path, s, t)?;
        let zero = PhasePoint::origin(path.dim());
        let r = aniso_dist(&d, &zero, path.alpha())?;
        acc += r.powf(gamma).min(1.0).powf(p);
    }
    Ok((acc / paths.len() as f64).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, v: f64) -> PhasePoint {
        PhasePoint::new(vec![x], vec![v]).unwrap()
    }

    #[test]
    fn gamma_shift_examples() {
        assert_eq!(gamma_shift(0.0, &pt(3.0, 7.0)), pt(3.0, 7.0));
        assert_eq!(gamma_shift(1.0, &pt(0.0, 1.0)), pt(1.0, 1.0));
    }

    #[test]
    fn grid_map_examples() {
        assert!((grid_map_kn(0.37, 10).unwrap() - 0.3).abs() < 1e-15);
        assert!((grid_map_kn(0.3, 10).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(grid_map_kn(1.0, 4).unwrap(), 1.0);
        assert!(grid_map_kn(1.1, 4).is_err());
        assert!(grid_map_kn(-0.1, 4).is_err());
    }

    #[test]
    fn aniso_dist_examples() {
        let z = pt(0.3, -2.0);
        assert_eq!(aniso_dist(&z, &z, 1.5).unwrap(), 0.0);
        assert_eq!(aniso_dist(&pt(1.0, 0.0), &pt(0.0, 0.0), 1.0).unwrap(), 1.0);
        assert_eq!(aniso_dist(&pt(0.0, 2.0), &pt(0.0, 0.0), 1.5).unwrap(), 2.0);
        let z3 = PhasePoint::origin(2);
        assert!(aniso_dist(&z, &z3, 1.5).is_err());
    }

    #[test]
    fn phase_point_validation() {
        assert!(PhasePoint::new(vec![0.0], vec![0.0, 1.0]).is_err());
        assert!(PhasePoint::new(vec![f64::NAN], vec![0.0]).is_err());
        assert!(PhasePoint::new(vec![], vec![]).is_err());
    }

    #[test]
    fn zero_increments_give_zero_path() {
        let p = MasterPath::from_increments(1.5, 1, &[0.0, 0.0]).unwrap();
        for k in 0..=2 {
            assert_eq!(p.l(k), &[0.0]);
            assert_eq!(p.integral(k), &[0.0]);
        }
    }

    #[test]
    fn two_step_trapezoid_by_hand() {
        let (d1, d2) = (0.8, -0.3);
        let p = MasterPath::from_increments(1.5, 1, &[d1, d2]).unwrap();
        assert_eq!(p.l(1)[0], d1);
        assert_eq!(p.l(2)[0], d1 + d2);
        assert!((p.integral(1)[0] - d1 / 4.0).abs() < 1e-15);
        assert!((p.integral(2)[0] - (d1 / 4.0 + (2.0 * d1 + d2) / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn master_grid_must_be_dyadic() {
        assert!(MasterPath::from_increments(1.5, 1, &[0.0; 3]).is_err());
        assert!(MasterPath::from_increments(1.5, 1, &[0.0; 1]).is_err());
        let params = StableParams::new(1.5, 1).unwrap();
        let mut rng = RngStream::new(1, 0);
        assert!(build_master_path(12, &params, &mut rng).is_err());
        assert!(build_master_path(16, &params, &mut rng).is_ok());
    }

    #[test]
    fn node_lookup_rejects_off_grid() {
        let p = MasterPath::from_increments(1.5, 1, &[0.0; 8]).unwrap();
        assert_eq!(p.node_of(0.25).unwrap(), 2);
        assert!(p.node_of(0.3).is_err());
        assert!(p.node_of(1.5).is_err());
    }

    #[test]
    fn moment_diagnostic_limits() {
        let params = StableParams::new(1.5, 1).unwrap();
        let paths: Vec<_> = (0..50)
            .map(|k| build_master_path(64, &params, &mut RngStream::new(3, k)).unwrap())
            .collect();
        assert_eq!(moment_diagnostic(&paths, 0.5, 0.5, 0.6, 2.0).unwrap(), 0.0);
        let near_one = moment_diagnostic(&paths, 0.25, 0.5, 1e-9, 2.0).unwrap();
        assert!((near_one - 1.0).abs() < 1e-6);
        assert!(moment_diagnostic(&paths, 0.3, 0.5, 0.6, 2.0).is_err());
        assert!(moment_diagnostic(&[], 0.25, 0.5, 0.6, 2.0).is_err());
    }
}
