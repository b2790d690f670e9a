//! The Γ-shifted Euler scheme
//!
//! ```text
//! X^n_t = ξ + ∫₀ᵗ V^n_s ds,
//! V^n_t = η + ∫₀ᵗ b(Γ_{s-k_n(s)} Z^n_{k_n(s)}) ds + L_t,
//! ```
//!
//! driven by an exact restriction of a [`MasterPath`] to the coarse grid.
//!
//! The state is kept as drift parts `Dv_k = W_k - η` and
//! `Dx_k = X_k - ξ - t_k η - I_{t_k}`, and reassembled as
//! `W_k = η + Dv_k`, `V_k = W_k + L_{t_k}`, `X_k = (ξ + t_k η) + Dx_k + I_{t_k}`.
//! With `b ≡ 0` both drift parts stay exactly zero, so the scheme reproduces
//! the noise transport bit for bit at every resolution.

use crate::drift::{DriftKind, DriftSpec};
use crate::error::{Error, Result};
use crate::kinetic::{MasterPath, PhasePoint};

/// Number of in-step quadrature nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// `N_f / n` nodes, so sub-steps coincide with the master grid.
    #[default]
    Aligned,
    Fixed(usize),
}

impl Quadrature {
    pub fn resolve(self, n: usize, n_fine: usize) -> usize {
        match self {
            Quadrature::Aligned => (n_fine / n.max(1)).max(1),
            Quadrature::Fixed(m) => m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeConfig {
    pub n: usize,
    pub m_quad: usize,
}

impl SchemeConfig {
    pub fn new(n: usize, m_quad: usize) -> Self {
        Self { n, m_quad }
    }

    pub fn with_quadrature(n: usize, quad: Quadrature, n_fine: usize) -> Self {
        Self {
            n,
            m_quad: quad.resolve(n, n_fine),
        }
    }

    pub fn validate(&self, n_fine: usize) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "scheme needs at least one step"));
        }
        if self.m_quad == 0 {
            return Err(Error::param("m_quad", "quadrature needs at least one node"));
        }
        if !n_fine.is_multiple_of(self.n) {
            return Err(Error::GridMismatch { n: self.n, n_fine });
        }
        Ok(())
    }
}

/// Scheme output at the coarse nodes `t_i = i / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    n: usize,
    dim: usize,
    x: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.x[i * self.dim..(i + 1) * self.dim]
    }

    pub fn v(&self, i: usize) -> &[f64] {
        &self.v[i * self.dim..(i + 1) * self.dim]
    }

    /// Drift part of the velocity, `W_i = V_i - L_{t_i}`.
    pub fn w(&self, i: usize) -> &[f64] {
        &self.w[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> PhasePoint {
        PhasePoint {
            x: self.x(i).to_vec(),
            v: self.v(i).to_vec(),
        }
    }

    /// Euclidean distance on `R^{2d}` between node `i` here and node `j` of `other`.
    fn node_dist(&self, i: usize, other: &Trajectory, j: usize) -> f64 {
        self.x(i)
            .iter()
            .zip(other.x(j))
            .chain(self.v(i).iter().zip(other.v(j)))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn check_inputs(master: &MasterPath, spec: &DriftSpec, z0: &PhasePoint) -> Result<()> {
    for got in [spec.dim(), z0.dim()] {
        if got != master.dim() {
            return Err(Error::DimensionMismatch {
                expected: master.dim(),
                got,
            });
        }
    }
    Ok(())
}

/// Runs the scheme with `cfg.n` coarse steps on `master`.
///
/// Per step, with `h = 1/n` and midpoint nodes `u_j = (j + 1/2) h / m`,
/// `q_k = Σ_j (h/m) b(X_k + u_j V_k, V_k)` and
/// `Q_k = Σ_j (h/m) (h - u_j) b(X_k + u_j V_k, V_k)`, then
/// `W_{k+1} = W_k + q_k` and `X_{k+1} = X_k + h W_k + Q_k + (I_{t_{k+1}} - I_{t_k})`.
pub fn run_euler(
    cfg: &SchemeConfig,
    master: &MasterPath,
    spec: &DriftSpec,
    z0: &PhasePoint,
) -> Result<Trajectory> {
    cfg.validate(master.n_fine())?;
    check_inputs(master, spec, z0)?;

    let d = master.dim();
    let n = cfg.n;
    let stride = master.n_fine() / n;
    let h = 1.0 / n as f64;
    let m = cfg.m_quad;
    let sub = h / m as f64;

    let mut traj = Trajectory {
        n,
        dim: d,
        x: Vec::with_capacity((n + 1) * d),
        v: Vec::with_capacity((n + 1) * d),
        w: Vec::with_capacity((n + 1) * d),
    };
    let mut dx = vec![0.0; d];
    let mut dv = vec![0.0; d];
    let (mut xk, mut vk) = (vec![0.0; d], vec![0.0; d]);

    for k in 0..=n {
        let t = traj.time(k);
        let (l, integral) = (master.l(k * stride), master.integral(k * stride));
        for j in 0..d {
            let w = z0.v[j] + dv[j];
            xk[j] = (z0.x[j] + t * z0.v[j]) + dx[j] + integral[j];
            vk[j] = w + l[j];
            traj.w.push(w);
        }
        traj.x.extend_from_slice(&xk);
        traj.v.extend_from_slice(&vk);
        if k == n {
            break;
        }
        for j in 0..d {
            // Γ_u b(Z_k) = b(X_k + u V_k, V_k): the velocity part is frozen over the step.
            let frozen = spec.velocity_part(j, vk[j]);
            let (mut q, mut big_q) = (0.0, 0.0);
            for node in 0..m {
                let u = (node as f64 + 0.5) * sub;
                let b = spec.position_part(j, xk[j] + u * vk[j]) + frozen;
                q += b;
                big_q += (h - u) * b;
            }
            let (q, big_q) = (q * sub, big_q * sub);
            dx[j] += h * dv[j] + big_q;
            dv[j] += q;
        }
    }
    Ok(traj)
}

/// The scheme on the master grid itself, used as the reference solution.
pub fn run_reference(
    master: &MasterPath,
    spec: &DriftSpec,
    z0: &PhasePoint,
    quad: Quadrature,
) -> Result<Trajectory> {
    let cfg = SchemeConfig::with_quadrature(master.n_fine(), quad, master.n_fine());
    run_euler(&cfg, master, spec, z0)
}

/// Closed-form solution at fine node `i` for zero or constant drift:
/// `X_t = ξ + t η + c t²/2 + I_t`, `V_t = η + c t + L_t`.
pub fn exact_solution(
    spec: &DriftSpec,
    master: &MasterPath,
    z0: &PhasePoint,
    i: usize,
) -> Result<PhasePoint> {
    check_inputs(master, spec, z0)?;
    if i > master.n_fine() {
        return Err(Error::param(
            "i",
            format!("node {i} beyond n_fine = {}", master.n_fine()),
        ));
    }
    let c = match spec.kind() {
        DriftKind::Zero | DriftKind::Constant => (0..spec.dim())
            .map(|j| spec.position_part(j, 0.0))
            .collect::<Vec<_>>(),
        other => return Err(Error::UnsupportedDrift(other.name())),
    };
    let t = master.time(i);
    let (l, integral) = (master.l(i), master.integral(i));
    let d = spec.dim();
    let mut x = Vec::with_capacity(d);
    let mut v = Vec::with_capacity(d);
    for j in 0..d {
        if spec.kind() == DriftKind::Zero {
            x.push((z0.x[j] + t * z0.v[j]) + integral[j]);
            v.push(z0.v[j] + l[j]);
        } else {
            x.push((z0.x[j] + t * z0.v[j] + 0.5 * c[j] * t * t) + integral[j]);
            v.push((z0.v[j] + c[j] * t) + l[j]);
        }
    }
    Ok(PhasePoint { x, v })
}

/// `max_i |Z^ref_{t_i} - Z^n_{t_i}|` over the coarse nodes of `coarse`.
pub fn sup_node_error(reference: &Trajectory, coarse: &Trajectory) -> Result<f64> {
    if !reference.n.is_multiple_of(coarse.n) {
        return Err(Error::GridMismatch {
            n: coarse.n,
            n_fine: reference.n,
        });
    }
    if reference.dim != coarse.dim {
        return Err(Error::DimensionMismatch {
            expected: reference.dim,
            got: coarse.dim,
        });
    }
    let stride = reference.n / coarse.n;
    Ok((0..coarse.len())
        .map(|i| coarse.node_dist(i, reference, i * stride))
        .fold(0.0, f64::max))
}
