//! Time-domain ground truth: a Crank-Nicolson evolver, kernel convolution
//! `psi(x, t) = \int K(x, x', t) psi0(x') dx'`, and residual checks of the
//! kernels against the Schrodinger equation and their `t -> 0` limit.

use crate::error::{invalid, Error, Result};
use crate::grid::Grid1D;
use crate::potential::PotentialModel;
use crate::prelude::*;
use crate::quad::{integrate_with_breaks, QuadConfig};
use crate::units::UnitsConfig;
use core::cell::Cell;
use core::f64::consts::PI;

/// Stability/accuracy bound on `dt (max|V| + hbar^2 / 2m h^2) / hbar`.
pub const STABILITY_LIMIT: f64 = 0.5;
const NORM_DRIFT: f64 = 1e-6;
const CONTAINMENT: f64 = 1e-6;
const REFINE: usize = 4;

/// Sampled wavefunction with its cached L2 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionState {
    grid: Grid1D,
    values: Vec<Complex64>,
    time: Complex64,
    norm: f64,
}

fn trapezoid_l2(grid: &Grid1D, values: &[Complex64]) -> f64 {
    let n = values.len();
    let s: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>()
        - 0.5 * (values[0].norm_sqr() + values[n - 1].norm_sqr());
    (s * grid.spacing()).sqrt()
}

impl WavefunctionState {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, time: Complex64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for {} grid nodes", values.len(), grid.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid("wavefunction values must be finite"));
        }
        let norm = trapezoid_l2(&grid, &values);
        Ok(Self { grid, values, time, norm })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect(), cr(0.0))
    }

    /// `(2 pi sigma^2)^-1/4 exp(-(x - center)^2 / 4 sigma^2 + i k0 x)`; `sigma` is the
    /// standard deviation of `|psi|^2`.
    pub fn gaussian(grid: Grid1D, center: f64, sigma: f64, k0: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(invalid("packet width must be positive"));
        }
        let a = (2.0 * PI * sigma * sigma).powf(-0.25);
        Self::from_fn(grid, |x| a * c(-(x - center).powi(2) / (4.0 * sigma * sigma), k0 * x).exp())
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self) -> Complex64 {
        self.time
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Largest `|psi|` at the two end nodes.
    pub fn boundary_amplitude(&self) -> f64 {
        self.values[0].norm().max(self.values[self.values.len() - 1].norm())
    }

    /// `<self | other>` by the trapezoid rule.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        same_grid(self, other)?;
        let n = self.values.len();
        let mut s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        s -= 0.5 * (self.values[0].conj() * other.values[0] + self.values[n - 1].conj() * other.values[n - 1]);
        Ok(s * self.grid.spacing())
    }

    /// `<x^k>` of `|psi|^2 / norm^2`.
    pub fn moment(&self, k: i32) -> f64 {
        let n = self.values.len();
        let w = |i: usize| if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        let s: f64 = (0..n).map(|i| w(i) * self.grid.x(i).powi(k) * self.values[i].norm_sqr()).sum();
        s * self.grid.spacing() / (self.norm * self.norm)
    }

    /// The part of the state on the nodes within `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Result<Self> {
        let (i0, i1) = (self.grid.nearest(lo), self.grid.nearest(hi));
        if i1 <= i0 {
            return Err(Error::Shape(format!("window [{lo}, {hi}] holds fewer than two nodes")));
        }
        let sub = Grid1D::new(self.grid.x(i0), self.grid.x(i1), i1 - i0 + 1)?;
        Self::new(sub, self.values[i0..=i1].to_vec(), self.time)
    }

    /// Cubic Lagrange interpolation between nodes.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        if !self.grid.contains(x) {
            return cr(0.0);
        }
        let h = self.grid.spacing();
        let i = (((x - self.grid.x_min()) / h).floor() as usize).min(n - 2);
        let j0 = i.saturating_sub(1).min(n.saturating_sub(4));
        let mut s = cr(0.0);
        for j in j0..(j0 + 4).min(n) {
            let mut l = 1.0;
            for k in j0..(j0 + 4).min(n) {
                if k != j {
                    l *= (x - self.grid.x(k)) / (self.grid.x(j) - self.grid.x(k));
                }
            }
            s += l * self.values[j];
        }
        s
    }
}

fn same_grid(a: &WavefunctionState, b: &WavefunctionState) -> Result<()> {
    if a.grid.compatible(&b.grid) {
        Ok(())
    } else {
        Err(Error::Shape("states live on different grids".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// `psi = 0` beyond the grid.
    Reflecting,
    /// Complex potential `-i strength ((x - edge) / width)^2` inside a layer at each end.
    AbsorbingLayer { width: f64, strength: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub boundary: Boundary,
}

impl EvolveConfig {
    pub fn new(dt: f64, n_steps: usize, boundary: Boundary) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config("time step must be positive".into()));
        }
        if let Boundary::AbsorbingLayer { width, strength } = boundary {
            if !(width > 0.0 && strength >= 0.0 && width.is_finite() && strength.is_finite()) {
                return Err(Error::Config("absorbing layer needs width > 0 and strength >= 0".into()));
            }
        }
        Ok(Self { dt, n_steps, boundary })
    }
}

/// Advances `psi0` by `n_steps` Crank-Nicolson steps of `(1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi`.
///
/// `H` uses the three-point Laplacian. A point interaction `b delta(x)` enters
/// as `b / h` on the node at `x = 0`, which is the discrete form of
/// `psi'(0+) - psi'(0-) = (2 m b / hbar^2) psi(0)`; the grid must have a node there.
pub fn evolve_crank_nicolson(
    psi0: &WavefunctionState,
    model: &PotentialModel,
    cfg: &EvolveConfig,
    units: &UnitsConfig,
) -> Result<WavefunctionState> {
    let grid = psi0.grid;
    let n = grid.len();
    if n < 3 {
        return Err(Error::Config("grid too small to evolve".into()));
    }
    let h = grid.spacing();
    let (hbar, m) = (units.hbar(), units.mass());
    let kinetic = hbar * hbar / (2.0 * m * h * h);

    let mut diag = Vec::with_capacity(n);
    let mut vmax: f64 = 0.0;
    for x in grid.points() {
        let v = model.value(x, units)?;
        vmax = vmax.max(v.abs());
        diag.push(cr(2.0 * kinetic + v));
    }
    if let Some(b) = model.delta_strength() {
        let i = grid
            .node_at(0.0)
            .ok_or_else(|| Error::Config("point interaction needs a grid node at x = 0".into()))?;
        diag[i] += b / h;
        vmax = vmax.max(b / h);
    }
    if let Boundary::AbsorbingLayer { width, strength } = cfg.boundary {
        for (i, d) in diag.iter_mut().enumerate() {
            let x = grid.x(i);
            let depth = (grid.x_min() + width - x).max(x - (grid.x_max() - width)).max(0.0);
            *d -= I * strength * (depth / width).powi(2);
        }
        vmax += strength;
    }
    let stability = cfg.dt * (vmax + kinetic) / hbar;
    if stability > STABILITY_LIMIT {
        return Err(Error::Config(format!(
            "dt (max|V| + hbar^2/2mh^2)/hbar = {stability:.3} exceeds {STABILITY_LIMIT}"
        )));
    }
    let reflecting = cfg.boundary == Boundary::Reflecting;
    if reflecting && psi0.boundary_amplitude() > CONTAINMENT * psi0.norm.max(f64::MIN_POSITIVE) {
        return Err(invalid("initial state is not contained in the grid"));
    }

    // implicit side A = 1 + i dt H / 2 hbar, explicit side B = 1 - i dt H / 2 hbar
    let s = I * cfg.dt / (2.0 * hbar);
    let off = -kinetic;
    let a_off = s * off;
    let a_diag: Vec<Complex64> = diag.iter().map(|d| 1.0 + s * d).collect();
    // forward-eliminated Thomas factors of A
    let mut cp = vec![cr(0.0); n];
    let mut inv = vec![cr(0.0); n];
    inv[0] = a_diag[0].inv();
    cp[0] = a_off * inv[0];
    for i in 1..n {
        let denom = a_diag[i] - a_off * cp[i - 1];
        if denom.norm() < 1e-300 {
            return Err(Error::Numerical("singular Crank-Nicolson matrix".into()));
        }
        inv[i] = denom.inv();
        cp[i] = a_off * inv[i];
    }

    let mut psi = psi0.values.clone();
    let mut rhs = vec![cr(0.0); n];
    let norm0 = psi0.norm;
    let check_every = 64;
    for step in 0..cfg.n_steps {
        for i in 0..n {
            let mut r = (1.0 - s * diag[i]) * psi[i];
            if i > 0 {
                r -= s * off * psi[i - 1];
            }
            if i + 1 < n {
                r -= s * off * psi[i + 1];
            }
            rhs[i] = r;
        }
        psi[0] = rhs[0] * inv[0];
        for i in 1..n {
            psi[i] = (rhs[i] - a_off * psi[i - 1]) * inv[i];
        }
        for i in (0..n - 1).rev() {
            let next = psi[i + 1];
            psi[i] -= cp[i] * next;
        }
        if (step + 1) % check_every == 0 || step + 1 == cfg.n_steps {
            let norm = trapezoid_l2(&grid, &psi);
            if !norm.is_finite() {
                return Err(Error::Numerical("non-finite wavefunction".into()));
            }
            if reflecting {
                if (norm - norm0).abs() > NORM_DRIFT * norm0 {
                    return Err(Error::Numerical(format!("norm drift {:.3e}", (norm - norm0).abs() / norm0)));
                }
                let edge = psi[0].norm().max(psi[n - 1].norm());
                if edge > CONTAINMENT * norm0 {
                    return Err(Error::Numerical(format!(
                        "boundary amplitude {edge:.3e} after {} steps; enlarge the grid",
                        step + 1
                    )));
                }
            } else if norm > norm0 * (1.0 + NORM_DRIFT) {
                return Err(Error::Numerical("norm grew under an absorbing boundary".into()));
            }
        }
    }
    let mut out = WavefunctionState::new(grid, psi, psi0.time + cfg.dt * cfg.n_steps as f64)?;
    out.norm = trapezoid_l2(&grid, &out.values);
    Ok(out)
}

/// `psi(x, t) = \int K(x, x', t) psi0(x') dx'` by the trapezoid rule on the grid.
pub fn apply_propagator<K>(kernel: K, psi0: &WavefunctionState, t: Complex64) -> Result<WavefunctionState>
where
    K: Fn(f64, f64, Complex64) -> Result<Complex64>,
{
    apply_propagator_refined(kernel, psi0, t, &[])
}

/// As [`apply_propagator`], with the two cells around each point of `cusps`
/// subdivided 4x (input values interpolated cubically). When the kernel width,
/// taken as `sqrt(|t|)` (the free width for `hbar / m = 1`), is below four grid
/// spacings, the cells within six widths of `x' = x` are subdivided as well.
pub fn apply_propagator_refined<K>(
    kernel: K,
    psi0: &WavefunctionState,
    t: Complex64,
    cusps: &[f64],
) -> Result<WavefunctionState>
where
    K: Fn(f64, f64, Complex64) -> Result<Complex64>,
{
    if t == cr(0.0) {
        return Err(Error::SingularTime);
    }
    let grid = psi0.grid;
    let n = grid.len();
    let h = grid.spacing();
    let peak = psi0.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let support: Vec<usize> = (0..n).filter(|&j| psi0.values[j].norm() > 1e-17 * peak).collect();
    let mut refined = vec![false; n.saturating_sub(1)];
    for &x0 in cusps {
        if grid.contains(x0) {
            let i = grid.nearest(x0);
            for cell in [i.wrapping_sub(1), i] {
                if cell < refined.len() {
                    refined[cell] = true;
                }
            }
        }
    }
    let width = t.norm().sqrt();
    let reach = if width < 4.0 * h { (6.0 * width / h).ceil() as usize + 1 } else { 0 };
    let weight = |j: usize| if j == 0 || j + 1 == n { 0.5 } else { 1.0 };

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid.x(i);
        let mut row_cells = refined.clone();
        for cell in i.saturating_sub(reach)..(i + reach).min(row_cells.len()) {
            row_cells[cell] = true;
        }
        let mut s = cr(0.0);
        for &j in &support {
            let mut w = weight(j);
            // refined cells drop their plain trapezoid half-weights
            if j > 0 && row_cells[j - 1] {
                w -= 0.5;
            }
            if j + 1 < n && row_cells[j] {
                w -= 0.5;
            }
            if w != 0.0 {
                s += w * kernel(x, grid.x(j), t)? * psi0.values[j];
            }
        }
        s *= h;
        for (cell, _) in row_cells.iter().enumerate().filter(|(_, r)| **r) {
            let (a, sub) = (grid.x(cell), h / REFINE as f64);
            let mut part = cr(0.0);
            for k in 0..=REFINE {
                let xp = a + k as f64 * sub;
                let w = if k == 0 || k == REFINE { 0.5 } else { 1.0 };
                let v = if k == 0 {
                    psi0.values[cell]
                } else if k == REFINE {
                    psi0.values[cell + 1]
                } else {
                    psi0.interpolate(xp)
                };
                if v != cr(0.0) {
                    part += w * kernel(x, xp, t)? * v;
                }
            }
            s += part * sub;
        }
        out.push(s);
    }
    WavefunctionState::new(grid, out, psi0.time + t)
}

/// Raw and phase-aligned L2 distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Comparison {
    pub raw: f64,
    /// `min over phi of ||a - e^{i phi} b||`.
    pub aligned: f64,
}

pub fn compare_l2(a: &WavefunctionState, b: &WavefunctionState) -> Result<L2Comparison> {
    same_grid(a, b)?;
    let diff: Vec<Complex64> = a.values.iter().zip(&b.values).map(|(p, q)| p - q).collect();
    let raw = trapezoid_l2(&a.grid, &diff);
    let overlap = b.inner(a)?.norm();
    let aligned = (a.norm * a.norm + b.norm * b.norm - 2.0 * overlap).max(0.0).sqrt();
    Ok(L2Comparison { raw, aligned })
}

/// `|[-(hbar^2/2m) d^2/dx^2 + V(x) - i hbar d/dt] K|` by central differences.
#[allow(clippy::too_many_arguments)]
pub fn schrodinger_residual<K>(
    kernel: K,
    model: &PotentialModel,
    x: f64,
    x_prime: f64,
    t: Complex64,
    h: f64,
    dt: f64,
    units: &UnitsConfig,
) -> Result<f64>
where
    K: Fn(f64, f64, Complex64) -> Result<Complex64>,
{
    if !(h > 0.0 && dt > 0.0) {
        return Err(invalid("steps must be positive"));
    }
    let (hbar, m) = (units.hbar(), units.mass());
    let k0 = kernel(x, x_prime, t)?;
    let kxx = (kernel(x + h, x_prime, t)? - 2.0 * k0 + kernel(x - h, x_prime, t)?) / (h * h);
    let kt = (kernel(x, x_prime, t + dt)? - kernel(x, x_prime, t - dt)?) / (2.0 * dt);
    let v = model.value(x, units)?;
    Ok((-hbar * hbar / (2.0 * m) * kxx + v * k0 - I * hbar * kt).norm())
}

/// `e_k = |\int K(x, x', -i tau_k) f(x') dx' - f(x)|` for decreasing `tau_k`.
///
/// Fails with a check error if the sequence does not decrease. The integral
/// runs over `|x' - x| <= 12` with breakpoints at `x`, at the kernel width and at `x' = 0`.
pub fn delta_limit_check<K, F>(kernel: K, f: F, x: f64, tau_list: &[f64]) -> Result<Vec<f64>>
where
    K: Fn(f64, f64, Complex64) -> Result<Complex64>,
    F: Fn(f64) -> f64,
{
    if tau_list.is_empty() || tau_list.iter().any(|t| !(*t > 0.0)) {
        return Err(invalid("tau list must hold positive values"));
    }
    if tau_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("tau list must be decreasing"));
    }
    let cfg = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 4000 };
    let mut errors = Vec::with_capacity(tau_list.len());
    for &tau in tau_list {
        let w = tau.sqrt();
        let mut pts = vec![x - 12.0, x + 12.0, x];
        for k in [1.0, 3.0, 6.0] {
            pts.push(x - k * w);
            pts.push(x + k * w);
        }
        if (x - 12.0..=x + 12.0).contains(&0.0) {
            pts.push(0.0);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let failure = Cell::new(None);
        let q = integrate_with_breaks(
            |xp| match kernel(x, xp, c(0.0, -tau)) {
                Ok(k) => k * f(xp),
                Err(e) => {
                    failure.set(Some(e));
                    cr(0.0)
                }
            },
            &pts,
            &cfg,
        )?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        errors.push((q.value - f(x)).norm());
    }
    if errors.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Check(format!("limit errors do not decrease: {errors:?}")));
    }
    Ok(errors)
}
