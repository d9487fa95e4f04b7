//! Energy solutions of `u'' = (2m/hbar^2)(V - E) u` by numerical integration.
//!
//! `u+` starts at `x_max` with the first-order WKB slope of the wave that is
//! outgoing (or decaying) to the right and is integrated towards `x_min`; `u-`
//! mirrors it from `x_min`. Both directions are the ones in which the wanted
//! solution dominates. Values are renormalized at every node and the exponent
//! is kept separately, so deep tunnelling regions do not overflow.

use super::{ModeFn, ModePair, ModeValue};
use crate::error::{invalid, Error, Result};
use crate::eval::GreenMethod;
use crate::grid::Grid1D;
use crate::ode::{dopri5, OdeConfig};
use crate::potential::PotentialModel;
use crate::prelude::*;
use crate::units::UnitsConfig;
use alloc::sync::Arc;

/// Admixture of the wrong solution tolerated at the domain centre.
const CONTAMINATION_TOL: f64 = 1e-9;
const BASE_REL_ERR: f64 = 1e-10;

struct Profile {
    model: PotentialModel,
    energy: Complex64,
    scale: f64,
    ode: OdeConfig,
}

impl Profile {
    /// `(2m/hbar^2)(E - V(x))`; NaN outside the potential's range.
    fn w(&self, x: f64, units: &UnitsConfig) -> Complex64 {
        let v = self.model.value(x, units).unwrap_or(f64::NAN);
        self.scale * (self.energy - v)
    }

    fn w_prime(&self, x: f64, units: &UnitsConfig) -> f64 {
        -self.scale * self.model.derivative(x, units).unwrap_or(f64::NAN)
    }
}

/// Local wavenumber with `Im q >= 0` (`+sqrt` on the positive real axis).
fn local_wavenumber(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re > 0.0 {
        cr(w.re.sqrt())
    } else {
        I * (-w).sqrt()
    }
}

struct Track {
    grid: Grid1D,
    states: Vec<[Complex64; 2]>,
    log_scales: Vec<f64>,
    /// `+1` for `u+` (nodes filled right to left), `-1` for `u-`.
    side: f64,
    rel_err: f64,
}

fn normalize(y: [Complex64; 2]) -> ([Complex64; 2], f64) {
    let m = (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
    ([y[0] / m, y[1] / m], m.ln())
}

fn integrate(
    profile: &Profile,
    units: &UnitsConfig,
    from: f64,
    y: [Complex64; 2],
    to: f64,
    h: &mut f64,
) -> Result<[Complex64; 2]> {
    let rhs = |x: f64, y: &[Complex64; 2]| [y[1], -profile.w(x, units) * y[0]];
    dopri5(rhs, from, y, to, &profile.ode, h).map(|(y, _)| y)
}

fn sweep(profile: &Profile, units: &UnitsConfig, grid: Grid1D, side: f64) -> Result<Vec<([Complex64; 2], f64)>> {
    let n = grid.len();
    let start = if side > 0.0 { n - 1 } else { 0 };
    let xs = grid.x(start);
    let w = profile.w(xs, units);
    let q = local_wavenumber(w);
    let dq = profile.w_prime(xs, units) / (2.0 * q);
    // WKB: u ~ q^{-1/2} exp(+/- i \int q)
    let slope = side * I * q - dq / (2.0 * q);
    let (mut y, mut log) = normalize([cr(1.0), slope]);
    let mut out = vec![([cr(0.0); 2], 0.0); n];
    out[start] = (y, log);
    let mut h = 0.0;
    let order: Vec<usize> = if side > 0.0 { (0..n - 1).rev().collect() } else { (1..n).collect() };
    let mut prev = start;
    for i in order {
        let next = integrate(profile, units, grid.x(prev), y, grid.x(i), &mut h)?;
        let (ny, dl) = normalize(next);
        y = ny;
        log += dl;
        out[i] = (y, log);
        prev = i;
    }
    Ok(out)
}

/// `|q'/(2 q^2)| exp(-2 \int Im q)` between the domain end and its centre.
fn contamination(profile: &Profile, units: &UnitsConfig, grid: &Grid1D, end: usize) -> Result<f64> {
    let x_end = grid.x(end);
    let w = profile.w(x_end, units);
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Extrapolation { x: x_end, min: grid.x_min(), max: grid.x_max() });
    }
    if w.norm() == 0.0 {
        return Err(Error::DomainTooSmall(format!("turning point at the domain end x = {x_end}")));
    }
    let wkb = (profile.w_prime(x_end, units) / (4.0 * w * w.sqrt())).norm();
    if wkb == 0.0 {
        return Ok(0.0);
    }
    let mid = grid.len() / 2;
    let (a, b) = if end > mid { (mid, end) } else { (end, mid) };
    let mut s = 0.0;
    for i in a..b {
        let q0 = local_wavenumber(profile.w(grid.x(i), units)).im;
        let q1 = local_wavenumber(profile.w(grid.x(i + 1), units)).im;
        s += 0.5 * (q0 + q1) * grid.spacing();
    }
    Ok(wkb * (-2.0 * s).exp())
}

fn mode_fn(track: Arc<Track>, profile: Arc<Profile>, units: UnitsConfig) -> ModeFn {
    Box::new(move |x: f64| {
        let g = &track.grid;
        if !(x >= g.x_min() && x <= g.x_max()) {
            return Err(Error::Extrapolation { x, min: g.x_min(), max: g.x_max() });
        }
        let near = g.nearest(x);
        // start from the node on the side the sweep came from
        let node = if track.side > 0.0 {
            if g.x(near) >= x { near } else { near + 1 }
        } else if g.x(near) <= x {
            near
        } else {
            near - 1
        };
        let y0 = track.states[node];
        let log = track.log_scales[node];
        let y = if g.x(node) == x {
            y0
        } else {
            let mut h = 0.0;
            integrate(&profile, &units, g.x(node), y0, x, &mut h)?
        };
        Ok(ModeValue { value: y[0], deriv: y[1], log_scale: log, rel_err: track.rel_err })
    })
}

/// Numerical `u-`, `u+` on `domain` for the regular part of `model`.
pub fn solve_custom_modes(
    model: &PotentialModel,
    energy: Complex64,
    domain: &Grid1D,
    units: &UnitsConfig,
) -> Result<ModePair> {
    if model.delta_strength().is_some() {
        return Err(invalid("point interactions are added by dressing, not by mode integration"));
    }
    if !(energy.re.is_finite() && energy.im.is_finite()) {
        return Err(invalid("energy must be finite"));
    }
    if domain.len() < 8 {
        return Err(invalid("mode domain needs at least 8 nodes"));
    }
    let profile = Arc::new(Profile {
        model: model.clone(),
        energy,
        scale: units.kinetic_scale(),
        ode: OdeConfig::default(),
    });
    let n = domain.len();
    let right = contamination(&profile, units, domain, n - 1)?;
    let left = contamination(&profile, units, domain, 0)?;
    for (end, c) in [("right", right), ("left", left)] {
        if c > CONTAMINATION_TOL {
            return Err(Error::DomainTooSmall(format!(
                "{end} end: WKB start leaves a {c:.2e} admixture of the wrong solution"
            )));
        }
    }
    let mut tracks = Vec::new();
    for (side, c) in [(1.0, right), (-1.0, left)] {
        let data = sweep(&profile, units, *domain, side)?;
        let (states, log_scales) = data.into_iter().unzip();
        tracks.push(Arc::new(Track {
            grid: *domain,
            states,
            log_scales,
            side,
            rel_err: BASE_REL_ERR + c,
        }));
    }
    let u_minus = mode_fn(tracks[1].clone(), profile.clone(), *units);
    let u_plus = mode_fn(tracks[0].clone(), profile, *units);
    let probes: Vec<f64> = [0.1, 0.3, 0.5, 0.7, 0.9]
        .iter()
        .map(|f| domain.x(((n - 1) as f64 * f).round() as usize))
        .collect();
    match ModePair::new(energy, u_minus, u_plus, &probes, GreenMethod::NumericalModes) {
        Err(Error::ModeInconsistency { spread }) => Err(Error::DomainTooSmall(format!(
            "Wronskian drifts by {spread:.2e} across the domain"
        ))),
        other => other,
    }
}

/// A mode domain that keeps the WKB start error negligible for `model`.
pub fn default_domain(model: &PotentialModel, energy: Complex64, units: &UnitsConfig) -> Result<Grid1D> {
    match model {
        PotentialModel::Custom(c) => {
            let n = (((c.x_max() - c.x_min()) / 0.02).round() as usize + 1).clamp(101, 4001);
            Grid1D::new(c.x_min(), c.x_max(), n)
        }
        PotentialModel::Harmonic { omega } => {
            let length = (units.hbar() / (units.mass() * omega)).sqrt();
            let turning = (2.0 * energy.norm() / (units.hbar() * omega)).sqrt();
            let half = (2.0 * turning + 8.0).max(10.0) * length;
            let n = ((2.0 * half / (0.05 * length)).round() as usize + 1).clamp(101, 8001);
            Grid1D::new(-half, half, n)
        }
        PotentialModel::Free => Grid1D::new(-20.0, 20.0, 801),
        PotentialModel::Delta { background, .. } => match background {
            Some(bg) => default_domain(bg, energy, units),
            None => Grid1D::new(-20.0, 20.0, 801),
        },
    }
}
