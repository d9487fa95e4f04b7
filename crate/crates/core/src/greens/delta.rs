use super::closed::free_wavenumber;
use crate::error::{invalid, Error, Result};
use crate::eval::{EvalPoint, GreenEval, GreenMethod};
use crate::prelude::*;
use crate::units::UnitsConfig;

const DRESSED_POLE_TOL: f64 = 1e-12;

/// Adds `b delta(x)` to a background Hamiltonian:
///
/// `G = G_Q(x, x') + g G_Q(x, 0) G_Q(0, x') / (1 - g G_Q(0, 0))` with `g = -b / hbar`.
pub fn green_delta_dress<F>(
    background: F,
    b: f64,
    x: f64,
    x_prime: f64,
    energy: Complex64,
    units: &UnitsConfig,
) -> Result<GreenEval>
where
    F: Fn(f64, f64, Complex64) -> Result<GreenEval>,
{
    if !(b.is_finite() && b >= 0.0) {
        return Err(invalid("delta strength must be non-negative"));
    }
    let point = EvalPoint::new(x, x_prime, energy)?;
    let gamma = -b / units.hbar();
    let direct = background(x, x_prime, energy)?;
    let left = background(x, 0.0, energy)?;
    let right = background(0.0, x_prime, energy)?;
    let origin = background(0.0, 0.0, energy)?;
    let denom = 1.0 - gamma * origin.value;
    if denom.norm() < DRESSED_POLE_TOL {
        return Err(Error::DressedPole { magnitude: denom.norm() });
    }
    let correction = gamma * left.value * right.value / denom;
    let value = direct.value + correction;
    let rel = |g: &GreenEval| g.est_error / g.value.norm().max(f64::MIN_POSITIVE);
    let corr_rel = rel(&left) + rel(&right) + (gamma * origin.est_error / denom).norm();
    Ok(GreenEval {
        point,
        value,
        method: GreenMethod::DeltaDressed,
        est_error: direct.est_error + corr_rel * correction.norm(),
        pole_distance: None,
    })
}

/// Dressed free-particle Green function written out term by term:
///
/// `(i m / hbar k) [e^{ik|x-x'|} - e^{ikR}] + (i m / hbar) e^{ikR} / (k + i a)`,
/// `R = |x| + |x'|`, `a = m b / hbar^2`.
pub fn green_delta_free_expanded(
    x: f64,
    x_prime: f64,
    energy: Complex64,
    b: f64,
    units: &UnitsConfig,
) -> Result<Complex64> {
    let k = free_wavenumber(energy, units)?;
    let (m, hbar) = (units.mass(), units.hbar());
    let a = m * b / (hbar * hbar);
    let r = x.abs() + x_prime.abs();
    let er = (I * k * r).exp();
    Ok(I * m / (hbar * k) * ((I * k * (x - x_prime).abs()).exp() - er) + I * m / hbar * er / (k + I * a))
}
