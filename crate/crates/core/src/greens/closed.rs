use super::{ModeFn, ModePair, ModeValue};
use crate::error::{invalid, Error, Result};
use crate::eval::{EvalPoint, GreenEval, GreenMethod};
use crate::prelude::*;
use crate::specfun::{gamma_complex, parabolic_cylinder_d, parabolic_cylinder_pair};
use crate::units::UnitsConfig;
use core::f64::consts::PI;

const POLE_RADIUS: f64 = 1e-3;

/// `k` with `hbar^2 k^2 / 2m = E` on the sheet `Im k >= 0`.
///
/// The cut of `k(E)` runs along the positive real `E` axis; on the cut the
/// limit from above (`E + i0`, outgoing waves) is taken.
pub fn free_wavenumber(energy: Complex64, units: &UnitsConfig) -> Result<Complex64> {
    if energy == cr(0.0) {
        return Err(Error::BranchPoint);
    }
    let s = 2.0 * units.mass() / (units.hbar() * units.hbar());
    if energy.im == 0.0 && energy.re > 0.0 {
        return Ok(cr((s * energy.re).sqrt()));
    }
    Ok(I * (-s * energy).sqrt())
}

/// `(i m / hbar k) exp(i k |x - x'|)`.
pub fn green_free(x: f64, x_prime: f64, energy: Complex64, units: &UnitsConfig) -> Result<GreenEval> {
    let point = EvalPoint::new(x, x_prime, energy)?;
    let k = free_wavenumber(energy, units)?;
    let value = I * units.mass() / (units.hbar() * k) * (I * k * (x - x_prime).abs()).exp();
    Ok(GreenEval {
        point,
        value,
        method: GreenMethod::ClosedFree,
        est_error: 4e-16 * value.norm() * (1.0 + (k * (x - x_prime).abs()).norm()),
        pole_distance: None,
    })
}

/// Plane waves `exp(-/+ i k x)`.
pub fn free_modes(energy: Complex64, units: &UnitsConfig) -> Result<ModePair> {
    let k = free_wavenumber(energy, units)?;
    let u_minus: ModeFn = Box::new(move |x| {
        let e = (-I * k * x).exp();
        Ok(ModeValue::plain(e, -I * k * e, 1e-16 * (1.0 + (k * x).norm())))
    });
    let u_plus: ModeFn = Box::new(move |x| {
        let e = (I * k * x).exp();
        Ok(ModeValue::plain(e, I * k * e, 1e-16 * (1.0 + (k * x).norm())))
    });
    ModePair::new(energy, u_minus, u_plus, &[0.0], GreenMethod::ClosedFree)
}

struct Oscillator {
    /// `p = E / hbar omega - 1/2`
    order: Complex64,
    /// `sqrt(2 m omega / hbar)`
    zeta: f64,
    /// Distance of `p` to the nearest non-negative integer, and that integer.
    pole: (f64, u64),
}

fn oscillator(energy: Complex64, units: &UnitsConfig, omega: f64) -> Result<Oscillator> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("oscillator frequency omega must be positive"));
    }
    let order = energy / (units.hbar() * omega) - 0.5;
    let n = order.re.round().max(0.0);
    let pole = ((order - n).norm(), n as u64);
    Ok(Oscillator { order, zeta: (2.0 * units.mass() * omega / units.hbar()).sqrt(), pole })
}

/// Closed-form oscillator Wronskian `-sqrt(2 m omega / hbar) sqrt(2 pi) / Gamma(-p)`.
pub fn harmonic_wronskian(energy: Complex64, units: &UnitsConfig, omega: f64) -> Result<Complex64> {
    let osc = oscillator(energy, units, omega)?;
    let rg = crate::specfun::rgamma_complex(-osc.order);
    Ok(-osc.zeta * (2.0 * PI).sqrt() * rg)
}

/// Oscillator Green function
/// `sqrt(m / (pi hbar omega)) Gamma(-p) D_p(zeta x_>) D_p(-zeta x_<)`.
pub fn green_harmonic(
    x: f64,
    x_prime: f64,
    energy: Complex64,
    units: &UnitsConfig,
    omega: f64,
) -> Result<GreenEval> {
    let point = EvalPoint::new(x, x_prime, energy)?;
    let osc = oscillator(energy, units, omega)?;
    if osc.pole.0 < POLE_RADIUS {
        return Err(Error::NearPole { index: osc.pole.1, distance: osc.pole.0 });
    }
    let (lo, hi) = if x <= x_prime { (x, x_prime) } else { (x_prime, x) };
    let g = gamma_complex(-osc.order)?;
    let d_hi = parabolic_cylinder_d(osc.order, osc.zeta * hi)?;
    let d_lo = parabolic_cylinder_d(osc.order, -osc.zeta * lo)?;
    let pre = (units.mass() / (PI * units.hbar() * omega)).sqrt();
    let value = pre * g.value * d_hi.value * d_lo.value;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range(format!("oscillator G overflows at x = {x}, x' = {x_prime}")));
    }
    let rel = g.rel_error() + d_hi.rel_error() + d_lo.rel_error() + 1e-15;
    Ok(GreenEval {
        point,
        value,
        method: GreenMethod::ClosedHarmonic,
        est_error: rel * value.norm(),
        pole_distance: Some(osc.pole.0),
    })
}

/// `u+(x) = D_p(zeta x)`, `u-(x) = D_p(-zeta x)`.
pub fn harmonic_modes(energy: Complex64, units: &UnitsConfig, omega: f64) -> Result<ModePair> {
    let osc = oscillator(energy, units, omega)?;
    let (p, zeta) = (osc.order, osc.zeta);
    let eval = move |z: f64, sign: f64| -> Result<ModeValue> {
        let (d, dd) = parabolic_cylinder_pair(p, sign * zeta * z)?;
        let rel = d.rel_error() + dd.rel_error() + 1e-16;
        Ok(ModeValue::plain(d.value, sign * zeta * dd.value, rel))
    };
    let u_minus: ModeFn = Box::new(move |x| eval(x, -1.0));
    let u_plus: ModeFn = Box::new(move |x| eval(x, 1.0));
    ModePair::new(energy, u_minus, u_plus, &[0.0], GreenMethod::ClosedHarmonic)
}
