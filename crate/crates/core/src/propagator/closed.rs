use super::check_time;
use crate::error::{invalid, Error, Result};
use crate::eval::{EvalPoint, PropEval, PropMethod};
use crate::potential::PotentialModel;
use crate::prelude::*;
use crate::specfun::{erfc_complex, erfcx_complex};
use crate::units::UnitsConfig;
use core::f64::consts::PI;

const CAUSTIC_TOL: f64 = 1e-10;
const EPS: f64 = 2.3e-16;

fn free_value(r: f64, t: Complex64, units: &UnitsConfig) -> Complex64 {
    let (m, hbar) = (units.mass(), units.hbar());
    let pre = (m / (2.0 * PI * I * hbar * t)).sqrt();
    pre * (I * m * r * r / (2.0 * hbar * t)).exp()
}

/// `sqrt(m / (2 pi i hbar t)) exp(i m (x - x')^2 / (2 hbar t))`.
pub fn propagator_free(x: f64, x_prime: f64, t: Complex64, units: &UnitsConfig) -> Result<PropEval> {
    check_time(t)?;
    let point = EvalPoint::new(x, x_prime, t)?;
    let value = free_value(x - x_prime, t, units);
    let phase = (units.mass() * (x - x_prime).powi(2) / (2.0 * units.hbar() * t.norm())).max(1.0);
    Ok(PropEval { point, value, method: PropMethod::ClosedFree, terms_used: None, est_error: 4.0 * EPS * phase * value.norm() })
}

/// Free propagator plus the point-interaction term
/// `-(a/2) exp(a R + a^2 beta) erfc((R + 2 a beta) / (2 sqrt(beta)))`,
/// `a = m b / hbar^2`, `beta = i hbar t / 2m`, `R = |x| + |x'|`.
pub fn propagator_delta(x: f64, x_prime: f64, t: Complex64, b: f64, units: &UnitsConfig) -> Result<PropEval> {
    check_time(t)?;
    if !(b.is_finite() && b >= 0.0) {
        return Err(invalid("delta strength must be non-negative"));
    }
    let point = EvalPoint::new(x, x_prime, t)?;
    let (m, hbar) = (units.mass(), units.hbar());
    let a = m * b / (hbar * hbar);
    let beta = I * hbar * t / (2.0 * m);
    let rr = x.abs() + x_prime.abs();
    let sb = beta.sqrt();
    let w = (rr + 2.0 * a * beta) / (2.0 * sb);
    // e^{aR + a^2 beta} erfc(w) = e^{-R^2/(4 beta)} erfcx(w)
    let scaled = erfcx_complex(w);
    let gauss = (-(rr * rr) / (4.0 * beta)).exp();
    let correction = -0.5 * a * gauss * scaled.value;
    if !(correction.re.is_finite() && correction.im.is_finite()) {
        return Err(Error::Range(format!("erfc term overflows at w = {w}")));
    }
    let k0 = free_value(x - x_prime, t, units);
    let value = k0 + correction;
    let est = 4.0 * EPS * k0.norm() + (0.5 * a * gauss).norm() * scaled.est_error + 4.0 * EPS * correction.norm();
    Ok(PropEval { point, value, method: PropMethod::ClosedDelta, terms_used: None, est_error: est })
}

/// The delta propagator as printed in the source derivation:
/// `K0 + (mb/2hbar^2) exp(-(mb/hbar^2)(R + i m b^2 t / 2 hbar^3)) erfc(sqrt(m/(2 i hbar t)) (R - i b t / hbar))`.
///
/// Kept only for the sign/argument comparison against an independent inversion.
pub fn delta_printed_form(x: f64, x_prime: f64, t: Complex64, b: f64, units: &UnitsConfig) -> Result<Complex64> {
    check_time(t)?;
    let (m, hbar) = (units.mass(), units.hbar());
    let a = m * b / (hbar * hbar);
    let rr = x.abs() + x_prime.abs();
    let expo = (-a * (rr + I * m * b * b * t / (2.0 * hbar.powi(3)))).exp();
    let arg = (m / (2.0 * I * hbar * t)).sqrt() * (rr - I * b * t / hbar);
    let value = free_value(x - x_prime, t, units) + 0.5 * a * expo * erfc_complex(arg).value;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range("printed delta form overflows".into()));
    }
    Ok(value)
}

/// Oscillator kernel
/// `sqrt(m omega / pi hbar) e^{-i omega t/2} (1 - e^{-2 i omega t})^{-1/2} exp{(i m omega / 2 hbar sin omega t)[(x^2 + x'^2) cos omega t - 2 x x']}`.
///
/// Writing the prefactor through `1 - e^{-2 i omega t}` keeps it analytic in the
/// lower half `t` plane, so the phase past each caustic follows by continuation.
pub fn propagator_harmonic(
    x: f64,
    x_prime: f64,
    t: Complex64,
    omega: f64,
    units: &UnitsConfig,
) -> Result<PropEval> {
    check_time(t)?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("oscillator frequency omega must be positive"));
    }
    let point = EvalPoint::new(x, x_prime, t)?;
    let (m, hbar) = (units.mass(), units.hbar());
    let wt = omega * t;
    let s = wt.sin();
    if s.norm() < CAUSTIC_TOL {
        return Err(Error::Caustic { magnitude: s.norm() });
    }
    let q = (-2.0 * I * wt).exp();
    let pre = (m * omega / (PI * hbar)).sqrt() * (-0.5 * I * wt).exp() / (1.0 - q).sqrt();
    let expo = I * m * omega / (2.0 * hbar * s) * ((x * x + x_prime * x_prime) * wt.cos() - 2.0 * x * x_prime);
    let value = pre * expo.exp();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range(format!("oscillator kernel overflows at t = {t}")));
    }
    let est = 8.0 * EPS * value.norm() * (1.0 + expo.norm()) / s.norm().min(1.0);
    Ok(PropEval { point, value, method: PropMethod::ClosedHarmonic, terms_used: None, est_error: est })
}

/// Closed form for a catalog potential.
pub fn propagator_closed(
    model: &PotentialModel,
    x: f64,
    x_prime: f64,
    t: Complex64,
    units: &UnitsConfig,
) -> Result<PropEval> {
    match model {
        PotentialModel::Free => propagator_free(x, x_prime, t, units),
        PotentialModel::Harmonic { omega } => propagator_harmonic(x, x_prime, t, *omega, units),
        PotentialModel::Delta { b, background: None } => propagator_delta(x, x_prime, t, *b, units),
        PotentialModel::Delta { background: Some(bg), .. } if **bg == PotentialModel::Free => {
            propagator_delta(x, x_prime, t, model.delta_strength().unwrap_or(0.0), units)
        }
        _ => Err(invalid(format!("no closed-form propagator for the {} potential", model.name()))),
    }
}
