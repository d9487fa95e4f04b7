use super::check_time;
use crate::error::{invalid, Error, Result};
use crate::eval::{EvalPoint, PropEval, PropMethod};
use crate::prelude::*;
use crate::specfun::{hermite_functions, HERMITE_MAX_ORDER};
use crate::units::UnitsConfig;
use core::f64::consts::PI;

/// Truncation and damping of the oscillator's spectral series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSumConfig {
    pub n_max: usize,
    /// `eps` in `t -> t - i eps`.
    pub damping: f64,
}

impl SpectralSumConfig {
    pub fn new(n_max: usize, damping: f64) -> Result<Self> {
        if n_max < 1 || n_max > HERMITE_MAX_ORDER {
            return Err(invalid(format!("n_max must lie in 1..={HERMITE_MAX_ORDER}")));
        }
        if !(damping.is_finite() && damping >= 0.0) {
            return Err(invalid("damping must be non-negative"));
        }
        Ok(Self { n_max, damping })
    }

    /// Default damping `0.05 / omega`.
    pub fn with_default_damping(n_max: usize, omega: f64) -> Result<Self> {
        Self::new(n_max, 0.05 / omega)
    }
}

/// Residue of `Gamma(-p)` at `p = n`: `(-1)^n / n!`.
pub fn residue_weights(n: usize) -> f64 {
    let mut w = 1.0;
    for k in 1..=n {
        w /= -(k as f64);
    }
    w
}

/// `sum_n phi_n(x) phi_n(x') e^{-i omega (n + 1/2) t}` over the oscillator
/// eigenfunctions, i.e. `sqrt(m omega / pi hbar) e^{-(m omega/2hbar)(x^2+x'^2)}
/// sum_n H_n(xi) H_n(xi') e^{-i omega (n+1/2) t} / (2^n n!)`.
///
/// `est_error` bounds the discarded tail with Cramer's inequality
/// `|phi_n| <= 1.0865 (m omega/hbar)^{1/4} pi^{-1/4}`.
pub fn spectral_sum_harmonic(
    x: f64,
    x_prime: f64,
    t: Complex64,
    omega: f64,
    units: &UnitsConfig,
    cfg: &SpectralSumConfig,
) -> Result<PropEval> {
    check_time(t)?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("oscillator frequency omega must be positive"));
    }
    let cfg = SpectralSumConfig::new(cfg.n_max, cfg.damping)?;
    let point = EvalPoint::new(x, x_prime, t)?;
    let td = t - I * cfg.damping;
    if td.im >= 0.0 {
        return Err(Error::Convergence(
            "spectral sum at real time needs damping > 0 (the series is only Abel-summable)".into(),
        ));
    }
    let (m, hbar) = (units.mass(), units.hbar());
    let s = (m * omega / hbar).sqrt();
    let fx = hermite_functions(cfg.n_max, s * x);
    let fy = hermite_functions(cfg.n_max, s * x_prime);
    let step = (-I * omega * td).exp();
    let mut phase = (-0.5 * I * omega * td).exp();
    let mut sum = cr(0.0);
    for n in 0..=cfg.n_max {
        sum += fx[n] * fy[n] * phase;
        phase *= step;
    }
    let value = s * sum;
    let r = step.norm();
    let tail = 1.0865f64.powi(2) * s / PI.sqrt() * phase.norm() / (1.0 - r);
    Ok(PropEval {
        point,
        value,
        method: PropMethod::SpectralSum,
        terms_used: Some(cfg.n_max + 1),
        est_error: tail,
    })
}

fn check_xi(xi: Complex64) -> Result<()> {
    if !(xi.norm() < 0.5) {
        return Err(Error::Divergence(format!("Mehler series needs |xi| < 1/2, got {}", xi.norm())));
    }
    Ok(())
}

/// Partial sum `sum_{n <= n_max} H_n(z) H_n(z') xi^n / n!`.
pub fn mehler_sum(z: f64, z_prime: f64, xi: Complex64, n_max: usize) -> Result<Complex64> {
    check_xi(xi)?;
    // H_n / sqrt(2^n n!) = pi^{1/4} e^{z^2/2} phi_n(z)
    let fz = hermite_functions(n_max, z);
    let fy = hermite_functions(n_max, z_prime);
    let norm = PI.sqrt() * (0.5 * (z * z + z_prime * z_prime)).exp();
    let mut w = cr(1.0);
    let mut sum = cr(0.0);
    for n in 0..=n_max {
        sum += fz[n] * fy[n] * w;
        w *= 2.0 * xi;
    }
    Ok(norm * sum)
}

/// `(1 - 4 xi^2)^{-1/2} exp{2 xi (2 xi (z^2 + z'^2) - 2 z z') / (4 xi^2 - 1)}`.
pub fn mehler_closed(z: f64, z_prime: f64, xi: Complex64) -> Result<Complex64> {
    check_xi(xi)?;
    let d = 4.0 * xi * xi - 1.0;
    Ok((-d).sqrt().inv() * (2.0 * xi * (2.0 * xi * (z * z + z_prime * z_prime) - 2.0 * z * z_prime) / d).exp())
}
