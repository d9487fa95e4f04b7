//! Energy Green functions.
//!
//! With two energy solutions `u-` (regular as `x -> -inf`) and `u+` (regular as
//! `x -> +inf`) and `W = u- u+' - u+ u-'`,
//!
//! `G(x, x', E) = -(2m/hbar) u-(x_<) u+(x_>) / W`,
//!
//! which makes `dG/dx` jump by `-2m/hbar` across `x = x'`.

mod closed;
mod delta;
mod function;
mod modes;

pub use closed::{free_modes, green_free, green_harmonic, harmonic_modes, harmonic_wronskian, free_wavenumber};
pub use delta::{green_delta_dress, green_delta_free_expanded};
pub use function::{green, GreenFunction, GreenOptions, GreenStrategy};
pub use modes::{default_domain, solve_custom_modes};

use crate::error::{Error, Result};
use crate::eval::{EvalPoint, GreenEval, GreenMethod};
use crate::prelude::*;
use crate::units::UnitsConfig;

/// `u(x) = exp(log_scale) * value`, `u'(x) = exp(log_scale) * deriv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub value: Complex64,
    pub deriv: Complex64,
    pub log_scale: f64,
    /// Relative accuracy of `value` and `deriv`.
    pub rel_err: f64,
}

impl ModeValue {
    pub fn plain(value: Complex64, deriv: Complex64, rel_err: f64) -> Self {
        Self { value, deriv, log_scale: 0.0, rel_err }
    }

    pub fn unscaled(&self) -> (Complex64, Complex64) {
        let f = self.log_scale.exp();
        (self.value * f, self.deriv * f)
    }
}

/// An energy solution `x -> (u, u')`.
pub type ModeFn = Box<dyn Fn(f64) -> Result<ModeValue> + Send + Sync>;

/// Wronskian with a separate exponent, `W = exp(log_scale) * value`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ScaledWronskian {
    value: Complex64,
    log_scale: f64,
    spread: f64,
}

/// The two energy solutions at one energy.
pub struct ModePair {
    energy: Complex64,
    u_minus: ModeFn,
    u_plus: ModeFn,
    method: GreenMethod,
    wronskian: ScaledWronskian,
    pub convention_note: &'static str,
}

impl core::fmt::Debug for ModePair {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ModePair")
            .field("energy", &self.energy)
            .field("method", &self.method)
            .field("wronskian", &self.wronskian())
            .finish()
    }
}

pub(crate) const CONVENTION: &str =
    "u- regular at -inf is used at min(x, x'), u+ regular at +inf at max(x, x'); W = u- u+' - u+ u-'";

const SPREAD_TOL: f64 = 1e-6;
const EIGEN_TOL: f64 = 1e-12;

fn scaled_wronskian(u_minus: &ModeFn, u_plus: &ModeFn, probes: &[f64]) -> Result<ScaledWronskian> {
    if probes.is_empty() {
        return Err(crate::error::invalid("wronskian needs at least one probe point"));
    }
    let mut samples = Vec::with_capacity(probes.len());
    let mut reference = None;
    for &x in probes {
        let m = u_minus(x)?;
        let p = u_plus(x)?;
        let w = m.value * p.deriv - p.value * m.deriv;
        let size = (m.value * p.deriv).norm() + (p.value * m.deriv).norm();
        if !(size > 0.0) || w.norm() < EIGEN_TOL * size {
            return Err(Error::NearEigenvalue { magnitude: w.norm() / size.max(f64::MIN_POSITIVE) });
        }
        let s = m.log_scale + p.log_scale;
        let r = *reference.get_or_insert(s);
        samples.push(w * (s - r).exp());
    }
    let r = reference.unwrap_or(0.0);
    let mean = samples.iter().sum::<Complex64>() / samples.len() as f64;
    let spread = samples.iter().map(|w| (w - mean).norm()).fold(0.0, f64::max) / mean.norm();
    if spread > SPREAD_TOL {
        return Err(Error::ModeInconsistency { spread });
    }
    Ok(ScaledWronskian { value: mean, log_scale: r, spread })
}

impl ModePair {
    /// Validates the pair by evaluating its Wronskian at `probes`.
    pub fn new(
        energy: Complex64,
        u_minus: ModeFn,
        u_plus: ModeFn,
        probes: &[f64],
        method: GreenMethod,
    ) -> Result<Self> {
        let wronskian = scaled_wronskian(&u_minus, &u_plus, probes)?;
        Ok(Self { energy, u_minus, u_plus, method, wronskian, convention_note: CONVENTION })
    }

    pub fn energy(&self) -> Complex64 {
        self.energy
    }

    pub fn method(&self) -> GreenMethod {
        self.method
    }

    pub fn wronskian(&self) -> Complex64 {
        self.wronskian.value * self.wronskian.log_scale.exp()
    }

    pub fn u_minus(&self, x: f64) -> Result<ModeValue> {
        (self.u_minus)(x)
    }

    pub fn u_plus(&self, x: f64) -> Result<ModeValue> {
        (self.u_plus)(x)
    }
}

/// `u- u+' - u+ u-'` averaged over `probes`; fails if it is not constant.
pub fn wronskian(pair: &ModePair, probes: &[f64]) -> Result<Complex64> {
    let w = scaled_wronskian(&pair.u_minus, &pair.u_plus, probes)?;
    Ok(w.value * w.log_scale.exp())
}

/// `G = -(2m/hbar) u-(x_<) u+(x_>) / W`.
pub fn assemble_green(pair: &ModePair, x: f64, x_prime: f64, units: &UnitsConfig) -> Result<GreenEval> {
    let point = EvalPoint::new(x, x_prime, pair.energy)?;
    let (lo, hi) = if x <= x_prime { (x, x_prime) } else { (x_prime, x) };
    let m = (pair.u_minus)(lo)?;
    let p = (pair.u_plus)(hi)?;
    let w = pair.wronskian;
    let value = units.jump() * m.value * p.value / w.value
        * (m.log_scale + p.log_scale - w.log_scale).exp();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Numerical(format!("G({x}, {x_prime}) is not finite")));
    }
    let rel = m.rel_err + p.rel_err + w.spread + 1e-15;
    Ok(GreenEval { point, value, method: pair.method, est_error: rel * value.norm(), pole_distance: None })
}

/// `|[dG/dx]_{x'+0} - [dG/dx]_{x'-0} + 2m/hbar|` from one-sided differences.
///
/// Each one-sided slope uses the second-order three-point stencil at steps `h`
/// and `h/2`, combined by Richardson extrapolation.
pub fn jump_residual<F>(green: F, x_prime: f64, units: &UnitsConfig, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let jump = one_sided_jump(&green, x_prime, h)?;
    Ok((jump - units.jump()).norm())
}

/// `[dF/dx]_{a+0} - [dF/dx]_{a-0}` for a function continuous at `a`.
pub fn one_sided_jump<F>(f: &F, a: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(crate::error::invalid("finite-difference step must be positive"));
    }
    let f0 = f(a)?;
    let slope = |s: f64| -> Result<Complex64> {
        let d = |h: f64| -> Result<Complex64> {
            let f1 = f(a + s * h)?;
            let f2 = f(a + 2.0 * s * h)?;
            Ok(s * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h))
        };
        let coarse = d(h)?;
        let fine = d(0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0)
    };
    Ok(slope(1.0)? - slope(-1.0)?)
}
