use super::{csin_pi, nonpositive_integer, Flags, SpecFunResult};
use crate::error::{Error, Result};
use crate::prelude::*;
use core::f64::consts::PI;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const POLE_RADIUS: f64 = 1e-3;
const EPS: f64 = 2.3e-16;

/// `ln Gamma(z)` for `Re z >= 0.5`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = cr(LANCZOS[0]);
    for (k, &coef) in LANCZOS.iter().enumerate().skip(1) {
        a += coef / (z + k as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// `ln Gamma(z)` up to an additive multiple of `2 pi i` (fine for exponentiation).
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if let Some(index) = nonpositive_integer(z) {
        return Err(Error::Pole { index });
    }
    if z.re < 0.5 {
        Ok(cr(PI).ln() - csin_pi(z).ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

fn pole_distance(z: Complex64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

fn rounding_bound(value: Complex64, log: Complex64) -> f64 {
    value.norm() * EPS * (16.0 + 2.0 * log.norm())
}

/// `Gamma(z)`; poles at the non-positive integers are errors.
pub fn gamma_complex(z: Complex64) -> Result<SpecFunResult> {
    let lg = ln_gamma_complex(z)?;
    let value = if z.re >= 0.5 {
        lg.exp()
    } else {
        // reflection without the ln of sin(pi z), which is accurate near poles
        let rg_right = ln_gamma_right(1.0 - z).exp();
        PI / (csin_pi(z) * rg_right)
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range(format!("Gamma({z}) overflows")));
    }
    let mut flags = Flags::empty();
    let d = pole_distance(z);
    let mut err = rounding_bound(value, lg);
    if d < POLE_RADIUS {
        flags.insert(Flags::POLE_PROXIMITY);
        err += value.norm() * EPS / d;
    }
    Ok(SpecFunResult::new(value, err, flags))
}

/// `1 / Gamma(z)`, exactly zero at the poles.
pub fn rgamma_complex(z: Complex64) -> Complex64 {
    if nonpositive_integer(z).is_some() {
        return cr(0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        csin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    }
}
