use super::{Flags, SpecFunResult};
use crate::prelude::*;
use core::f64::consts::PI;

const EPS: f64 = 2.3e-16;
const FRAC_2_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;

fn use_series(z: Complex64) -> bool {
    let r = z.norm();
    r <= 1.5 || (z.re <= 1.5 && r <= 12.0)
}

/// Maclaurin series of `erf`; returns the value and the sum of term magnitudes.
fn erf_series(z: Complex64) -> (Complex64, f64) {
    let z2 = z * z;
    let mut power = z; // (-1)^n z^(2n+1) / n!
    let mut sum = z;
    let mut abs_sum = z.norm();
    let mut n = 0.0;
    loop {
        n += 1.0;
        power *= -z2 / n;
        let term = power / (2.0 * n + 1.0);
        sum += term;
        abs_sum += term.norm();
        if term.norm() <= 0.25 * EPS * sum.norm() && n > z2.norm() {
            break;
        }
        if n > 2000.0 {
            break;
        }
    }
    (FRAC_2_SQRT_PI * sum, FRAC_2_SQRT_PI * abs_sum)
}

/// Laplace continued fraction for `Re z > 0`: `e^{z^2} erfc(z) = 1 / (sqrt(pi) g)`.
fn erfcx_cf(z: Complex64) -> (Complex64, bool) {
    let tiny = 1e-300;
    let mut f = z;
    let mut cc = f;
    let mut d = cr(0.0);
    for n in 1..20_000 {
        let a = n as f64 * 0.5;
        d = z + a * d;
        if d == cr(0.0) {
            d = cr(tiny);
        }
        cc = z + a / cc;
        if cc == cr(0.0) {
            cc = cr(tiny);
        }
        d = d.inv();
        let delta = cc * d;
        f *= delta;
        if (delta - 1.0).norm() < EPS {
            return ((PI.sqrt() * f).inv(), true);
        }
    }
    ((PI.sqrt() * f).inv(), false)
}

/// Complementary error function for complex arguments.
pub fn erfc_complex(z: Complex64) -> SpecFunResult {
    if z.re < 0.0 {
        let r = erfc_complex(-z);
        let value = 2.0 - r.value;
        return SpecFunResult::new(value, r.est_error + 2.0 * EPS, r.flags);
    }
    if use_series(z) {
        let (erf, abs) = erf_series(z);
        let value = 1.0 - erf;
        return SpecFunResult::new(value, 2.0 * EPS * (abs + 1.0), Flags::empty());
    }
    let (x, ok) = erfcx_cf(z);
    let value = (-z * z).exp() * x;
    let flags = if ok { Flags::empty() } else { Flags::TRUNCATED_SERIES };
    SpecFunResult::new(value, 8.0 * EPS * value.norm() * (1.0 + z.norm()), flags)
}

/// Scaled complementary error function `e^{z^2} erfc(z)`.
pub fn erfcx_complex(z: Complex64) -> SpecFunResult {
    if z.re < 0.0 {
        let r = erfcx_complex(-z);
        let e = (z * z).exp();
        let value = 2.0 * e - r.value;
        return SpecFunResult::new(value, r.est_error + 4.0 * EPS * e.norm(), r.flags);
    }
    if use_series(z) {
        let r = erfc_complex(z);
        let e = (z * z).exp();
        return SpecFunResult::new(e * r.value, e.norm() * r.est_error, r.flags);
    }
    let (value, ok) = erfcx_cf(z);
    let flags = if ok { Flags::empty() } else { Flags::TRUNCATED_SERIES };
    SpecFunResult::new(value, 8.0 * EPS * value.norm() * (1.0 + z.norm()), flags)
}
