//! Special functions: complex gamma, Kummer's confluent hypergeometric `M`,
//! parabolic cylinder functions `D_p(z)`, Hermite polynomials and complex `erfc`.
//!
//! Every evaluator reports an error estimate next to its value.

mod erfc;
mod gamma;
mod hermite;
mod kummer;
mod pcf;

pub use erfc::{erfc_complex, erfcx_complex};
pub use gamma::{gamma_complex, ln_gamma_complex, rgamma_complex};
pub use hermite::{hermite_functions, hermite_h, hermite_h_with_max, HERMITE_MAX_ORDER};
pub use kummer::kummer_m;
pub use pcf::{
    parabolic_cylinder_d, parabolic_cylinder_d_deriv, parabolic_cylinder_pair, PCF_MAX_ORDER,
};

use crate::prelude::*;

/// Evaluation path markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Flags(u8);

impl Flags {
    pub const POLE_PROXIMITY: Flags = Flags(1);
    pub const TRUNCATED_SERIES: Flags = Flags(2);
    pub const ASYMPTOTIC_BRANCH: Flags = Flags(4);

    pub const fn empty() -> Self {
        Flags(0)
    }

    pub fn contains(self, other: Flags) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Flags) {
        self.0 |= other.0;
    }

    pub fn union(self, other: Flags) -> Flags {
        Flags(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn names(self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.contains(Self::POLE_PROXIMITY) {
            v.push("pole_proximity");
        }
        if self.contains(Self::TRUNCATED_SERIES) {
            v.push("truncated_series");
        }
        if self.contains(Self::ASYMPTOTIC_BRANCH) {
            v.push("asymptotic_branch");
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: Complex64,
    pub est_error: f64,
    pub flags: Flags,
}

impl SpecFunResult {
    pub(crate) fn new(value: Complex64, est_error: f64, flags: Flags) -> Self {
        Self { value, est_error, flags }
    }

    pub fn rel_error(&self) -> f64 {
        let m = self.value.norm();
        if m > 0.0 {
            self.est_error / m
        } else {
            self.est_error
        }
    }
}

/// `sin(pi x)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x * 0.5).floor(); // [0, 2)
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r < 0.25 {
        (core::f64::consts::PI * r).sin()
    } else if r < 0.75 {
        (core::f64::consts::PI * (0.5 - r)).cos()
    } else if r < 1.25 {
        (core::f64::consts::PI * (1.0 - r)).sin()
    } else if r < 1.75 {
        -(core::f64::consts::PI * (1.5 - r)).cos()
    } else {
        (core::f64::consts::PI * (r - 2.0)).sin()
    }
}

pub(crate) fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// `sin(pi z)` for complex `z`.
pub(crate) fn csin_pi(z: Complex64) -> Complex64 {
    let b = core::f64::consts::PI * z.im;
    c(sin_pi(z.re) * b.cosh(), cos_pi(z.re) * b.sinh())
}

/// Whether `z` is a non-positive integer; returns its magnitude.
pub(crate) fn nonpositive_integer(z: Complex64) -> Option<u64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some((-z.re) as u64)
    } else {
        None
    }
}
