//! Evaluation records.

use crate::error::{invalid, Result};
use crate::prelude::*;

/// Arguments of `G(x, x', E)` or `K(x, x', t)`; `param` is `E` or `t` by context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: f64,
    pub x_prime: f64,
    pub param: Complex64,
}

impl EvalPoint {
    pub fn new(x: f64, x_prime: f64, param: Complex64) -> Result<Self> {
        if !(x.is_finite() && x_prime.is_finite()) {
            return Err(invalid("coordinates must be finite"));
        }
        if !(param.re.is_finite() && param.im.is_finite()) {
            return Err(invalid("energy/time parameter must be finite"));
        }
        Ok(Self { x, x_prime, param })
    }

    /// `(x', x, param)`.
    pub fn swapped(&self) -> Self {
        Self { x: self.x_prime, x_prime: self.x, param: self.param }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreenMethod {
    ClosedFree,
    ClosedHarmonic,
    DeltaDressed,
    NumericalModes,
}

impl GreenMethod {
    pub fn tag(self) -> &'static str {
        match self {
            GreenMethod::ClosedFree => "closed_free",
            GreenMethod::ClosedHarmonic => "closed_harmonic",
            GreenMethod::DeltaDressed => "delta_dressed",
            GreenMethod::NumericalModes => "numerical_modes",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "closed_free" => GreenMethod::ClosedFree,
            "closed_harmonic" => GreenMethod::ClosedHarmonic,
            "delta_dressed" => GreenMethod::DeltaDressed,
            "numerical_modes" => GreenMethod::NumericalModes,
            _ => return None,
        })
    }
}

/// One value of the energy Green function.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenEval {
    pub point: EvalPoint,
    pub value: Complex64,
    pub method: GreenMethod,
    pub est_error: f64,
    /// Distance to the nearest known pole in natural energy units, when known.
    pub pole_distance: Option<f64>,
}

impl GreenEval {
    pub fn energy(&self) -> Complex64 {
        self.point.param
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropMethod {
    ClosedFree,
    ClosedDelta,
    ClosedHarmonic,
    SpectralSum,
    InverseLaplace,
}

impl PropMethod {
    pub fn tag(self) -> &'static str {
        match self {
            PropMethod::ClosedFree => "closed_free",
            PropMethod::ClosedDelta => "closed_delta",
            PropMethod::ClosedHarmonic => "closed_harmonic",
            PropMethod::SpectralSum => "spectral_sum",
            PropMethod::InverseLaplace => "inverse_laplace",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "closed_free" => PropMethod::ClosedFree,
            "closed_delta" => PropMethod::ClosedDelta,
            "closed_harmonic" => PropMethod::ClosedHarmonic,
            "spectral_sum" => PropMethod::SpectralSum,
            "inverse_laplace" => PropMethod::InverseLaplace,
            _ => return None,
        })
    }
}

/// One value of the propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct PropEval {
    pub point: EvalPoint,
    pub value: Complex64,
    pub method: PropMethod,
    pub terms_used: Option<usize>,
    pub est_error: f64,
}

impl PropEval {
    pub fn time(&self) -> Complex64 {
        self.point.param
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for m in [
            GreenMethod::ClosedFree,
            GreenMethod::ClosedHarmonic,
            GreenMethod::DeltaDressed,
            GreenMethod::NumericalModes,
        ] {
            assert_eq!(GreenMethod::from_tag(m.tag()), Some(m));
        }
        for m in [
            PropMethod::ClosedFree,
            PropMethod::ClosedDelta,
            PropMethod::ClosedHarmonic,
            PropMethod::SpectralSum,
            PropMethod::InverseLaplace,
        ] {
            assert_eq!(PropMethod::from_tag(m.tag()), Some(m));
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(EvalPoint::new(f64::NAN, 0.0, cr(1.0)).is_err());
        assert!(EvalPoint::new(0.0, 0.0, c(0.0, f64::INFINITY)).is_err());
    }
}
