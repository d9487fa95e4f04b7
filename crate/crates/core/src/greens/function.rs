use super::{assemble_green, default_domain, green_delta_dress, green_free, green_harmonic, solve_custom_modes, ModePair};
use crate::error::{invalid, Result};
use crate::eval::GreenEval;
use crate::grid::Grid1D;
use crate::potential::PotentialModel;
use crate::prelude::*;
use crate::units::UnitsConfig;

/// How [`GreenFunction`] builds `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreenStrategy {
    /// Closed forms for catalog potentials, numerical modes otherwise.
    #[default]
    Auto,
    /// Numerical modes for every regular potential (dressing still analytic).
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GreenOptions {
    pub strategy: GreenStrategy,
    /// Mode-integration domain; chosen from the potential when absent.
    pub domain: Option<Grid1D>,
}

impl GreenOptions {
    pub fn numerical() -> Self {
        Self { strategy: GreenStrategy::Numerical, domain: None }
    }
}

enum Kind {
    Free,
    Harmonic { omega: f64 },
    Modes(ModePair),
    Dressed { b: f64, background: Box<GreenFunction> },
}

/// `G(., ., E)` at a fixed energy, with any mode solutions solved once.
pub struct GreenFunction {
    energy: Complex64,
    units: UnitsConfig,
    kind: Kind,
}

impl GreenFunction {
    pub fn new(model: &PotentialModel, energy: Complex64, units: &UnitsConfig, opts: &GreenOptions) -> Result<Self> {
        if !(energy.re.is_finite() && energy.im.is_finite()) {
            return Err(invalid("energy must be finite"));
        }
        let numerical = opts.strategy == GreenStrategy::Numerical;
        let kind = match model {
            PotentialModel::Delta { b, background } => {
                let bg = background.as_deref().unwrap_or(&PotentialModel::Free);
                Kind::Dressed { b: *b, background: Box::new(Self::new(bg, energy, units, opts)?) }
            }
            PotentialModel::Free if !numerical => Kind::Free,
            PotentialModel::Harmonic { omega } if !numerical => Kind::Harmonic { omega: *omega },
            _ => {
                let domain = match opts.domain {
                    Some(d) => d,
                    None => default_domain(model, energy, units)?,
                };
                Kind::Modes(solve_custom_modes(model, energy, &domain, units)?)
            }
        };
        Ok(Self { energy, units: *units, kind })
    }

    pub fn energy(&self) -> Complex64 {
        self.energy
    }

    pub fn eval(&self, x: f64, x_prime: f64) -> Result<GreenEval> {
        let (e, u) = (self.energy, &self.units);
        match &self.kind {
            Kind::Free => green_free(x, x_prime, e, u),
            Kind::Harmonic { omega } => green_harmonic(x, x_prime, e, u, *omega),
            Kind::Modes(pair) => assemble_green(pair, x, x_prime, u),
            Kind::Dressed { b, background } => {
                green_delta_dress(|a, b, _| background.eval(a, b), *b, x, x_prime, e, u)
            }
        }
    }

    pub fn value(&self, x: f64, x_prime: f64) -> Result<Complex64> {
        self.eval(x, x_prime).map(|g| g.value)
    }

    /// The mode pair when `G` comes from numerical or closed-form modes.
    pub fn modes(&self) -> Option<&ModePair> {
        match &self.kind {
            Kind::Modes(p) => Some(p),
            _ => None,
        }
    }
}

/// One-shot evaluation of `G(x, x', E)`.
pub fn green(
    model: &PotentialModel,
    x: f64,
    x_prime: f64,
    energy: Complex64,
    units: &UnitsConfig,
    opts: &GreenOptions,
) -> Result<GreenEval> {
    GreenFunction::new(model, energy, units, opts)?.eval(x, x_prime)
}
