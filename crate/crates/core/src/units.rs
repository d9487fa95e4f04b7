use crate::error::{invalid, Result};

/// Physical constants carried through every formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsConfig {
    hbar: f64,
    mass: f64,
}

impl UnitsConfig {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(invalid("hbar must be a positive finite number"));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(invalid("mass must be a positive finite number"));
        }
        Ok(Self { hbar, mass })
    }

    /// `hbar = m = 1`.
    pub const fn natural() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `2m / hbar^2`, the factor turning `V - E` into `u''/u`.
    #[inline]
    pub fn kinetic_scale(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// `-2m / hbar`, the derivative jump of `G` at `x = x'`.
    #[inline]
    pub fn jump(&self) -> f64 {
        -2.0 * self.mass / self.hbar
    }
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self::natural()
    }
}

/// Validated constructor mirroring [`UnitsConfig::new`].
pub fn make_units(hbar: f64, mass: f64) -> Result<UnitsConfig> {
    UnitsConfig::new(hbar, mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_units_are_default() {
        let u = make_units(1.0, 1.0).unwrap();
        assert_eq!(u, UnitsConfig::default());
        assert_eq!(u.jump(), -2.0);
    }

    #[test]
    fn si_values_pass_through() {
        let u = make_units(1.0545718e-34, 9.109e-31).unwrap();
        assert_eq!(u.hbar(), 1.0545718e-34);
        assert_eq!(u.mass(), 9.109e-31);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(make_units(0.0, 1.0).is_err());
        assert!(make_units(1.0, -2.0).is_err());
        assert!(make_units(f64::NAN, 1.0).is_err());
    }
}
