//! Propagators `K(x, x', t)`: closed forms, the oscillator's spectral sum and
//! the Mehler identity that ties the two together.
//!
//! Times may be complex with `Im t <= 0`; `t = -i tau` is Euclidean time.

mod closed;
mod spectral;

pub use closed::{
    delta_printed_form, propagator_closed, propagator_delta, propagator_free, propagator_harmonic,
};
pub use spectral::{
    mehler_closed, mehler_sum, residue_weights, spectral_sum_harmonic, SpectralSumConfig,
};

use crate::error::{invalid, Error, Result};
use crate::prelude::*;

pub(crate) fn check_time(t: Complex64) -> Result<()> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(invalid("time must be finite"));
    }
    if t == cr(0.0) {
        return Err(Error::SingularTime);
    }
    if t.im > 0.0 {
        return Err(invalid("propagators are evaluated for Im t <= 0 only"));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
