//! Potential definitions.
//!
//! A point interaction `b delta(x)` is kept symbolic: [`potential_value`] never
//! samples it, and only the Green-function dressing consumes the strength `b`.

use crate::error::{invalid, Error, Result};
use crate::prelude::*;
use crate::units::UnitsConfig;

/// Interpolation used between tabulated samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    /// Clamped cubic spline; end slopes from four-point one-sided differences.
    Cubic,
}

impl Interpolation {
    pub fn order(self) -> u8 {
        match self {
            Interpolation::Linear => 1,
            Interpolation::Cubic => 3,
        }
    }

    pub fn from_order(order: u8) -> Result<Self> {
        match order {
            1 => Ok(Interpolation::Linear),
            3 => Ok(Interpolation::Cubic),
            _ => Err(invalid(format!("unsupported interpolation order {order} (use 1 or 3)"))),
        }
    }
}

/// Tabulated `V(x)` with piecewise interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomPotential {
    xs: Vec<f64>,
    vs: Vec<f64>,
    /// Spline second derivatives at the nodes (empty for linear).
    second: Vec<f64>,
    interpolation: Interpolation,
}

impl CustomPotential {
    pub fn new(samples: Vec<(f64, f64)>, interpolation: Interpolation) -> Result<Self> {
        let (xs, vs): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        if xs.len() < 2 {
            return Err(invalid("custom potential needs at least two samples"));
        }
        if xs.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("custom potential samples must be finite"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("custom potential x samples must be strictly increasing"));
        }
        let second = match interpolation {
            Interpolation::Linear => Vec::new(),
            Interpolation::Cubic => {
                if xs.len() < 4 {
                    return Err(invalid("cubic interpolation needs at least four samples"));
                }
                clamped_spline(&xs, &vs)
            }
        };
        Ok(Self { xs, vs, second, interpolation })
    }

    /// Samples `f` on `grid_points` uniformly spaced nodes over `[a, b]`.
    pub fn from_fn(
        f: impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        n: usize,
        interpolation: Interpolation,
    ) -> Result<Self> {
        let grid = crate::grid::Grid1D::new(a, b, n)?;
        Self::new(grid.points().map(|x| (x, f(x))).collect(), interpolation)
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.vs.iter().copied())
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    fn locate(&self, x: f64) -> Result<usize> {
        if !(x >= self.x_min() && x <= self.x_max()) {
            return Err(Error::Extrapolation { x, min: self.x_min(), max: self.x_max() });
        }
        let i = self.xs.partition_point(|&xi| xi <= x);
        Ok(i.saturating_sub(1).min(self.xs.len() - 2))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let i = self.locate(x)?;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.vs[i], self.vs[i + 1]);
        let h = x1 - x0;
        let (a, b) = ((x1 - x) / h, (x - x0) / h);
        Ok(match self.interpolation {
            Interpolation::Linear => a * y0 + b * y1,
            Interpolation::Cubic => {
                let (m0, m1) = (self.second[i], self.second[i + 1]);
                a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0
            }
        })
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let i = self.locate(x)?;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.vs[i], self.vs[i + 1]);
        let h = x1 - x0;
        Ok(match self.interpolation {
            Interpolation::Linear => (y1 - y0) / h,
            Interpolation::Cubic => {
                let (a, b) = ((x1 - x) / h, (x - x0) / h);
                let (m0, m1) = (self.second[i], self.second[i + 1]);
                (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0
            }
        })
    }
}

/// Derivative at `xs[0]` of the cubic through the first four points.
fn lagrange_end_slope(xs: [f64; 4], ys: [f64; 4]) -> f64 {
    let x0 = xs[0];
    let mut slope = 0.0;
    for j in 0..4 {
        // d/dx L_j(x) at x0
        let mut denom = 1.0;
        for m in 0..4 {
            if m != j {
                denom *= xs[j] - xs[m];
            }
        }
        let mut num = 0.0;
        for k in 0..4 {
            if k == j {
                continue;
            }
            let mut prod = 1.0;
            for m in 0..4 {
                if m != j && m != k {
                    prod *= x0 - xs[m];
                }
            }
            num += prod;
        }
        slope += ys[j] * num / denom;
    }
    slope
}

fn clamped_spline(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let s0 = lagrange_end_slope([xs[0], xs[1], xs[2], xs[3]], [ys[0], ys[1], ys[2], ys[3]]);
    let sn = lagrange_end_slope(
        [xs[n - 1], xs[n - 2], xs[n - 3], xs[n - 4]],
        [ys[n - 1], ys[n - 2], ys[n - 3], ys[n - 4]],
    );
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    rhs[0] = 6.0 * ((ys[1] - ys[0]) / h[0] - s0);
    for i in 1..n - 1 {
        sub[i] = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i];
        rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
    }
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];
    rhs[n - 1] = 6.0 * (sn - (ys[n - 1] - ys[n - 2]) / h[n - 2]);
    // Thomas algorithm; the system is diagonally dominant.
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    m
}

/// The potentials understood by the Green-function engine.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    Free,
    /// `Q(x) + b delta(x)` with `b > 0`; `Q` defaults to zero.
    Delta { b: f64, background: Option<Box<PotentialModel>> },
    Harmonic { omega: f64 },
    Custom(CustomPotential),
}

impl PotentialModel {
    pub fn delta(b: f64) -> Result<Self> {
        Self::delta_on(b, None)
    }

    pub fn delta_on(b: f64, background: Option<PotentialModel>) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(invalid("delta strength b must be positive (repulsive)"));
        }
        if matches!(background, Some(PotentialModel::Delta { .. })) {
            return Err(invalid("nested delta backgrounds are not supported"));
        }
        Ok(PotentialModel::Delta { b, background: background.map(Box::new) })
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("oscillator frequency omega must be positive"));
        }
        Ok(PotentialModel::Harmonic { omega })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PotentialModel::Free => "free",
            PotentialModel::Delta { .. } => "delta",
            PotentialModel::Harmonic { .. } => "harmonic",
            PotentialModel::Custom(_) => "custom",
        }
    }

    /// Regular part of `V(x)`.
    pub fn value(&self, x: f64, units: &UnitsConfig) -> Result<f64> {
        if !x.is_finite() {
            return Err(invalid("x must be finite"));
        }
        match self {
            PotentialModel::Free => Ok(0.0),
            PotentialModel::Delta { background, .. } => match background {
                Some(bg) => bg.value(x, units),
                None => Ok(0.0),
            },
            PotentialModel::Harmonic { omega } => Ok(0.5 * units.mass() * omega * omega * x * x),
            PotentialModel::Custom(c) => c.value(x),
        }
    }

    /// `dV/dx` of the regular part.
    pub fn derivative(&self, x: f64, units: &UnitsConfig) -> Result<f64> {
        match self {
            PotentialModel::Free => Ok(0.0),
            PotentialModel::Delta { background, .. } => match background {
                Some(bg) => bg.derivative(x, units),
                None => Ok(0.0),
            },
            PotentialModel::Harmonic { omega } => Ok(units.mass() * omega * omega * x),
            PotentialModel::Custom(c) => c.derivative(x),
        }
    }

    /// Strength of the point interaction at the origin, if any.
    pub fn delta_strength(&self) -> Option<f64> {
        match self {
            PotentialModel::Delta { b, .. } => Some(*b),
            _ => None,
        }
    }

    /// A lower bound of the spectrum (used to place inversion contours).
    pub fn spectrum_floor(&self, units: &UnitsConfig) -> f64 {
        match self {
            PotentialModel::Free => 0.0,
            PotentialModel::Delta { background, .. } => {
                background.as_ref().map_or(0.0, |bg| bg.spectrum_floor(units))
            }
            PotentialModel::Harmonic { omega } => 0.5 * units.hbar() * omega,
            PotentialModel::Custom(c) => c.vs.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

/// `V(x)` without the singular delta part.
pub fn potential_value(model: &PotentialModel, x: f64, units: &UnitsConfig) -> Result<f64> {
    model.value(x, units)
}
