use crate::error::{invalid, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Uniform grid on `[x_min, x_max]` with `n_points` nodes (both ends included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(invalid("grid needs finite x_min < x_max"));
        }
        if n_points < 2 {
            return Err(invalid("grid needs at least two points"));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// Grid with the given spacing; the node count is rounded so that the
    /// spacing is reproduced as closely as possible.
    pub fn with_spacing(x_min: f64, x_max: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(invalid("spacing must be positive"));
        }
        let intervals = ((x_max - x_min) / spacing).round() as usize;
        Self::new(x_min, x_max, intervals.max(1) + 1)
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let f = ((x - self.x_min) / self.spacing()).round();
        (f.max(0.0) as usize).min(self.n_points - 1)
    }

    /// Index of a node located at `x` within `1e-9` spacings, if any.
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let i = self.nearest(x);
        ((self.x(i) - x).abs() <= 1e-9 * self.spacing()).then_some(i)
    }

    pub fn compatible(&self, other: &Grid1D) -> bool {
        self.n_points == other.n_points
            && (self.x_min - other.x_min).abs() <= 1e-12 * (1.0 + self.x_min.abs())
            && (self.x_max - other.x_max).abs() <= 1e-12 * (1.0 + self.x_max.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_times_intervals_spans_domain() {
        let g = Grid1D::new(-10.0, 10.0, 1001).unwrap();
        assert!((g.spacing() - 0.02).abs() < 1e-15);
        assert_eq!(g.x(1000), 10.0);
        assert_eq!(g.node_at(0.0), Some(500));
        let g2 = Grid1D::with_spacing(-10.0, 10.0, 0.02).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
    }
}
