use crate::error::{invalid, Error, Result};
use crate::prelude::*;

/// Default ceiling on the Hermite order.
pub const HERMITE_MAX_ORDER: usize = 500;

/// Physicists' Hermite polynomial `H_n(y)`.
pub fn hermite_h(n: usize, y: f64) -> Result<f64> {
    hermite_h_with_max(n, y, HERMITE_MAX_ORDER)
}

pub fn hermite_h_with_max(n: usize, y: f64, max_order: usize) -> Result<f64> {
    if n > max_order {
        return Err(invalid(format!("Hermite order {n} exceeds the maximum {max_order}")));
    }
    if !y.is_finite() {
        return Err(invalid("Hermite argument must be finite"));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Err(Error::Range(format!("H_{n}({y}) overflows")));
        }
    }
    Ok(cur)
}

/// Orthonormal Hermite functions `H_k(y) e^{-y^2/2} / sqrt(2^k k! sqrt(pi))`
/// for `k = 0..=n_max`. Stable for large orders.
pub fn hermite_functions(n_max: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(core::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp());
    if n_max == 0 {
        return out;
    }
    out.push(core::f64::consts::SQRT_2 * y * out[0]);
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_polynomials() {
        for y in [-1.3, 0.0, 0.4, 2.0] {
            assert_eq!(hermite_h(0, y).unwrap(), 1.0);
            assert!((hermite_h(2, y).unwrap() - (4.0 * y * y - 2.0)).abs() < 1e-12);
            assert!((hermite_h(3, y).unwrap() - (8.0 * y * y * y - 12.0 * y)).abs() < 1e-12);
        }
        assert_eq!(hermite_h(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite_h(3, 2.0).unwrap(), 40.0);
    }

    #[test]
    fn order_limit_and_overflow() {
        assert!(hermite_h(501, 0.1).is_err());
        assert!(matches!(hermite_h(400, 30.0), Err(Error::Range(_))));
    }

    #[test]
    fn functions_match_polynomials() {
        let y: f64 = 0.7;
        let f = hermite_functions(12, y);
        let mut norm = core::f64::consts::PI.sqrt();
        for (k, fk) in f.iter().enumerate() {
            if k > 0 {
                norm *= 2.0 * k as f64;
            }
            let direct = hermite_h(k, y).unwrap() * (-0.5 * y * y).exp() / norm.sqrt();
            assert!((fk - direct).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn functions_orthonormal() {
        // trapezoid on a wide grid is spectrally accurate for these
        let h = 0.02;
        let mut gram = [[0.0; 4]; 4];
        let mut y = -15.0;
        while y <= 15.0 {
            let f = hermite_functions(3, y);
            for i in 0..4 {
                for j in 0..4 {
                    gram[i][j] += h * f[i] * f[j];
                }
            }
            y += h;
        }
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i][j] - expect).abs() < 1e-10);
            }
        }
    }
}
