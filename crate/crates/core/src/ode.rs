//! Dormand-Prince 5(4) stepping for complex first-order systems.

use crate::error::{invalid, Error, Result};
use crate::prelude::*;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Magnitude beyond which the solution is declared blown up.
    pub blowup: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, max_steps: 200_000, blowup: 1e200 }
    }
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// `h` carries the step size between calls; pass 0 to let the first step be guessed.
/// Returns the end state and the number of accepted steps.
pub fn dopri5<const N: usize, F>(
    mut f: F,
    x0: f64,
    y0: [Complex64; N],
    x1: f64,
    cfg: &OdeConfig,
    h: &mut f64,
) -> Result<([Complex64; N], usize)>
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    if !(x0.is_finite() && x1.is_finite()) {
        return Err(invalid("integration limits must be finite"));
    }
    let span = x1 - x0;
    if span == 0.0 {
        return Ok((y0, 0));
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut k = [[cr(0.0); N]; 7];
    k[0] = f(x, &y);
    let mut step = if *h > 0.0 { *h } else { (span.abs() * 1e-3).max(1e-6) };
    let min_step = 1e-14 * (1.0 + x0.abs().max(x1.abs()));
    let mut accepted = 0;
    let mut total = 0;
    while (x1 - x) * dir > 0.0 {
        total += 1;
        if total > cfg.max_steps {
            return Err(Error::Stiffness(format!("step budget exhausted at x = {x}")));
        }
        let last = step >= (x1 - x).abs();
        let hs = if last { x1 - x } else { dir * step };
        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                let mut acc = cr(0.0);
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                *yi += hs * acc;
            }
            k[s] = f(x + C[s] * hs, &ys);
        }
        // k[6] is evaluated at the fifth-order solution (FSAL)
        let mut y_new = y;
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut acc = cr(0.0);
            let mut err = cr(0.0);
            for s in 0..6 {
                acc += A[6][s] * k[s][i];
            }
            for s in 0..7 {
                err += E[s] * k[s][i];
            }
            y_new[i] = y[i] + hs * acc;
            let sc = cfg.atol + cfg.rtol * y[i].norm().max(y_new[i].norm());
            err_sq += ((hs * err).norm() / sc).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Stiffness(format!("non-finite state near x = {x}")));
        }
        if err <= 1.0 {
            x = if last { x1 } else { x + hs };
            y = y_new;
            k[0] = k[6];
            accepted += 1;
            if y.iter().any(|v| v.norm() > cfg.blowup) {
                return Err(Error::Stiffness(format!("solution exceeds {:.1e} at x = {x}", cfg.blowup)));
            }
            if !last {
                *h = step;
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        step *= if err <= 1.0 { fac } else { fac.min(1.0) };
        if step < min_step {
            return Err(Error::Stiffness(format!("step size underflow at x = {x}")));
        }
    }
    Ok((y, accepted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_motion() {
        // u'' = -u, u(0) = 1, u'(0) = 0 -> cos x
        let mut h = 0.0;
        let (y, _) = dopri5(
            |_, y: &[Complex64; 2]| [y[1], -y[0]],
            0.0,
            [cr(1.0), cr(0.0)],
            10.0,
            &OdeConfig::default(),
            &mut h,
        )
        .unwrap();
        assert!((y[0].re - 10f64.cos()).abs() < 1e-10);
        assert!((y[1].re + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn backward_complex_growth() {
        // u' = i k u integrated backwards
        let k = c(1.0, 0.5);
        let mut h = 0.0;
        let (y, _) = dopri5(|_, y: &[Complex64; 1]| [I * k * y[0]], 3.0, [cr(1.0)], -2.0, &OdeConfig::default(), &mut h)
            .unwrap();
        let exact = (I * k * -5.0).exp();
        assert!((y[0] - exact).norm() < 1e-10 * exact.norm());
    }

    #[test]
    fn fifth_order_convergence() {
        // fixed steps via loose tolerances are awkward; check error shrinks with rtol
        let run = |rtol: f64| {
            let cfg = OdeConfig { rtol, atol: rtol * 1e-2, ..OdeConfig::default() };
            let mut h = 0.0;
            let (y, n) =
                dopri5(|x, y: &[Complex64; 1]| [cr(x.cos()) * y[0]], 0.0, [cr(1.0)], 5.0, &cfg, &mut h).unwrap();
            ((y[0].re - 5f64.sin().exp()).abs(), n)
        };
        let (e1, n1) = run(1e-6);
        let (e2, n2) = run(1e-11);
        assert!(e2 < e1 && n2 > n1);
        assert!(e2 < 1e-9);
    }

    #[test]
    fn blowup_detected() {
        let cfg = OdeConfig { blowup: 1e10, ..OdeConfig::default() };
        let mut h = 0.0;
        let r = dopri5(|_, y: &[Complex64; 1]| [y[0] * 10.0], 0.0, [cr(1.0)], 5.0, &cfg, &mut h);
        assert!(matches!(r, Err(Error::Stiffness(_))));
    }
}
