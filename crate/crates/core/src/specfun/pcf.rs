//! Parabolic cylinder functions `D_p(z)` for complex order and real argument.
//!
//! Near the origin the two-term Kummer representation is used. For larger
//! positive `z` it cancels badly (both terms grow like `e^{z^2/4}` while `D_p`
//! decays), so the value is taken from the large-`z` expansion at some `z_a`
//! and carried inward with Taylor steps of Weber's equation
//! `u'' = (z^2/4 - p - 1/2) u`, the direction in which `D_p` is dominant.

use super::gamma::rgamma_complex;
use super::kummer::series;
use super::{Flags, SpecFunResult};
use crate::error::{invalid, Error, Result};
use crate::prelude::*;
use core::f64::consts::{PI, SQRT_2};

/// Default ceiling on `|p|`.
pub const PCF_MAX_ORDER: f64 = 200.0;
/// Beyond this `|z|` the Kummer form is not attempted for positive `z`.
const Z_SWITCH: f64 = 8.0;
/// Positive `z` below this always use the Kummer form.
const Z_KUMMER_SAFE: f64 = 3.0;
const KUMMER_REL_TOL: f64 = 1e-12;
const EPS: f64 = 2.3e-16;

fn check(p: Complex64, z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(invalid("D_p(z) needs finite z"));
    }
    if !(p.re.is_finite() && p.im.is_finite()) || p.norm() > PCF_MAX_ORDER {
        return Err(invalid(format!("order |p| = {} exceeds {PCF_MAX_ORDER}", p.norm())));
    }
    Ok(())
}

/// Two-term Kummer form: value and absolute error estimate.
fn kummer_form(p: Complex64, z: f64) -> (Complex64, f64) {
    let w = cr(0.5 * z * z);
    let (m1, abs1, _) = series(-0.5 * p, cr(0.5), w);
    let (m2, abs2, _) = series(0.5 * (1.0 - p), cr(1.5), w);
    let r1 = rgamma_complex(0.5 * (1.0 - p));
    let r2 = rgamma_complex(-0.5 * p);
    let pre = (0.5 * p * core::f64::consts::LN_2).exp() * (-0.25 * z * z).exp() * PI.sqrt();
    let t1 = r1 * m1;
    let t2 = SQRT_2 * z * r2 * m2;
    let value = pre * (t1 - t2);
    let mag = pre.norm() * (r1.norm() * abs1 + SQRT_2 * z.abs() * r2.norm() * abs2);
    (value, 6.0 * EPS * mag + 4.0 * EPS * value.norm())
}

/// `sum_s (-1)^s (-p)_{2s} / (s! (2 z^2)^s)` with its truncation error,
/// or `None` when the series does not reach `tol`.
fn asymptotic_sum(p: Complex64, z: f64, tol: f64) -> Option<(Complex64, f64)> {
    let z2 = z * z;
    let mut term = cr(1.0);
    let mut sum = cr(1.0);
    let mut last = 1.0;
    for s in 0..400 {
        let sf = s as f64;
        term *= -(p - 2.0 * sf) * (p - 2.0 * sf - 1.0) / (2.0 * (sf + 1.0) * z2);
        let m = term.norm();
        if m == 0.0 {
            return Some((sum, 0.0));
        }
        if m > last && sf > 0.5 * p.norm() {
            return None;
        }
        sum += term;
        last = m;
        if m <= 0.25 * EPS * sum.norm() {
            return if m <= tol * sum.norm() { Some((sum, m)) } else { None };
        }
    }
    None
}

/// Value and derivative at `z` as `exp(scale) * (u, du)`.
struct Scaled {
    u: Complex64,
    du: Complex64,
    scale: Complex64,
    err: f64,
}

/// Large-`z` expansion of `(D_p, D_p')`.
fn asymptotic_pair(p: Complex64, z: f64) -> Option<Scaled> {
    let (s0, e0) = asymptotic_sum(p, z, 1e-15)?;
    let (s1, e1) = asymptotic_sum(p + 1.0, z, 1e-15)?;
    // D_{p+1} = exp(scale) z s1 with scale = p ln z - z^2/4
    let scale = p * z.ln() - 0.25 * z * z;
    let u = s0;
    let du = -z * s1 + 0.5 * z * s0;
    let err = (e0 + 2.0 * EPS) * s0.norm() + (e1 + 2.0 * EPS) * z * s1.norm();
    Some(Scaled { u, du, scale, err: err / s0.norm().max(1e-300) })
}

/// One Taylor step of `u'' = (z^2/4 - c) u` from `z0` by `h`.
fn taylor_step(z0: f64, cc: Complex64, u: Complex64, du: Complex64, h: f64) -> (Complex64, Complex64) {
    // a_{n+2} (n+2)(n+1) = q0 a_n + q1 a_{n-1} + a_{n-2} / 4
    let q0 = cr(0.25 * z0 * z0) - cc;
    let q1 = 0.5 * z0;
    let mut val = u + du * h;
    let mut der = du;
    let scale = u.norm() + du.norm() * h.abs();
    let (mut prev2, mut prev1, mut cur, mut next1) = (cr(0.0), cr(0.0), u, du);
    let mut hn = 1.0;
    let mut quiet = 0;
    for n in 0..400 {
        let nf = n as f64;
        let a = (q0 * cur + q1 * prev1 + 0.25 * prev2) / ((nf + 2.0) * (nf + 1.0));
        der += (nf + 2.0) * a * hn * h;
        let t = a * hn * h * h;
        val += t;
        hn *= h;
        prev2 = prev1;
        prev1 = cur;
        cur = next1;
        next1 = a;
        if t.norm() <= 1e-18 * scale.max(val.norm()) {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

/// Carry `(D_p, D_p')` inward from `start` to `z`.
fn integrate_inward(p: Complex64, start: Scaled, z_from: f64, z: f64) -> Scaled {
    let cc = p + 0.5;
    let Scaled { mut u, mut du, mut scale, err } = start;
    let mut zc = z_from;
    let mut steps = 0usize;
    while zc > z {
        let k = (cr(0.25 * zc * zc) - cc).norm().sqrt();
        let h = (1.5 / k.max(1e-3)).min(0.5).min(zc - z);
        let (nu, ndu) = taylor_step(zc, cc, u, du, -h);
        zc -= h;
        if zc - z < 1e-14 * (1.0 + z.abs()) {
            zc = z;
        }
        let m = nu.norm();
        u = nu / m;
        du = ndu / m;
        scale += m.ln();
        steps += 1;
    }
    Scaled { u, du, scale, err: err + 1e-15 * (1.0 + steps as f64).sqrt() * 4.0 }
}

fn via_expansion(p: Complex64, z: f64) -> Result<(SpecFunResult, SpecFunResult)> {
    let mut za = z.max(Z_SWITCH);
    let start = loop {
        if let Some(s) = asymptotic_pair(p, za) {
            break s;
        }
        za += 2.0;
        if za > 120.0 {
            return Err(Error::Range(format!(
                "no accurate large-z expansion for D_p with p = {p}"
            )));
        }
    };
    let s = if za > z { integrate_inward(p, start, za, z) } else { start };
    let f = s.scale.exp();
    let value = f * s.u;
    let deriv = f * s.du;
    if !(value.re.is_finite() && value.im.is_finite() && deriv.re.is_finite()) {
        return Err(Error::Range(format!(
            "D_p({z}) with p = {p} over/underflows (asymptotic_branch)"
        )));
    }
    let flags = Flags::ASYMPTOTIC_BRANCH;
    Ok((
        SpecFunResult::new(value, s.err * value.norm(), flags),
        SpecFunResult::new(deriv, s.err * deriv.norm().max(value.norm()), flags),
    ))
}

fn kummer_result(p: Complex64, z: f64) -> Result<SpecFunResult> {
    let (value, err) = kummer_form(p, z);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range(format!("D_p({z}) with p = {p} overflows")));
    }
    Ok(SpecFunResult::new(value, err, Flags::empty()))
}

fn use_kummer(p: Complex64, z: f64) -> Option<SpecFunResult> {
    if z <= Z_KUMMER_SAFE {
        return None; // decided by caller
    }
    if z > Z_SWITCH {
        return None;
    }
    let (value, err) = kummer_form(p, z);
    if err <= KUMMER_REL_TOL * value.norm() {
        Some(SpecFunResult::new(value, err, Flags::empty()))
    } else {
        None
    }
}

/// `D_p(z)`.
pub fn parabolic_cylinder_d(p: Complex64, z: f64) -> Result<SpecFunResult> {
    check(p, z)?;
    if z <= Z_KUMMER_SAFE {
        return kummer_result(p, z);
    }
    if let Some(r) = use_kummer(p, z) {
        return Ok(r);
    }
    via_expansion(p, z).map(|(d, _)| d)
}

/// `dD_p/dz` from the recurrence `D_p' = -D_{p+1} + (z/2) D_p`.
pub fn parabolic_cylinder_d_deriv(p: Complex64, z: f64) -> Result<SpecFunResult> {
    let d = parabolic_cylinder_d(p, z)?;
    let d1 = parabolic_cylinder_d(p + 1.0, z)?;
    let value = -d1.value + 0.5 * z * d.value;
    let err = d1.est_error + 0.5 * z.abs() * d.est_error;
    Ok(SpecFunResult::new(value, err, d.flags.union(d1.flags)))
}

/// `(D_p(z), D_p'(z))` evaluated along one path.
pub fn parabolic_cylinder_pair(p: Complex64, z: f64) -> Result<(SpecFunResult, SpecFunResult)> {
    check(p, z)?;
    if z > Z_KUMMER_SAFE && use_kummer(p, z).is_none() {
        return via_expansion(p, z);
    }
    Ok((parabolic_cylinder_d(p, z)?, parabolic_cylinder_d_deriv(p, z)?))
}

#[cfg(test)]
mod tests {
    use super::super::gamma::gamma_complex;
    use super::super::hermite::hermite_h;
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn low_orders() {
        let d0 = parabolic_cylinder_d(cr(0.0), 2.0).unwrap().value;
        assert!(rel(d0, cr((-1.0f64).exp())) < 1e-15);
        let d1 = parabolic_cylinder_d(cr(1.0), 1.0).unwrap().value;
        assert!(rel(d1, cr((-0.25f64).exp())) < 1e-15);
    }

    #[test]
    fn value_at_origin() {
        let p = 0.3;
        let oracle = 2f64.powf(p / 2.0) * PI.sqrt() / gamma_complex(cr(0.35)).unwrap().value;
        let d = parabolic_cylinder_d(cr(p), 0.0).unwrap().value;
        assert!(rel(d, oracle) < 1e-14);
    }

    #[test]
    fn derivative_at_origin() {
        let d = parabolic_cylinder_d_deriv(cr(0.0), 0.0).unwrap().value;
        assert!(d.norm() < 1e-16);
        let d = parabolic_cylinder_d_deriv(cr(0.5), 0.0).unwrap().value;
        let oracle = -parabolic_cylinder_d(cr(1.5), 0.0).unwrap().value;
        assert!(rel(d, oracle) < 1e-15);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        let fd = (parabolic_cylinder_d(cr(2.0), 1.0 + h).unwrap().value
            - parabolic_cylinder_d(cr(2.0), 1.0 - h).unwrap().value)
            / (2.0 * h);
        let d = parabolic_cylinder_d_deriv(cr(2.0), 1.0).unwrap().value;
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn hermite_reduction_across_branches() {
        for n in [0usize, 1, 2, 5, 9] {
            for z in [-6.0, -2.5, 0.7, 3.5, 5.0, 7.0, 9.0, 12.0] {
                let herm = 2f64.powf(-(n as f64) / 2.0)
                    * (-0.25 * z * z).exp()
                    * hermite_h(n, z / SQRT_2).unwrap();
                let d = parabolic_cylinder_d(cr(n as f64), z).unwrap().value;
                assert!(rel(d, cr(herm)) < 1e-11, "n = {n}, z = {z}: {d} vs {herm}");
            }
        }
    }

    #[test]
    fn expansion_matches_kummer_in_overlap() {
        // at z = 3.5 the Kummer form still has ~1e-14 accuracy
        for p in [c(0.3, 0.2), c(-1.7, 0.5), c(2.4, -1.0)] {
            let k = kummer_form(p, 3.5).0;
            let (e, _) = via_expansion(p, 3.5).unwrap();
            assert!(rel(e.value, k) < 1e-11, "p = {p}");
        }
    }

    #[test]
    fn pair_is_consistent() {
        for z in [0.5, 4.0, 6.5, 10.0] {
            let p = c(-0.35, 0.4);
            let (d, dd) = parabolic_cylinder_pair(p, z).unwrap();
            let r = parabolic_cylinder_d_deriv(p, z).unwrap();
            assert!(rel(dd.value, r.value) < 1e-10, "z = {z}");
            assert!(rel(d.value, parabolic_cylinder_d(p, z).unwrap().value) < 1e-13);
        }
    }

    #[test]
    fn order_limit() {
        assert!(parabolic_cylinder_d(cr(250.0), 1.0).is_err());
    }
}
