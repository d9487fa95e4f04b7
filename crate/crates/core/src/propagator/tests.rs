use super::*;
use crate::quad::{integrate, integrate_real, QuadConfig};
use crate::units::UnitsConfig;
use core::f64::consts::PI;
use proptest::prelude::*;

fn nat() -> UnitsConfig {
    UnitsConfig::natural()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn free_examples() {
    let u = nat();
    let k = propagator_free(0.0, 0.0, cr(1.0), &u).unwrap().value;
    let v = (2.0 * PI).powf(-0.5) * 0.5f64.sqrt();
    assert!(close(k, c(v, -v), 1e-15));
    assert!((v - 0.282_094_8).abs() < 1e-7);
    let k = propagator_free(1.0, 0.0, c(0.0, -1.0), &u).unwrap().value;
    assert!(close(k, cr((2.0 * PI).powf(-0.5) * (-0.5f64).exp()), 1e-15));
    assert!(matches!(propagator_free(0.0, 0.0, cr(0.0), &u), Err(Error::SingularTime)));
    assert!(propagator_free(0.0, 0.0, c(1.0, 0.1), &u).is_err());
}

#[test]
fn free_normalization() {
    let u = nat();
    let x = 0.3;
    let r = integrate(
        |y| propagator_free(x, y, c(0.0, -0.5), &u).unwrap().value,
        x - 12.0,
        x + 12.0,
        &QuadConfig::new(1e-14, 1e-14),
    )
    .unwrap();
    assert!(close(r.value, cr(1.0), 1e-10));
}

/// `K0(r) - a \int_0^inf e^{-a u} K0(R + u) du` at Euclidean time.
fn delta_oracle(x: f64, y: f64, tau: f64, b: f64) -> f64 {
    let k0 = |r: f64| (2.0 * PI * tau).powf(-0.5) * (-r * r / (2.0 * tau)).exp();
    let rr = x.abs() + y.abs();
    let (tail, _) = integrate_real(|s| (-b * s).exp() * k0(rr + s), 0.0, 40.0, &QuadConfig::new(1e-15, 1e-14)).unwrap();
    k0(x - y) - b * tail
}

#[test]
fn delta_matches_image_integral() {
    let u = nat();
    for (x, y, tau, b) in [(0.5, 0.5, 0.8, 1.0), (0.0, 0.0, 0.2, 1.0), (-0.7, 1.2, 2.0, 0.3), (0.1, -0.4, 1.0, 4.0)] {
        let k = propagator_delta(x, y, c(0.0, -tau), b, &u).unwrap().value;
        let o = delta_oracle(x, y, tau, b);
        assert!(close(k, cr(o), 1e-12), "{k} vs {o}");
    }
}

#[test]
fn delta_limits() {
    let u = nat();
    let t = c(0.7, -0.3);
    let k0 = propagator_free(0.4, -0.2, t, &u).unwrap().value;
    let k = propagator_delta(0.4, -0.2, t, 1e-10, &u).unwrap().value;
    assert!(close(k, k0, 1e-9));
    // the correction decays like exp(-a R) beyond the spreading scale
    let tau = c(0.0, -0.5);
    let corr = |r: f64| {
        (propagator_delta(r, r, tau, 1.0, &u).unwrap().value - propagator_free(r, r, tau, &u).unwrap().value).norm()
    };
    assert!(corr(4.0) < 1e-6 * corr(0.0));
    // real time stays finite across the board
    for t in [cr(0.3), cr(2.0), c(5.0, -0.01)] {
        assert!(propagator_delta(2.0, -3.0, t, 2.0, &u).unwrap().value.norm().is_finite());
    }
}

#[test]
fn printed_delta_form_disagrees_with_oracle() {
    let u = nat();
    let (x, y, tau) = (0.5, 0.5, 0.8);
    let o = delta_oracle(x, y, tau, 1.0);
    let printed = delta_printed_form(x, y, c(0.0, -tau), 1.0, &u).unwrap();
    assert!((printed - o).norm() > 1e-2);
}

#[test]
fn harmonic_small_frequency_limit() {
    let u = nat();
    let t = c(0.0, -1.0);
    let h = propagator_harmonic(0.4, -0.3, t, 1e-4, &u).unwrap().value;
    let f = propagator_free(0.4, -0.3, t, &u).unwrap().value;
    assert!(close(h, f, 1e-8));
}

#[test]
fn harmonic_ground_state_projection() {
    // K(0, 0, -i tau) e^{tau/2} / sqrt(1/pi) -> 1 + O(e^{-2 tau})
    let u = nat();
    let ratio = |tau: f64| {
        propagator_harmonic(0.0, 0.0, c(0.0, -tau), 1.0, &u).unwrap().value.re * (0.5 * tau).exp() * PI.sqrt()
    };
    assert!((ratio(8.0) - 1.0).abs() < 1e-5);
    assert!((ratio(10.0) - 1.0).abs() < 1e-5);
    // the n = 0 term of the spectral sum is the same asymptote
    let cfg = SpectralSumConfig::new(1, 0.0).unwrap();
    let s = spectral_sum_harmonic(0.0, 0.0, c(0.0, -10.0), 1.0, &u, &cfg).unwrap().value.re;
    assert!((s * 5f64.exp() * PI.sqrt() - 1.0).abs() < 1e-8);
}

#[test]
fn harmonic_periodicity() {
    // every term of the spectral sum picks up e^{-i (n + 1/2) 2 pi} = -1
    let u = nat();
    let t = c(0.8, -0.05);
    let a = propagator_harmonic(0.3, 1.1, t, 1.0, &u).unwrap().value;
    let b = propagator_harmonic(0.3, 1.1, t + 2.0 * PI, 1.0, &u).unwrap().value;
    assert!(close(b, -a, 1e-12 * a.norm()));
}

#[test]
fn harmonic_caustic() {
    let u = nat();
    assert!(matches!(propagator_harmonic(0.1, 0.2, cr(PI), 1.0, &u), Err(Error::Caustic { .. })));
}

#[test]
fn harmonic_maslov_phase() {
    // K(0, 0, t) = sqrt(m omega / 2 pi hbar |sin omega t|) e^{-i pi/4 - i pi n/2}, n = caustics passed
    let u = nat();
    for (wt, n) in [(1.0, 0.0), (4.0, 1.0), (7.0, 2.0), (11.0, 3.0)] {
        let k = propagator_harmonic(0.0, 0.0, cr(wt), 1.0, &u).unwrap().value;
        let expect = (1.0 / (2.0 * PI * f64::sin(wt).abs())).sqrt() * (-I * (PI / 4.0 + n * PI / 2.0)).exp();
        assert!(close(k, expect, 1e-12), "omega t = {wt}: {k} vs {expect}");
    }
}

#[test]
fn residues() {
    assert_eq!(residue_weights(0), 1.0);
    assert_eq!(residue_weights(1), -1.0);
    assert!((residue_weights(5) + 1.0 / 120.0).abs() < 1e-18);
}

#[test]
fn spectral_single_term() {
    let u = nat();
    let cfg = SpectralSumConfig { n_max: 0, damping: 0.1 };
    assert!(spectral_sum_harmonic(0.0, 0.0, cr(1.0), 1.0, &u, &cfg).is_err());
    let cfg = SpectralSumConfig::new(1, 0.1).unwrap();
    let t = cr(1.0);
    let k = spectral_sum_harmonic(0.0, 0.0, t, 1.0, &u, &cfg).unwrap().value;
    // H_1(0) = 0, so one term survives
    let first = PI.powf(-0.5) * (-0.5 * I * (t - 0.1 * I)).exp();
    assert!(close(k, first, 1e-15));
}

#[test]
fn spectral_matches_closed_form() {
    let u = nat();
    let t = c(0.0, -0.1);
    // tail e^{-0.1 n} / (1 - e^{-0.1}) < 1e-9 needs n of about 230
    let cfg = SpectralSumConfig::new(260, 0.0).unwrap();
    let s = spectral_sum_harmonic(0.5, -0.3, t, 1.0, &u, &cfg).unwrap();
    let k = propagator_harmonic(0.5, -0.3, t, 1.0, &u).unwrap().value;
    assert!(close(s.value, k, 1e-8), "{} vs {k}", s.value);
    assert!(s.est_error < 1e-8 && (s.value - k).norm() <= s.est_error);
    assert_eq!(s.terms_used, Some(261));
}

#[test]
fn spectral_tail_bound_geometric() {
    let u = nat();
    let t = cr(1.3);
    let e30 = spectral_sum_harmonic(0.2, 0.4, t, 1.0, &u, &SpectralSumConfig::new(30, 0.2).unwrap()).unwrap();
    let e60 = spectral_sum_harmonic(0.2, 0.4, t, 1.0, &u, &SpectralSumConfig::new(60, 0.2).unwrap()).unwrap();
    assert!(e60.est_error <= e30.est_error * (-30.0f64 * 0.2).exp() * (1.0 + 1e-12));
    let k = propagator_harmonic(0.2, 0.4, t - 0.2 * I, 1.0, &u).unwrap().value;
    assert!((e60.value - k).norm() <= e60.est_error);
    assert!((e30.value - k).norm() <= e30.est_error);
}

#[test]
fn spectral_real_time_needs_damping() {
    let u = nat();
    let cfg = SpectralSumConfig::new(10, 0.0).unwrap();
    assert!(matches!(spectral_sum_harmonic(0.0, 0.0, cr(1.0), 1.0, &u, &cfg), Err(Error::Convergence(_))));
}

#[test]
fn mirrored_pairing_is_not_the_kernel() {
    // pairing H_n(xi) with H_n(-xi') inserts (-1)^n and yields K(x, -x')
    let u = nat();
    let (x, y, t) = (0.5, 0.3, c(0.7, -0.3));
    let fx = crate::specfun::hermite_functions(200, x);
    let fy = crate::specfun::hermite_functions(200, -y);
    let mut mirrored = cr(0.0);
    for n in 0..=200 {
        mirrored += fx[n] * fy[n] * (-I * (n as f64 + 0.5) * t).exp();
    }
    let k = propagator_harmonic(x, y, t, 1.0, &u).unwrap().value;
    let k_reflected = propagator_harmonic(x, -y, t, 1.0, &u).unwrap().value;
    assert!((mirrored - k).norm() > 1e-2);
    assert!(close(mirrored, k_reflected, 1e-10));
}

#[test]
fn mehler_examples() {
    assert!(close(mehler_sum(0.7, -0.2, cr(0.0), 10).unwrap(), cr(1.0), 1e-15));
    assert!(close(mehler_closed(0.7, -0.2, cr(0.0)).unwrap(), cr(1.0), 1e-15));
    // z = z' = 0: sum_k ((2k)!/k!)^2 xi^{2k} / (2k)! = (1 - 4 xi^2)^{-1/2}
    let xi: f64 = 0.3;
    let mut direct = 0.0;
    let mut ratio = 1.0; // (2k)! / (k!)^2
    for k in 0..=20 {
        if k > 0 {
            ratio *= (2 * k) as f64 * (2 * k - 1) as f64 / (k as f64 * k as f64);
        }
        direct += ratio * xi.powi(2 * k);
    }
    let closed = (1.0 - 4.0 * xi * xi).powf(-0.5);
    assert!((direct - closed).abs() < 1e-10);
    assert!((mehler_sum(0.0, 0.0, cr(xi), 40).unwrap().re - closed).abs() < 1e-10);
    let s = mehler_sum(1.0, -1.0, cr(0.25), 50).unwrap();
    let cl = mehler_closed(1.0, -1.0, cr(0.25)).unwrap();
    assert!(close(s, cl, 1e-9));
    assert!(matches!(mehler_sum(0.0, 0.0, cr(0.5), 5), Err(Error::Divergence(_))));
}

#[test]
fn mehler_matches_hermite_polynomials() {
    let (z, y, xi) = (0.8, -0.35, c(0.2, -0.15));
    let mut direct = cr(0.0);
    let mut fact = 1.0;
    for n in 0..30 {
        if n > 0 {
            fact *= n as f64;
        }
        let hz = crate::specfun::hermite_h(n, z).unwrap();
        let hy = crate::specfun::hermite_h(n, y).unwrap();
        direct += hz * hy * xi.powu(n as u32) / fact;
    }
    assert!(close(mehler_sum(z, y, xi, 29).unwrap(), direct, 1e-13));
}

#[test]
fn mehler_identity_gives_closed_kernel() {
    let u = nat();
    for t in [c(0.4, -0.2), c(3.0, -0.05), c(0.0, -2.0)] {
        let xi = 0.5 * (-I * t).exp();
        let (x, y) = (0.6, -1.1);
        let via = PI.powf(-0.5) * (-0.5 * I * t).exp() * (-0.5 * (x * x + y * y)).exp() * mehler_closed(x, y, xi).unwrap();
        let k = propagator_harmonic(x, y, t, 1.0, &u).unwrap().value;
        assert!(close(via, k, 1e-12 * k.norm()), "t = {t}");
    }
}

#[test]
fn chapman_kolmogorov() {
    let u = nat();
    let cfg = QuadConfig::new(1e-13, 1e-12);
    let (x, y) = (0.4, -0.3);
    let (t1, t2) = (c(0.0, -0.3), c(0.0, -0.5));
    for which in 0..2 {
        let k = |a: f64, b: f64, t: Complex64| {
            if which == 0 {
                propagator_free(a, b, t, &u).unwrap().value
            } else {
                propagator_harmonic(a, b, t, 1.0, &u).unwrap().value
            }
        };
        let r = integrate(|z| k(x, z, t1) * k(z, y, t2), -12.0, 12.0, &cfg).unwrap();
        assert!(close(r.value, k(x, y, t1 + t2), 1e-6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermiticity(x in -2.0f64..2.0, y in -2.0f64..2.0, re in -3.0f64..3.0, im in -2.0f64..-0.01) {
        let u = nat();
        let t = c(re, im);
        let mt = -t.conj();
        let a = propagator_free(x, y, t, &u).unwrap().value;
        let b = propagator_free(y, x, mt, &u).unwrap().value.conj();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        if let (Ok(a), Ok(b)) = (propagator_harmonic(x, y, t, 1.3, &u), propagator_harmonic(y, x, mt, 1.3, &u)) {
            prop_assert!((a.value - b.value.conj()).norm() <= 1e-10 * a.value.norm().max(1e-300));
        }
        let a = propagator_delta(x, y, t, 0.9, &u).unwrap().value;
        let b = propagator_delta(y, x, mt, 0.9, &u).unwrap().value.conj();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300));
    }

    #[test]
    fn spectral_converges_to_closed(x in -2.0f64..2.0, y in -2.0f64..2.0, wt in 0.2f64..6.0) {
        let u = nat();
        let cfg = SpectralSumConfig::new(500, 0.05).unwrap();
        let s = spectral_sum_harmonic(x, y, cr(wt), 1.0, &u, &cfg).unwrap();
        let k = propagator_harmonic(x, y, c(wt, -0.05), 1.0, &u).unwrap().value;
        prop_assert!((s.value - k).norm() <= s.est_error.max(1e-12));
        prop_assert!((s.value - k).norm() <= 1e-8);
    }
}
