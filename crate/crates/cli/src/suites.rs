//! `validate`: seeded property suites with a JSON report.
//!
//! Random draws are made sequentially from one ChaCha stream so a seed fixes
//! every sample; evaluation then runs in parallel.

use std::f64::consts::PI;
use std::time::Instant;

use greenprop_core::greens::{harmonic_wronskian, jump_residual, GreenFunction, GreenOptions};
use greenprop_core::propagator::{
    mehler_closed, mehler_sum, propagator_closed, propagator_delta, propagator_free, propagator_harmonic,
    spectral_sum_harmonic, SpectralSumConfig,
};
use greenprop_core::specfun::{gamma_complex, parabolic_cylinder_pair};
use greenprop_core::tdse::{
    apply_propagator_refined, compare_l2, evolve_crank_nicolson, Boundary, EvolveConfig, WavefunctionState,
};
use greenprop_core::{Complex64, CustomPotential, Grid1D, Interpolation, PotentialModel, UnitsConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cli::{Suite, ValidateArgs};
use crate::error::{CliError, CliResult};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Property {
    name: String,
    pass: bool,
    max_residual: f64,
    bound: f64,
    checks: usize,
    runtime: f64,
    /// Extra material: tables, failures, informational comparisons.
    details: Value,
}

impl Property {
    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "max_residual": finite_or_null(self.max_residual),
            "bound": self.bound,
            "checks": self.checks,
            "runtime_s": self.runtime,
            "details": self.details,
        })
    }
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

/// Folds per-check residuals; any error counts as a failure and is listed.
fn gather(name: &str, bound: f64, started: Instant, results: Vec<Result<f64, String>>, details: Value) -> Property {
    let mut max: f64 = 0.0;
    let mut errors = Vec::new();
    for r in &results {
        match r {
            Ok(v) if v.is_nan() => errors.push("NaN residual".to_string()),
            Ok(v) => max = max.max(*v),
            Err(e) => errors.push(e.clone()),
        }
    }
    let mut details = details;
    if !errors.is_empty() {
        errors.truncate(5);
        details["errors"] = json!(errors);
    }
    Property {
        name: name.into(),
        pass: errors.is_empty() && max <= bound,
        max_residual: if errors.is_empty() { max } else { f64::NAN },
        bound,
        checks: results.len(),
        runtime: started.elapsed().as_secs_f64(),
        details,
    }
}

fn quartic() -> PotentialModel {
    let v = CustomPotential::from_fn(|x| x.powi(4) - 2.0 * x * x, -5.0, 5.0, 501, Interpolation::Cubic)
        .expect("quartic table is valid");
    PotentialModel::Custom(v)
}

fn models() -> Vec<(&'static str, PotentialModel)> {
    vec![
        ("free", PotentialModel::Free),
        ("harmonic", PotentialModel::Harmonic { omega: 1.0 }),
        ("delta", PotentialModel::Delta { b: 1.0, background: None }),
        ("quartic", quartic()),
    ]
}

/// Energy off the real axis, away from every bound state.
fn draw_energy(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..3.0), rng.gen_range(0.1..1.0))
}

fn jump(rng: &mut ChaCha8Rng, u: &UnitsConfig) -> Vec<Property> {
    let started = Instant::now();
    let models = models();
    // 15 draws per model, 60 checks in all
    let draws: Vec<(usize, f64, Complex64)> = (0..60)
        .map(|i| (i % models.len(), rng.gen_range(-2.0..2.0), draw_energy(rng)))
        .collect();
    let results = draws
        .par_iter()
        .map(|&(m, xp, e)| {
            let g = GreenFunction::new(&models[m].1, e, u, &GreenOptions::default()).map_err(|e| e.to_string())?;
            let r = jump_residual(|x| g.value(x, xp), xp, u, 1e-4).map_err(|e| e.to_string())?;
            Ok(r / u.jump().abs())
        })
        .collect();
    vec![gather("jump", 1e-6, started, results, json!({ "measure": "relative to 2m/hbar" }))]
}

fn symmetry(rng: &mut ChaCha8Rng, u: &UnitsConfig) -> Vec<Property> {
    let models = models();
    let started = Instant::now();
    let draws: Vec<(usize, f64, f64, Complex64)> = (0..60)
        .map(|i| (i % models.len(), rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5), draw_energy(rng)))
        .collect();
    let results = draws
        .par_iter()
        .map(|&(m, x, xp, e)| {
            let g = GreenFunction::new(&models[m].1, e, u, &GreenOptions::default()).map_err(|e| e.to_string())?;
            let (a, b) = (g.value(x, xp).map_err(|e| e.to_string())?, g.value(xp, x).map_err(|e| e.to_string())?);
            Ok((a - b).norm() / a.norm().max(1e-300))
        })
        .collect();
    let green = gather("green_reciprocity", 1e-8, started, results, json!({ "measure": "|G(x,x') - G(x',x)| / |G|" }));

    // reciprocity holds by construction; parity does not, since u- and u+ are integrated separately
    let started = Instant::now();
    let draws: Vec<(usize, f64, f64, Complex64)> = (0..60)
        .map(|i| (i % models.len(), rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5), draw_energy(rng)))
        .collect();
    let results = draws
        .par_iter()
        .map(|&(m, x, xp, e)| {
            let g = GreenFunction::new(&models[m].1, e, u, &GreenOptions::numerical()).map_err(|e| e.to_string())?;
            let (a, b) = (g.value(x, xp).map_err(|e| e.to_string())?, g.value(-x, -xp).map_err(|e| e.to_string())?);
            Ok((a - b).norm() / a.norm().max(1e-300))
        })
        .collect();
    let parity = gather(
        "green_parity",
        1e-6,
        started,
        results,
        json!({ "measure": "|G(x,x') - G(-x,-x')| / |G| with numerical modes; every test potential is even" }),
    );

    let started = Instant::now();
    let draws: Vec<(usize, f64, f64, Complex64)> = (0..60)
        .map(|i| {
            let t = c(rng.gen_range(0.1..2.0), -rng.gen_range(0.05..1.0));
            (i % 3, rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5), t)
        })
        .collect();
    let results = draws
        .par_iter()
        .map(|&(m, x, xp, t)| {
            let model = &models[m].1;
            let a = propagator_closed(model, x, xp, t, u).map_err(|e| e.to_string())?.value;
            let b = propagator_closed(model, xp, x, t, u).map_err(|e| e.to_string())?.value;
            Ok((a - b).norm() / a.norm().max(1e-300))
        })
        .collect();
    let prop = gather("propagator_reciprocity", 1e-12, started, results, json!({ "measure": "|K(x,x') - K(x',x)| / |K|" }));
    vec![green, parity, prop]
}

fn wronskian(rng: &mut ChaCha8Rng, u: &UnitsConfig) -> Vec<Property> {
    let started = Instant::now();
    let zeta = 2f64.sqrt();
    let draws: Vec<Complex64> = (0..40).map(|_| c(rng.gen_range(-2.5..2.5), rng.gen_range(-2.0..2.0))).collect();
    let evals: Vec<Result<(f64, f64), String>> = draws
        .par_iter()
        .map(|&p| {
            let (d, dd) = parabolic_cylinder_pair(p, 0.0).map_err(|e| e.to_string())?;
            // W[D_p(-zeta x), D_p(zeta x)] at x = 0, against the closed form in energy
            let w = 2.0 * zeta * d.value * dd.value;
            let fixed = harmonic_wronskian(p + 0.5, u, 1.0).map_err(|e| e.to_string())?;
            let g = gamma_complex(-p).map_err(|e| e.to_string())?.value;
            let stated = -zeta * PI.sqrt() / g;
            Ok(((w - fixed).norm() / w.norm(), (w / stated - zeta).norm()))
        })
        .collect();
    let ratio = evals.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.1).fold(0.0, f64::max);
    let closed = gather(
        "wronskian_closed_form",
        1e-8,
        started,
        evals.into_iter().map(|r| r.map(|v| v.0)).collect(),
        json!({
            "form": "-zeta sqrt(2 pi) / Gamma(-p)",
            "info_sqrt_pi_form": { "ratio_to_measured": "sqrt 2", "max_deviation_from_sqrt2": ratio },
        }),
    );

    // the numerical mode solver knows nothing of the closed form
    let started = Instant::now();
    let osc = PotentialModel::Harmonic { omega: 1.0 };
    let draws: Vec<(f64, f64, Complex64)> = (0..12)
        .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), draw_energy(rng)))
        .collect();
    let results = draws
        .par_iter()
        .map(|&(x, xp, e)| {
            let num = GreenFunction::new(&osc, e, u, &GreenOptions::numerical())
                .and_then(|g| g.value(x, xp))
                .map_err(|e| e.to_string())?;
            let cl = GreenFunction::new(&osc, e, u, &GreenOptions::default())
                .and_then(|g| g.value(x, xp))
                .map_err(|e| e.to_string())?;
            Ok((num - cl).norm() / cl.norm())
        })
        .collect();
    let modes = gather("numerical_vs_closed_oscillator", 1e-6, started, results, json!({}));
    vec![closed, modes]
}

fn mehler() -> Vec<Property> {
    let started = Instant::now();
    let orders = [10usize, 20, 40, 80];
    let radii = [0.1, 0.2, 0.3, 0.4];
    let mut table = Vec::new();
    let mut gate: f64 = 0.0;
    let mut monotone = true;
    let mut failures = Vec::new();
    for &r in &radii {
        let mut row = Vec::new();
        for &n in &orders {
            let mut origin: f64 = 0.0;
            let mut off: f64 = 0.0;
            for k in 0..8 {
                let xi = Complex64::from_polar(r, k as f64 * PI / 4.0);
                for (z, zp) in [(0.0, 0.0), (1.0, 0.8), (2.0, 2.0)] {
                    match (mehler_sum(z, zp, xi, n), mehler_closed(z, zp, xi)) {
                        (Ok(a), Ok(b)) if z == 0.0 => origin = origin.max((a - b).norm()),
                        (Ok(a), Ok(b)) => off = off.max((a - b).norm()),
                        (a, b) => failures.push(format!("xi = {xi}, n = {n}: {:?} {:?}", a.err(), b.err())),
                    }
                }
            }
            if r <= 0.3 && n == 40 {
                gate = gate.max(origin);
            }
            row.push(json!({ "n": n, "origin": origin, "off_origin": off }));
        }
        let errs: Vec<f64> = row.iter().map(|v| v["origin"].as_f64().unwrap_or(f64::NAN)).collect();
        // down to the rounding floor
        monotone &= errs.windows(2).all(|w| w[1] <= w[0].max(1e-14));
        table.push(json!({ "abs_xi": r, "errors": row }));
    }
    let ok = failures.is_empty() && monotone && gate <= 1e-10;
    vec![Property {
        name: "mehler_convergence".into(),
        pass: ok,
        max_residual: gate,
        bound: 1e-10,
        checks: radii.len() * orders.len() * 24,
        runtime: started.elapsed().as_secs_f64(),
        details: json!({
            "gate": "n = 40, |xi| <= 0.3, z = z' = 0",
            "monotone_in_n": monotone,
            "table": table,
            "errors": failures,
        }),
    }]
}

fn spectral(u: &UnitsConfig) -> Vec<Property> {
    let grid = [-2.0, -0.9, 0.0, 1.1, 2.0];
    let run = |n_max: usize| {
        let started = Instant::now();
        let cfg = SpectralSumConfig::new(n_max, 0.05).map_err(|e| e.to_string());
        let mut pts = Vec::new();
        for wt in [0.2, 1.0, 2.5, 4.0, 6.0] {
            for x in grid {
                for xp in grid {
                    pts.push((wt, x, xp));
                }
            }
        }
        let results: Vec<Result<f64, String>> = pts
            .par_iter()
            .map(|&(wt, x, xp)| {
                let cfg = cfg.clone()?;
                let s = spectral_sum_harmonic(x, xp, c(wt, 0.0), 1.0, u, &cfg).map_err(|e| e.to_string())?.value;
                let k = propagator_harmonic(x, xp, c(wt, -0.05), 1.0, u).map_err(|e| e.to_string())?.value;
                Ok((s - k).norm())
            })
            .collect();
        (started, results)
    };
    let (started, results) = run(500);
    let mut p = gather("spectral_vs_closed", 1e-8, started, results, json!({ "n_max": 500, "damping": 0.05 }));
    let (_, short) = run(60);
    let short_max = short.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |a, b| a.max(*b));
    // reported, not gated: the e^{-0.05 n} tail at n = 60 is about 5e-2
    p.details["info_n_max_60"] = json!(short_max);
    vec![p]
}

fn oracle(u: &UnitsConfig) -> CliResult<Vec<Property>> {
    let grid = Grid1D::with_spacing(-14.0, 14.0, 0.02)?;
    let psi0 = WavefunctionState::gaussian(grid, -1.0, 0.7, 0.0)?;
    let t = PI / 2.0;
    let n_steps = (t / 1e-4).round() as usize;
    let dt = t / n_steps as f64;
    let reflecting = EvolveConfig::new(dt, n_steps, Boundary::Reflecting)?;
    let absorbing = EvolveConfig::new(dt, n_steps, Boundary::AbsorbingLayer { width: 3.0, strength: 50.0 })?;
    let cases = [
        ("harmonic", PotentialModel::Harmonic { omega: 1.0 }, 1e-3, reflecting),
        ("free", PotentialModel::Free, 1e-3, reflecting),
        ("delta", PotentialModel::Delta { b: 1.0, background: None }, 5e-3, absorbing),
    ];
    Ok(cases
        .par_iter()
        .map(|(name, model, bound, cfg)| {
            let started = Instant::now();
            let kernel = |a: f64, b: f64, t: Complex64| match model {
                PotentialModel::Harmonic { omega } => propagator_harmonic(a, b, t, *omega, u).map(|k| k.value),
                PotentialModel::Delta { b: s, .. } => propagator_delta(a, b, t, *s, u).map(|k| k.value),
                _ => propagator_free(a, b, t, u).map(|k| k.value),
            };
            let r = evolve_crank_nicolson(&psi0, model, cfg, u).and_then(|a| {
                let b = apply_propagator_refined(kernel, &psi0, c(t, 0.0), &[0.0])?;
                compare_l2(&a.window(-11.0, 11.0)?, &b.window(-11.0, 11.0)?)
            });
            let (res, raw) = match &r {
                Ok(d) => (Ok(d.aligned), json!(d.raw)),
                Err(e) => (Err(e.to_string()), Value::Null),
            };
            gather(
                &format!("oracle_{name}"),
                *bound,
                started,
                vec![res],
                json!({
                    "window": [-11.0, 11.0],
                    "boundary": format!("{:?}", cfg.boundary),
                    "t": t,
                    "raw_l2": raw,
                }),
            )
        })
        .collect())
}

pub fn validate(a: &ValidateArgs) -> CliResult<()> {
    let u = UnitsConfig::natural();
    let started = Instant::now();
    let all = a.suite == Suite::All;
    let mut properties = Vec::new();
    // each suite gets its own stream so adding one suite never shifts another's draws
    let stream = |k: u64| {
        let mut r = ChaCha8Rng::seed_from_u64(a.seed);
        r.set_stream(k);
        r
    };
    if all || a.suite == Suite::Jump {
        properties.extend(jump(&mut stream(1), &u));
    }
    if all || a.suite == Suite::Symmetry {
        properties.extend(symmetry(&mut stream(2), &u));
    }
    if all || a.suite == Suite::Wronskian {
        properties.extend(wronskian(&mut stream(3), &u));
    }
    if all || a.suite == Suite::Mehler {
        properties.extend(mehler());
    }
    if all || a.suite == Suite::Spectral {
        properties.extend(spectral(&u));
    }
    if all || a.suite == Suite::Oracle {
        properties.extend(oracle(&u)?);
    }
    let pass = properties.iter().all(|p| p.pass);
    let report = json!({
        "record": "validate",
        "suite": crate::commands::arg_name(a.suite),
        "seed": a.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "pass": pass,
        "runtime_s": started.elapsed().as_secs_f64(),
        "properties": properties.iter().map(Property::to_json).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::usage(e.to_string()))?;
    match &a.out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|source| CliError::Io { path: p.clone(), source })?,
        None => println!("{text}"),
    }
    if pass {
        return Ok(());
    }
    let failed: Vec<&str> = properties.iter().filter(|p| !p.pass).map(|p| p.name.as_str()).collect();
    Err(CliError::SuiteFailed(failed.join(", ")))
}
