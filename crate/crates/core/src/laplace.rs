//! Numerical inversion of the energy/Laplace representation of `K`.
//!
//! `K(t) = (1 / 2 pi hbar i) \int e^{-iEt/hbar} G(E) dE` along a contour above
//! the spectrum. For damped time `t = |t| e^{i theta}` the substitution
//! `E = i hbar lambda e^{-i theta}` turns this into a Laplace inversion in
//! `lambda` with kernel `e^{lambda |t|}`; the spectrum becomes a ray leaving
//! `lambda_0 = E_floor e^{i(theta - pi/2)} / hbar`. A horizontal line in `E`
//! is not usable (the integrand grows along it once `Im t < 0`), so the
//! contour is the left-opening hyperbola `lambda_0 + mu (1 + sin(i u - alpha))`
//! with a trapezoid rule in `u`.
//!
//! For Euclidean time the pair is `F(lambda) = G(-hbar lambda)`,
//! `K(-i tau) = (1 / 2 pi i) \int e^{lambda tau} F(lambda) d lambda`,
//! which is also what [`talbot_invert`] expects.

use crate::error::{invalid, Error, Result};
use crate::eval::{EvalPoint, PropEval, PropMethod};
use crate::greens::{GreenFunction, GreenOptions};
use crate::potential::PotentialModel;
use crate::prelude::*;
use crate::quad::{integrate, QuadConfig};
use crate::units::UnitsConfig;
use core::f64::consts::PI;

/// Hyperbola scale `mu |t|`.
const SCALE_A: f64 = 5.0;
/// Target `-ln` of the truncation and discretization errors.
const DIGITS_L: f64 = 38.0;
/// Strip half-width as a fraction of the hyperbola angle.
const STRIP: f64 = 0.9;
const TAIL_RATIO: f64 = 1e-3;
const MAX_NODES: usize = 1 << 17;
/// Nodes whose exponential weight is below `e^-PRUNE` of the largest one are
/// skipped; `G` decays like the inverse distance to the spectrum there, and
/// closed forms overflow far out on the contour.
const PRUNE: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourScheme {
    /// Trapezoid rule on the Bromwich contour (deformed to a hyperbola).
    TrapezoidLine,
    Talbot,
    /// Real wavenumber line of the free and point-interaction kernels.
    KLine,
}

impl ContourScheme {
    pub fn tag(self) -> &'static str {
        match self {
            ContourScheme::TrapezoidLine => "trapezoid_line",
            ContourScheme::Talbot => "talbot",
            ContourScheme::KLine => "k_line",
        }
    }
}

/// Contour parameters for [`bromwich_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Distance from the start of the spectrum ray to the contour vertex (units 1/time).
    pub offset_c: f64,
    /// Truncation `U` of the contour parameter, `u in [-U, U]`.
    pub half_width: f64,
    pub n_nodes: usize,
    pub scheme: ContourScheme,
    /// Lower bound of the spectrum in energy units.
    pub spectrum_floor: f64,
}

struct Geometry {
    modulus: f64,
    theta: f64,
    alpha: f64,
    strip: f64,
}

fn geometry(t: Complex64) -> Result<Geometry> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(invalid("time must be finite"));
    }
    if t == cr(0.0) {
        return Err(Error::SingularTime);
    }
    if t.im >= 0.0 {
        return Err(Error::Divergence(
            "contour inversion needs damped time (Im t < 0); the undamped integral is only conditionally convergent"
                .into(),
        ));
    }
    let theta = t.im.atan2(t.re);
    let opening = 0.5 * PI - (theta + 0.5 * PI).abs();
    let alpha = 0.5 * opening;
    Ok(Geometry { modulus: t.norm(), theta, alpha, strip: STRIP * alpha })
}

impl ContourSpec {
    /// Default contour for time `t` and a spectrum starting at `spectrum_floor`.
    pub fn for_time(t: Complex64, spectrum_floor: f64) -> Result<Self> {
        let g = geometry(t)?;
        let mu = SCALE_A / g.modulus;
        Self::with_offset(t, spectrum_floor, mu * (1.0 - g.alpha.sin()))
    }

    /// Contour with a given vertex offset; truncation and node count follow from it.
    pub fn with_offset(t: Complex64, spectrum_floor: f64, offset_c: f64) -> Result<Self> {
        if !(offset_c.is_finite() && offset_c > 0.0) {
            return Err(invalid("contour offset must be positive"));
        }
        if !spectrum_floor.is_finite() {
            return Err(invalid("spectrum floor must be finite"));
        }
        let g = geometry(t)?;
        let mu = offset_c / (1.0 - g.alpha.sin());
        let a = mu * g.modulus;
        let half_width = (1.0 + DIGITS_L / (a * g.alpha.sin())).acosh();
        let h = 2.0 * PI * g.strip / (a + DIGITS_L);
        let mut n = (2.0 * half_width / h).ceil() as usize;
        n += n % 2;
        Ok(Self {
            offset_c,
            half_width,
            n_nodes: n.clamp(16, MAX_NODES),
            scheme: ContourScheme::TrapezoidLine,
            spectrum_floor,
        })
    }
}

/// Neumaier-compensated complex sum.
#[derive(Default)]
struct Accumulator {
    sum: Complex64,
    comp: Complex64,
}

impl Accumulator {
    fn add(&mut self, v: Complex64) {
        let two = |s: f64, c: &mut f64, v: f64| -> f64 {
            let t = s + v;
            if s.abs() >= v.abs() {
                *c += (s - t) + v;
            } else {
                *c += (v - t) + s;
            }
            t
        };
        self.sum.re = two(self.sum.re, &mut self.comp.re, v.re);
        self.sum.im = two(self.sum.im, &mut self.comp.im, v.im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

struct Pass {
    value: Complex64,
    peak: f64,
    ends: f64,
}

fn hyperbola_pass<F>(green: &F, t: Complex64, spec: &ContourSpec, n: usize, units: &UnitsConfig) -> Result<Pass>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let g = geometry(t)?;
    let hbar = units.hbar();
    let rot = (I * (g.theta - 0.5 * PI)).exp();
    let lambda0 = spec.spectrum_floor * rot / hbar;
    let mu = spec.offset_c / (1.0 - g.alpha.sin());
    let to_energy = I * hbar * (-I * g.theta).exp();
    let h = 2.0 * spec.half_width / n as f64;
    let top = (lambda0.re + mu * (1.0 - g.alpha.sin())) * g.modulus;
    let mut acc = Accumulator::default();
    let (mut peak, mut ends): (f64, f64) = (0.0, 0.0);
    for k in 0..n {
        let u = -spec.half_width + (k as f64 + 0.5) * h;
        let w = c(-g.alpha, u); // i u - alpha
        let lambda = lambda0 + mu * (1.0 + w.sin());
        if lambda.re * g.modulus < top - PRUNE {
            continue;
        }
        let dlambda = mu * I * w.cos();
        let energy = to_energy * lambda;
        let f = -I * (-I * g.theta).exp() * green(energy)?;
        let term = (lambda * g.modulus).exp() * f * dlambda;
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::Contour(format!("non-finite integrand at E = {energy}")));
        }
        peak = peak.max(term.norm());
        if k == 0 || k == n - 1 {
            ends = ends.max(term.norm());
        }
        acc.add(term);
    }
    Ok(Pass { value: acc.total() * h / (2.0 * PI * I), peak, ends })
}

/// Inverts `G(E)` to `K(t)` for damped `t` with the contour in `spec`.
///
/// `est_error` compares against the same contour with half the nodes.
pub fn bromwich_quadrature<F>(
    green: F,
    x: f64,
    x_prime: f64,
    t: Complex64,
    spec: &ContourSpec,
    units: &UnitsConfig,
) -> Result<PropEval>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let point = EvalPoint::new(x, x_prime, t)?;
    if spec.n_nodes < 16 || spec.n_nodes % 2 == 1 {
        return Err(invalid("contour needs an even node count of at least 16"));
    }
    if !(spec.half_width > 0.0 && spec.half_width.is_finite()) {
        return Err(invalid("contour half width must be positive"));
    }
    let fine = hyperbola_pass(&green, t, spec, spec.n_nodes, units)?;
    let ratio = fine.ends / fine.peak.max(f64::MIN_POSITIVE);
    if ratio > TAIL_RATIO {
        return Err(Error::Truncation { ratio });
    }
    let coarse = hyperbola_pass(&green, t, spec, spec.n_nodes / 2, units)?;
    Ok(PropEval {
        point,
        value: fine.value,
        method: PropMethod::InverseLaplace,
        terms_used: Some(spec.n_nodes),
        est_error: (fine.value - coarse.value).norm(),
    })
}

/// Doubles the node count from the default contour until successive results agree to `tol`.
pub fn bromwich_adaptive<F>(
    green: F,
    x: f64,
    x_prime: f64,
    t: Complex64,
    spectrum_floor: f64,
    units: &UnitsConfig,
    tol: f64,
) -> Result<PropEval>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut spec = ContourSpec::for_time(t, spectrum_floor)?;
    spec.n_nodes = (spec.n_nodes / 4).max(16);
    spec.n_nodes += spec.n_nodes % 2;
    loop {
        let r = bromwich_quadrature(&green, x, x_prime, t, &spec, units)?;
        if r.est_error <= tol {
            return Ok(r);
        }
        if spec.n_nodes >= MAX_NODES {
            return Err(Error::Convergence(format!(
                "contour quadrature stalled at {:.2e} with {} nodes",
                r.est_error, spec.n_nodes
            )));
        }
        spec.n_nodes *= 2;
    }
}

/// Integrand family for [`k_line_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KLineIntegrand {
    Free,
    Delta,
}

/// `K = (1/2 pi) \int dk e^{-i hbar k^2 t / 2m} [e^{ik|x-x'|} - (i a / (k + i a)) e^{ik(|x|+|x'|)}]`,
/// the second term only for the point interaction (`a = m b / hbar^2`).
pub fn k_line_quadrature(
    x: f64,
    x_prime: f64,
    t: Complex64,
    integrand: KLineIntegrand,
    b: Option<f64>,
    units: &UnitsConfig,
) -> Result<PropEval> {
    let point = EvalPoint::new(x, x_prime, t)?;
    if t == cr(0.0) {
        return Err(Error::SingularTime);
    }
    if t.im > 0.0 {
        return Err(invalid("k-line quadrature needs Im t <= 0"));
    }
    let (m, hbar) = (units.mass(), units.hbar());
    let damping = hbar * (-t.im) / (2.0 * m);
    if damping <= 0.0 {
        return Err(Error::Divergence("k-line integral at real time has no Gaussian damping".into()));
    }
    let a = match (integrand, b) {
        (KLineIntegrand::Free, _) => 0.0,
        (KLineIntegrand::Delta, Some(b)) if b.is_finite() && b > 0.0 => m * b / (hbar * hbar),
        (KLineIntegrand::Delta, _) => return Err(invalid("delta k-line integrand needs b > 0")),
    };
    let r = (x - x_prime).abs();
    let rr = x.abs() + x_prime.abs();
    // e^{-damping k^2} < 1e-12 beyond k_max
    let k_max = (28.0 / damping).sqrt();
    let f = |k: f64| {
        let gauss = (-I * hbar * k * k * t / (2.0 * m)).exp();
        let mut v = (I * k * r).exp();
        if a > 0.0 {
            v -= I * a / (k + I * a) * (I * k * rr).exp();
        }
        gauss * v
    };
    let cfg = QuadConfig { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 20_000 };
    let q = integrate(f, -k_max, k_max, &cfg)?;
    if !q.converged {
        return Err(Error::Convergence(format!("k-line quadrature error {:.2e}", q.abs_error)));
    }
    Ok(PropEval {
        point,
        value: q.value / (2.0 * PI),
        method: PropMethod::InverseLaplace,
        terms_used: Some(q.evaluations),
        est_error: q.abs_error / (2.0 * PI) + 1e-12,
    })
}

/// Fixed-Talbot inversion `f(tau) = (1/2 pi i) \int e^{s tau} F(s) ds` for `tau > 0`.
///
/// All singularities of `F` must lie left of `shift` and inside the Talbot
/// contour around it. `m_nodes` of about 24 gives roughly 13 digits.
pub fn talbot_invert<F>(gbar: F, tau: f64, m_nodes: usize, shift: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid("Talbot inversion needs tau > 0"));
    }
    if m_nodes < 4 {
        return Err(invalid("Talbot inversion needs at least 4 nodes"));
    }
    let mf = m_nodes as f64;
    let r = 2.0 * mf / (5.0 * tau);
    let mut acc = Accumulator::default();
    for k in -(m_nodes as i64 - 1)..(m_nodes as i64) {
        let th = k as f64 * PI / mf;
        let (s, sigma) = if k == 0 {
            (cr(r), 0.0)
        } else {
            let cot = th.cos() / th.sin();
            (c(r * th * cot, r * th), th + (th * cot - 1.0) * cot)
        };
        if s.re * tau < r * tau - PRUNE {
            continue;
        }
        let s = s + shift;
        let v = gbar(s).map_err(|e| Error::Contour(format!("F({s}) failed: {e}")))?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Contour(format!("F is singular on the contour at s = {s}")));
        }
        acc.add((s * tau).exp() * v * c(1.0, sigma));
    }
    Ok(acc.total() * r / (2.0 * mf))
}

/// Euclidean transform `F(lambda) = G(-hbar lambda)` of a Green-function evaluator.
pub fn euclidean_transform<'a, G>(green: G, units: &'a UnitsConfig) -> impl Fn(Complex64) -> Result<Complex64> + 'a
where
    G: Fn(Complex64) -> Result<Complex64> + 'a,
{
    move |lambda| green(-units.hbar() * lambda)
}

/// Inverts the model's Green function to `K(x, x', t)` with the chosen scheme.
///
/// `trapezoid_line` works for any model and damped `t`; `k_line` only for the
/// free and point-interaction kernels; `talbot` only for Euclidean `t = -i tau`.
pub fn invert_model(
    model: &PotentialModel,
    x: f64,
    x_prime: f64,
    t: Complex64,
    scheme: ContourScheme,
    units: &UnitsConfig,
    opts: &GreenOptions,
    tol: f64,
) -> Result<PropEval> {
    let green = |e: Complex64| GreenFunction::new(model, e, units, opts)?.value(x, x_prime);
    match scheme {
        ContourScheme::TrapezoidLine => {
            bromwich_adaptive(green, x, x_prime, t, model.spectrum_floor(units), units, tol)
        }
        ContourScheme::KLine => match model {
            PotentialModel::Free => k_line_quadrature(x, x_prime, t, KLineIntegrand::Free, None, units),
            PotentialModel::Delta { b, background: None } => {
                k_line_quadrature(x, x_prime, t, KLineIntegrand::Delta, Some(*b), units)
            }
            _ => Err(invalid("k-line scheme only covers the free and point-interaction kernels")),
        },
        ContourScheme::Talbot => {
            let point = EvalPoint::new(x, x_prime, t)?;
            if t.re != 0.0 || t.im >= 0.0 {
                return Err(invalid("Talbot scheme needs Euclidean time t = -i tau"));
            }
            let f = euclidean_transform(green, units);
            let shift = (-model.spectrum_floor(units) / units.hbar()).max(0.0);
            let coarse = talbot_invert(&f, -t.im, 16, shift)?;
            let value = talbot_invert(&f, -t.im, 24, shift)?;
            Ok(PropEval {
                point,
                value,
                method: PropMethod::InverseLaplace,
                terms_used: Some(47),
                est_error: (value - coarse).norm(),
            })
        }
    }
}
