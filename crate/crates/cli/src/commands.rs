//! `greens`, `propagator`, `sweep` and the hidden `specfun-probe`.

use greenprop_core::error::ErrorKind;
use greenprop_core::greens::{jump_residual, GreenFunction, GreenOptions};
use greenprop_core::laplace::{invert_model, ContourScheme};
use greenprop_core::propagator::{propagator_closed, spectral_sum_harmonic, SpectralSumConfig};
use greenprop_core::specfun::{
    erfc_complex, erfcx_complex, gamma_complex, hermite_h, kummer_m, ln_gamma_complex, parabolic_cylinder_d,
    SpecFunResult,
};
use greenprop_core::{Complex64, PotentialModel, PropEval};
use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cli::{
    Component, GreenMethodArg, GreensArgs, ProbeArgs, PropMethodArg, PropagatorArgs, PropagatorOptions, Quantity,
    SchemeArg, SpecialFn, SweepArgs,
};
use crate::config::{tolerance, Setup};
use crate::error::{CliError, CliResult};
use crate::output::{write_table, Cell, Manifest, Table};

/// The command-line spelling of a flag value.
pub fn arg_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map_or_else(String::new, |p| p.get_name().to_string())
}

fn green_options(m: GreenMethodArg) -> GreenOptions {
    match m {
        GreenMethodArg::Auto => GreenOptions::default(),
        GreenMethodArg::Numerical => GreenOptions::numerical(),
    }
}

fn manifest(command: &str, setup: &Setup, format: crate::cli::Format) -> Manifest {
    let mut m = Manifest::new(command, format);
    m.config_path = setup.config_path.clone();
    m.units = setup.units_echo();
    m.potential = setup.echo.clone();
    m
}

pub fn greens(a: &GreensArgs) -> CliResult<()> {
    let setup = Setup::resolve(&a.potential)?;
    let e = a.energy.0;
    let gf = GreenFunction::new(&setup.model, e, &setup.units, &green_options(a.method))?;
    let g = gf.eval(a.x, a.xprime)?;
    // the extra point-interaction jump at the origin would swamp the self-check there
    let at_delta = setup.model.delta_strength().is_some() && a.xprime.abs() < 1e-3;
    let jump = if at_delta {
        None
    } else {
        jump_residual(|x| gf.value(x, a.xprime), a.xprime, &setup.units, 1e-4).ok()
    };
    let mut t = Table::new(&[
        "x", "x_prime", "re_e", "im_e", "re_g", "im_g", "method", "est_error", "pole_distance", "jump_residual",
    ]);
    t.push(vec![
        a.x.into(),
        a.xprime.into(),
        e.re.into(),
        e.im.into(),
        g.value.re.into(),
        g.value.im.into(),
        g.method.tag().into(),
        g.est_error.into(),
        g.pole_distance.into(),
        jump.into(),
    ]);
    let m = manifest("greens", &setup, a.output.format)
        .with("method_requested", arg_name(a.method))
        .with("method_path", g.method.tag());
    write_table(&m, &t, a.output.out.as_deref())
}

fn scheme(s: SchemeArg) -> ContourScheme {
    match s {
        SchemeArg::TrapezoidLine => ContourScheme::TrapezoidLine,
        SchemeArg::Talbot => ContourScheme::Talbot,
        SchemeArg::KLine => ContourScheme::KLine,
    }
}

fn spectral_config(model: &PotentialModel, t: Complex64, o: &PropagatorOptions) -> greenprop_core::Result<(f64, SpectralSumConfig)> {
    let PotentialModel::Harmonic { omega } = model else {
        return Err(greenprop_core::Error::Validation(format!(
            "the spectral sum exists only for the harmonic potential, not {}",
            model.name()
        )));
    };
    let damping = o.damping.unwrap_or(if t.im < 0.0 { 0.0 } else { 0.05 / omega });
    Ok((*omega, SpectralSumConfig::new(o.nmax, damping)?))
}

fn evaluate_propagator(
    setup: &Setup,
    x: f64,
    xp: f64,
    t: Complex64,
    o: &PropagatorOptions,
    tol: f64,
) -> greenprop_core::Result<PropEval> {
    let (model, units) = (&setup.model, &setup.units);
    match o.method {
        PropMethodArg::Closed => propagator_closed(model, x, xp, t, units),
        PropMethodArg::Spectral => {
            let (omega, cfg) = spectral_config(model, t, o)?;
            spectral_sum_harmonic(x, xp, t, omega, units, &cfg)
        }
        PropMethodArg::InverseLaplace => {
            invert_model(model, x, xp, t, scheme(o.scheme), units, &green_options(o.green_method), tol)
        }
    }
}

fn method_echo(o: &PropagatorOptions, setup: &Setup, t: Complex64) -> Value {
    let mut v = json!({ "method": arg_name(o.method) });
    match o.method {
        PropMethodArg::Spectral => {
            if let Ok((_, cfg)) = spectral_config(&setup.model, t, o) {
                v["n_max"] = json!(cfg.n_max);
                v["damping"] = json!(cfg.damping);
            }
        }
        PropMethodArg::InverseLaplace => {
            v["scheme"] = json!(scheme(o.scheme).tag());
            v["green_method"] = json!(arg_name(o.green_method));
        }
        PropMethodArg::Closed => {}
    }
    v
}

pub fn propagator(a: &PropagatorArgs) -> CliResult<()> {
    let setup = Setup::resolve(&a.potential)?;
    let tol = tolerance()?;
    let t = a.t.0;
    let k = evaluate_propagator(&setup, a.x, a.xprime, t, &a.options, tol)?;
    let mut table =
        Table::new(&["x", "x_prime", "re_t", "im_t", "re_k", "im_k", "method", "terms_used", "est_error"]);
    table.push(vec![
        a.x.into(),
        a.xprime.into(),
        t.re.into(),
        t.im.into(),
        k.value.re.into(),
        k.value.im.into(),
        k.method.tag().into(),
        k.terms_used.into(),
        k.est_error.into(),
    ]);
    let m = manifest("propagator", &setup, a.output.format)
        .with("method_path", method_echo(&a.options, &setup, t))
        .with("tolerance", tol);
    write_table(&m, &table, a.output.out.as_deref())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    XPrime,
    Time,
    Energy,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::XPrime => "x_prime",
            Axis::Time => "re_t",
            Axis::Energy => "re_e",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    xp: f64,
    param: Complex64,
}

pub fn sweep(a: &SweepArgs) -> CliResult<()> {
    let setup = Setup::resolve(&a.potential)?;
    let tol = tolerance()?;
    let mut axes: Vec<(Axis, crate::config::Range)> = Vec::new();
    for (axis, r) in [(Axis::X, a.x_range), (Axis::XPrime, a.xprime_range), (Axis::Time, a.t_range), (Axis::Energy, a.energy_range)] {
        if let Some(r) = r {
            axes.push((axis, r));
        }
    }
    if axes.is_empty() || axes.len() > 2 {
        return Err(CliError::usage("sweep needs one or two of --x-range, --xprime-range, --t-range, --energy-range"));
    }
    let base_param = match a.quantity {
        Quantity::Propagator => {
            if a.energy_range.is_some() || a.energy.is_some() {
                return Err(CliError::usage("propagator sweeps take --t / --t-range, not energies"));
            }
            match (a.t, a.t_range) {
                (Some(t), _) => t.0,
                (None, Some(_)) => Complex64::new(0.0, 0.0),
                (None, None) => return Err(CliError::usage("propagator sweep needs --t or --t-range")),
            }
        }
        Quantity::Greens => {
            if a.t_range.is_some() || a.t.is_some() {
                return Err(CliError::usage("Green-function sweeps take --energy / --energy-range, not times"));
            }
            match (a.energy, a.energy_range) {
                (Some(e), _) => e.0,
                (None, Some(_)) => Complex64::new(0.0, 0.0),
                (None, None) => return Err(CliError::usage("Green-function sweep needs --energy or --energy-range")),
            }
        }
    };
    let rows = axes[0].1.values();
    let cols = axes.get(1).map_or_else(|| vec![f64::NAN], |(_, r)| r.values());
    let point = |i: usize, j: usize| {
        let mut p = Point { x: a.x, xp: a.xprime, param: base_param };
        let mut set = |axis: Axis, v: f64| match axis {
            Axis::X => p.x = v,
            Axis::XPrime => p.xp = v,
            Axis::Time | Axis::Energy => p.param.re = v,
        };
        set(axes[0].0, rows[i]);
        if let Some((axis, _)) = axes.get(1) {
            set(*axis, cols[j]);
        }
        p
    };
    let cells: Vec<(usize, usize)> = (0..rows.len()).flat_map(|i| (0..cols.len()).map(move |j| (i, j))).collect();

    let values: Vec<greenprop_core::Result<Complex64>> = match a.quantity {
        Quantity::Propagator => cells
            .par_iter()
            .map(|&(i, j)| {
                let p = point(i, j);
                evaluate_propagator(&setup, p.x, p.xp, p.param, &a.options, tol).map(|k| k.value)
            })
            .collect(),
        Quantity::Greens => {
            // one solve per distinct energy
            let mut energies: Vec<Complex64> = cells.iter().map(|&(i, j)| point(i, j).param).collect();
            energies.sort_by(|p, q| p.re.total_cmp(&q.re));
            energies.dedup();
            let opts = green_options(a.options.green_method);
            let gfs: Vec<greenprop_core::Result<GreenFunction>> =
                energies.par_iter().map(|&e| GreenFunction::new(&setup.model, e, &setup.units, &opts)).collect();
            cells
                .par_iter()
                .map(|&(i, j)| {
                    let p = point(i, j);
                    let k = energies.iter().position(|e| *e == p.param).expect("energy was collected");
                    match &gfs[k] {
                        Ok(g) => g.value(p.x, p.xp),
                        Err(e) => Err(e.clone()),
                    }
                })
                .collect()
        }
    };

    let mut flagged = Vec::new();
    let mut matrix = vec![vec![f64::NAN; cols.len()]; rows.len()];
    for (&(i, j), v) in cells.iter().zip(values) {
        match v {
            Ok(z) => {
                matrix[i][j] = match a.component {
                    Component::Abs => z.norm(),
                    Component::Re => z.re,
                    Component::Im => z.im,
                }
            }
            Err(e) if e.kind() == ErrorKind::Validation => return Err(e.into()),
            Err(e) => flagged.push(json!({ "row": i, "col": j, "error": e.to_string() })),
        }
    }

    let corner = match axes.get(1) {
        Some((axis, _)) => format!("{}\\{}", axes[0].0.name(), axis.name()),
        None => axes[0].0.name().to_string(),
    };
    let component = arg_name(a.component);
    let mut columns = vec![corner];
    if axes.len() == 2 {
        columns.extend(cols.iter().map(|c| crate::output::format_num(*c)));
    } else {
        columns.push(component.clone());
    }
    let mut table = Table { columns, rows: Vec::new() };
    for (i, r) in rows.iter().enumerate() {
        let mut row = vec![Cell::Num(*r)];
        row.extend(matrix[i].iter().map(|v| Cell::Num(*v)));
        table.rows.push(row);
    }
    let axis_echo = |k: usize| {
        axes.get(k).map(|(axis, r)| json!({ "name": axis.name(), "start": r.start, "end": r.end, "count": r.count }))
    };
    let mut m = manifest("sweep", &setup, a.output.format)
        .with("quantity", arg_name(a.quantity))
        .with("component", component)
        .with("row_axis", axis_echo(0))
        .with("col_axis", axis_echo(1).unwrap_or(Value::Null))
        .with("fixed", json!({ "x": a.x, "x_prime": a.xprime, "param": [base_param.re, base_param.im] }))
        .with("flagged", flagged)
        .with("tolerance", tol);
    if a.quantity == Quantity::Propagator {
        m = m.with("method_path", method_echo(&a.options, &setup, base_param));
    } else {
        m = m.with("method_path", arg_name(a.options.green_method));
    }
    write_table(&m, &table, a.output.out.as_deref())
}

pub fn probe(a: &ProbeArgs) -> CliResult<()> {
    let z = a.z.0;
    let need = |v: Option<crate::config::Complex>, flag: &str| {
        v.map(|c| c.0).ok_or_else(|| CliError::usage(format!("--{flag} is required for this function")))
    };
    let plain = |value: Complex64| SpecFunResult { value, est_error: 0.0, flags: Default::default() };
    let r: SpecFunResult = match a.function {
        SpecialFn::Gamma => gamma_complex(z)?,
        SpecialFn::LnGamma => plain(ln_gamma_complex(z)?),
        SpecialFn::Erfc => erfc_complex(z),
        SpecialFn::Erfcx => erfcx_complex(z),
        SpecialFn::Pcf => parabolic_cylinder_d(need(a.p, "p")?, z.re)?,
        SpecialFn::Hermite => {
            let n = a.n.ok_or_else(|| CliError::usage("--n is required for hermite"))?;
            plain(Complex64::new(hermite_h(n, z.re)?, 0.0))
        }
        SpecialFn::Kummer => kummer_m(need(a.p, "p")?, need(a.q, "q")?, z)?,
    };
    let out = json!({
        "fn": arg_name(a.function),
        "z": [z.re, z.im],
        "value": [r.value.re, r.value.im],
        "est_error": r.est_error,
        "flags": r.flags.names(),
    });
    println!("{out}");
    Ok(())
}
