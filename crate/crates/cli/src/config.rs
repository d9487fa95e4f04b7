//! Command-line values, the TOML config file and custom-potential CSV files.

use greenprop_core::{Complex64, CustomPotential, Interpolation, PotentialModel, UnitsConfig};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cli::{Background, InterpArg, PotentialArgs, PotentialKind};
use crate::error::{CliError, CliResult};

pub const TOL_ENV: &str = "GREENPROP_TOL";
pub const DEFAULT_TOL: f64 = 1e-10;

/// `RE,IM` (a bare `RE` means zero imaginary part).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex(pub Complex64);

impl FromStr for Complex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{s}` is not a complex number RE,IM"));
        let (re, im) = match parts.as_slice() {
            [re] => (num(re)?, 0.0),
            [re, im] => (num(re)?, num(im)?),
            _ => return Err(format!("`{s}` is not a complex number RE,IM")),
        };
        if !(re.is_finite() && im.is_finite()) {
            return Err(format!("`{s}` is not finite"));
        }
        Ok(Complex(Complex64::new(re, im)))
    }
}

/// `A:B:N`, N evenly spaced values from A to B inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("`{s}` is not a range A:B:N");
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, n] = parts.as_slice() else { return Err(bad()) };
        let start: f64 = a.parse().map_err(|_| bad())?;
        let end: f64 = b.parse().map_err(|_| bad())?;
        let count: usize = n.parse().map_err(|_| bad())?;
        if !(start.is_finite() && end.is_finite()) || count == 0 || (count > 1 && start == end) {
            return Err(bad());
        }
        Ok(Range { start, end, count })
    }
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.end } else { self.start + i as f64 * step }).collect()
    }
}

/// Tolerance for iterative inversions, from GREENPROP_TOL when set.
pub fn tolerance() -> CliResult<f64> {
    match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::usage(format!("{TOL_ENV}=`{v}` is not a positive number"))),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    units: Option<UnitsSection>,
    potential: Option<PotentialSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitsSection {
    hbar: Option<f64>,
    mass: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialSection {
    kind: Option<String>,
    b: Option<f64>,
    omega: Option<f64>,
    background: Option<String>,
    file: Option<PathBuf>,
    interpolation: Option<String>,
}

/// Resolved units and potential plus a JSON echo for the manifest.
#[derive(Debug, Clone)]
pub struct Setup {
    pub units: UnitsConfig,
    pub model: PotentialModel,
    pub echo: Value,
    pub config_path: Option<PathBuf>,
}

fn read_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    toml::from_str(&text).map_err(|e| CliError::Parse { path: path.into(), msg: e.to_string() })
}

fn enum_value<T: clap::ValueEnum>(what: &str, s: &str) -> CliResult<T> {
    T::from_str(s, true).map_err(|_| CliError::usage(format!("unknown {what} `{s}`")))
}

/// Reads a two-column `x, V` CSV; a non-numeric first row is taken as a header
/// and lines starting with `#` are skipped.
pub fn read_potential_csv(path: &Path, interpolation: Interpolation) -> CliResult<CustomPotential> {
    let parse_err = |msg: String| CliError::Parse { path: path.into(), msg };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| parse_err(e.to_string()))?;
    let mut samples = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| parse_err(e.to_string()))?;
        if row.len() < 2 {
            return Err(parse_err(format!("row {} has fewer than two columns", i + 1)));
        }
        match (row[0].parse::<f64>(), row[1].parse::<f64>()) {
            (Ok(x), Ok(v)) => samples.push((x, v)),
            _ if i == 0 => continue,
            _ => return Err(parse_err(format!("row {} is not numeric", i + 1))),
        }
    }
    Ok(CustomPotential::new(samples, interpolation)?)
}

impl Setup {
    pub fn resolve(args: &PotentialArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => read_config(p)?,
            None => FileConfig::default(),
        };
        let units_sec = file.units.unwrap_or_default();
        let hbar = args.hbar.or(units_sec.hbar).unwrap_or(1.0);
        let mass = args.mass.or(units_sec.mass).unwrap_or(1.0);
        let units = UnitsConfig::new(hbar, mass)?;

        let pot = file.potential.unwrap_or_default();
        let kind = match (args.potential, &pot.kind) {
            (Some(k), _) => k,
            (None, Some(s)) => enum_value::<PotentialKind>("potential kind", s)?,
            (None, None) => PotentialKind::Free,
        };
        let interp = match (args.interp, &pot.interpolation) {
            (Some(i), _) => i,
            (None, Some(s)) => enum_value::<InterpArg>("interpolation", s)?,
            (None, None) => InterpArg::Cubic,
        };
        let interpolation = match interp {
            InterpArg::Linear => Interpolation::Linear,
            InterpArg::Cubic => Interpolation::Cubic,
        };
        // relative file names in the config resolve against the config's directory
        let csv_path = match (&args.potential_file, &pot.file) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(p)) => Some(match args.config.as_ref().and_then(|c| c.parent()) {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p.clone(),
            }),
            (None, None) => None,
        };
        let omega = args.omega.or(pot.omega);
        let b = args.b.or(pot.b);

        let regular = |which: Background| -> CliResult<(PotentialModel, Value)> {
            match which {
                Background::Free => Ok((PotentialModel::Free, json!({ "kind": "free" }))),
                Background::Harmonic => {
                    let w = omega.ok_or_else(|| CliError::usage("harmonic potential needs --omega"))?;
                    Ok((PotentialModel::harmonic(w)?, json!({ "kind": "harmonic", "omega": w })))
                }
                Background::Custom => {
                    let path = csv_path.as_ref().ok_or_else(|| CliError::usage("custom potential needs --potential-file"))?;
                    let c = read_potential_csv(path, interpolation)?;
                    let echo = json!({
                        "kind": "custom",
                        "file": path.display().to_string(),
                        "samples": c.samples().count(),
                        "x_min": c.x_min(),
                        "x_max": c.x_max(),
                        "interpolation": format!("{interp:?}").to_lowercase(),
                    });
                    Ok((PotentialModel::Custom(c), echo))
                }
            }
        };
        let (model, echo) = match kind {
            PotentialKind::Free => regular(Background::Free)?,
            PotentialKind::Harmonic => regular(Background::Harmonic)?,
            PotentialKind::Custom => regular(Background::Custom)?,
            PotentialKind::Delta => {
                let b = b.ok_or_else(|| CliError::usage("delta potential needs --b"))?;
                let bg = match (args.background, &pot.background) {
                    (Some(k), _) => k,
                    (None, Some(s)) => enum_value::<Background>("background", s)?,
                    (None, None) => Background::Free,
                };
                let (bg_model, bg_echo) = regular(bg)?;
                let background = (bg != Background::Free).then_some(bg_model);
                (PotentialModel::delta_on(b, background)?, json!({ "kind": "delta", "b": b, "background": bg_echo }))
            }
        };
        Ok(Setup { units, model, echo, config_path: args.config.clone() })
    }

    pub fn units_echo(&self) -> Value {
        json!({ "hbar": self.units.hbar(), "mass": self.units.mass() })
    }
}
