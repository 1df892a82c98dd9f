//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! omega0 = 1
//! omega = 0.1
//! gamma = 0
//! sweep = t, 0, 70, 7001     # variable, lo, hi, samples
//! outputs = B, mu_principal  # default
//! format = csv               # default
//! unwrap = false             # default
//! hbar = 1                   # default
//! mass = 1                   # default
//! t = 1                      # fixed time for omega/gamma sweeps, default 1
//! ```
//!
//! Every key may appear at most once; unknown keys are rejected.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use super::Format;
use crate::error::{Error, Result};
use crate::model::{UnitSystem, WavepacketSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    T,
    Omega,
    Gamma,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::T => "t",
            SweepVariable::Omega => "omega",
            SweepVariable::Gamma => "gamma",
        })
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "t" => Ok(SweepVariable::T),
            "omega" => Ok(SweepVariable::Omega),
            "gamma" => Ok(SweepVariable::Gamma),
            other => Err(format!("unknown sweep variable `{other}` (t, omega, gamma)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepAxis {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl SweepAxis {
    pub fn new(variable: SweepVariable, lo: f64, hi: f64, samples: usize) -> Result<Self> {
        let invalid = |message: String| Error::Validation {
            field: "sweep".into(),
            message,
        };
        if !lo.is_finite() || !hi.is_finite() {
            return Err(invalid(format!("bounds must be finite, got [{lo}, {hi}]")));
        }
        if !(lo < hi) {
            return Err(invalid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if samples < 2 {
            return Err(invalid(format!("need at least 2 samples, got {samples}")));
        }
        Ok(Self {
            variable,
            lo,
            hi,
            samples,
        })
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.samples {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.samples - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.samples).map(|k| self.value(k)).collect()
    }
}

/// Quantities a sweep can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    /// Width `B`.
    B,
    /// `1/R`.
    U,
    MuPrincipal,
    MuUnwrapped,
    GouyRate,
    /// Gaussian Wigner function at the phase-space origin (resonance only).
    Wigner,
    /// Integral CFI (resonance only).
    Cfi,
    /// Closed-form QFI (resonance only).
    Qfi,
    /// `sxx, sxp, spp` (resonance only).
    Covariance,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::B,
        Quantity::U,
        Quantity::MuPrincipal,
        Quantity::MuUnwrapped,
        Quantity::GouyRate,
        Quantity::Wigner,
        Quantity::Cfi,
        Quantity::Qfi,
        Quantity::Covariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::B => "B",
            Quantity::U => "u",
            Quantity::MuPrincipal => "mu_principal",
            Quantity::MuUnwrapped => "mu_unwrapped",
            Quantity::GouyRate => "gouy_rate",
            Quantity::Wigner => "wigner",
            Quantity::Cfi => "cfi",
            Quantity::Qfi => "qfi",
            Quantity::Covariance => "covariance",
        }
    }

    /// Column headers contributed to a dataset.
    pub fn columns(self) -> Vec<&'static str> {
        match self {
            Quantity::Covariance => vec!["sxx", "sxp", "spp"],
            q => vec![q.name()],
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
                format!("unknown quantity `{s}` (one of {})", names.join(", "))
            })
    }
}

/// A validated sweep request.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub spec: WavepacketSpec,
    pub sweep: SweepAxis,
    /// Evaluation time for `omega` and `gamma` sweeps.
    pub t: f64,
    pub outputs: Vec<Quantity>,
    pub format: Format,
    /// Report `mu_unwrapped` in place of `mu_principal`.
    pub unwrap: bool,
}

const KEYS: [&str; 10] = [
    "omega0", "omega", "gamma", "hbar", "mass", "t", "sweep", "outputs", "format", "unwrap",
];

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut seen: Vec<(&str, (usize, &str))> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let Some(key) = KEYS.iter().copied().find(|k| *k == key) else {
            return Err(parse_err(format!("unknown key `{key}`")));
        };
        if seen.iter().any(|(k, _)| *k == key) {
            return Err(parse_err(format!("duplicate key `{key}`")));
        }
        if value.is_empty() {
            return Err(parse_err(format!("missing value for `{key}`")));
        }
        seen.push((key, (line_no, value)));
    }
    let get = |key: &str| seen.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
    let number = |key: &'static str, default: Option<f64>| -> Result<f64> {
        match get(key) {
            Some((line, v)) => v.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("`{key}` expects a number, got `{v}`"),
            }),
            None => default.ok_or_else(|| Error::Validation {
                field: key.into(),
                message: "required key is missing".into(),
            }),
        }
    };

    let omega0 = number("omega0", None)?;
    let omega = number("omega", None)?;
    let gamma = number("gamma", None)?;
    let hbar = number("hbar", Some(1.0))?;
    let mass = number("mass", Some(1.0))?;
    let t = number("t", Some(1.0))?;

    let sweep = match get("sweep") {
        None => {
            return Err(Error::Validation {
                field: "sweep".into(),
                message: "required key is missing".into(),
            })
        }
        Some((line, v)) => parse_sweep(v).map_err(|message| Error::Parse { line, message })?,
    };
    let outputs = match get("outputs") {
        None => vec![Quantity::B, Quantity::MuPrincipal],
        Some((line, v)) => {
            let mut out = Vec::new();
            for item in v.split(',').map(str::trim) {
                let q = item
                    .parse::<Quantity>()
                    .map_err(|message| Error::Parse { line, message })?;
                if out.contains(&q) {
                    return Err(Error::Validation {
                        field: "outputs".into(),
                        message: format!("`{item}` requested twice"),
                    });
                }
                out.push(q);
            }
            out
        }
    };
    let format = match get("format") {
        None | Some((_, "csv")) => Format::Csv,
        Some((_, "json")) => Format::Json,
        Some((line, v)) => {
            return Err(Error::Parse {
                line,
                message: format!("`format` expects csv or json, got `{v}`"),
            })
        }
    };
    let unwrap = match get("unwrap") {
        None | Some((_, "false")) => false,
        Some((_, "true")) => true,
        Some((line, v)) => {
            return Err(Error::Parse {
                line,
                message: format!("`unwrap` expects true or false, got `{v}`"),
            })
        }
    };

    let units = UnitSystem::new(hbar, mass).map_err(|e| validation("units", e))?;
    let spec = WavepacketSpec::new(omega0, omega, gamma, units).map_err(|e| {
        let field = match &e {
            Error::NonPositiveFrequency { name, .. } | Error::NonFiniteParameter { name, .. } => {
                (*name).to_string()
            }
            _ => "spec".into(),
        };
        Error::Validation {
            field,
            message: e.to_string(),
        }
    })?;
    if !t.is_finite() {
        return Err(Error::Validation {
            field: "t".into(),
            message: format!("must be finite, got {t}"),
        });
    }
    let sweep = SweepAxis::new(sweep.0, sweep.1, sweep.2, sweep.3)?;
    Ok(Scenario {
        spec,
        sweep,
        t,
        outputs,
        format,
        unwrap,
    })
}

fn validation(field: &str, e: Error) -> Error {
    Error::Validation {
        field: field.into(),
        message: e.to_string(),
    }
}

fn parse_sweep(v: &str) -> std::result::Result<(SweepVariable, f64, f64, usize), String> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!(
            "`sweep` expects `variable, lo, hi, samples`, got `{v}`"
        ));
    }
    let variable = parts[0].parse()?;
    let lo = parts[1]
        .parse()
        .map_err(|_| format!("sweep lower bound `{}` is not a number", parts[1]))?;
    let hi = parts[2]
        .parse()
        .map_err(|_| format!("sweep upper bound `{}` is not a number", parts[2]))?;
    let samples = parts[3]
        .parse()
        .map_err(|_| format!("sweep sample count `{}` is not an integer", parts[3]))?;
    Ok((variable, lo, hi, samples))
}

impl Scenario {
    /// Canonical text form; `parse_scenario` of it gives back `self`.
    pub fn to_canonical_string(&self) -> String {
        let units = self.spec.units();
        let outputs: Vec<_> = self.outputs.iter().map(|q| q.name()).collect();
        format!(
            "omega0 = {}\nomega = {}\ngamma = {}\nhbar = {}\nmass = {}\nt = {}\nsweep = {}, {}, {}, {}\noutputs = {}\nformat = {}\nunwrap = {}\n",
            self.spec.omega0(),
            self.spec.omega(),
            self.spec.gamma(),
            units.hbar(),
            units.mass(),
            self.t,
            self.sweep.variable,
            self.sweep.lo,
            self.sweep.hi,
            self.sweep.samples,
            outputs.join(", "),
            self.format.extension(),
            self.unwrap,
        )
    }

    /// JSON echo embedded in output files.
    pub fn echo(&self) -> Value {
        let units = self.spec.units();
        json!({
            "omega0": self.spec.omega0(),
            "omega": self.spec.omega(),
            "gamma": self.spec.gamma(),
            "hbar": units.hbar(),
            "mass": units.mass(),
            "t": self.t,
            "sweep": self.sweep,
            "outputs": self.outputs.iter().map(|q| q.name()).collect::<Vec<_>>(),
            "format": self.format,
            "unwrap": self.unwrap,
        })
    }
}
