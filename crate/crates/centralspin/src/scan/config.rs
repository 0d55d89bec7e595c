//! Scan configuration: a flat `key = value` file with `#` comments.
//!
//! ```text
//! omega_min   = 0.5      # ω/ω₀
//! omega_max   = 1.5
//! omega_steps = 3
//! Omega_min   = 0.0      # Ω/Ω₀
//! Omega_max   = 2.5
//! Omega_steps = 26
//! gamma       = 1.0      # γ/a
//! J           = 150      # integer or half-integer; required for exact mode
//! mode        = gaussian # gaussian | exact
//! null_tol    = 1e-5
//! format      = csv      # csv | json
//! out         = scan.csv
//! timestamp   = true
//! grid        = 40       # multi-start grid density
//! refresh     = 10       # fresh multi-start every N points
//! ```

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Gaussian,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "gaussian" => Ok(Mode::Gaussian),
            _ => Err(format!("unknown mode '{s}' (expected exact or gaussian)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

/// Inclusive, evenly spaced range; `steps = 0` is empty, `steps = 1` is `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => vec![],
            1 => vec![self.min],
            n => (0..n).map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// ω/ω₀
    pub omega: Axis,
    /// Ω/Ω₀
    pub drive: Axis,
    /// γ/a
    pub gamma: f64,
    pub twice_j: Option<u32>,
    pub mode: Mode,
    pub null_tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timestamp: bool,
    pub grid: usize,
    pub refresh: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            omega: Axis { min: 0.0, max: 2.0, steps: 21 },
            drive: Axis { min: 0.0, max: 2.5, steps: 26 },
            gamma: 1.0,
            twice_j: None,
            mode: Mode::Gaussian,
            null_tol: 1e-5,
            format: Format::Csv,
            out: None,
            timestamp: true,
            grid: 40,
            refresh: 10,
        }
    }
}

/// `J` given as an integer or half-integer.
pub fn parse_twice_j(s: &str) -> std::result::Result<u32, String> {
    let j: f64 = s.parse().map_err(|_| format!("J must be a number, got '{s}'"))?;
    let t = 2.0 * j;
    if !(t >= 1.0) || t.fract() != 0.0 || t > u32::MAX as f64 {
        return Err(format!("J must be a positive multiple of 1/2, got '{s}'"));
    }
    Ok(t as u32)
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got '{s}'")),
    }
}

fn parse_num<T: FromStr>(key: &str, s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("invalid value '{s}' for {key}"))
}

impl ScanConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ScanConfig::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Config { line, msg };
            let (key, value) = body.split_once('=').ok_or_else(|| err(format!("expected 'key = value', got '{body}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            cfg.set(key, value).map_err(err)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { line: 0, msg: format!("cannot read {}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "omega_min" => self.omega.min = parse_num(key, v)?,
            "omega_max" => self.omega.max = parse_num(key, v)?,
            "omega_steps" => self.omega.steps = parse_num(key, v)?,
            "Omega_min" => self.drive.min = parse_num(key, v)?,
            "Omega_max" => self.drive.max = parse_num(key, v)?,
            "Omega_steps" => self.drive.steps = parse_num(key, v)?,
            "gamma" => self.gamma = parse_num(key, v)?,
            "J" => self.twice_j = Some(parse_twice_j(v)?),
            "mode" => self.mode = v.parse()?,
            "null_tol" => self.null_tol = parse_num(key, v)?,
            "format" => self.format = v.parse()?,
            "out" => self.out = Some(PathBuf::from(v)),
            "timestamp" => self.timestamp = parse_bool(v)?,
            "grid" => self.grid = parse_num(key, v)?,
            "refresh" => self.refresh = parse_num(key, v)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: &str| Err(Error::Config { line: 0, msg: msg.into() });
        for (name, ax) in [("omega", &self.omega), ("Omega", &self.drive)] {
            if !ax.min.is_finite() || !ax.max.is_finite() || ax.min < 0.0 || ax.max < ax.min {
                return err(&format!("{name} range must satisfy 0 <= min <= max"));
            }
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return err("gamma must be positive");
        }
        if !(self.null_tol > 0.0) {
            return err("null_tol must be positive");
        }
        if self.mode == Mode::Exact && self.twice_j.is_none() {
            return err("exact mode requires J");
        }
        if self.grid == 0 || self.refresh == 0 {
            return err("grid and refresh must be positive");
        }
        Ok(())
    }
}
