use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::{CouplingParams, DEFAULT_CRITICAL_TOL};
use crate::error::{Error, Result};
use crate::jacobi_ops::{JacobiFamily, Side, TruncationPolicy, DEFAULT_CAP};

pub const WORKERS_ENV: &str = "SPECLAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Mu,
    Classify,
    Surface,
    JacobiSpectrum,
    Count,
    HSpectrum,
    Discrete2Check,
    Asymptotics,
    IdentityCheck,
    TransitionScan,
    FormsTest,
    Jeps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Calj0,
    Calj,
    Jeps,
    J0bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SideName {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GridVar {
    Alpha,
    Beta,
    GammaRe,
    GammaIm,
    Mu,
    Lambda,
    Epsilon,
}

impl GridVar {
    pub fn name(self) -> &'static str {
        match self {
            GridVar::Alpha => "alpha",
            GridVar::Beta => "beta",
            GridVar::GammaRe => "gamma_re",
            GridVar::GammaIm => "gamma_im",
            GridVar::Mu => "mu",
            GridVar::Lambda => "lambda",
            GridVar::Epsilon => "epsilon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_re: f64,
    pub gamma_im: f64,
}

/// Operation inputs other than the coupling.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Inputs {
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_im: f64,
    pub epsilon: Option<f64>,
    pub family: Option<FamilyName>,
    pub level: f64,
    pub side: Option<SideName>,
    pub n: Option<usize>,
    pub window_lo: Option<f64>,
    pub window_hi: Option<f64>,
    pub lambda_min: Option<f64>,
    pub sizes: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub max_mode: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Grid {
    pub variable: GridVar,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: Scale,
    /// Explicit points; overrides `start`/`stop`/`steps` when present.
    pub values: Option<Vec<f64>>,
}

impl Default for Grid {
    fn default() -> Self {
        Self { variable: GridVar::Alpha, start: 0.0, stop: 0.0, steps: 1, scale: Scale::Linear, values: None }
    }
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if let Some(v) = &self.values {
            if v.is_empty() {
                return Err(Error::InvalidParameters("grid values list is empty".into()));
            }
            return Ok(v.clone());
        }
        if self.steps < 1 {
            return Err(Error::InvalidParameters("grid needs steps >= 1".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidParameters("grid bounds must be finite".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.start]);
        }
        let last = (self.steps - 1) as f64;
        match self.scale {
            Scale::Linear => {
                Ok((0..self.steps).map(|i| self.start + (self.stop - self.start) * i as f64 / last).collect())
            }
            Scale::Log => {
                if !(self.start > 0.0 && self.stop > 0.0) {
                    return Err(Error::InvalidParameters("log grid needs positive start and stop".into()));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                Ok((0..self.steps).map(|i| (a + (b - a) * i as f64 / last).exp()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Numeric {
    pub tol: f64,
    pub n_cap: usize,
    /// 0 picks the number of available cores.
    pub workers: usize,
}

impl Default for Numeric {
    fn default() -> Self {
        Self { tol: DEFAULT_CRITICAL_TOL, n_cap: DEFAULT_CAP, workers: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    /// Defaults to JSON for single runs and CSV for sweeps.
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub inputs: Inputs,
    #[serde(default)]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub numeric: Numeric,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: ParamsConfig::default(),
            inputs: Inputs::default(),
            grid: None,
            numeric: Numeric::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameters(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParameters(format!("bad config {}: {e}", path.display())))
    }

    pub fn coupling(&self) -> Result<CouplingParams> {
        let p = &self.params;
        CouplingParams::new(p.alpha, p.beta, Complex64::new(p.gamma_re, p.gamma_im))
    }

    pub fn policy(&self) -> Result<TruncationPolicy> {
        if self.numeric.n_cap < 4 {
            return Err(Error::InvalidParameters(format!("n_cap must be >= 4, got {}", self.numeric.n_cap)));
        }
        Ok(TruncationPolicy::with_cap(self.numeric.n_cap))
    }

    pub fn tol(&self) -> Result<f64> {
        let tol = self.numeric.tol;
        if tol > 0.0 && tol.is_finite() {
            Ok(tol)
        } else {
            Err(Error::InvalidParameters(format!("tol must be positive, got {tol}")))
        }
    }

    pub fn require_mu(&self) -> Result<f64> {
        self.inputs.mu.ok_or_else(|| missing("mu"))
    }

    pub fn require_lambda(&self) -> Result<f64> {
        self.inputs.lambda.ok_or_else(|| missing("lambda"))
    }

    pub fn require_epsilon(&self) -> Result<f64> {
        self.inputs.epsilon.ok_or_else(|| missing("epsilon"))
    }

    pub fn side(&self) -> Side {
        match self.inputs.side {
            Some(SideName::Minus) => Side::Minus,
            _ => Side::Plus,
        }
    }

    pub fn family(&self) -> Result<JacobiFamily> {
        match self.inputs.family.ok_or_else(|| missing("family"))? {
            FamilyName::Calj0 => Ok(JacobiFamily::CalJ0 { mu: self.require_mu()? }),
            FamilyName::Calj => Ok(JacobiFamily::CalJ { lambda: self.require_lambda()?, mu: self.require_mu()? }),
            FamilyName::Jeps => Ok(JacobiFamily::Jeps { epsilon: self.require_epsilon()? }),
            FamilyName::J0bar => Ok(JacobiFamily::J0bar),
        }
    }

    /// Copy with the grid variable set to `value` and the grid removed.
    pub fn at_point(&self, var: GridVar, value: f64) -> Self {
        let mut c = self.clone();
        c.grid = None;
        match var {
            GridVar::Alpha => c.params.alpha = value,
            GridVar::Beta => c.params.beta = value,
            GridVar::GammaRe => c.params.gamma_re = value,
            GridVar::GammaIm => c.params.gamma_im = value,
            GridVar::Mu => c.inputs.mu = Some(value),
            GridVar::Lambda => c.inputs.lambda = Some(value),
            GridVar::Epsilon => c.inputs.epsilon = Some(value),
        }
        c
    }
}

fn missing(name: &str) -> Error {
    Error::InvalidParameters(format!("--{} is required for this command", name.replace('_', "-")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_log_grids() {
        let g = Grid { variable: GridVar::Alpha, start: 0.0, stop: 1.0, steps: 5, ..Default::default() };
        assert_eq!(g.points().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = Grid { start: 1e-3, stop: 1e-1, steps: 3, scale: Scale::Log, ..g };
        let p = g.points().unwrap();
        assert!((p[1] - 1e-2).abs() < 1e-15);
        assert!(Grid { start: -1.0, ..g.clone() }.points().is_err());
        assert!(Grid { steps: 0, scale: Scale::Linear, ..g }.points().is_err());
    }

    #[test]
    fn config_json_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"command": "h-spectrum", "params": {"alpha": 1.0}}"#).unwrap();
        assert_eq!(c.command, Command::HSpectrum);
        assert_eq!(c.params.alpha, 1.0);
        assert_eq!(c.numeric, Numeric::default());
        let c: RunConfig =
            serde_json::from_str(r#"{"command": "asymptotics", "grid": {"variable": "mu", "values": [1.02, 1.005]}}"#)
                .unwrap();
        assert_eq!(c.grid.unwrap().points().unwrap(), vec![1.02, 1.005]);
    }

    #[test]
    fn family_needs_its_inputs() {
        let mut c = RunConfig::new(Command::Count);
        c.inputs.family = Some(FamilyName::Calj);
        c.inputs.mu = Some(1.5);
        assert!(c.family().is_err());
        c.inputs.lambda = Some(0.1);
        assert_eq!(c.family().unwrap(), JacobiFamily::CalJ { lambda: 0.1, mu: 1.5 });
    }
}
