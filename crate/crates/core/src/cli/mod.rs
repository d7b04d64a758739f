//! Batch front end: flag and config parsing, single runs and parameter sweeps.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 when a computation did not
//! converge (or every sweep point failed).

mod commands;
pub mod config;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use commands::evaluate;
pub use config::{Command, FamilyName, Format, Grid, GridVar, RunConfig, Scale, SideName, WORKERS_ENV};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "speclab",
    version,
    about = "Spectral computations for the Smilansky–Solomyak model with a contact coupling"
)]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// Operation to run; may also come from --config.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// JSON file with a full or partial run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma_re: Option<f64>,
    #[arg(long)]
    pub gamma_im: Option<f64>,

    #[arg(long)]
    pub mu: Option<f64>,
    /// Real spectral parameter (real part for identity-check).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub lambda_im: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Level for `count`.
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long, value_enum)]
    pub side: Option<SideName>,
    /// Truncation size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub window_lo: Option<f64>,
    #[arg(long)]
    pub window_hi: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    /// Truncation sizes for transition-scan, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_mode: Option<usize>,

    /// Sweep variable.
    #[arg(long, value_enum)]
    pub grid_var: Option<GridVar>,
    #[arg(long)]
    pub grid_start: Option<f64>,
    #[arg(long)]
    pub grid_stop: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub grid_steps: Option<usize>,
    #[arg(long, value_enum)]
    pub grid_scale: Option<Scale>,
    /// Explicit grid points, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub grid_values: Option<Vec<f64>>,

    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n_cap: Option<usize>,
    /// Sweep worker threads (0 = all cores); SPECLAB_WORKERS takes precedence.
    #[arg(long)]
    pub workers: Option<usize>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl Args {
    /// Config file (if any) overlaid with the flags.
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match (&self.config, self.command) {
            (Some(path), _) => RunConfig::from_json_file(path)?,
            (None, Some(cmd)) => RunConfig::new(cmd),
            (None, None) => return Err(Error::InvalidParameters("no command given".into())),
        };
        set(&mut cfg.command, self.command);
        set(&mut cfg.params.alpha, self.alpha);
        set(&mut cfg.params.beta, self.beta);
        set(&mut cfg.params.gamma_re, self.gamma_re);
        set(&mut cfg.params.gamma_im, self.gamma_im);
        let inp = &mut cfg.inputs;
        set_opt(&mut inp.mu, self.mu);
        set_opt(&mut inp.lambda, self.lambda);
        set(&mut inp.lambda_im, self.lambda_im);
        set_opt(&mut inp.epsilon, self.epsilon);
        set_opt(&mut inp.family, self.family);
        set(&mut inp.level, self.level);
        set_opt(&mut inp.side, self.side);
        set_opt(&mut inp.n, self.n);
        set_opt(&mut inp.window_lo, self.window_lo);
        set_opt(&mut inp.window_hi, self.window_hi);
        set_opt(&mut inp.lambda_min, self.lambda_min);
        set_opt(&mut inp.sizes, self.sizes);
        set_opt(&mut inp.trials, self.trials);
        set(&mut inp.seed, self.seed);
        set_opt(&mut inp.max_mode, self.max_mode);

        let grid_flags = self.grid_var.is_some()
            || self.grid_start.is_some()
            || self.grid_stop.is_some()
            || self.grid_steps.is_some()
            || self.grid_scale.is_some()
            || self.grid_values.is_some();
        if grid_flags {
            let had_grid = cfg.grid.is_some();
            let mut g = cfg.grid.take().unwrap_or_default();
            match self.grid_var {
                Some(v) => g.variable = v,
                None if !had_grid => return Err(Error::InvalidParameters("grid flags need --grid-var".into())),
                None => {}
            }
            set(&mut g.start, self.grid_start);
            set(&mut g.stop, self.grid_stop);
            set(&mut g.steps, self.grid_steps);
            set(&mut g.scale, self.grid_scale);
            set_opt(&mut g.values, self.grid_values);
            cfg.grid = Some(g);
        }

        set(&mut cfg.numeric.tol, self.tol);
        set(&mut cfg.numeric.n_cap, self.n_cap);
        set(&mut cfg.numeric.workers, self.workers);
        set_opt(&mut cfg.output.format, self.format);
        set_opt(&mut cfg.output.path, self.output);
        Ok(cfg)
    }
}

/// `SPECLAB_WORKERS` if set, otherwise the configured count.
pub fn resolve_workers(configured: usize, env: Option<String>) -> Result<usize> {
    match env {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("{WORKERS_ENV} must be a non-negative integer, got {s:?}"))),
        None => Ok(configured),
    }
}

/// Runs one configuration and returns the rendered output and exit code.
pub fn execute(cfg: &RunConfig, workers: usize) -> Result<(String, i32)> {
    let points = match &cfg.grid {
        Some(g) => g.points()?,
        None => vec![],
    };
    match &cfg.grid {
        Some(g) if points.len() > 1 => {
            let results = sweep::run_grid(cfg, g, workers)?;
            let format = cfg.output.format.unwrap_or(Format::Csv);
            let text = sweep::render(&results, g.variable.name(), format)?;
            let code = if results.iter().any(|r| r.outcome.is_ok()) { EXIT_OK } else { EXIT_NONCONVERGENCE };
            for r in results.iter().filter(|r| r.outcome.is_err()) {
                log::warn!("{} = {}: {}", g.variable.name(), r.value, r.outcome.as_ref().unwrap_err());
            }
            Ok((text, code))
        }
        grid => {
            let single = match grid {
                Some(g) => cfg.at_point(g.variable, points[0]),
                None => cfg.clone(),
            };
            let value = output::round_value(evaluate(&single)?);
            let text = match cfg.output.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&value),
                Format::Csv => output::to_csv(&output::result_rows(&value), &[])?,
            };
            Ok((text, EXIT_OK))
        }
    }
}

/// Full command line entry point; returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_INVALID;
            }
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
    };
    match run_args(args, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_args(args: Args, stdout: &mut dyn Write) -> Result<i32> {
    let cfg = args.into_config()?;
    let workers = resolve_workers(cfg.numeric.workers, std::env::var(WORKERS_ENV).ok())?;
    let (text, code) = execute(&cfg, workers)?;
    let io = |e: std::io::Error| Error::InvalidParameters(format!("cannot write output: {e}"));
    match &cfg.output.path {
        Some(path) => std::fs::write(path, &text).map_err(io)?,
        None => stdout.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("speclab").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn mu_json() {
        let (code, out, _) = run_str(&["mu", "--alpha", "1", "--beta", "1", "--gamma-re", "0", "--gamma-im", "0"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["mu1"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert!((v["mu2"].as_f64().unwrap() - 0.353553390593274).abs() < 1e-14);
    }

    #[test]
    fn jeps_zero_is_invalid() {
        let (code, _, err) = run_str(&["jeps", "--epsilon", "0", "--alpha", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("j1,0 = \u{221e}"), "{err}");
    }

    #[test]
    fn surface_on_gamma_zero() {
        let (code, out, _) = run_str(&["surface", "--beta", "1", "--gamma-re", "0", "--gamma-im", "0"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["alpha_c"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn branch_cut_is_invalid() {
        let (code, _, err) = run_str(&["count", "--family", "calj", "--mu", "1.5", "--lambda", "0.7"]);
        assert_eq!(code, 2);
        assert!(err.contains("branch cut") || err.contains("threshold"), "{err}");
    }

    #[test]
    fn negative_flag_values_parse() {
        let (code, out, _) = run_str(&["classify", "--alpha", "-1", "--beta", "-1"]);
        assert_eq!(code, 0, "{out}");
    }

    #[test]
    fn missing_command() {
        assert_eq!(run_str(&[]).0, 2);
        assert_eq!(run_str(&["--alpha", "1"]).0, 2);
    }

    #[test]
    fn one_point_grid_matches_dispatch() {
        let (_, a, _) = run_str(&["classify", "--alpha", "1.2", "--beta", "1"]);
        let (_, b, _) =
            run_str(&["classify", "--beta", "1", "--grid-var", "alpha", "--grid-start", "1.2", "--grid-steps", "1"]);
        assert_eq!(a, b);
    }

    #[test]
    fn workers_env_override() {
        assert_eq!(resolve_workers(3, None).unwrap(), 3);
        assert_eq!(resolve_workers(3, Some("4".into())).unwrap(), 4);
        assert!(resolve_workers(3, Some("four".into())).is_err());
    }
}
