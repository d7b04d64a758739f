//! One evaluation per command; every result is serialized to a JSON value.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use super::config::{Command, RunConfig};
use crate::coupling::{classify, critical_alpha, critical_branches, derive, mu_beta_zero, Branch, CouplingDerived};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    count_asymptotics_row, count_below_epsilon, discrete2_check, evaluate_forms, h_eigenvalues_below_threshold,
    lower_bound_constant, random_admissible_trial, saturating_trial, HSpectrumOptions,
};
use crate::jacobi_ops::{build, count_stabilized, transition_scan, JacobiFamily, Side};
use crate::recurrence::{identity_residual, interior_residual, iterate_forward};
use crate::tridiag::eigenvalues_in_window;

const DEFAULT_JACOBI_N: usize = 1024;
const DEFAULT_IDENTITY_N: usize = 1000;
const DEFAULT_SCAN_SIZES: [usize; 3] = [2048, 4096, 8192];
const DEFAULT_SCAN_WINDOW: (f64, f64) = (-5.0, 5.0);
const DEFAULT_TRIALS: usize = 10_000;
const DEFAULT_MAX_MODE: usize = 12;
const SATURATION_DELTAS: [f64; 3] = [0.3, 1.0, 3.0];

#[derive(Serialize)]
struct MuReport {
    #[serde(flatten)]
    derived: CouplingDerived,
    /// Single coupling of the `beta = 0` case.
    mu: Option<f64>,
    mirrored: bool,
}

#[derive(Serialize)]
struct SurfaceReport {
    beta: f64,
    gamma_re: f64,
    gamma_im: f64,
    alpha_c: f64,
    branches: Vec<Branch>,
}

#[derive(Serialize)]
struct SpectrumReport {
    family: JacobiFamily,
    #[serde(flatten)]
    report: crate::tridiag::EigenvalueReport,
}

#[derive(Serialize)]
struct CountReport {
    family: JacobiFamily,
    level: f64,
    side: Side,
    count: usize,
    n: usize,
}

#[derive(Serialize)]
struct IdentityReport {
    mu: f64,
    lambda_re: f64,
    lambda_im: f64,
    n: usize,
    identity_residual: f64,
    interior_residual: f64,
}

#[derive(Serialize)]
struct FormsReport {
    lower_bound_constant: f64,
    trials: usize,
    violations: usize,
    /// `min (full - (c/2) ||Psi||^2) / ||Psi||^2` over the trials.
    min_margin: f64,
    min_a0_margin: f64,
    /// Largest relative gap of the trace equality on saturating trials; absent for `beta = 0`.
    saturation_error: Option<f64>,
}

#[derive(Serialize)]
struct JepsReport {
    epsilon: f64,
    count: usize,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidParameters(format!("serialization failed: {e}")))
}

pub fn evaluate(cfg: &RunConfig) -> Result<Value> {
    let params = cfg.coupling()?;
    match cfg.command {
        Command::Mu => {
            let canonical = params.canonical();
            let mu = if canonical.beta == 0.0 { Some(mu_beta_zero(&canonical)?) } else { None };
            to_value(&MuReport { derived: derive(&canonical), mu, mirrored: canonical.mirrored })
        }
        Command::Classify => to_value(&classify(&params, cfg.tol()?)?),
        Command::Surface => {
            let p = params.canonical();
            to_value(&SurfaceReport {
                beta: p.beta,
                gamma_re: p.gamma.re,
                gamma_im: p.gamma.im,
                alpha_c: critical_alpha(p.beta, p.gamma)?,
                branches: critical_branches(p.beta),
            })
        }
        Command::JacobiSpectrum => {
            let family = cfg.family()?;
            let t = build(&family, cfg.inputs.n.unwrap_or(DEFAULT_JACOBI_N))?;
            let (glo, ghi) = t.gershgorin();
            let lo = cfg.inputs.window_lo.unwrap_or(glo - 1.0);
            let hi = cfg.inputs.window_hi.unwrap_or(ghi + 1.0);
            to_value(&SpectrumReport { family, report: eigenvalues_in_window(&t, lo, hi, cfg.tol()?)? })
        }
        Command::Count => {
            let family = cfg.family()?;
            let side = cfg.side();
            let level = cfg.inputs.level;
            let (count, n) = count_stabilized(&family, level, side, &cfg.policy()?)?;
            to_value(&CountReport { family, level, side, count, n })
        }
        Command::HSpectrum => {
            let opts = HSpectrumOptions {
                lambda_min: cfg.inputs.lambda_min,
                tol: cfg.tol()?,
                policy: cfg.policy()?,
                verify: true,
            };
            to_value(&h_eigenvalues_below_threshold(&params, &opts)?)
        }
        Command::Discrete2Check => to_value(&discrete2_check(&params, &cfg.policy()?)?),
        Command::Asymptotics => to_value(&count_asymptotics_row(cfg.require_mu()?, &cfg.policy()?)?),
        Command::IdentityCheck => {
            let mu = cfg.require_mu()?;
            let lambda = Complex64::new(cfg.require_lambda()?, cfg.inputs.lambda_im);
            let n = cfg.inputs.n.unwrap_or(DEFAULT_IDENTITY_N);
            let sol = iterate_forward(mu, lambda, Complex64::new(1.0, 0.0), n + 1)?;
            to_value(&IdentityReport {
                mu,
                lambda_re: lambda.re,
                lambda_im: lambda.im,
                n,
                identity_residual: identity_residual(&sol, n)?,
                interior_residual: interior_residual(&sol)?,
            })
        }
        Command::TransitionScan => {
            let sizes = cfg.inputs.sizes.clone().unwrap_or_else(|| DEFAULT_SCAN_SIZES.to_vec());
            let window = (
                cfg.inputs.window_lo.unwrap_or(DEFAULT_SCAN_WINDOW.0),
                cfg.inputs.window_hi.unwrap_or(DEFAULT_SCAN_WINDOW.1),
            );
            to_value(&transition_scan(cfg.require_mu()?, &sizes, window, cfg.tol()?)?)
        }
        Command::FormsTest => forms_test(cfg),
        Command::Jeps => {
            let epsilon = cfg.require_epsilon()?;
            JacobiFamily::Jeps { epsilon }.validate()?;
            let count = count_below_epsilon(&params, epsilon, &cfg.policy()?)?;
            to_value(&JepsReport { epsilon, count })
        }
    }
}

fn forms_test(cfg: &RunConfig) -> Result<Value> {
    let params = cfg.coupling()?;
    let trials = cfg.inputs.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Error::InvalidParameters("forms-test needs at least one trial".into()));
    }
    let max_mode = cfg.inputs.max_mode.unwrap_or(DEFAULT_MAX_MODE);
    let c = lower_bound_constant(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.inputs.seed);
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    let mut min_a0_margin = f64::INFINITY;
    for _ in 0..trials {
        let trial = random_admissible_trial(&mut rng, &params, max_mode);
        let forms = evaluate_forms(&trial, &params)?;
        let norm = trial.norm_sq();
        let margin = (forms.full - 0.5 * c * norm) / norm;
        if c > 0.0 && margin < -1e-12 {
            violations += 1;
        }
        min_margin = min_margin.min(margin);
        min_a0_margin = min_a0_margin.min((forms.a0 - 0.5 * norm) / norm);
    }
    let saturation_error = if params.beta == 0.0 {
        None
    } else {
        let d = derive(&params);
        let mut worst = 0.0_f64;
        for branch in [Branch::Branch1, Branch::Branch2] {
            for delta in SATURATION_DELTAS {
                let trial = saturating_trial(delta, branch, &d)?;
                for m in &trial.modes {
                    for (lhs, rhs) in m.trace_sides(delta) {
                        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
                    }
                }
            }
        }
        Some(worst)
    };
    to_value(&FormsReport { lower_bound_constant: c, trials, violations, min_margin, min_a0_margin, saturation_error })
}
