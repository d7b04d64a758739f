//! Discrete spectrum of `H` below the threshold `1/2` and the counting results.

use num_complex::Complex64;
use serde::Serialize;

use super::forms::lower_bound_constant;
use crate::coupling::{subcritical_branches, Branch, CouplingParams};
use crate::error::{Error, Result};
use crate::jacobi_ops::{build, count_stabilized, JacobiFamily, Side, TruncationPolicy};
use crate::recurrence::{refine_eigenvalue, secular_defect};
use crate::tridiag::sturm_count_below;

/// Threshold of the essential spectrum.
pub const THRESHOLD: f64 = 0.5;

/// Eigenvalues are searched up to `THRESHOLD - TOP_GAP`.
pub const TOP_GAP: f64 = 1e-9;

/// Depth of the minimal solution used when verifying eigenvalues.
const SECULAR_DEPTH: usize = 200;

fn is_free(params: &CouplingParams) -> bool {
    params.alpha == 0.0 && params.beta == 0.0 && params.gamma == Complex64::new(0.0, 0.0)
}

/// `nu(lambda) = #{eigenvalues of CalJ(lambda, mu) below 0}` at truncation `n`.
pub fn nu(mu: f64, lambda: f64, n: usize) -> Result<usize> {
    let t = build(&JacobiFamily::CalJ { lambda, mu }, n)?;
    Ok(sturm_count_below(&t, 0.0))
}

/// Default lower end of the search: `max(1/2 - 10, c/2)` with `c` the form bound constant.
pub fn default_lambda_min(params: &CouplingParams) -> f64 {
    let c = lower_bound_constant(params);
    let floor = THRESHOLD - 10.0;
    if c > 0.0 {
        floor.max(0.5 * c)
    } else {
        floor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HSpectrumOptions {
    pub lambda_min: Option<f64>,
    pub tol: f64,
    pub policy: TruncationPolicy,
    /// Confirm each eigenvalue through the secular defect.
    pub verify: bool,
}

impl Default for HSpectrumOptions {
    fn default() -> Self {
        Self { lambda_min: None, tol: 1e-10, policy: TruncationPolicy::default(), verify: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub n_modes: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HEigenvalue {
    pub branch: Branch,
    pub mu: f64,
    /// Sturm-jump location.
    pub lambda: f64,
    /// Root of the boundary residual, when verified.
    pub lambda_secular: Option<f64>,
    /// Secular defect at `lambda`, when verified.
    pub defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HSpectrumResult {
    pub params: CouplingParams,
    pub branch_mus: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub per_branch_counts: Vec<usize>,
    pub truncation: Truncation,
    /// Largest `|lambda_sturm - lambda_secular|`; absent when not verified.
    pub method_agreement: Option<f64>,
    pub details: Vec<HEigenvalue>,
    pub lambda_min: f64,
}

/// Jumps of `nu` in `(lo, hi)` bisected to width `tol`.
fn jumps(mu: f64, lo: f64, hi: f64, tol: f64, n: usize) -> Result<Vec<f64>> {
    let clo = nu(mu, lo, n)?;
    let chi = nu(mu, hi, n)?;
    let mut out = Vec::with_capacity(chi.saturating_sub(clo));
    let mut stack = vec![(lo, hi, clo, chi)];
    while let Some((a, b, ca, cb)) = stack.pop() {
        if cb <= ca {
            continue;
        }
        let mid = 0.5 * (a + b);
        if b - a <= tol || mid <= a || mid >= b {
            out.extend(std::iter::repeat(mid).take(cb - ca));
            continue;
        }
        let cm = nu(mu, mid, n)?;
        stack.push((mid, b, cm, cb));
        stack.push((a, mid, ca, cm));
    }
    Ok(out)
}

/// Eigenvalues of one branch in `(lambda_min, 1/2 - TOP_GAP)` with the truncation used.
fn branch_eigenvalues(mu: f64, lambda_min: f64, tol: f64, policy: &TruncationPolicy) -> Result<(Vec<f64>, usize)> {
    let top = THRESHOLD - TOP_GAP;
    let (_, n_count) = policy.stabilize("nu at the threshold", |n| nu(mu, top, n))?;
    let sub = TruncationPolicy { start: n_count, cap: policy.cap };
    let agree = |a: &Vec<f64>, b: &Vec<f64>| {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 2.0 * tol + 1e-12)
    };
    let mut eval = |n: usize| jumps(mu, lambda_min, top, tol, n);
    sub.stabilize_by("eigenvalue list", &mut eval, agree)
}

/// Eigenvalues of `H` below `1/2`, one Sturm-jump search per subcritical branch.
pub fn h_eigenvalues_below_threshold(params: &CouplingParams, opts: &HSpectrumOptions) -> Result<HSpectrumResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameters(format!("tol must be positive, got {}", opts.tol)));
    }
    if let Some(l) = opts.lambda_min {
        if !(l < THRESHOLD - TOP_GAP) {
            return Err(Error::InvalidParameters(format!("lambda_min must be below 1/2, got {l}")));
        }
    }
    let lambda_min = opts.lambda_min.unwrap_or_else(|| default_lambda_min(params));
    let truncation = Truncation { n_modes: 0, tol: opts.tol };
    // the form bound already excludes anything below the threshold
    if is_free(params) || lambda_min >= THRESHOLD - TOP_GAP {
        return Ok(HSpectrumResult {
            params: *params,
            branch_mus: vec![],
            eigenvalues: vec![],
            per_branch_counts: vec![],
            truncation,
            method_agreement: opts.verify.then_some(0.0),
            details: vec![],
            lambda_min,
        });
    }
    let branches = subcritical_branches(params)?;
    if branches.is_empty() {
        return Err(Error::NoSubcriticalBranch);
    }
    let mut details = Vec::new();
    let mut per_branch_counts = Vec::new();
    let mut n_modes = 0;
    for &(branch, mu) in &branches {
        let (found, n) = branch_eigenvalues(mu, lambda_min, opts.tol, &opts.policy)?;
        n_modes = n_modes.max(n);
        per_branch_counts.push(found.len());
        for lambda in found {
            let (lambda_secular, defect) = if opts.verify {
                let root = refine_eigenvalue(mu, lambda, 1e-13, SECULAR_DEPTH)?;
                let defect = secular_defect(mu, Complex64::new(lambda, 0.0), SECULAR_DEPTH)?;
                (Some(root.lambda), Some(defect))
            } else {
                (None, None)
            };
            details.push(HEigenvalue { branch, mu, lambda, lambda_secular, defect });
        }
    }
    details.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let method_agreement = opts
        .verify
        .then(|| details.iter().map(|d| (d.lambda - d.lambda_secular.unwrap_or(d.lambda)).abs()).fold(0.0, f64::max));
    Ok(HSpectrumResult {
        params: *params,
        branch_mus: branches.iter().map(|&(_, mu)| mu).collect(),
        eigenvalues: details.iter().map(|d| d.lambda).collect(),
        per_branch_counts,
        truncation: Truncation { n_modes, tol: opts.tol },
        method_agreement,
        details,
        lambda_min,
    })
}

/// `N_-(1/2 - eps, H)` as `sum_j N_+(mu_j, J(eps))` over subcritical branches.
pub fn count_below_epsilon(params: &CouplingParams, epsilon: f64, policy: &TruncationPolicy) -> Result<usize> {
    let family = JacobiFamily::Jeps { epsilon };
    family.validate()?;
    if is_free(params) {
        log::warn!("free coupling: no subcritical branch, count is 0 by convention");
        return Ok(0);
    }
    let branches = subcritical_branches(params)?;
    if branches.is_empty() {
        log::warn!("no subcritical branch for {params:?}: count is 0 by convention");
        return Ok(0);
    }
    let mut total = 0;
    for (_, mu) in branches {
        total += count_stabilized(&family, mu, Side::Plus, policy)?.0;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Discrete2Report {
    pub lhs: usize,
    pub rhs: usize,
    pub bound: usize,
    pub ok: bool,
}

/// Compares `N_-(1/2, H)` with `sum_j N_+(mu_j, J0bar)`.
pub fn discrete2_check(params: &CouplingParams, policy: &TruncationPolicy) -> Result<Discrete2Report> {
    let branches = subcritical_branches(params)?;
    if branches.is_empty() {
        return Err(Error::NoSubcriticalBranch);
    }
    let top = THRESHOLD - TOP_GAP;
    let mut lhs = 0;
    let mut rhs = 0;
    for &(_, mu) in &branches {
        lhs += policy.stabilize("nu at the threshold", |n| nu(mu, top, n))?.0;
        rhs += count_stabilized(&JacobiFamily::J0bar, mu, Side::Plus, policy)?.0;
    }
    let bound = branches.len();
    Ok(Discrete2Report { lhs, rhs, bound, ok: lhs.abs_diff(rhs) <= bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticsRow {
    pub mu: f64,
    pub counted: usize,
    pub predicted: f64,
    pub ratio: f64,
}

/// `1 / (4 sqrt 2 sqrt(mu - 1))`.
pub fn predicted_count(mu: f64) -> f64 {
    1.0 / (4.0 * std::f64::consts::SQRT_2 * (mu - 1.0).sqrt())
}

/// `N_+(mu, J0bar)` against its near-critical law.
pub fn count_asymptotics_row(mu: f64, policy: &TruncationPolicy) -> Result<AsymptoticsRow> {
    if !(mu > 1.0) || !mu.is_finite() {
        return Err(Error::InvalidParameters(format!("asymptotics need mu > 1, got {mu}")));
    }
    let (counted, _) = count_stabilized(&JacobiFamily::J0bar, mu, Side::Plus, policy)?;
    let predicted = predicted_count(mu);
    Ok(AsymptoticsRow { mu, counted, predicted, ratio: counted as f64 / predicted })
}

pub fn count_asymptotics_curve(mu_values: &[f64], policy: &TruncationPolicy) -> Result<Vec<AsymptoticsRow>> {
    mu_values.iter().map(|&mu| count_asymptotics_row(mu, policy)).collect()
}
