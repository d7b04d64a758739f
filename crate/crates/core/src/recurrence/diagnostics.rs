//! Residuals and defects built on recurrence solutions.

use num_complex::Complex64;
use serde::Serialize;

use super::{default_start, iterate_forward, minimal_solution_backward, p_coeff, zeta, RecurrenceSolution};
use crate::error::{Error, Result};
use crate::jacobi_ops::d_entry;

const TINY: f64 = 1e-300;

/// Largest binary exponent of `|C_k|` over `range`, used as a common scale.
fn reference_exp(sol: &RecurrenceSolution, range: std::ops::RangeInclusive<usize>) -> i64 {
    range
        .filter(|&k| sol.mant[k].norm() > 0.0)
        .map(|k| sol.exp[k] + sol.mant[k].norm().log2().floor() as i64)
        .max()
        .unwrap_or(0)
}

/// Worst relative residual of the interior rows `1 <= n <= N-1`.
pub fn interior_residual(sol: &RecurrenceSolution) -> Result<f64> {
    let mut worst = 0.0_f64;
    for n in 1..sol.len().saturating_sub(1) {
        let r = reference_exp(sol, n - 1..=n + 1);
        let terms = [
            sol.scaled(n + 1, r) * d_entry(n + 1),
            sol.scaled(n, r) * p_coeff(sol.mu, n, sol.lambda)?,
            sol.scaled(n - 1, r) * d_entry(n),
        ];
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            worst = worst.max((terms[0] + terms[1] + terms[2]).norm() / scale);
        }
    }
    Ok(worst)
}

/// Relative mismatch of the summed identity
///
/// ```text
/// 2 mu sum_{n<=N} |C_n|^2 (n+1/2)^{1/2} Im zeta_n = -d_{N+1} Im(C_{N+1} conj(C_N))
/// ```
///
/// at `N = up_to`.
pub fn identity_residual(sol: &RecurrenceSolution, up_to: usize) -> Result<f64> {
    if up_to + 2 > sol.len() {
        return Err(Error::InvalidParameters(format!(
            "identity needs C_(up_to+1): up_to = {up_to}, length = {}",
            sol.len()
        )));
    }
    let r = reference_exp(sol, 0..=up_to + 1);
    let mut lhs = 0.0;
    for n in 0..=up_to {
        let v = sol.scaled(n, r);
        lhs += v.norm_sqr() * (n as f64 + 0.5).sqrt() * zeta(n, sol.lambda)?.im;
    }
    lhs *= 2.0 * sol.mu;
    let rhs = -d_entry(up_to + 1) * (sol.scaled(up_to + 1, r) * sol.scaled(up_to, r).conj()).im;
    Ok((lhs - rhs).abs() / (lhs.abs() + rhs.abs() + TINY))
}

/// `|f_k g_{k+1} - f_{k+1} g_k| / ((|f_k| + |f_{k+1}|)(|g_k| + |g_{k+1}|))`.
fn normalized_casoratian(f: &RecurrenceSolution, g: &RecurrenceSolution, k: usize) -> f64 {
    let rf = reference_exp(f, k..=k + 1);
    let rg = reference_exp(g, k..=k + 1);
    let (f0, f1) = (f.scaled(k, rf), f.scaled(k + 1, rf));
    let (g0, g1) = (g.scaled(k, rg), g.scaled(k + 1, rg));
    let scale = (f0.norm() + f1.norm()) * (g0.norm() + g1.norm());
    if scale == 0.0 {
        return 0.0;
    }
    (f0 * g1 - f1 * g0).norm() / scale
}

/// Defect between the boundary-seeded solution and the minimal solution.
///
/// Zero exactly when some `l^2` solution satisfies the boundary row, i.e. when
/// `lambda` is an eigenvalue of the branch. `N` is the depth at which the
/// minimal solution is normalized; the cross product is taken at index 0.
pub fn secular_defect(mu: f64, lambda: Complex64, n: usize) -> Result<f64> {
    secular_defect_with_depth(mu, lambda, n, default_start(mu, lambda, n))
}

/// [`secular_defect`] with an explicit backward start `m`.
pub fn secular_defect_with_depth(mu: f64, lambda: Complex64, n: usize, m: usize) -> Result<f64> {
    let minimal = minimal_solution_backward(mu, lambda, n, m)?;
    let forward = iterate_forward(mu, lambda, Complex64::new(1.0, 0.0), 2)?;
    Ok(normalized_casoratian(&forward, &minimal, 0))
}

/// Signed boundary residual `(d_1 m_1 + P_0 m_0) / ((d_1 + |P_0|)(|m_0| + |m_1|))` of the
/// minimal solution at real `lambda < 1/2`; its zeros are the eigenvalues.
pub fn boundary_residual(mu: f64, lambda: f64, n: usize) -> Result<f64> {
    let l = Complex64::new(lambda, 0.0);
    let minimal = minimal_solution_backward(mu, l, n, default_start(mu, l, n))?;
    let r = reference_exp(&minimal, 0..=1);
    let (m0, m1) = (minimal.scaled(0, r), minimal.scaled(1, r));
    let p0 = p_coeff(mu, 0, l)?;
    let d1 = d_entry(1);
    Ok((m1 * d1 + p0 * m0).re / ((d1 + p0.norm()) * (m0.norm() + m1.norm())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularRoot {
    pub lambda: f64,
    pub defect: f64,
}

/// Root of [`boundary_residual`] next to `guess`, refined to width `tol`.
pub fn refine_eigenvalue(mu: f64, guess: f64, tol: f64, n: usize) -> Result<SecularRoot> {
    if !(mu.abs() > 1.0) {
        return Err(Error::NoDominanceSplit { mu, lambda: Complex64::new(guess, 0.0) });
    }
    let upper_limit = 0.5 - 1e-12;
    let g = |x: f64| boundary_residual(mu, x, n);
    let mut w = 1e-7;
    let (mut lo, mut hi, mut glo, mut ghi);
    loop {
        lo = guess - w;
        hi = (guess + w).min(upper_limit);
        glo = g(lo)?;
        ghi = g(hi)?;
        if glo == 0.0 || ghi == 0.0 || glo.signum() != ghi.signum() {
            break;
        }
        w *= 4.0;
        if w > 0.25 {
            return Err(Error::NonConvergence(format!(
                "no sign change of the boundary residual near lambda = {guess}"
            )));
        }
    }
    if glo == 0.0 {
        hi = lo;
    } else if ghi == 0.0 {
        lo = hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    Ok(SecularRoot { lambda, defect: secular_defect(mu, Complex64::new(lambda, 0.0), n)? })
}
