//! The three-term recurrence
//!
//! ```text
//! d_{n+1} C_{n+1} + P_n C_n + d_n C_{n-1} = 0,   P_n = 2 mu (n + 1/2)^{1/2} zeta_n(lambda),
//! ```
//!
//! with boundary row `d_1 C_1 + P_0 C_0 = 0`, and `zeta_n(lambda) = sqrt(n + 1/2 - lambda)`
//! on the branch `Re zeta > 0`.
//!
//! Solutions grow or decay geometrically, so every entry is stored as a
//! mantissa together with its own binary exponent (`C_n = m_n 2^{e_n}`).

mod asymptotics;
mod diagnostics;

pub use asymptotics::{birkhoff_adams_eval, BaCase, BirkhoffAdamsParams};
pub use diagnostics::{
    boundary_residual, identity_residual, interior_residual, refine_eigenvalue, secular_defect,
    secular_defect_with_depth, SecularRoot,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi_ops::d_entry;

/// Magnitude beyond which the running pair is rescaled.
const RESCALE_BITS: i64 = 512;

/// `2^k` without overflow in the exponent arithmetic.
pub(crate) fn exp2i(k: i64) -> f64 {
    if k > 1023 {
        f64::INFINITY
    } else if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else if k >= -1074 {
        f64::from_bits(1u64 << (k + 1074))
    } else {
        0.0
    }
}

/// `zeta_n(lambda)` on the branch `Re zeta > 0`, `Im zeta Im lambda < 0`.
pub fn zeta(n: usize, lambda: Complex64) -> Result<Complex64> {
    let s = n as f64 + 0.5;
    if lambda.im == 0.0 && lambda.re >= s {
        return Err(Error::OnBranchCut { n, lambda });
    }
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::InvalidParameters(format!("lambda must be finite, got {lambda}")));
    }
    let mut z = Complex64::new(s - lambda.re, -lambda.im).sqrt();
    if z.re < 0.0 {
        z = -z;
    }
    assert!(
        z.re > 0.0 && (lambda.im == 0.0 || z.im * lambda.im < 0.0),
        "zeta branch conditions failed for n = {n}, lambda = {lambda}: {z}"
    );
    Ok(z)
}

/// Branch descriptor for `zeta_n(lambda)` at fixed `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaBranch {
    pub lambda: Complex64,
}

impl ZetaBranch {
    pub fn at(&self, n: usize) -> Result<Complex64> {
        zeta(n, self.lambda)
    }
}

/// `P_n = 2 mu (n + 1/2)^{1/2} zeta_n(lambda)`.
pub fn p_coeff(mu: f64, n: usize, lambda: Complex64) -> Result<Complex64> {
    Ok(zeta(n, lambda)? * (2.0 * mu * (n as f64 + 0.5).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// `C_0 .. C_N` of a solution, entry `n` being `mant[n] * 2^{exp[n]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSolution {
    pub mu: f64,
    pub lambda: Complex64,
    pub mant: Vec<Complex64>,
    pub exp: Vec<i64>,
    pub direction: Direction,
    pub normalization: String,
}

impl RecurrenceSolution {
    pub fn len(&self) -> usize {
        self.mant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mant.is_empty()
    }

    /// `C_n * 2^{-reference}`.
    pub fn scaled(&self, n: usize, reference: i64) -> Complex64 {
        let m = self.mant[n];
        if m == Complex64::new(0.0, 0.0) {
            return m;
        }
        m * exp2i(self.exp[n] - reference)
    }

    /// `C_n` as a plain complex number (may over- or underflow).
    pub fn value(&self, n: usize) -> Complex64 {
        self.scaled(n, 0)
    }

    pub fn log2_abs(&self, n: usize) -> f64 {
        self.mant[n].norm().log2() + self.exp[n] as f64
    }

    /// `C_{n+1} / C_n`.
    pub fn ratio(&self, n: usize) -> Complex64 {
        self.mant[n + 1] / self.mant[n] * exp2i(self.exp[n + 1] - self.exp[n])
    }

    /// Multiplies entry `n` by `factor` (used by sensitivity tests).
    pub fn scale_entry(&mut self, n: usize, factor: Complex64) {
        self.mant[n] *= factor;
    }
}

/// Running pair with a shared exponent.
struct Pair {
    prev: Complex64,
    cur: Complex64,
    exp: i64,
}

impl Pair {
    fn renormalize(&mut self) {
        let big = exp2i(RESCALE_BITS);
        let small = exp2i(-RESCALE_BITS);
        let m = self.prev.norm().max(self.cur.norm());
        if m > big {
            self.prev *= small;
            self.cur *= small;
            self.exp += RESCALE_BITS;
        } else if m < small && m > 0.0 {
            self.prev *= big;
            self.cur *= big;
            self.exp -= RESCALE_BITS;
        }
    }
}

/// Solution started from the boundary row with `C_0 = c0`, out to `C_N`.
pub fn iterate_forward(mu: f64, lambda: Complex64, c0: Complex64, n: usize) -> Result<RecurrenceSolution> {
    check_inputs(mu, n)?;
    let mut mant = Vec::with_capacity(n + 1);
    let mut exp = Vec::with_capacity(n + 1);
    let c1 = -p_coeff(mu, 0, lambda)? * c0 / d_entry(1);
    let mut pair = Pair { prev: c0, cur: c1, exp: 0 };
    pair.renormalize();
    mant.push(pair.prev);
    exp.push(pair.exp);
    for k in 1..n {
        mant.push(pair.cur);
        exp.push(pair.exp);
        let next = -(p_coeff(mu, k, lambda)? * pair.cur + pair.prev * d_entry(k)) / d_entry(k + 1);
        pair.prev = pair.cur;
        pair.cur = next;
        pair.renormalize();
    }
    mant.push(pair.cur);
    exp.push(pair.exp);
    Ok(RecurrenceSolution {
        mu,
        lambda,
        mant,
        exp,
        direction: Direction::Forward,
        normalization: format!("C_0 = {c0}"),
    })
}

fn check_inputs(mu: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("recurrence length must be >= 2, got {n}")));
    }
    if !mu.is_finite() {
        return Err(Error::InvalidParameters(format!("mu must be finite, got {mu}")));
    }
    Ok(())
}

/// Whether a minimal solution exists, i.e. the two solutions split.
pub fn has_dominance_split(mu: f64, lambda: Complex64) -> bool {
    mu.abs() > 1.0 || lambda.im != 0.0
}

/// Default backward start `M` for depth `N`.
///
/// `N + max(50, N/10)`, widened near `|mu| = 1` so that the unwanted solution
/// is damped below rounding before index `N` is reached. In the weakly split
/// regime (`|mu| <= 1`, complex `lambda`) the damping is only algebraic, so the
/// start is pushed out to `2^20` and seeded from the asymptotic ratio.
pub fn default_start(mu: f64, lambda: Complex64, n: usize) -> usize {
    let base = n + 50.max(n / 10);
    if mu.abs() > 1.0 {
        let ba = birkhoff_adams_eval(mu, lambda);
        let contraction = (ba.minimal_root().norm() / ba.dominant_root().norm()).ln().abs();
        let needed = (40.0 / contraction).ceil();
        let needed = if needed.is_finite() { needed as usize } else { usize::MAX / 4 };
        n + (base - n).max(needed)
    } else {
        base.max(1 << 20)
    }
}

/// Minimal (subdominant) solution by backward recurrence from `M`, normalized `C_N = 1`.
pub fn minimal_solution_backward(mu: f64, lambda: Complex64, n: usize, m: usize) -> Result<RecurrenceSolution> {
    check_inputs(mu, n)?;
    if !has_dominance_split(mu, lambda) {
        return Err(Error::NoDominanceSplit { mu, lambda });
    }
    if m <= n {
        return Err(Error::InvalidParameters(format!("backward start M = {m} must exceed N = {n}")));
    }
    // Strict split: Miller seed (0, 1). Weak split: asymptotic ratio seed.
    let seed_ratio =
        if mu.abs() > 1.0 { Complex64::new(0.0, 0.0) } else { birkhoff_adams_eval(mu, lambda).minimal_ratio(m) };
    let mut mant = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut exp = vec![0_i64; n + 1];
    // Here `prev` holds C_{k+1} and `cur` holds C_k.
    let mut pair = Pair { prev: seed_ratio, cur: Complex64::new(1.0, 0.0), exp: 0 };
    let mut k = m;
    loop {
        if k <= n {
            mant[k] = pair.cur;
            exp[k] = pair.exp;
        }
        if k == 0 {
            break;
        }
        let below = -(pair.prev * d_entry(k + 1) + p_coeff(mu, k, lambda)? * pair.cur) / d_entry(k);
        pair.prev = pair.cur;
        pair.cur = below;
        pair.renormalize();
        k -= 1;
    }
    let (norm_m, norm_e) = (mant[n], exp[n]);
    if norm_m == Complex64::new(0.0, 0.0) {
        return Err(Error::NonConvergence(format!("minimal solution vanished at N = {n}")));
    }
    for (v, e) in mant.iter_mut().zip(exp.iter_mut()) {
        *v /= norm_m;
        *e -= norm_e;
    }
    Ok(RecurrenceSolution {
        mu,
        lambda,
        mant,
        exp,
        direction: Direction::Backward,
        normalization: format!("C_N = 1 (N = {n}, M = {m})"),
    })
}
