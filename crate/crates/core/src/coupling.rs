//! Parameter algebra for the contact interaction `(alpha, beta, gamma)`.
//!
//! Everything here is a closed form: the Pauli coefficients `omega`, the
//! Hermitian matrix `Sigma = sum_j omega_j sigma_j`, its eigenpairs, the Jacobi
//! couplings `mu1`/`mu2` (or the single `mu` for `beta = 0`), the critical
//! `alpha` along a fixed `(beta, gamma)` slice and the sub/supercritical
//! classification of each branch.

use std::f64::consts::SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// `2 sqrt(2)`, the value of `beta` at which the critical branch switches.
pub const TWO_SQRT2: f64 = 2.0 * SQRT_2;

/// Default tolerance for calling a branch critical (`|mu - 1| <= tol`).
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-10;

/// Physical coupling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Complex64,
    /// Set when the mirror map `(alpha, beta) -> (-alpha, -beta)` has been applied
    /// an odd number of times.
    #[serde(default)]
    pub mirrored: bool,
}

impl CouplingParams {
    pub fn new(alpha: f64, beta: f64, gamma: Complex64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.re.is_finite() && gamma.im.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "coupling parameters must be finite (alpha = {alpha}, beta = {beta}, gamma = {gamma})"
            )));
        }
        Ok(Self { alpha, beta, gamma, mirrored: false })
    }

    /// Shorthand for real `gamma`, used heavily in tests.
    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha, beta, Complex64::new(gamma, 0.0))
    }

    pub fn gamma_abs2(&self) -> f64 {
        self.gamma.norm_sqr()
    }

    /// The mirror `y -> -y` compensated by `(alpha, beta) -> (-alpha, -beta)`.
    pub fn mirror(&self) -> Self {
        Self { alpha: -self.alpha, beta: -self.beta, gamma: self.gamma, mirrored: !self.mirrored }
    }

    /// Orientation with `beta > 0`, or `beta = 0` and `alpha >= 0`.
    pub fn canonical(&self) -> Self {
        if self.beta < 0.0 || (self.beta == 0.0 && self.alpha < 0.0) {
            self.mirror()
        } else {
            *self
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.beta > 0.0 || (self.beta == 0.0 && self.alpha >= 0.0)
    }
}

/// A coupling that may diverge (`mu1` for `alpha = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mu {
    Finite(f64),
    Infinite,
}

impl Mu {
    pub fn finite(self) -> Option<f64> {
        match self {
            Mu::Finite(v) => Some(v),
            Mu::Infinite => None,
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu::Finite(v) => write!(f, "{v}"),
            Mu::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Mu {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mu::Finite(v) => s.serialize_f64(*v),
            Mu::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// Quantities derived from [`CouplingParams`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingDerived {
    pub omega: [f64; 4],
    /// Row-major `Sigma`.
    pub sigma: [[Complex64; 2]; 2],
    /// `[omega0 - r, omega0 + r]` with `r = |(omega1, omega2, omega3)|`.
    pub sigma_eigs: [f64; 2],
    /// Unit eigenvector of `Sigma` for `sigma_eigs[0]`, as `(K_+, K_-)`.
    pub k1: [Complex64; 2],
    /// Unit eigenvector of `Sigma` for `sigma_eigs[1]`.
    pub k2: [Complex64; 2],
    /// Absent for `beta = 0`.
    pub mu1: Option<Mu>,
    /// Absent for `beta = 0`.
    pub mu2: Option<f64>,
}

impl CouplingDerived {
    pub fn sigma_apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let s = &self.sigma;
        [s[0][0] * v[0] + s[0][1] * v[1], s[1][0] * v[0] + s[1][1] * v[1]]
    }

    pub fn k(&self, branch: Branch) -> [Complex64; 2] {
        match branch {
            Branch::Branch2 => self.k2,
            _ => self.k1,
        }
    }
}

fn radical(params: &CouplingParams) -> f64 {
    let g2 = params.gamma_abs2();
    let s = params.alpha * params.beta + g2;
    ((s - 4.0) * (s - 4.0) + 16.0 * g2).sqrt()
}

/// Closed-form invariants of the coupling.
pub fn derive(params: &CouplingParams) -> CouplingDerived {
    let g2 = params.gamma_abs2();
    let ab = params.alpha * params.beta;
    let omega = [4.0 + ab + g2, ab + g2 - 4.0, 4.0 * params.gamma.im, 4.0 * params.gamma.re];
    let r = radical(params);
    // omega0 + r >= 8, and (omega0 - r)(omega0 + r) = 16 alpha beta exactly.
    let plus = omega[0] + r;
    let minus = 16.0 * ab / plus;

    let sigma = [
        [Complex64::new(omega[0] + omega[3], 0.0), Complex64::new(omega[1], -omega[2])],
        [Complex64::new(omega[1], omega[2]), Complex64::new(omega[0] - omega[3], 0.0)],
    ];

    let k1 = eigenvector(&omega, r, -1.0);
    let k2 = eigenvector(&omega, r, 1.0);

    let (mu1, mu2) = if params.beta == 0.0 {
        (None, None)
    } else {
        let mu1 = if params.alpha == 0.0 { Mu::Infinite } else { Mu::Finite(plus / (4.0 * SQRT_2 * params.alpha)) };
        (Some(mu1), Some(TWO_SQRT2 * params.beta / plus))
    };

    CouplingDerived { omega, sigma, sigma_eigs: [minus, plus], k1, k2, mu1, mu2 }
}

/// Unit eigenvector of `Sigma` for `omega0 + sign * r`.
///
/// Uses the row-2 form `(omega3 + sign r, omega1 + i omega2)` or the row-1 form
/// `(omega1 - i omega2, sign r - omega3)`, whichever is better conditioned. When
/// `r = 0` (`gamma = 0`, `alpha beta = 4`) `Sigma` is scalar and the one-sided
/// pair `(1, 0)`, `(0, 1)` is used.
fn eigenvector(omega: &[f64; 4], r: f64, sign: f64) -> [Complex64; 2] {
    let row2 = [Complex64::new(omega[3] + sign * r, 0.0), Complex64::new(omega[1], omega[2])];
    let row1 = [Complex64::new(omega[1], -omega[2]), Complex64::new(sign * r - omega[3], 0.0)];
    let n2 = (row2[0].norm_sqr() + row2[1].norm_sqr()).sqrt();
    let n1 = (row1[0].norm_sqr() + row1[1].norm_sqr()).sqrt();
    let scale = omega.iter().fold(1.0_f64, |m, w| m.max(w.abs()));
    let (v, n) = if n2 >= n1 { (row2, n2) } else { (row1, n1) };
    if n <= 1e-14 * scale {
        return if sign < 0.0 {
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        } else {
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        };
    }
    [v[0] / n, v[1] / n]
}

/// `mu = (4 + |gamma|^2) / (2 sqrt(2) alpha)` for `beta = 0`.
pub fn mu_beta_zero(params: &CouplingParams) -> Result<f64> {
    if params.beta != 0.0 {
        return Err(Error::InvalidParameters(format!("mu_beta_zero requires beta = 0, got beta = {}", params.beta)));
    }
    if params.alpha == 0.0 {
        return Err(Error::InvalidParameters(
            "beta = 0 and alpha = 0: the pure gamma interaction has no Jacobi branch".into(),
        ));
    }
    Ok((4.0 + params.gamma_abs2()) / (TWO_SQRT2 * params.alpha))
}

/// `alpha` at which the relevant branch of the slice `(beta, gamma)` has `mu = 1`.
///
/// Approaching from below (`alpha -> alpha_c-`) the branch tends to `1+`. For
/// `beta = 0` this is the inversion of [`mu_beta_zero`].
pub fn critical_alpha(beta: f64, gamma: Complex64) -> Result<f64> {
    let g2 = gamma.norm_sqr();
    if !(beta.is_finite() && g2.is_finite()) || beta < 0.0 {
        return Err(Error::InvalidParameters(format!("critical_alpha requires finite beta >= 0, got beta = {beta}")));
    }
    if beta == 0.0 {
        return Ok((4.0 + g2) / TWO_SQRT2);
    }
    let gap = TWO_SQRT2 - beta;
    let gamma_term = if g2 == 0.0 {
        0.0
    } else if gap == 0.0 {
        return Err(Error::SingularFormula(format!("beta = 2 sqrt(2) with gamma = {gamma} != 0")));
    } else {
        TWO_SQRT2 * g2 / gap
    };
    Ok((gamma_term - (g2 - 4.0) - SQRT_2 * gap) / beta)
}

/// Branches that reach `mu = 1` at [`critical_alpha`] for the given `beta`.
pub fn critical_branches(beta: f64) -> Vec<Branch> {
    if beta == 0.0 {
        vec![Branch::BetaZero]
    } else if beta < TWO_SQRT2 {
        vec![Branch::Branch1]
    } else if beta > TWO_SQRT2 {
        vec![Branch::Branch2]
    } else {
        vec![Branch::Branch1, Branch::Branch2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Branch1,
    Branch2,
    BetaZero,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Branch1 => "Branch1",
            Branch::Branch2 => "Branch2",
            Branch::BetaZero => "BetaZero",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitionKind {
    /// `mu > 1`: discrete spectrum below the threshold.
    Subcritical,
    Critical,
    /// `0 < mu < 1`: the branch contributes a.c. spectrum covering the real line.
    Supercritical,
    NonpositiveOrDivergent,
}

impl fmt::Display for TransitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransitionKind::Subcritical => "Subcritical",
            TransitionKind::Critical => "Critical",
            TransitionKind::Supercritical => "Supercritical",
            TransitionKind::NonpositiveOrDivergent => "NonpositiveOrDivergent",
        })
    }
}

impl TransitionKind {
    pub fn of(mu: Mu, tol: f64) -> Self {
        match mu {
            Mu::Infinite => TransitionKind::NonpositiveOrDivergent,
            Mu::Finite(m) if (m - 1.0).abs() <= tol => TransitionKind::Critical,
            Mu::Finite(m) if m > 1.0 => TransitionKind::Subcritical,
            Mu::Finite(m) if m > 0.0 => TransitionKind::Supercritical,
            Mu::Finite(_) => TransitionKind::NonpositiveOrDivergent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionClass {
    pub branch: Branch,
    pub kind: TransitionKind,
    pub mu: Mu,
}

/// Jacobi couplings of every branch, evaluated on the canonical orientation.
pub fn branch_mus(params: &CouplingParams) -> Result<Vec<(Branch, Mu)>> {
    let p = params.canonical();
    if p.beta == 0.0 {
        return Ok(vec![(Branch::BetaZero, Mu::Finite(mu_beta_zero(&p)?))]);
    }
    let d = derive(&p);
    let mu1 = d.mu1.expect("beta != 0");
    let mu2 = d.mu2.expect("beta != 0");
    Ok(vec![(Branch::Branch1, mu1), (Branch::Branch2, Mu::Finite(mu2))])
}

/// Branches with a finite `mu > 1`, the only ones carrying discrete spectrum.
pub fn subcritical_branches(params: &CouplingParams) -> Result<Vec<(Branch, f64)>> {
    Ok(branch_mus(params)?
        .into_iter()
        .filter_map(|(b, mu)| match mu {
            Mu::Finite(m) if m > 1.0 => Some((b, m)),
            _ => None,
        })
        .collect())
}

pub fn classify(params: &CouplingParams, tol: f64) -> Result<Vec<TransitionClass>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!("tolerance must be positive, got {tol}")));
    }
    Ok(branch_mus(params)?
        .into_iter()
        .map(|(branch, mu)| TransitionClass { branch, kind: TransitionKind::of(mu, tol), mu })
        .collect())
}
