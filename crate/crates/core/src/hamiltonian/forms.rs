//! Quadratic forms on finite-mode trial functions.
//!
//! A trial state is `Psi(x, y) = sum_n psi_n(x) chi_n(y)` with
//! `psi_n(x) = A_n e^{-delta_n x}` for `x > 0` and `B_n e^{delta_n x}` for `x < 0`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::coupling::{derive, Branch, CouplingDerived, CouplingParams, TWO_SQRT2};
use crate::error::{Error, Result};

/// Tolerance of the `beta = 0` boundary relation on trial data.
pub const BETA0_CONSTRAINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode {
    pub n: usize,
    /// `psi_n(0+)`.
    pub a: Complex64,
    /// `psi_n(0-)`.
    pub b: Complex64,
    pub delta: f64,
}

impl Mode {
    pub fn norm_sq(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr()) / (2.0 * self.delta)
    }

    /// `int (|psi'|^2 + (n + 1/2) |psi|^2) dx`.
    pub fn a0(&self) -> f64 {
        let s = self.n as f64 + 0.5;
        (self.a.norm_sqr() + self.b.norm_sqr()) * (0.5 * self.delta + s / (2.0 * self.delta))
    }

    /// Both sides of the trace inequality on each half-line at parameter `kappa`:
    /// `[(kappa |psi(0+)|^2, int_0^inf), (kappa |psi(0-)|^2, int_-inf^0)]`
    /// of `|psi'|^2 + kappa^2 |psi|^2`.
    pub fn trace_sides(&self, kappa: f64) -> [(f64, f64); 2] {
        let integral = |v: Complex64| v.norm_sqr() * (self.delta * self.delta + kappa * kappa) / (2.0 * self.delta);
        [(kappa * self.a.norm_sqr(), integral(self.a)), (kappa * self.b.norm_sqr(), integral(self.b))]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeTrialFunction {
    pub modes: Vec<Mode>,
}

impl ModeTrialFunction {
    pub fn new(mut modes: Vec<Mode>) -> Result<Self> {
        modes.sort_by_key(|m| m.n);
        if modes.windows(2).any(|w| w[0].n == w[1].n) {
            return Err(Error::InvalidParameters("trial modes must have distinct indices".into()));
        }
        for m in &modes {
            if !(m.delta > 0.0 && m.delta.is_finite()) {
                return Err(Error::InvalidParameters(format!("mode {} has decay rate {}", m.n, m.delta)));
            }
            if !(m.a.re.is_finite() && m.a.im.is_finite() && m.b.re.is_finite() && m.b.im.is_finite()) {
                return Err(Error::InvalidParameters(format!("mode {} has non-finite boundary values", m.n)));
            }
        }
        Ok(Self { modes })
    }

    /// `||Psi||^2`.
    pub fn norm_sq(&self) -> f64 {
        self.modes.iter().map(Mode::norm_sq).sum()
    }

    pub fn a0(&self) -> f64 {
        self.modes.iter().map(Mode::a0).sum()
    }

    /// `n -> (psi_n(0+), psi_n(0-))`.
    fn boundary(&self) -> BTreeMap<usize, [Complex64; 2]> {
        self.modes.iter().map(|m| (m.n, [m.a, m.b])).collect()
    }

    /// Adjacent boundary pairs `(n, u_n, u_{n-1})` for `n >= 1`.
    fn adjacent_pairs(&self) -> Vec<(usize, [Complex64; 2], [Complex64; 2])> {
        let map = self.boundary();
        map.iter().filter(|(&n, _)| n >= 1).filter_map(|(&n, &u)| map.get(&(n - 1)).map(|&v| (n, u, v))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormValues {
    pub a0: f64,
    pub b_sum: f64,
    pub full: f64,
}

/// `a0`, the boundary part and their sum.
///
/// For `beta != 0` the boundary part is
/// `(1/beta) sum_{n>=1} sqrt(n)/(2 sqrt 2) Re[u_n^* Sigma u_{n-1}]` with
/// `u_n = (psi_n(0+), psi_n(0-))`. For `beta = 0` it is
/// `(alpha/4) sqrt 2 sum_{n>=1} sqrt(n) Re[conj(p_n) p_{n-1}]`, `p_n = psi_n(0+) + psi_n(0-)`,
/// and the data must satisfy `f_- = -(conj(gamma)/2) f_+`.
pub fn evaluate_forms(trial: &ModeTrialFunction, params: &CouplingParams) -> Result<FormValues> {
    let a0 = trial.a0();
    let b_sum = if params.beta != 0.0 {
        let d = derive(params);
        let mut sum = 0.0;
        for (n, u, v) in trial.adjacent_pairs() {
            let sv = d.sigma_apply(v);
            let inner = u[0].conj() * sv[0] + u[1].conj() * sv[1];
            sum += (n as f64).sqrt() / TWO_SQRT2 * inner.re;
        }
        sum / params.beta
    } else {
        check_beta0_constraint(trial, params.gamma)?;
        let mut sum = 0.0;
        for (n, u, v) in trial.adjacent_pairs() {
            let (p, q) = (u[0] + u[1], v[0] + v[1]);
            sum += (n as f64).sqrt() * (p.conj() * q).re;
        }
        params.alpha / 4.0 * SQRT_2 * sum
    };
    Ok(FormValues { a0, b_sum, full: a0 + b_sum })
}

fn check_beta0_constraint(trial: &ModeTrialFunction, gamma: Complex64) -> Result<()> {
    for m in &trial.modes {
        let f_plus = m.a + m.b;
        let f_minus = m.a - m.b;
        let mismatch = (f_minus + gamma.conj() * 0.5 * f_plus).norm();
        let scale = 1.0 + m.a.norm() + m.b.norm();
        if mismatch > BETA0_CONSTRAINT_TOL * scale {
            return Err(Error::Beta0ConstraintViolated { mode: m.n, mismatch });
        }
    }
    Ok(())
}

/// Keeps `f_+` of every mode and resets `f_- = -(conj(gamma)/2) f_+`.
pub fn project_beta0(trial: &ModeTrialFunction, gamma: Complex64) -> ModeTrialFunction {
    let modes = trial
        .modes
        .iter()
        .map(|m| {
            let f_plus = m.a + m.b;
            let f_minus = -gamma.conj() * 0.5 * f_plus;
            Mode { a: (f_plus + f_minus) * 0.5, b: (f_plus - f_minus) * 0.5, ..*m }
        })
        .collect();
    ModeTrialFunction { modes }
}

/// `c` in `a[Psi] >= c a0[Psi] >= (c/2) ||Psi||^2`, on the canonical orientation.
pub fn lower_bound_constant(params: &CouplingParams) -> f64 {
    let p = params.canonical();
    if p.beta == 0.0 {
        return 1.0 - p.alpha / SQRT_2;
    }
    let g2 = p.gamma_abs2();
    let s = p.alpha * p.beta + g2;
    let radical = ((s - 4.0) * (s - 4.0) + 16.0 * g2).sqrt();
    1.0 - ((4.0 + s).abs() + radical) / (TWO_SQRT2 * p.beta)
}

/// Single-mode profile with boundary values along the `Sigma` eigenvector of `branch`.
///
/// With unit `K` the values are `K / sqrt(delta)`, so `delta |psi(0+-)|^2` equals the
/// half-line integrals exactly.
pub fn saturating_trial(delta: f64, branch: Branch, derived: &CouplingDerived) -> Result<ModeTrialFunction> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameters(format!("delta must be positive, got {delta}")));
    }
    if derived.mu2.is_none() || branch == Branch::BetaZero {
        return Err(Error::InvalidParameters("saturating trials need beta != 0".into()));
    }
    let k = derived.k(branch);
    let scale = 1.0 / delta.sqrt();
    ModeTrialFunction::new(vec![Mode { n: 0, a: k[0] * scale, b: k[1] * scale, delta }])
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Random trial: modes `0..=K` with `K <= max_mode`, `delta_n` log-uniform in
/// `[0.1, 10]`, complex normal boundary values.
pub fn random_trial<R: Rng + ?Sized>(rng: &mut R, max_mode: usize) -> ModeTrialFunction {
    let top = rng.gen_range(0..=max_mode);
    let modes = (0..=top)
        .map(|n| Mode {
            n,
            a: complex_normal(rng),
            b: complex_normal(rng),
            delta: 10f64.powf(rng.gen_range(-1.0..=1.0)),
        })
        .collect();
    ModeTrialFunction { modes }
}

/// [`random_trial`] made admissible for `params` (projected when `beta = 0`).
pub fn random_admissible_trial<R: Rng + ?Sized>(
    rng: &mut R,
    params: &CouplingParams,
    max_mode: usize,
) -> ModeTrialFunction {
    let t = random_trial(rng, max_mode);
    if params.beta == 0.0 {
        project_beta0(&t, params.gamma)
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::super::hermite::hermite_all;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `b1 + b2 + b3` (or `b4`) straight from the `y`-integral definitions.
    fn boundary_forms_by_quadrature(trial: &ModeTrialFunction, params: &CouplingParams) -> f64 {
        let top = trial.modes.iter().map(|m| m.n).max().unwrap_or(0);
        let (h, l) = (0.05_f64, 15.0_f64);
        let steps = (2.0 * l / h).round() as usize;
        let (mut yfp, mut yfm, mut ycross) = (0.0, 0.0, 0.0);
        for i in 0..=steps {
            let y = -l + i as f64 * h;
            let chi = hermite_all(top, y);
            let mut fp = c(0.0, 0.0);
            let mut fm = c(0.0, 0.0);
            for m in &trial.modes {
                fp += (m.a + m.b) * chi[m.n];
                fm += (m.a - m.b) * chi[m.n];
            }
            yfp += h * y * fp.norm_sqr();
            yfm += h * y * fm.norm_sqr();
            ycross += h * y * (params.gamma * fp.conj() * fm).re;
        }
        if params.beta == 0.0 {
            params.alpha / 4.0 * yfp
        } else {
            let b1 = yfm;
            let b2 = (params.alpha * params.beta + params.gamma_abs2()) / 4.0 * yfp;
            let b3 = ycross;
            (b1 + b2 + b3) / params.beta
        }
    }

    #[test]
    fn pauli_sum_matches_definitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let points = [
            CouplingParams::new(1.0, 1.0, c(0.0, 0.0)).unwrap(),
            CouplingParams::new(-0.7, 2.3, c(0.4, -1.1)).unwrap(),
            CouplingParams::new(2.0, -1.5, c(-0.3, 0.8)).unwrap(),
            CouplingParams::new(1.0, 0.0, c(0.6, 0.2)).unwrap(),
        ];
        for p in points {
            for _ in 0..20 {
                let mut t = random_admissible_trial(&mut rng, &p, 2);
                // exactly three modes
                while t.modes.len() != 3 {
                    t = random_admissible_trial(&mut rng, &p, 2);
                }
                let closed = evaluate_forms(&t, &p).unwrap().b_sum;
                let quad = boundary_forms_by_quadrature(&t, &p);
                assert!((closed - quad).abs() <= 1e-10 * (1.0 + quad.abs()), "{p:?}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn f_minus_zero_kills_gamma_term() {
        let t = ModeTrialFunction::new(vec![Mode { n: 0, a: c(1.0, 0.0), b: c(1.0, 0.0), delta: 1.0 }]).unwrap();
        let v = evaluate_forms(&t, &CouplingParams::real(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(v.b_sum, 0.0);
        assert!((v.full - v.a0).abs() < 1e-15);
    }

    #[test]
    fn beta0_constraint_enforced() {
        let p = CouplingParams::new(1.0, 0.0, c(0.5, 0.5)).unwrap();
        let t = ModeTrialFunction::new(vec![
            Mode { n: 0, a: c(1.0, 0.0), b: c(0.0, 0.0), delta: 1.0 },
            Mode { n: 1, a: c(0.5, 0.0), b: c(0.2, 1.0), delta: 2.0 },
        ])
        .unwrap();
        assert!(matches!(evaluate_forms(&t, &p), Err(Error::Beta0ConstraintViolated { .. })));
        let projected = project_beta0(&t, p.gamma);
        assert!(evaluate_forms(&projected, &p).is_ok());
    }

    #[test]
    fn lower_bound_constant_examples() {
        assert_eq!(lower_bound_constant(&CouplingParams::real(0.0, 0.0, 0.0).unwrap()), 1.0);
        let c1 = lower_bound_constant(&CouplingParams::real(1.0, 0.0, 0.0).unwrap());
        assert!((c1 - (1.0 - 1.0 / SQRT_2)).abs() < 1e-15);
        assert!((c1 - 0.292893).abs() < 1e-6);
        let p = CouplingParams::real(1.0, 3.0, 0.2).unwrap();
        assert_eq!(lower_bound_constant(&p), lower_bound_constant(&p.mirror()));
    }

    #[test]
    fn a0_dominates_half_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10_000 {
            let t = random_trial(&mut rng, 12);
            assert!(t.a0() >= 0.5 * t.norm_sq() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn form_bounds_hold_on_random_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let points = [
            CouplingParams::real(1.0, 0.0, 0.0).unwrap(),
            CouplingParams::new(0.5, 0.0, c(0.3, -0.4)).unwrap(),
            CouplingParams::real(0.1, 8.0, 0.0).unwrap(),
            CouplingParams::new(0.2, 12.0, c(0.5, 0.5)).unwrap(),
        ];
        for p in points {
            let cst = lower_bound_constant(&p);
            assert!(cst > 0.0);
            for _ in 0..2000 {
                let t = random_admissible_trial(&mut rng, &p, 12);
                let v = evaluate_forms(&t, &p).unwrap();
                assert!(v.full >= cst * v.a0 - 1e-12 * v.a0);
                assert!(v.full >= 0.5 * cst * t.norm_sq() * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn saturating_trials_attain_trace_equality() {
        for (alpha, beta) in [(1.0, 1.0), (2.0, 2.0), (SQRT_2, TWO_SQRT2)] {
            let d = derive(&CouplingParams::real(alpha, beta, 0.0).unwrap());
            for branch in [Branch::Branch1, Branch::Branch2] {
                for delta in [0.3, 1.0, 4.0] {
                    let t = saturating_trial(delta, branch, &d).unwrap();
                    for (lhs, rhs) in t.modes[0].trace_sides(delta) {
                        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
                    }
                    // boundary values scale like delta^{-1/2}
                    let t1 = saturating_trial(1.0, branch, &d).unwrap();
                    assert!((t.modes[0].a * delta.sqrt() - t1.modes[0].a).norm() < 1e-15);
                }
            }
        }
        // the inequality is strict for a mismatched decay rate
        let d = derive(&CouplingParams::real(1.0, 1.0, 0.0).unwrap());
        let t = saturating_trial(1.0, Branch::Branch1, &d).unwrap();
        let [(lhs, rhs), _] = t.modes[0].trace_sides(2.0);
        assert!(lhs < rhs);
    }

    #[test]
    fn degenerate_point_is_one_sided() {
        let d = derive(&CouplingParams::real(2.0, 2.0, 0.0).unwrap());
        let t1 = saturating_trial(1.0, Branch::Branch1, &d).unwrap();
        let t2 = saturating_trial(1.0, Branch::Branch2, &d).unwrap();
        assert_eq!(t1.modes[0].b, c(0.0, 0.0));
        assert_eq!(t2.modes[0].a, c(0.0, 0.0));
        assert!(saturating_trial(1.0, Branch::BetaZero, &d).is_err());
        assert!(saturating_trial(0.0, Branch::Branch1, &d).is_err());
    }
}
