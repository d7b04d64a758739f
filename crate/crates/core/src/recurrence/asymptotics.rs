//! Birkhoff–Adams asymptotics of the recurrence.
//!
//! Dividing the recurrence by `n` gives the normal form
//! `C_{n+2} + (a0 + a1/n) C_{n+1} + (b0 + b1/n) C_n ~ 0` with
//! `a0 = 2 mu`, `a1 = -mu (1 + lambda)`, `b0 = 1`, `b1 = -1`.
//! For distinct roots `lambda_pm` of `x^2 + a0 x + b0` the solutions behave as
//! `lambda_pm^n n^{d_pm}`; for a double root `x0` as `x0^n exp(pm delta sqrt(n)) n^kappa`.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaCase {
    DistinctRoots,
    DoubleRoot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirkhoffAdamsParams {
    pub case: BaCase,
    /// `[lambda_+, lambda_-] = -mu pm sqrt(mu^2 - 1)`; equal for a double root.
    pub lambda_roots: [Complex64; 2],
    /// `[d_+, d_-]` for distinct roots.
    pub d_exponents: Option<[Complex64; 2]>,
    /// `delta` for a double root.
    pub delta: Option<Complex64>,
    /// `kappa` for a double root.
    pub kappa: Option<Complex64>,
    /// `[a0, a1, b0, b1]`.
    pub source_coeffs: [Complex64; 4],
}

pub fn birkhoff_adams_eval(mu: f64, lambda: Complex64) -> BirkhoffAdamsParams {
    let one = Complex64::new(1.0, 0.0);
    let a0 = Complex64::new(2.0 * mu, 0.0);
    let a1 = -(one + lambda) * mu;
    let b0 = one;
    let b1 = -one;
    let source_coeffs = [a0, a1, b0, b1];
    if mu * mu == 1.0 {
        let root = Complex64::new(-mu, 0.0);
        let delta = ((a0 * a1 - b1 * 2.0) / (b0 * 2.0)).sqrt() * 2.0;
        let kappa = Complex64::new(0.25, 0.0) + b1 / (b0 * 2.0);
        return BirkhoffAdamsParams {
            case: BaCase::DoubleRoot,
            lambda_roots: [root, root],
            d_exponents: None,
            delta: Some(delta),
            kappa: Some(kappa),
            source_coeffs,
        };
    }
    let q = Complex64::new(mu * mu - 1.0, 0.0).sqrt();
    let roots = [Complex64::new(-mu, 0.0) + q, Complex64::new(-mu, 0.0) - q];
    let d = roots.map(|r| (a1 * r + b1) / (a0 * r + b0 * 2.0));
    BirkhoffAdamsParams {
        case: BaCase::DistinctRoots,
        lambda_roots: roots,
        d_exponents: Some(d),
        delta: None,
        kappa: None,
        source_coeffs,
    }
}

impl BirkhoffAdamsParams {
    /// Index (0 for `+`, 1 for `-`) of the subdominant solution.
    ///
    /// Smaller root modulus wins; on equal moduli the smaller `Re d`. For a
    /// double root the sign with `Re(pm delta) < 0`.
    pub fn minimal_index(&self) -> usize {
        match self.case {
            BaCase::DoubleRoot => {
                if self.delta.expect("double root").re <= 0.0 {
                    0
                } else {
                    1
                }
            }
            BaCase::DistinctRoots => {
                let [rp, rm] = self.lambda_roots.map(|r| r.norm());
                if (rp - rm).abs() > 1e-14 * rp.max(rm) {
                    usize::from(rm < rp)
                } else {
                    let [dp, dm] = self.d_exponents.expect("distinct roots");
                    usize::from(dm.re < dp.re)
                }
            }
        }
    }

    pub fn minimal_root(&self) -> Complex64 {
        self.lambda_roots[self.minimal_index()]
    }

    pub fn dominant_root(&self) -> Complex64 {
        self.lambda_roots[1 - self.minimal_index()]
    }

    /// Leading-order `C_{n+1} / C_n` of the solution with index `which`.
    pub fn ratio(&self, which: usize, n: usize) -> Complex64 {
        let x = n as f64;
        let step = (1.0 + 1.0 / x).ln();
        match self.case {
            BaCase::DistinctRoots => {
                let d = self.d_exponents.expect("distinct roots")[which];
                self.lambda_roots[which] * (d * step).exp()
            }
            BaCase::DoubleRoot => {
                let sign = if which == 0 { 1.0 } else { -1.0 };
                let delta = self.delta.expect("double root") * sign;
                let kappa = self.kappa.expect("double root");
                let dsqrt = 1.0 / ((x + 1.0).sqrt() + x.sqrt());
                self.lambda_roots[0] * (delta * dsqrt + kappa * step).exp()
            }
        }
    }

    pub fn minimal_ratio(&self, n: usize) -> Complex64 {
        self.ratio(self.minimal_index(), n)
    }

    pub fn dominant_ratio(&self, n: usize) -> Complex64 {
        self.ratio(1 - self.minimal_index(), n)
    }
}
