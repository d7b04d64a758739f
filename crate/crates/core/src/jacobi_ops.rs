//! Truncations of the four Jacobi operator families and counting helpers.
//!
//! * `CalJ0(mu)`: diagonal `2 mu (n + 1/2)`, off-diagonal `d_n`, `n >= 0`.
//! * `CalJ(lambda, mu)`: diagonal `2 mu (n + 1/2)^{1/2} zeta_n(lambda)`, off-diagonal `d_n`.
//! * `Jeps(eps)`: zero diagonal, off-diagonal `n^{1/2} / (2 (n + eps)^{1/4} (n - 1 + eps)^{1/4})`.
//! * `J0bar`: zero diagonal, indices start at 1, off-diagonal `1 / (2 (1 - 1/n)^{1/4})` for `n >= 2`.
//!
//! Truncation is a plain cut-off after `N` rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::{smallest_eigenvalue, sturm_count_below, TridiagonalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum JacobiFamily {
    CalJ0 { mu: f64 },
    CalJ { lambda: f64, mu: f64 },
    Jeps { epsilon: f64 },
    J0bar,
}

/// Which spectral projection a count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `N_+(level)`: eigenvalues above `level`.
    Plus,
    /// `N_-(level)`: eigenvalues below `level`.
    Minus,
}

/// `d_n = n^{1/2} (n + 1/2)^{1/4} (n - 1/2)^{1/4}` for `n >= 1`.
pub fn d_entry(n: usize) -> f64 {
    let x = n as f64;
    x.sqrt() * ((x + 0.5) * (x - 0.5)).sqrt().sqrt()
}

/// `j_{n,n-1}(eps)` for `n >= 1`.
pub fn jeps_entry(n: usize, epsilon: f64) -> f64 {
    let x = n as f64;
    x.sqrt() / (2.0 * ((x + epsilon) * (x - 1.0 + epsilon)).sqrt().sqrt())
}

/// Off-diagonal of `J0bar` between indices `n - 1` and `n`, `n >= 2`.
pub fn j0bar_entry(n: usize) -> f64 {
    0.5 / (1.0 - 1.0 / n as f64).sqrt().sqrt()
}

impl JacobiFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JacobiFamily::CalJ0 { mu } => finite("mu", mu),
            JacobiFamily::CalJ { lambda, mu } => {
                finite("mu", mu)?;
                finite("lambda", lambda)?;
                if lambda >= 0.5 {
                    return Err(Error::BranchCut(lambda));
                }
                Ok(())
            }
            JacobiFamily::Jeps { epsilon } => {
                finite("epsilon", epsilon)?;
                if epsilon <= 0.0 {
                    return Err(Error::InvalidParameters(format!(
                        "J(eps) needs eps > 0 (got {epsilon}): at eps = 0 the entry j1,0 = \u{221e}"
                    )));
                }
                Ok(())
            }
            JacobiFamily::J0bar => Ok(()),
        }
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{name} must be finite, got {v}")))
    }
}

/// `N x N` truncation of `family`.
pub fn build(family: &JacobiFamily, n: usize) -> Result<TridiagonalMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("truncation size must be >= 2, got {n}")));
    }
    family.validate()?;
    let (diag, off): (Vec<f64>, Vec<f64>) = match *family {
        JacobiFamily::CalJ0 { mu } => {
            ((0..n).map(|k| 2.0 * mu * (k as f64 + 0.5)).collect(), (1..n).map(d_entry).collect())
        }
        JacobiFamily::CalJ { lambda, mu } => (
            (0..n)
                .map(|k| {
                    let s = k as f64 + 0.5;
                    2.0 * mu * s.sqrt() * (s - lambda).sqrt()
                })
                .collect(),
            (1..n).map(d_entry).collect(),
        ),
        JacobiFamily::Jeps { epsilon } => (vec![0.0; n], (1..n).map(|k| jeps_entry(k, epsilon)).collect()),
        JacobiFamily::J0bar => (vec![0.0; n], (2..=n).map(j0bar_entry).collect()),
    };
    TridiagonalMatrix::new(diag, off)
}

/// `N_+` or `N_-` of the `n x n` truncation relative to `level`.
pub fn count_relative(family: &JacobiFamily, level: f64, n: usize, side: Side) -> Result<usize> {
    let t = build(family, n)?;
    Ok(count_matrix(&t, level, side))
}

fn count_matrix(t: &TridiagonalMatrix, level: f64, side: Side) -> usize {
    let below = sturm_count_below(t, level);
    match side {
        Side::Minus => below,
        Side::Plus => t.size() - below,
    }
}

/// Truncation sizes tried by the doubling policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub start: usize,
    pub cap: usize,
}

pub const DEFAULT_START: usize = 2048;
pub const DEFAULT_CAP: usize = 1 << 20;

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { start: DEFAULT_START, cap: DEFAULT_CAP }
    }
}

impl TruncationPolicy {
    pub fn with_cap(cap: usize) -> Self {
        Self { start: DEFAULT_START.min(cap), cap }
    }

    /// Doubles `n` until `f(n) == f(2n)`, returning `(value, n)`.
    pub fn stabilize<T, F>(&self, what: &str, mut f: F) -> Result<(T, usize)>
    where
        T: PartialEq,
        F: FnMut(usize) -> Result<T>,
    {
        self.stabilize_by(what, &mut f, |a, b| a == b)
    }

    /// Doubles `n` until `same(f(n), f(2n))`.
    pub fn stabilize_by<T, F, S>(&self, what: &str, f: &mut F, same: S) -> Result<(T, usize)>
    where
        F: FnMut(usize) -> Result<T>,
        S: Fn(&T, &T) -> bool,
    {
        if self.start < 2 || self.start > self.cap {
            return Err(Error::InvalidParameters(format!(
                "truncation policy needs 2 <= start <= cap (start {}, cap {})",
                self.start, self.cap
            )));
        }
        let mut n = self.start;
        let mut prev = f(n)?;
        loop {
            let next_n = n * 2;
            if next_n > self.cap {
                return Err(Error::NonConvergence(format!(
                    "{what} still changing at truncation {n} (cap {})",
                    self.cap
                )));
            }
            let next = f(next_n)?;
            if same(&prev, &next) {
                return Ok((next, next_n));
            }
            prev = next;
            n = next_n;
        }
    }
}

/// Count stabilized under doubling; returns `(count, n)`.
pub fn count_stabilized(
    family: &JacobiFamily,
    level: f64,
    side: Side,
    policy: &TruncationPolicy,
) -> Result<(usize, usize)> {
    family.validate()?;
    policy.stabilize("eigenvalue count", |n| count_relative(family, level, n, side))
}

/// `max_{N/2 <= n < N} |2 mu (n+1/2)^{1/2} zeta_n(lambda) - (2 mu (n+1/2) - mu lambda)|`.
///
/// Evaluated as `|mu| lambda^2 / (sqrt(s - lambda) + sqrt(s))^2` with `s = n + 1/2`,
/// which is the same quantity without the cancellation.
pub fn compact_difference_tail(lambda: f64, mu: f64, n: usize) -> Result<f64> {
    JacobiFamily::CalJ { lambda, mu }.validate()?;
    if n < 2 {
        return Err(Error::InvalidParameters(format!("truncation size must be >= 2, got {n}")));
    }
    // The term decreases in n, so the max sits at the left end of the range.
    let s = (n / 2) as f64 + 0.5;
    let root_sum = (s - lambda).sqrt() + s.sqrt();
    Ok(mu.abs() * lambda * lambda / (root_sum * root_sum))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionScanReport {
    pub mu: f64,
    pub sizes: Vec<usize>,
    pub smallest_eigs: Vec<f64>,
    pub window_counts: Vec<usize>,
}

/// Smallest eigenvalue and window count of truncated `CalJ0(mu)` per size.
pub fn transition_scan(mu: f64, sizes: &[usize], window: (f64, f64), tol: f64) -> Result<TransitionScanReport> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("transition scan sizes must be strictly ascending".into()));
    }
    if !(window.0 < window.1) {
        return Err(Error::InvalidParameters(format!("empty window ({}, {})", window.0, window.1)));
    }
    let family = JacobiFamily::CalJ0 { mu };
    let mut smallest_eigs = Vec::with_capacity(sizes.len());
    let mut window_counts = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let t = build(&family, n)?;
        smallest_eigs.push(smallest_eigenvalue(&t, tol)?);
        window_counts.push(sturm_count_below(&t, window.1) - sturm_count_below(&t, window.0));
    }
    Ok(TransitionScanReport { mu, sizes: sizes.to_vec(), smallest_eigs, window_counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tridiag::eigenvalues_in_window;
    use proptest::prelude::*;

    #[test]
    fn caljo_entries() {
        let t = build(&JacobiFamily::CalJ0 { mu: 1.7 }, 4).unwrap();
        assert!((t.offdiag()[0] - 0.75_f64.powf(0.25)).abs() < 1e-15);
        assert!((t.offdiag()[0] - 0.930605).abs() < 1e-6);
        assert!((t.diag()[0] - 1.7).abs() < 1e-15);
        let z = build(&JacobiFamily::CalJ0 { mu: 0.0 }, 5).unwrap();
        assert!(z.diag().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn calj_at_zero_lambda_is_calj0() {
        let a = build(&JacobiFamily::CalJ { lambda: 0.0, mu: 1.3 }, 50).unwrap();
        let b = build(&JacobiFamily::CalJ0 { mu: 1.3 }, 50).unwrap();
        for (x, y) in a.diag().iter().zip(b.diag()) {
            assert!((x - y).abs() <= 1e-13 * y.abs());
        }
        assert_eq!(a.offdiag(), b.offdiag());
        assert!(matches!(build(&JacobiFamily::CalJ { lambda: 0.5, mu: 1.0 }, 4), Err(Error::BranchCut(_))));
    }

    #[test]
    fn jeps_entries_and_obstruction() {
        let t = build(&JacobiFamily::Jeps { epsilon: 1.0 }, 3).unwrap();
        assert!((t.offdiag()[0] - 1.0 / (2.0 * 2f64.powf(0.25))).abs() < 1e-15);
        assert!((t.offdiag()[0] - 0.420448).abs() < 1e-6);
        for eps in [0.0, -1.0] {
            match build(&JacobiFamily::Jeps { epsilon: eps }, 3) {
                Err(Error::InvalidParameters(msg)) => assert!(msg.contains("j1,0 = \u{221e}")),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn j0bar_layout() {
        let t = build(&JacobiFamily::J0bar, 4).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.offdiag().len(), 3);
        assert!((t.offdiag()[0] - 0.5 / 0.5f64.powf(0.25)).abs() < 1e-15);
        // J0bar is the eps -> 0 limit of J(eps) restricted to n >= 1
        for n in 2..100 {
            assert!((jeps_entry(n, 1e-13) - j0bar_entry(n)).abs() < 1e-10);
        }
    }

    #[test]
    fn jeps_entries_approach_half() {
        for n in [100usize, 1000, 10_000, 100_000] {
            let j = jeps_entry(n, 0.5);
            assert!((j - 0.5).abs() <= 1.0 / (4.0 * n as f64) + 1.0 / (n as f64).powi(2));
        }
    }

    #[test]
    fn counts_of_positive_calj0() {
        for mu in [3.0, 1.5] {
            let fam = JacobiFamily::CalJ0 { mu };
            assert_eq!(count_relative(&fam, 0.0, 500, Side::Plus).unwrap(), 500);
            assert_eq!(count_relative(&fam, 0.0, 500, Side::Minus).unwrap(), 0);
        }
    }

    #[test]
    fn j0bar_count_is_small_and_stable() {
        let a = count_relative(&JacobiFamily::J0bar, 1.1, 20_000, Side::Plus).unwrap();
        let b = count_relative(&JacobiFamily::J0bar, 1.1, 40_000, Side::Plus).unwrap();
        assert!(a <= 1);
        assert_eq!(a, b);
    }

    #[test]
    fn jeps_plus_minus_mirror() {
        let fam = JacobiFamily::Jeps { epsilon: 0.5 };
        let plus = count_relative(&fam, 1.3, 10_000, Side::Plus).unwrap();
        let minus = count_relative(&fam, -1.3, 10_000, Side::Minus).unwrap();
        assert_eq!(plus, minus);
    }

    #[test]
    fn compact_difference_matches_direct_formula_and_decays() {
        for (lambda, mu) in [(0.4, 1.0), (-3.0, 2.0), (0.0, 1.5)] {
            for n in [4usize, 10, 100] {
                let direct = ((n / 2)..n)
                    .map(|k| {
                        let s = k as f64 + 0.5;
                        (2.0 * mu * s.sqrt() * (s - lambda).sqrt() - (2.0 * mu * s - mu * lambda)).abs()
                    })
                    .fold(0.0, f64::max);
                let tail = compact_difference_tail(lambda, mu, n).unwrap();
                assert!((tail - direct).abs() <= 1e-12 * (1.0 + direct), "{tail} vs {direct}");
            }
        }
        assert_eq!(compact_difference_tail(0.0, 1.0, 1000).unwrap(), 0.0);
        let t3 = compact_difference_tail(0.4, 1.0, 1_000).unwrap();
        let t4 = compact_difference_tail(0.4, 1.0, 10_000).unwrap();
        let t5 = compact_difference_tail(0.4, 1.0, 100_000).unwrap();
        assert!(t3 > t4 && t4 > t5);
        let scaled = [t3 * 1e3, t4 * 1e4, t5 * 1e5];
        assert!(scaled.iter().all(|&v| v < 1.0));
        assert!(matches!(compact_difference_tail(0.6, 1.0, 10), Err(Error::BranchCut(_))));
    }

    #[test]
    fn positive_definite_above_criticality() {
        for mu in [1.01, 1.5, 2.0, 10.0] {
            for n in [2usize, 10, 100, 1000, 10_000] {
                let t = build(&JacobiFamily::CalJ0 { mu }, n).unwrap();
                assert_eq!(sturm_count_below(&t, 0.0), 0, "mu {mu} n {n}");
            }
        }
    }

    #[test]
    fn zero_diagonal_families_are_symmetric() {
        for fam in [JacobiFamily::Jeps { epsilon: 0.3 }, JacobiFamily::J0bar] {
            let t = build(&fam, 200).unwrap();
            let ev = eigenvalues_in_window(&t, -3.0, 3.0, 1e-13).unwrap().eigenvalues;
            let n = ev.len();
            assert_eq!(n, 200);
            for i in 0..n {
                assert!((ev[i] + ev[n - 1 - i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn transition_scan_examples() {
        let sizes = [256, 512, 1024, 2048];
        let r = transition_scan(2.0, &sizes, (-5.0, 5.0), 1e-12).unwrap();
        assert!(r.smallest_eigs.iter().all(|&v| v > 0.0));
        assert!(r.smallest_eigs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!((r.smallest_eigs[3] - r.smallest_eigs[2]).abs() < 1e-6);
        let r = transition_scan(0.5, &sizes, (-5.0, 5.0), 1e-10).unwrap();
        assert!(r.window_counts.windows(2).all(|w| w[1] > w[0]), "{:?}", r.window_counts);
        assert!(transition_scan(2.0, &[4, 2], (-1.0, 1.0), 1e-10).is_err());
    }

    #[test]
    fn doubling_policy_caps() {
        let policy = TruncationPolicy { start: 4, cap: 64 };
        let r = policy.stabilize("n", Ok);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
        let (v, n) = policy.stabilize("const", |_| Ok(7)).unwrap();
        assert_eq!((v, n), (7, 8));
    }

    proptest! {
        #[test]
        fn counts_nondecreasing_in_truncation(mu in 0.2f64..3.0, level in -10.0f64..10.0, n in 2usize..300) {
            for fam in [JacobiFamily::CalJ0 { mu }, JacobiFamily::Jeps { epsilon: mu }, JacobiFamily::J0bar] {
                let small = count_relative(&fam, level, n, Side::Minus).unwrap();
                let big = count_relative(&fam, level, n + 1, Side::Minus).unwrap();
                prop_assert!(small <= big);
            }
        }
    }
}
