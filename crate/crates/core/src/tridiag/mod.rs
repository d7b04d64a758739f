//! Real symmetric tridiagonal matrices: Sturm counts and bisection.

mod dense;

pub use dense::{dense_eigen_oracle, DENSE_SIZE_LIMIT};

use serde::Serialize;

use crate::error::{Error, Result};

/// Finite real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    offdiag_sq: Vec<f64>,
    norm_inf: f64,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameters("tridiagonal matrix must have size >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParameters(format!(
                "offdiag length {} does not match size {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters("tridiagonal entries must be finite".into()));
        }
        let n = diag.len();
        let mut norm_inf = 0.0_f64;
        for i in 0..n {
            let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { offdiag[i].abs() } else { 0.0 };
            norm_inf = norm_inf.max(diag[i].abs() + left + right);
        }
        let offdiag_sq = offdiag.iter().map(|e| e * e).collect();
        Ok(Self { diag, offdiag, offdiag_sq, norm_inf })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn norm_inf(&self) -> f64 {
        self.norm_inf
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        f64::EPSILON * (self.norm_inf + 1.0)
    }
}

/// Number of eigenvalues strictly below `level`.
///
/// Counts negative pivots of the `LDL^T` factorization of `T - level`. Pivots
/// smaller than `eps (||T|| + 1)` in magnitude are pushed out to that size with
/// their sign kept; an exact zero becomes positive, so the count stays strict.
pub fn sturm_count_below(t: &TridiagonalMatrix, level: f64) -> usize {
    let pivmin = t.pivmin();
    let guard = |q: f64| {
        if q.abs() < pivmin {
            if q < 0.0 {
                -pivmin
            } else {
                pivmin
            }
        } else {
            q
        }
    };
    let mut q = guard(t.diag[0] - level);
    let mut count = usize::from(q < 0.0);
    for (d, e2) in t.diag[1..].iter().zip(&t.offdiag_sq) {
        q = guard(d - level - e2 / q);
        count += usize::from(q < 0.0);
    }
    count
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueReport {
    pub window: (f64, f64),
    pub eigenvalues: Vec<f64>,
    pub count_below_a: usize,
    pub count_below_b: usize,
    pub truncation_size: usize,
    pub tol: f64,
}

/// Every eigenvalue in `[a, b)`, bisected to width `tol`.
///
/// Clusters that cannot be separated at width `tol` are reported as repeated
/// midpoints, one per eigenvalue.
pub fn eigenvalues_in_window(t: &TridiagonalMatrix, a: f64, b: f64, tol: f64) -> Result<EigenvalueReport> {
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "window requires a < b and tol > 0 (a = {a}, b = {b}, tol = {tol})"
        )));
    }
    let ca = sturm_count_below(t, a);
    let cb = sturm_count_below(t, b);
    let mut eigenvalues = Vec::with_capacity(cb - ca);
    // Depth-first, left half first, so the output comes out sorted.
    let mut stack = vec![(a, b, ca, cb)];
    while let Some((lo, hi, clo, chi)) = stack.pop() {
        if chi == clo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            eigenvalues.extend(std::iter::repeat(mid).take(chi - clo));
            continue;
        }
        let cmid = sturm_count_below(t, mid);
        stack.push((mid, hi, cmid, chi));
        stack.push((lo, mid, clo, cmid));
    }
    Ok(EigenvalueReport {
        window: (a, b),
        eigenvalues,
        count_below_a: ca,
        count_below_b: cb,
        truncation_size: t.size(),
        tol,
    })
}

/// Lowest eigenvalue, bisected between the Gershgorin bounds.
pub fn smallest_eigenvalue(t: &TridiagonalMatrix, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!("tol must be positive, got {tol}")));
    }
    let (glo, ghi) = t.gershgorin();
    let pad = 4.0 * t.pivmin();
    let (mut lo, mut hi) = (glo - pad, ghi + pad);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count_below(t, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> TridiagonalMatrix {
        let diag = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let off = (0..n - 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
        TridiagonalMatrix::new(diag, off).unwrap()
    }

    #[test]
    fn diagonal_counts() {
        let t = TridiagonalMatrix::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(sturm_count_below(&t, 2.5), 2);
        let id = TridiagonalMatrix::new(vec![1.0; 3], vec![0.0; 2]).unwrap();
        assert_eq!(sturm_count_below(&id, 0.0), 0);
        // strict: an eigenvalue at the level is not counted
        assert_eq!(sturm_count_below(&id, 1.0), 0);
        assert_eq!(sturm_count_below(&t, 2.0), 1);
    }

    #[test]
    fn rejects_malformed() {
        assert!(TridiagonalMatrix::new(vec![], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn window_examples() {
        let t = TridiagonalMatrix::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let r = eigenvalues_in_window(&t, -2.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.eigenvalues.len(), 2);
        assert!((r.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-12);
        let one = TridiagonalMatrix::new(vec![2.0], vec![]).unwrap();
        let r = eigenvalues_in_window(&one, 0.0, 3.0, 1e-12).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert!((r.eigenvalues[0] - 2.0).abs() < 1e-12);
        assert!(eigenvalues_in_window(&one, 3.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn repeated_eigenvalues_are_reported_with_multiplicity() {
        let t = TridiagonalMatrix::new(vec![1.0, 1.0, 1.0, 4.0], vec![0.0, 0.0, 0.0]).unwrap();
        let r = eigenvalues_in_window(&t, 0.0, 5.0, 1e-10).unwrap();
        assert_eq!(r.eigenvalues.len(), 4);
        assert!(r.eigenvalues[..3].iter().all(|v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn smallest_examples() {
        let t = TridiagonalMatrix::new(vec![5.0, 7.0], vec![0.0]).unwrap();
        assert!((smallest_eigenvalue(&t, 1e-12).unwrap() - 5.0).abs() < 1e-12);
        let t = TridiagonalMatrix::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert!((smallest_eigenvalue(&t, 1e-12).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn counts_match_dense_oracle_at_random_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_matrix(&mut rng, 200);
        let eig = dense_eigen_oracle(&t).unwrap();
        for _ in 0..100 {
            let level = rng.gen_range(-12.0..12.0);
            let dense = eig.iter().filter(|&&e| e < level).count();
            assert_eq!(sturm_count_below(&t, level), dense, "level {level}");
        }
    }

    #[test]
    fn window_matches_dense_oracle_at_300() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_matrix(&mut rng, 300);
        let (lo, hi) = t.gershgorin();
        let r = eigenvalues_in_window(&t, lo - 1.0, hi + 1.0, 1e-12).unwrap();
        let eig = dense_eigen_oracle(&t).unwrap();
        assert_eq!(r.eigenvalues.len(), eig.len());
        for (a, b) in r.eigenvalues.iter().zip(&eig) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn smallest_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(1..60);
            let t = random_matrix(&mut rng, n);
            let s = smallest_eigenvalue(&t, 1e-11).unwrap();
            assert!((s - dense_eigen_oracle(&t).unwrap()[0]).abs() < 1e-10);
        }
    }

    fn matrix_strategy() -> impl Strategy<Value = TridiagonalMatrix> {
        (1usize..40).prop_flat_map(|n| {
            (proptest::collection::vec(-10.0f64..10.0, n), proptest::collection::vec(-10.0f64..10.0, n - 1))
                .prop_map(|(d, e)| TridiagonalMatrix::new(d, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn count_is_monotone_and_total(t in matrix_strategy(), a in -40.0f64..40.0, b in -40.0f64..40.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(sturm_count_below(&t, lo) <= sturm_count_below(&t, hi));
            let (_, ghi) = t.gershgorin();
            prop_assert_eq!(sturm_count_below(&t, ghi + 1.0), t.size());
            prop_assert_eq!(sturm_count_below(&t, f64::MAX), t.size());
        }

        #[test]
        fn zero_diagonal_spectrum_is_symmetric(e in proptest::collection::vec(-5.0f64..5.0, 1..40)) {
            let n = e.len() + 1;
            let t = TridiagonalMatrix::new(vec![0.0; n], e).unwrap();
            let r = eigenvalues_in_window(&t, -20.0, 20.0, 1e-13).unwrap();
            let ev = &r.eigenvalues;
            prop_assert_eq!(ev.len(), n);
            for i in 0..n {
                prop_assert!((ev[i] + ev[n - 1 - i]).abs() < 1e-10);
            }
        }

        #[test]
        fn offdiag_sign_flip_preserves_spectrum(t in matrix_strategy()) {
            let flipped = TridiagonalMatrix::new(
                t.diag().to_vec(),
                t.offdiag().iter().map(|e| -e).collect(),
            ).unwrap();
            let r1 = eigenvalues_in_window(&t, -40.0, 40.0, 1e-13).unwrap();
            let r2 = eigenvalues_in_window(&flipped, -40.0, 40.0, 1e-13).unwrap();
            prop_assert_eq!(r1.eigenvalues.len(), r2.eigenvalues.len());
            for (a, b) in r1.eigenvalues.iter().zip(&r2.eigenvalues) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
