//! Cyclic Jacobi eigenvalues on the densified matrix.
//!
//! Shares nothing with the Sturm path; it exists to cross-check it.

use super::TridiagonalMatrix;
use crate::error::{Error, Result};

pub const DENSE_SIZE_LIMIT: usize = 1024;

const MAX_SWEEPS: usize = 100;

/// All eigenvalues of `t`, ascending.
pub fn dense_eigen_oracle(t: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let n = t.size();
    if n > DENSE_SIZE_LIMIT {
        return Err(Error::SizeExceeded { size: n, limit: DENSE_SIZE_LIMIT });
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = t.diag()[i];
    }
    for (i, &e) in t.offdiag().iter().enumerate() {
        a[i * n + i + 1] = e;
        a[(i + 1) * n + i] = e;
    }

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotate(&mut a, n, p, q);
            }
        }
        if sweep + 1 == MAX_SWEEPS {
            return Err(Error::NonConvergence(format!("cyclic Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Annihilates `a[p][q]` with a plane rotation `J^T A J`.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp;
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq;
    }
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
}
