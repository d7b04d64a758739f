//! Normalized Hermite functions `chi_n`.

/// `chi_0 .. chi_n` at `y` by the upward recurrence
/// `sqrt(k+1) chi_{k+1} = sqrt(2) y chi_k - sqrt(k) chi_{k-1}`.
pub fn hermite_all(n: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let chi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    out.push(chi0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * y * chi0);
    for k in 1..n {
        let next = (std::f64::consts::SQRT_2 * y * out[k] - (k as f64).sqrt() * out[k - 1]) / ((k + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

pub fn hermite_eval(n: usize, y: f64) -> f64 {
    hermite_all(n, y)[n]
}
