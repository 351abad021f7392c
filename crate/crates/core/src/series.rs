//! Truncated power series over `Complex64`, stored low order first.

use num_complex::Complex64;

/// Quotient `num / den` truncated to `num.len()` terms. `den[0]` must be nonzero.
pub(crate) fn div(num: &[Complex64], den: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(num.len());
    for i in 0..num.len() {
        let mut acc = num[i];
        for j in 0..i {
            if let Some(d) = den.get(i - j) {
                acc -= out[j] * d;
            }
        }
        out.push(acc / den[0]);
    }
    out
}

pub(crate) fn norm(s: &[Complex64]) -> f64 {
    s.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
