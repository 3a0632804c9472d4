use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::KinematicsError;

/// Savitzky-Golay filter parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavGol {
    /// Odd window length in samples.
    pub window: usize,
    pub poly_order: usize,
}

impl Default for SavGol {
    fn default() -> Self {
        Self {
            window: 7,
            poly_order: 2,
        }
    }
}

impl SavGol {
    pub fn validate(&self) -> Result<(), KinematicsError> {
        if self.window == 0 || self.window.is_multiple_of(2) {
            return Err(KinematicsError::EvenWindow(self.window));
        }
        if self.poly_order >= self.window {
            return Err(KinematicsError::InvalidPolyOrder {
                order: self.poly_order,
                window: self.window,
            });
        }
        Ok(())
    }

    pub fn apply(&self, values: &[f64]) -> Result<Vec<f64>, KinematicsError> {
        smooth_savgol(values, self.window, self.poly_order)
    }
}

/// Least-squares polynomial smoothing over a sliding window.
///
/// Interior samples use the centred window. The first and last `window / 2`
/// samples are taken from the polynomial fitted to the first/last full window,
/// so any polynomial of degree `<= poly_order` passes through unchanged.
pub fn smooth_savgol(values: &[f64], window: usize, poly_order: usize) -> Result<Vec<f64>, KinematicsError> {
    SavGol { window, poly_order }.validate()?;
    let n = values.len();
    if n < window {
        return Err(KinematicsError::WindowTooLarge { window, len: n });
    }
    let half = window / 2;
    let centre = weights(window, poly_order, 0.0);
    let mut out = vec![0.0; n];
    for i in half..n - half {
        out[i] = dot(&centre, &values[i - half..=i + half]);
    }
    let head = &values[..window];
    let tail = &values[n - window..];
    for i in 0..half {
        let w = weights(window, poly_order, i as f64 - half as f64);
        out[i] = dot(&w, head);
        let w = weights(window, poly_order, half as f64 - i as f64);
        out[n - 1 - i] = dot(&w, tail);
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Weights `w` such that `Σ w_k y_k` is the value at `at` (in samples relative
/// to the window centre) of the least-squares polynomial through the window.
fn weights(window: usize, order: usize, at: f64) -> Vec<f64> {
    let half = (window / 2) as f64;
    let scale = if half > 0.0 { half } else { 1.0 };
    let m = order + 1;
    // Offsets scaled to [-1, 1] keep the Gram matrix well conditioned.
    let xs: Vec<f64> = (0..window).map(|k| (k as f64 - half) / scale).collect();
    let powers = |x: f64| {
        let mut p = vec![1.0; m];
        for d in 1..m {
            p[d] = p[d - 1] * x;
        }
        p
    };
    let mut gram = vec![vec![0.0; m]; m];
    for &x in &xs {
        let p = powers(x);
        for r in 0..m {
            for c in 0..m {
                gram[r][c] += p[r] * p[c];
            }
        }
    }
    // Solve gram * z = e(at); then w_k = z · powers(x_k).
    let z = solve(gram, powers(at / scale));
    xs.iter().map(|&x| dot(&z, &powers(x))).collect()
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| crate::math::abs(a[i][col]).total_cmp(&crate::math::abs(a[j][col])))
            .unwrap_or(col);
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}
