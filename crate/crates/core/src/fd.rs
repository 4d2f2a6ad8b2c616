//! Fourth-order central finite differences on vector-valued fields.

use alloc::vec::Vec;

use crate::error::Result;

/// Default first-derivative step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Default step for second derivatives taken as nested first derivatives.
pub const SECOND_STEP: f64 = 2e-3;

const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const WEIGHTS: [f64; 4] = [1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0];

/// `∂f/∂x^axis` at `x` by the 5-point stencil
/// `(f(x-2h) - 8f(x-h) + 8f(x+h) - f(x+2h)) / 12h`.
pub fn partial<F>(mut f: F, x: &[f64], axis: usize, step: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut y = x.to_vec();
    let mut acc: Vec<f64> = Vec::new();
    for (offset, weight) in OFFSETS.iter().zip(WEIGHTS) {
        y[axis] = x[axis] + offset * step;
        let v = f(&y)?;
        if acc.is_empty() {
            acc = v.iter().map(|a| weight * a).collect();
        } else {
            for (a, b) in acc.iter_mut().zip(&v) {
                *a += weight * b;
            }
        }
    }
    for a in acc.iter_mut() {
        *a /= step;
    }
    Ok(acc)
}

/// Partials along every axis; `result[axis][component]`.
pub fn gradient<F>(mut f: F, x: &[f64], step: f64) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    (0..x.len()).map(|axis| partial(&mut f, x, axis, step)).collect()
}

/// Scalar convenience wrapper around [`partial`].
pub fn partial_scalar<F>(mut f: F, x: &[f64], axis: usize, step: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    Ok(partial(|y| Ok(alloc::vec![f(y)?]), x, axis, step)?[0])
}
