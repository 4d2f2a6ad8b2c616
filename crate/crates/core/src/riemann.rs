//! Levi-Civita geometry of a metric field by nested finite differences.
//!
//! Curvature convention: `R^i_{jkl} = ∂_k Γ^i_{lj} - ∂_l Γ^i_{kj}
//! + Γ^i_{km} Γ^m_{lj} - Γ^i_{lm} Γ^m_{kj}`, `R_jl = R^i_{jil}`, so the
//! unit sphere has `R = +2`. Under this convention a Killing metric `γ`
//! satisfies `R_ij - ½Rγ_ij = +(n-2)/8 γ_ij`, and the teleparallel form of
//! the Hilbert density reads
//! `R√|h| = -(J₁ + 2J₂ - 4J₃)√|h| - 4(S^a_{ab} h^{bi} √|h|)_{,i}`:
//! the opposite overall sign of `R` is the other common convention.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fd;
use crate::frame::FrameField;
use crate::lagrangian::weitzenbock_invariants;
use crate::lie::BilinearForm;
use crate::math;
use crate::teleparallel::{dirac_einstein_metric, frame_torsion, killing_tensor, MetricPoint};
use crate::tensor::{SquareMatrix, Tensor3, Tensor4};

/// Finite-difference steps: `first` for `∂g`, `second` for `∂Γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSteps {
    pub first: f64,
    pub second: f64,
}

impl Default for CurvatureSteps {
    fn default() -> Self {
        CurvatureSteps {
            first: fd::DEFAULT_STEP,
            second: fd::SECOND_STEP,
        }
    }
}

impl CurvatureSteps {
    pub fn scaled(self, factor: f64) -> Self {
        CurvatureSteps {
            first: self.first * factor,
            second: self.second * factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePoint {
    /// `Γ^i_{jk}`.
    pub christoffel: Tensor3,
    /// `R^i_{jkl}`.
    pub riemann: Tensor4,
    pub ricci: SquareMatrix,
    pub scalar: f64,
    pub metric: MetricPoint,
}

fn christoffel<F>(g_field: &F, x: &[f64], step: f64) -> Result<(Tensor3, MetricPoint)>
where
    F: Fn(&[f64]) -> Result<SquareMatrix>,
{
    let n = x.len();
    let metric = MetricPoint::new(g_field(x)?);
    let gi = metric.inverse()?.clone();
    let grad = fd::gradient(|y| Ok(g_field(y)?.as_slice().to_vec()), x, step)?;
    // dg(l, k, j) = ∂_j g_lk
    let dg = |l: usize, k: usize, j: usize| grad[j][l * n + k];
    let gamma = Tensor3::from_fn(n, |i, j, k| {
        0.5 * (0..n)
            .map(|l| gi[(i, l)] * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l)))
            .sum::<f64>()
    });
    Ok((gamma, metric))
}

/// Christoffels, Riemann, Ricci and scalar curvature of `g_field` at `x`.
pub fn levi_civita_curvature<F>(g_field: F, x: &[f64], steps: CurvatureSteps) -> Result<CurvaturePoint>
where
    F: Fn(&[f64]) -> Result<SquareMatrix>,
{
    let n = x.len();
    let (gamma, metric) = christoffel(&g_field, x, steps.first)?;
    let dgamma = fd::gradient(
        |y| Ok(christoffel(&g_field, y, steps.first)?.0.as_slice().to_vec()),
        x,
        steps.second,
    )?;
    // ∂_k Γ^i_{lj}
    let d = |k: usize, i: usize, l: usize, j: usize| dgamma[k][(i * n + l) * n + j];
    let riemann = Tensor4::from_fn(n, |i, j, k, l| {
        let mut acc = d(k, i, l, j) - d(l, i, k, j);
        for m in 0..n {
            acc += gamma[(i, k, m)] * gamma[(m, l, j)] - gamma[(i, l, m)] * gamma[(m, k, j)];
        }
        acc
    });
    let ricci = SquareMatrix::from_fn(n, |j, l| (0..n).map(|i| riemann[(i, j, i, l)]).sum());
    let gi = metric.inverse()?;
    let mut scalar = 0.0;
    for j in 0..n {
        for l in 0..n {
            scalar += gi[(j, l)] * ricci[(j, l)];
        }
    }
    Ok(CurvaturePoint {
        christoffel: gamma,
        riemann,
        ricci,
        scalar,
        metric,
    })
}

/// Largest `|R^i_{jkl} + R^i_{klj} + R^i_{ljk}|`.
pub fn bianchi_residual(cp: &CurvaturePoint) -> f64 {
    let r = &cp.riemann;
    let n = r.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r[(i, j, k, l)] + r[(i, k, l, j)] + r[(i, l, j, k)];
                    worst = worst.max(math::abs(v));
                }
            }
        }
    }
    worst
}

/// `R_ij - ½ R g_ij`.
pub fn einstein_tensor(cp: &CurvaturePoint) -> SquareMatrix {
    cp.ricci.sub(&cp.metric.g.scale(0.5 * cp.scalar))
}

/// Coefficient `κ` in `R_ij - ½Rγ_ij = κ γ_ij` for a Killing metric, in
/// this module's convention.
pub fn killing_einstein_coefficient(n: usize) -> f64 {
    (n as f64 - 2.0) / 8.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinCheck {
    /// Max over points of `|R_ij - ½Rg_ij - κ g_ij|` with `κ = (n-2)/(8a)`.
    pub max_residual: f64,
    /// Least-squares ratio `G_ij / g_ij` at each point.
    pub measured_ratio: Vec<f64>,
    /// `(n-2)/(8a)`.
    pub expected_ratio: f64,
}

/// Einstein property of the metric `a·γ[e]` of a semisimple group frame.
pub fn einstein_check(
    frame: &FrameField,
    points: &[Vec<f64>],
    scale: f64,
    steps: CurvatureSteps,
) -> Result<EinsteinCheck> {
    if !(scale != 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter("metric scale must be finite and nonzero"));
    }
    let n = frame.dim();
    let expected = killing_einstein_coefficient(n) / scale;
    let g_field = |y: &[f64]| Ok(killing_tensor(&frame_torsion(frame, y)?.2).g.scale(scale));
    let mut max_residual: f64 = 0.0;
    let mut measured = Vec::with_capacity(points.len());
    for x in points {
        let cp = levi_civita_curvature(g_field, x, steps)?;
        let g = &cp.metric.g;
        let ein = einstein_tensor(&cp);
        max_residual = max_residual.max(ein.max_abs_diff(&g.scale(expected)));
        let num: f64 = ein.as_slice().iter().zip(g.as_slice()).map(|(a, b)| a * b).sum();
        let den: f64 = g.as_slice().iter().map(|b| b * b).sum();
        measured.push(num / den);
    }
    Ok(EinsteinCheck {
        max_residual,
        measured_ratio: measured,
        expected_ratio: expected,
    })
}

/// Both sides of the teleparallel Hilbert identity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertSides {
    /// `R[h]√|h|`.
    pub curvature_density: f64,
    /// `(J₁ + 2J₂ - 4J₃)√|h|`.
    pub quadratic: f64,
    /// `4(S^a_{ab} h^{bi} √|h|)_{,i}`.
    pub divergence: f64,
}

impl HilbertSides {
    /// `R√|h| + (J₁ + 2J₂ - 4J₃)√|h| + 4(…)_{,i}`, zero when the identity holds.
    pub fn residual(&self) -> f64 {
        self.curvature_density + self.quadratic + self.divergence
    }
}

pub fn hilbert_sides(frame: &FrameField, eta: &BilinearForm, x: &[f64], steps: CurvatureSteps) -> Result<HilbertSides> {
    let metric_at = |y: &[f64]| dirac_einstein_metric(&frame.point(y)?, eta);
    let cp = levi_civita_curvature(|y| Ok(metric_at(y)?.g), x, steps)?;
    let h = &cp.metric;
    let root = h.sqrt_abs_det();
    let (_, _, tp) = frame_torsion(frame, x)?;
    let j = weitzenbock_invariants(&tp, h)?;
    let n = x.len();
    // V^i = S^a_{ab} h^{bi} √|h|
    let vector_density = |y: &[f64]| -> Result<Vec<f64>> {
        let h = metric_at(y)?;
        let hi = h.inverse()?;
        let s = frame_torsion(frame, y)?.2.s;
        let tr: Vec<f64> = (0..n).map(|b| (0..n).map(|a| s[(a, a, b)]).sum()).collect();
        let root = h.sqrt_abs_det();
        Ok((0..n)
            .map(|i| root * (0..n).map(|b| tr[b] * hi[(b, i)]).sum::<f64>())
            .collect())
    };
    let mut div = 0.0;
    for i in 0..n {
        div += fd::partial(vector_density, x, i, steps.first)?[i];
    }
    Ok(HilbertSides {
        curvature_density: cp.scalar * root,
        quadratic: (j[0] + 2.0 * j[1] - 4.0 * j[2]) * root,
        divergence: 4.0 * div,
    })
}

/// Max over `points` of [`HilbertSides::residual`].
pub fn hilbert_identity_check(
    frame: &FrameField,
    eta: &BilinearForm,
    points: &[Vec<f64>],
    steps: CurvatureSteps,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in points {
        worst = worst.max(math::abs(hilbert_sides(frame, eta, x, steps)?.residual()));
    }
    Ok(worst)
}
