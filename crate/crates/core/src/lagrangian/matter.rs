//! Born-Infeld type matter Lagrange tensors on a background metric `g`.

use alloc::vec::Vec;

use super::{sqrt_det, LagrangeTensor};
use crate::error::{Error, Result};
use crate::math;
use crate::teleparallel::MetricPoint;
use crate::tensor::SquareMatrix;

/// Gauge field strengths `F^K_{ij}` with the internal (Killing) metric `h_KL`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeMultiplet {
    pub f: Vec<SquareMatrix>,
    pub h: SquareMatrix,
}

/// Map into a target space `W ⊃ M`: target metric `h` on `W` (first `n`
/// indices along `M`, the rest `Σ`) and the gradients `Ψ^Σ_{,i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetMap {
    pub metric: SquareMatrix,
    pub dpsi: Vec<Vec<f64>>,
}

/// Fields available at one point. Only those a variant needs are required.
#[derive(Debug, Clone, PartialEq)]
pub struct MatterSample {
    pub g: MetricPoint,
    /// Field strength `F_ij`, antisymmetric.
    pub f: Option<SquareMatrix>,
    /// Real part of `∂_iΨ`.
    pub dpsi: Option<Vec<f64>>,
    /// Imaginary part of `∂_iΨ` for a complex field.
    pub dpsi_im: Option<Vec<f64>>,
    pub gauge: Option<GaugeMultiplet>,
    pub target: Option<TargetMap>,
}

impl MatterSample {
    pub fn new(g: MetricPoint) -> Self {
        MatterSample {
            g,
            f: None,
            dpsi: None,
            dpsi_im: None,
            gauge: None,
            target: None,
        }
    }

    /// Sets `F` after checking exact antisymmetry.
    pub fn with_field_strength(mut self, f: SquareMatrix) -> Result<Self> {
        let n = f.dim();
        for i in 0..n {
            for j in 0..n {
                if f[(i, j)] != -f[(j, i)] {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        self.f = Some(f);
        Ok(self)
    }

    pub fn with_gradient(mut self, re: Vec<f64>, im: Option<Vec<f64>>) -> Self {
        self.dpsi = Some(re);
        self.dpsi_im = im;
        self
    }

    pub fn with_gauge(mut self, gauge: GaugeMultiplet) -> Self {
        self.gauge = Some(gauge);
        self
    }

    pub fn with_target(mut self, target: TargetMap) -> Self {
        self.target = Some(target);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatterVariant {
    /// `bg + F`, with `L = -√|det| + b^{n/2}√|g|`.
    Em { b: f64 },
    /// `bg + ∂Ψ⊗∂Ψ` (real part of `∂Ψ̄⊗∂Ψ` for complex Ψ), same subtraction.
    Scalar { b: f64 },
    /// `αg + βF + γ g^{kl}F_ik F_lj + δ (F_kl F^kl) g`.
    EmQuadratic {
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
    },
    /// `αg + γ g^{kl} F^K_ik F^L_lj h_KL`.
    Gauge { alpha: f64, gamma: f64 },
    /// `h_ij + 2h_{Σ(i}Ψ^Σ_{,j)} + h_ΣΛ Ψ^Σ_{,i} Ψ^Λ_{,j}`.
    MinimalSurface,
}

/// A matter Lagrange tensor and the Lagrangian it defines.
#[derive(Debug, Clone, PartialEq)]
pub struct MatterLagrangian {
    pub tensor: LagrangeTensor,
    /// `b^{n/2}√|g|` for the variants that fix the energy scale.
    pub subtraction: Option<f64>,
    /// `-density + subtraction` when a subtraction exists, else `density`.
    pub total: f64,
}

fn field_strength(sample: &MatterSample) -> Result<&SquareMatrix> {
    sample.f.as_ref().ok_or(Error::MissingField("field strength F"))
}

/// `g^{kl} A_ik B_lj`.
fn raised_product(gi: &SquareMatrix, a: &SquareMatrix, b: &SquareMatrix) -> SquareMatrix {
    a.matmul(gi).matmul(b)
}

pub fn bi_matter_tensor(variant: MatterVariant, sample: &MatterSample) -> Result<MatterLagrangian> {
    let g = &sample.g.g;
    let n = g.dim();
    let subtraction = |b: f64| math::powi(math::sqrt(b), n as i32) * sample.g.sqrt_abs_det();
    let (l, sub) = match variant {
        MatterVariant::Em { b } => (g.scale(b).add(field_strength(sample)?), Some(subtraction(b))),
        MatterVariant::Scalar { b } => {
            let u = sample.dpsi.as_ref().ok_or(Error::MissingField("gradient ∂Ψ"))?;
            let v = sample.dpsi_im.as_deref();
            let grad = SquareMatrix::from_fn(n, |i, j| u[i] * u[j] + v.map_or(0.0, |v| v[i] * v[j]));
            (g.scale(b).add(&grad), Some(subtraction(b)))
        }
        MatterVariant::EmQuadratic {
            alpha,
            beta,
            gamma,
            delta,
        } => {
            let f = field_strength(sample)?;
            let gi = sample.g.inverse()?;
            let ff = raised_product(gi, f, f);
            // F_kl F^kl = Σ F_kl (g^-1 F g^-1)_kl
            let up = gi.matmul(f).matmul(gi);
            let scalar: f64 = f.as_slice().iter().zip(up.as_slice()).map(|(a, b)| a * b).sum();
            let l = g
                .scale(alpha + delta * scalar)
                .add(&f.scale(beta))
                .add(&ff.scale(gamma));
            (l, None)
        }
        MatterVariant::Gauge { alpha, gamma } => {
            let gauge = sample.gauge.as_ref().ok_or(Error::MissingField("gauge multiplet"))?;
            if gauge.h.dim() != gauge.f.len() {
                return Err(Error::DimensionMismatch {
                    expected: gauge.f.len(),
                    got: gauge.h.dim(),
                });
            }
            let gi = sample.g.inverse()?;
            let mut l = g.scale(alpha);
            for (k, fk) in gauge.f.iter().enumerate() {
                for (m, fl) in gauge.f.iter().enumerate() {
                    let w = gauge.h[(k, m)];
                    if w != 0.0 {
                        l = l.add(&raised_product(gi, fk, fl).scale(gamma * w));
                    }
                }
            }
            (l, None)
        }
        MatterVariant::MinimalSurface => {
            let t = sample.target.as_ref().ok_or(Error::MissingField("target map"))?;
            let m = t.metric.dim();
            if m < n || t.dpsi.len() != m - n || t.dpsi.iter().any(|d| d.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: m.saturating_sub(n),
                    got: t.dpsi.len(),
                });
            }
            let h = &t.metric;
            let l = SquareMatrix::from_fn(n, |i, j| {
                let mut acc = h[(i, j)];
                for (s, ds) in t.dpsi.iter().enumerate() {
                    acc += h[(n + s, i)] * ds[j] + h[(n + s, j)] * ds[i];
                    for (r, dr) in t.dpsi.iter().enumerate() {
                        acc += h[(n + s, n + r)] * ds[i] * dr[j];
                    }
                }
                acc
            });
            (l, None)
        }
    };
    let tensor = sqrt_det(&l, 1.0);
    let total = match sub {
        Some(s) => s - tensor.density,
        None => tensor.density,
    };
    Ok(MatterLagrangian {
        tensor,
        subtraction: sub,
        total,
    })
}
