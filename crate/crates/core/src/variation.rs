//! Field momentum `H_i^{jk} = ∂L/∂S^i_{jk}`, Dirac-Einstein stress
//! `Q^{ij} = ∂L/∂h_ij`, and the field-equation residual
//!
//! `K_i^j = ∇_k H_i^{jk} + 2 S^l_{lk} H_i^{jk} - 2 h_ik Q^{kj}`,
//!
//! where the `Q` term is present only for models that depend on `h[e, η]`.
//!
//! Derivatives with respect to `S` respect its antisymmetry: a variation
//! moves `S^i_{jk}` and `S^i_{kj}` together, so `H` is the antisymmetric
//! part of the unconstrained gradient.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fd;
use crate::frame::{FrameField, FramePoint};
use crate::lagrangian::{evaluate_with_metric, gl_lagrange_tensor, weitzenbock_invariants, ModelFamily, ModelSpec};
use crate::teleparallel::{dirac_einstein_metric, frame_torsion, teleparallel_divergence, MetricPoint, TorsionPoint};
use crate::tensor::{SquareMatrix, Tensor3};

/// Step for finite differences over torsion and metric entries.
pub const MOMENTUM_FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldMomentum {
    /// `h[(i, j, k)] = H_i^{jk}`.
    pub h: Tensor3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressTensor {
    pub q: SquareMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualPoint {
    /// `k[(i, j)] = K_i^j`.
    pub k: SquareMatrix,
    pub max_abs: f64,
    pub frobenius: f64,
}

impl ResidualPoint {
    pub fn new(k: SquareMatrix) -> Self {
        ResidualPoint {
            max_abs: k.max_abs(),
            frobenius: k.frobenius(),
            k,
        }
    }
}

/// `H` for `spec` at torsion `tp`. GL Born-Infeld and quadratic models
/// without a potential are differentiated analytically; anything else goes
/// through [`field_momentum_fd`].
pub fn field_momentum(spec: &ModelSpec, tp: &TorsionPoint, h: Option<&MetricPoint>) -> Result<FieldMomentum> {
    if spec.potential.is_some() {
        return field_momentum_fd(spec, tp, h, MOMENTUM_FD_STEP);
    }
    let grad = match &spec.family {
        ModelFamily::GLBornInfeld { lambda, mu, nu } => gl_gradient(spec.prefactor, &tp.s, *lambda, *mu, *nu)?,
        _ => {
            let c = spec.quadratic_coefficients().unwrap_or([0.0; 3]);
            let h = h.ok_or(Error::MissingField("metric h[e, η]"))?;
            quadratic_gradient(spec.prefactor, c, &tp.s, h)?
        }
    };
    Ok(FieldMomentum {
        h: grad.antisymmetrize_last_pair(),
    })
}

// Unconstrained ∂L/∂S^i_{jk} for the GL Born-Infeld density.
fn gl_gradient(prefactor: f64, s: &Tensor3, lambda: f64, mu: f64, nu: f64) -> Result<Tensor3> {
    let n = s.dim();
    let m = gl_lagrange_tensor(s, lambda, mu, nu);
    let lt = crate::lagrangian::sqrt_det(&m, prefactor);
    if lt.degenerate {
        return Err(Error::DegenerateLagrangeTensor(lt.det));
    }
    let mi = m.inverse(0.0).map_err(|_| Error::DegenerateLagrangeTensor(lt.det))?;
    // dL = Σ W^{ab} dM_ab with W^{ab} = ½ L (M⁻¹)_{ba}.
    let w = SquareMatrix::from_fn(n, |a, b| 0.5 * lt.density * mi[(b, a)]);
    let t: Vec<f64> = crate::teleparallel::torsion_trace(s);
    let w_t: Vec<f64> = (0..n).map(|j| (0..n).map(|b| w[(j, b)] * t[b]).sum()).collect();
    let wt_t: Vec<f64> = (0..n).map(|j| (0..n).map(|a| w[(a, j)] * t[a]).sum()).collect();
    // Σ_ab W^{ab} S^j_{ab}
    let ws: Vec<f64> = (0..n)
        .map(|j| {
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += w[(a, b)] * s[(j, a, b)];
                }
            }
            acc
        })
        .collect();
    Ok(Tensor3::from_fn(n, |i, j, k| {
        let mut lam = 0.0;
        for b in 0..n {
            lam += w[(j, b)] * s[(k, b, i)] + w[(b, j)] * s[(k, b, i)];
        }
        let mut acc = 4.0 * lambda * lam + 4.0 * nu * t[i] * w[(j, k)];
        if i == k {
            acc += 4.0 * mu * (w_t[j] + wt_t[j]) + 4.0 * nu * ws[j];
        }
        acc
    }))
}

// Unconstrained ∂L/∂S^p_{qr} for (c₁J₁ + c₂J₂ + c₃J₃)√|h|.
fn quadratic_gradient(prefactor: f64, c: [f64; 3], s: &Tensor3, h: &MetricPoint) -> Result<Tensor3> {
    let n = s.dim();
    let hi = h.inverse()?;
    let g = &h.g;
    let root = h.sqrt_abs_det();
    // ∂J₁ = 2 h_pi h^qj h^rk S^i_{jk}
    let lowered = Tensor3::from_fn(n, |p, j, k| (0..n).map(|i| g[(p, i)] * s[(i, j, k)]).sum());
    let r1 = Tensor3::from_fn(n, |p, q, k| (0..n).map(|j| hi[(q, j)] * lowered[(p, j, k)]).sum());
    let dj1 = Tensor3::from_fn(n, |p, q, r| {
        2.0 * (0..n).map(|k| hi[(r, k)] * r1[(p, q, k)]).sum::<f64>()
    });
    // ∂J₂ = 2 h^qj S^r_{jp}
    let dj2 = Tensor3::from_fn(n, |p, q, r| {
        2.0 * (0..n).map(|j| hi[(q, j)] * s[(r, j, p)]).sum::<f64>()
    });
    // ∂J₃ = 2 δ_pq h^rj S^a_{aj}
    let tp: Vec<f64> = (0..n).map(|j| (0..n).map(|a| s[(a, a, j)]).sum()).collect();
    let ht: Vec<f64> = (0..n).map(|r| (0..n).map(|j| hi[(r, j)] * tp[j]).sum()).collect();
    Ok(Tensor3::from_fn(n, |p, q, r| {
        let d3 = if p == q { 2.0 * ht[r] } else { 0.0 };
        prefactor * root * (c[0] * dj1[(p, q, r)] + c[1] * dj2[(p, q, r)] + c[2] * d3)
    }))
}

/// `H` by central differences over the independent entries `S^i_{jk}`,
/// `j < k`, each moved together with `S^i_{kj} = -S^i_{jk}`.
pub fn field_momentum_fd(
    spec: &ModelSpec,
    tp: &TorsionPoint,
    h: Option<&MetricPoint>,
    step: f64,
) -> Result<FieldMomentum> {
    let n = tp.dim();
    let base = evaluate_with_metric(spec, tp, h)?;
    if spec.is_gl_invariant() && base.degenerate {
        return Err(Error::DegenerateLagrangeTensor(base.det));
    }
    let mut out = Tensor3::zeros(n);
    let mut work = tp.clone();
    for i in 0..n {
        for j in 0..n {
            for k in (j + 1)..n {
                let orig = tp.s[(i, j, k)];
                let mut eval = |v: f64| -> Result<f64> {
                    work.s[(i, j, k)] = v;
                    work.s[(i, k, j)] = -v;
                    Ok(evaluate_with_metric(spec, &work, h)?.density)
                };
                let dl = fd::partial_scalar(|y| eval(y[0]), &[orig], 0, step)?;
                work.s[(i, j, k)] = orig;
                work.s[(i, k, j)] = -orig;
                // dL/ds = H_i^{jk} - H_i^{kj} = 2 H_i^{jk}
                out[(i, j, k)] = 0.5 * dl;
                out[(i, k, j)] = -0.5 * dl;
            }
        }
    }
    Ok(FieldMomentum { h: out })
}

/// `Q^{ij} = ∂L/∂h_ij` for the quadratic family, symmetrized.
pub fn stress(spec: &ModelSpec, tp: &TorsionPoint, h: &MetricPoint) -> Result<StressTensor> {
    let c = spec
        .quadratic_coefficients()
        .ok_or(Error::InvalidParameter("stress needs a quadratic teleparallel model"))?;
    let n = tp.dim();
    let hi = h.inverse()?;
    let g = &h.g;
    let s = &tp.s;
    let root = h.sqrt_abs_det();
    let j = weitzenbock_invariants(tp, h)?;

    // ∂J₁/∂h_pq = A^{pq} - (h⁻¹ B h⁻¹)^{pq} - (h⁻¹ C h⁻¹)^{pq}
    let up1 = Tensor3::from_fn(n, |q, b, k| (0..n).map(|jj| hi[(b, jj)] * s[(q, jj, k)]).sum());
    let up2 = Tensor3::from_fn(n, |q, b, c| (0..n).map(|k| hi[(c, k)] * up1[(q, b, k)]).sum());
    let low = Tensor3::from_fn(n, |a, jj, k| (0..n).map(|i| g[(a, i)] * s[(i, jj, k)]).sum());
    let a_m = SquareMatrix::from_fn(n, |p, q| {
        let mut acc = 0.0;
        for u in 0..n {
            for v in 0..n {
                acc += s[(p, u, v)] * up2[(q, u, v)];
            }
        }
        acc
    });
    // B_pq = h_ai h^ck S^a_{pc} S^i_{qk}, C_pq = h_ai h^bj S^a_{bp} S^i_{jq}
    let b_m = SquareMatrix::from_fn(n, |p, q| {
        let mut acc = 0.0;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    acc += low[(u, p, v)] * hi[(v, w)] * s[(u, q, w)];
                }
            }
        }
        acc
    });
    let c_m = SquareMatrix::from_fn(n, |p, q| {
        let mut acc = 0.0;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    acc += low[(u, v, p)] * hi[(v, w)] * s[(u, w, q)];
                }
            }
        }
        acc
    });
    // X_pq = S^a_{pb} S^b_{qa}
    let x_m = SquareMatrix::from_fn(n, |p, q| {
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                acc += s[(a, p, b)] * s[(b, q, a)];
            }
        }
        acc
    });
    let tr: Vec<f64> = (0..n).map(|jj| (0..n).map(|a| s[(a, a, jj)]).sum()).collect();
    let y_m = SquareMatrix::from_fn(n, |p, q| tr[p] * tr[q]);
    let conj = |m: &SquareMatrix| hi.matmul(m).matmul(hi);
    let dj1 = a_m.sub(&conj(&b_m)).sub(&conj(&c_m));
    let dj2 = conj(&x_m).scale(-1.0);
    let dj3 = conj(&y_m).scale(-1.0);
    let g_val = c[0] * j[0] + c[1] * j[1] + c[2] * j[2];
    let d = dj1
        .scale(c[0])
        .add(&dj2.scale(c[1]))
        .add(&dj3.scale(c[2]))
        .scale(root)
        .add(&hi.transpose().scale(0.5 * root * g_val))
        .scale(spec.prefactor);
    Ok(StressTensor { q: d.symmetric_part() })
}

fn metric_for(spec: &ModelSpec, fp: &FramePoint) -> Result<Option<MetricPoint>> {
    match spec.eta() {
        Some(eta) => Ok(Some(dirac_einstein_metric(fp, eta)?)),
        None => Ok(None),
    }
}

/// Momentum field of `spec` on `frame` at `x`.
pub fn momentum_at(frame: &FrameField, spec: &ModelSpec, x: &[f64]) -> Result<FieldMomentum> {
    let (fp, _, tp) = frame_torsion(frame, x)?;
    let h = metric_for(spec, &fp)?;
    field_momentum(spec, &tp, h.as_ref())
}

/// `K_i^j` at `x` with the default stencil.
pub fn residual(frame: &FrameField, spec: &ModelSpec, x: &[f64]) -> Result<ResidualPoint> {
    residual_with_step(frame, spec, x, fd::DEFAULT_STEP)
}

/// `K_i^j` at `x`; `∂H` uses a stencil of size `step`, `H` being recomputed
/// from the frame at every stencil point.
pub fn residual_with_step(frame: &FrameField, spec: &ModelSpec, x: &[f64], step: f64) -> Result<ResidualPoint> {
    let n = frame.dim();
    let (fp, conn, tp) = frame_torsion(frame, x)?;
    let h = metric_for(spec, &fp)?;
    let mom = field_momentum(spec, &tp, h.as_ref())?;
    let div = teleparallel_divergence(
        |y| {
            if y == x {
                Ok(mom.h.clone())
            } else {
                Ok(momentum_at(frame, spec, y)?.h)
            }
        },
        &conn,
        x,
        step,
    )?;
    // S^l_{lk}
    let trace: Vec<f64> = (0..n).map(|k| (0..n).map(|l| tp.s[(l, l, k)]).sum()).collect();
    let mut k_mat = SquareMatrix::from_fn(n, |i, j| {
        div[(i, j)] + 2.0 * (0..n).map(|k| trace[k] * mom.h[(i, j, k)]).sum::<f64>()
    });
    if let Some(h) = &h {
        let q = stress(spec, &tp, h)?.q;
        k_mat = k_mat.sub(&h.g.matmul(&q).scale(2.0));
    }
    Ok(ResidualPoint::new(k_mat))
}

/// The "time" column `K_i^0`.
pub fn secondary_constraint(frame: &FrameField, spec: &ModelSpec, x: &[f64]) -> Result<Vec<f64>> {
    Ok(residual(frame, spec, x)?.k.column(0))
}

/// `Σ S^i_{jk} H_i^{jk} - n L`.
pub fn euler_defect(spec: &ModelSpec, tp: &TorsionPoint, h: Option<&MetricPoint>) -> Result<(f64, f64)> {
    let l = evaluate_with_metric(spec, tp, h)?.density;
    let sh = tp.s.contract_all(&field_momentum(spec, tp, h)?.h);
    Ok((sh - tp.dim() as f64 * l, l))
}
