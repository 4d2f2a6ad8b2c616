//! Teleparallelism connection of a frame, its torsion, and the metrics built
//! from a frame: the Dirac-Einstein metric `h[e, η]`, the Killing tensor
//! `γ_ij = 4 S^k_{im} S^m_{jk}` and `Γ_ij = 4 S^k_{lk} S^l_{ij}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fd;
use crate::frame::{coframe, FrameField, FramePoint};
use crate::lie::BilinearForm;
use crate::math;
use crate::tensor::{SquareMatrix, Tensor3, Tensor4};

/// Metrics with `|det| ≤` this have no stored inverse.
pub const METRIC_DET_TOL: f64 = 1e-14;

/// `Γ^i_{jk}` at a point; `gamma[(i, j, k)]`, derivative index last.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionPoint {
    pub gamma: Tensor3,
}

/// `S^i_{jk}` at a point, optionally with partials `ds[(i, j, k, l)] = ∂_l S^i_{jk}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionPoint {
    pub s: Tensor3,
    pub ds: Option<Tensor4>,
}

impl TorsionPoint {
    pub fn new(s: Tensor3) -> Self {
        TorsionPoint { s, ds: None }
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `T_j = S^k_{jk}`.
    pub fn trace(&self) -> Vec<f64> {
        torsion_trace(&self.s)
    }
}

/// Symmetric metric with optional inverse and partials `dg[(i, j, k)] = ∂_k g_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPoint {
    pub g: SquareMatrix,
    pub inv: Option<SquareMatrix>,
    pub dg: Option<Tensor3>,
}

impl MetricPoint {
    /// Symmetrizes `g` and stores its inverse when it exists.
    pub fn new(g: SquareMatrix) -> Self {
        let g = g.symmetric_part();
        let inv = g.inverse(METRIC_DET_TOL).ok().map(|m| m.symmetric_part());
        MetricPoint { g, inv, dg: None }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn inverse(&self) -> Result<&SquareMatrix> {
        self.inv
            .as_ref()
            .ok_or_else(|| Error::SingularMetric(self.g.determinant()))
    }

    /// `√|det g|`.
    pub fn sqrt_abs_det(&self) -> f64 {
        math::sqrt(math::abs(self.g.determinant()))
    }
}

/// `Γ^i_{jk} = e^i_A ∂_k e^A_j`, written as `-∂_k e^i_B · e^B_j` so that only
/// frame partials are needed.
pub fn connection(fp: &FramePoint) -> Result<ConnectionPoint> {
    let cof = coframe(fp)?;
    Ok(ConnectionPoint {
        gamma: connection_with_coframe(fp, &cof),
    })
}

fn connection_with_coframe(fp: &FramePoint, cof: &SquareMatrix) -> Tensor3 {
    let n = fp.dim();
    Tensor3::from_fn(n, |i, j, k| {
        -(0..n).map(|b| fp.de[(i, b, k)] * cof[(b, j)]).sum::<f64>()
    })
}

/// `S^i_{jk} = ½ (Γ^i_{jk} - Γ^i_{kj})`.
pub fn torsion(fp: &FramePoint) -> Result<TorsionPoint> {
    Ok(torsion_from_connection(&connection(fp)?))
}

pub fn torsion_from_connection(conn: &ConnectionPoint) -> TorsionPoint {
    TorsionPoint::new(conn.gamma.antisymmetrize_last_pair())
}

/// `γ^C_{AB} = 2 S^i_{jk} e^C_i e^j_A e^k_B`.
pub fn nonholonomy(fp: &FramePoint, tp: &TorsionPoint) -> Result<Tensor3> {
    let n = fp.dim();
    let cof = coframe(fp)?;
    // First pull the lower indices back to legs, then the upper one.
    let lowered = Tensor3::from_fn(n, |i, a, b| {
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                acc += tp.s[(i, j, k)] * fp.e[(j, a)] * fp.e[(k, b)];
            }
        }
        acc
    });
    Ok(Tensor3::from_fn(n, |c, a, b| {
        2.0 * (0..n).map(|i| cof[(c, i)] * lowered[(i, a, b)]).sum::<f64>()
    }))
}

/// `T_j = S^k_{jk}`.
pub fn torsion_trace(s: &Tensor3) -> Vec<f64> {
    let n = s.dim();
    (0..n).map(|j| (0..n).map(|k| s[(k, j, k)]).sum()).collect()
}

/// `h_ij = η_AB e^A_i e^B_j`.
pub fn dirac_einstein_metric(fp: &FramePoint, eta: &BilinearForm) -> Result<MetricPoint> {
    if eta.dim() != fp.dim() {
        return Err(Error::DimensionMismatch {
            expected: fp.dim(),
            got: eta.dim(),
        });
    }
    let cof = coframe(fp)?;
    Ok(MetricPoint::new(eta.matrix().congruence(&cof)))
}

/// `γ_ij = 4 S^k_{im} S^m_{jk}`; computed on the upper triangle and mirrored.
pub fn killing_tensor(tp: &TorsionPoint) -> MetricPoint {
    let n = tp.dim();
    let s = &tp.s;
    let g = SquareMatrix::from_fn(n, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let mut acc = 0.0;
        for k in 0..n {
            for m in 0..n {
                acc += s[(k, a, m)] * s[(m, b, k)];
            }
        }
        4.0 * acc
    });
    let inv = g.inverse(METRIC_DET_TOL).ok().map(|m| m.symmetric_part());
    MetricPoint { g, inv, dg: None }
}

/// `Γ_ij = 4 S^k_{lk} S^l_{ij} = 4 T_l S^l_{ij}`.
pub fn gamma_big(tp: &TorsionPoint) -> SquareMatrix {
    let n = tp.dim();
    let t = tp.trace();
    SquareMatrix::from_fn(n, |i, j| 4.0 * (0..n).map(|l| t[l] * tp.s[(l, i, j)]).sum::<f64>())
}

/// Frame point, connection and torsion at `x` in one go.
pub fn frame_torsion(frame: &FrameField, x: &[f64]) -> Result<(FramePoint, ConnectionPoint, TorsionPoint)> {
    let fp = frame.point(x)?;
    let cof = coframe(&fp)?;
    let conn = ConnectionPoint {
        gamma: connection_with_coframe(&fp, &cof),
    };
    let tp = torsion_from_connection(&conn);
    Ok((fp, conn, tp))
}

/// Teleparallel covariant divergence of a weight-one tensor density
/// `H_i^{jk}`:
///
/// `∇_k H_i^{jk} = ∂_k H_i^{jk} - Γ^l_{ik} H_l^{jk} + Γ^j_{lk} H_i^{lk}
///                 + Γ^k_{lk} H_i^{jl} - Γ^l_{lk} H_i^{jk}`.
///
/// Partials of `H` come from `h_field` on a finite-difference stencil of
/// size `step`. Returns the matrix `[(i, j)]`.
pub fn teleparallel_divergence<F>(mut h_field: F, conn: &ConnectionPoint, x: &[f64], step: f64) -> Result<SquareMatrix>
where
    F: FnMut(&[f64]) -> Result<Tensor3>,
{
    let n = conn.gamma.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let h = h_field(x)?;
    let g = &conn.gamma;
    let mut entries = alloc::vec![0.0; n * n];
    for k in 0..n {
        let dk = fd::partial(|y| Ok(h_field(y)?.as_slice().to_vec()), x, k, step)?;
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] += dk[(i * n + j) * n + k];
            }
        }
    }
    // Γ^l_{lk}, the weight-one density term.
    let trace: Vec<f64> = (0..n).map(|k| (0..n).map(|l| g[(l, l, k)]).sum()).collect();
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    acc -= g[(l, i, k)] * h[(l, j, k)];
                    acc += g[(j, l, k)] * h[(i, l, k)];
                    acc += g[(k, l, k)] * h[(i, j, l)];
                }
                acc -= trace[k] * h[(i, j, k)];
            }
            entries[i * n + j] += acc;
        }
    }
    SquareMatrix::from_row_slice(n, &entries)
}

/// Curvature of the teleparallel connection,
/// `R^i_{mkl} = ∂_k Γ^i_{ml} - ∂_l Γ^i_{mk} + Γ^i_{pk} Γ^p_{ml} - Γ^i_{pl} Γ^p_{mk}`,
/// with `∂Γ` from the frame's second partials. Vanishes identically.
pub fn connection_curvature(frame: &FrameField, x: &[f64]) -> Result<Tensor4> {
    let fp = frame.point_with_second(x)?;
    let n = fp.dim();
    let cof = coframe(&fp)?;
    let gamma = connection_with_coframe(&fp, &cof);
    let dde = fp.dde.as_ref().ok_or(Error::MissingField("second partials"))?;
    // ∂_k e^B_j = -e^B_m ∂_k e^m_C e^C_j
    let dcof = Tensor3::from_fn(n, |b, j, k| {
        let mut acc = 0.0;
        for m in 0..n {
            for c in 0..n {
                acc -= cof[(b, m)] * fp.de[(m, c, k)] * cof[(c, j)];
            }
        }
        acc
    });
    // dgamma[(i, m, l, k)] = ∂_k Γ^i_{ml}
    let dgamma = Tensor4::from_fn(n, |i, m, l, k| {
        -(0..n)
            .map(|b| dde[(i, b, l, k)] * cof[(b, m)] + fp.de[(i, b, l)] * dcof[(b, m, k)])
            .sum::<f64>()
    });
    Ok(Tensor4::from_fn(n, |i, m, k, l| {
        let mut acc = dgamma[(i, m, l, k)] - dgamma[(i, m, k, l)];
        for p in 0..n {
            acc += gamma[(i, p, k)] * gamma[(p, m, l)] - gamma[(i, p, l)] * gamma[(p, m, k)];
        }
        acc
    }))
}

/// `∇_k g_ij = ∂_k g_ij - Γ^l_{ik} g_lj - Γ^l_{jk} g_il` for a metric field
/// given pointwise; `[(i, j, k)]`.
pub fn metric_covariant_derivative<F>(mut g_field: F, conn: &ConnectionPoint, x: &[f64], step: f64) -> Result<Tensor3>
where
    F: FnMut(&[f64]) -> Result<SquareMatrix>,
{
    let n = conn.gamma.dim();
    let g = g_field(x)?;
    let grad = fd::gradient(|y| Ok(g_field(y)?.as_slice().to_vec()), x, step)?;
    let gm = &conn.gamma;
    Ok(Tensor3::from_fn(n, |i, j, k| {
        let mut acc = grad[k][i * n + j];
        for l in 0..n {
            acc -= gm[(l, i, k)] * g[(l, j)] + gm[(l, j, k)] * g[(i, l)];
        }
        acc
    }))
}
