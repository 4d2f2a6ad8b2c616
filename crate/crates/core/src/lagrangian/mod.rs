//! Square-root-determinant Lagrangians `L = √|det L_ij|` and the frame
//! models built on them.
//!
//! Two model families act on a frame's torsion:
//!
//! * GL(n)-invariant Born-Infeld, `L_ij = 4λ S^k_{im} S^m_{jk}
//!   + 4μ S^k_{ik} S^m_{jm} + 4ν S^k_{lk} S^l_{ij}`, density `√|det L_ij|`;
//! * the quadratic teleparallel family `(c₁J₁ + c₂J₂ + c₃J₃)√|h|` with the
//!   Weitzenböck invariants of `h = h[e, η]`; `(1, 2, -4)` is the Hilbert
//!   case.

pub mod matter;
pub mod profile;

use core::fmt;

use crate::error::{Error, Result};
use crate::frame::FramePoint;
use crate::lie::BilinearForm;
use crate::math;
use crate::teleparallel::{dirac_einstein_metric, killing_tensor, torsion_trace, MetricPoint, TorsionPoint};
use crate::tensor::{SquareMatrix, Tensor3};

pub use matter::{bi_matter_tensor, GaugeMultiplet, MatterLagrangian, MatterSample, MatterVariant, TargetMap};
pub use profile::{origin_slope, radial_profile};

/// `det L` counts as zero when `|det L| ≤ DEGENERACY_REL_TOL · max|L_ij|ⁿ`.
pub const DEGENERACY_REL_TOL: f64 = 1e-10;

/// Scalar multiplier of the density, fed the three precomputed invariants.
pub type Potential = fn(&PotentialScalars) -> f64;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelFamily {
    GLBornInfeld {
        lambda: f64,
        mu: f64,
        nu: f64,
    },
    QuadraticTeleparallel {
        c1: f64,
        c2: f64,
        c3: f64,
        eta: BilinearForm,
    },
    /// Same as `QuadraticTeleparallel(1, 2, -4, η)`.
    HilbertTeleparallel {
        eta: BilinearForm,
    },
}

#[derive(Clone)]
pub struct ModelSpec {
    pub family: ModelFamily,
    /// Overall factor on the density; `+1` by default.
    pub prefactor: f64,
    pub potential: Option<Potential>,
}

impl fmt::Debug for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelSpec")
            .field("family", &self.family)
            .field("prefactor", &self.prefactor)
            .field("potential", &self.potential.is_some())
            .finish()
    }
}

impl ModelSpec {
    pub fn new(family: ModelFamily) -> Result<Self> {
        let spec = ModelSpec {
            family,
            prefactor: 1.0,
            potential: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gl_born_infeld(lambda: f64, mu: f64, nu: f64) -> Result<Self> {
        Self::new(ModelFamily::GLBornInfeld { lambda, mu, nu })
    }

    pub fn quadratic(c1: f64, c2: f64, c3: f64, eta: BilinearForm) -> Result<Self> {
        Self::new(ModelFamily::QuadraticTeleparallel { c1, c2, c3, eta })
    }

    pub fn hilbert(eta: BilinearForm) -> Result<Self> {
        Self::new(ModelFamily::HilbertTeleparallel { eta })
    }

    pub fn with_prefactor(mut self, prefactor: f64) -> Result<Self> {
        self.prefactor = prefactor;
        self.validate()?;
        Ok(self)
    }

    pub fn with_potential(mut self, potential: Potential) -> Self {
        self.potential = Some(potential);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = match &self.family {
            ModelFamily::GLBornInfeld { lambda, mu, nu } => [*lambda, *mu, *nu].iter().all(|v| v.is_finite()),
            ModelFamily::QuadraticTeleparallel { c1, c2, c3, eta } => {
                [*c1, *c2, *c3].iter().all(|v| v.is_finite()) && eta.matrix().is_finite()
            }
            ModelFamily::HilbertTeleparallel { eta } => eta.matrix().is_finite(),
        };
        if !finite || !self.prefactor.is_finite() {
            return Err(Error::InvalidParameter("model coefficients must be finite"));
        }
        Ok(())
    }

    /// `(c₁, c₂, c₃)` of the quadratic family, Hilbert included.
    pub fn quadratic_coefficients(&self) -> Option<[f64; 3]> {
        match &self.family {
            ModelFamily::GLBornInfeld { .. } => None,
            ModelFamily::QuadraticTeleparallel { c1, c2, c3, .. } => Some([*c1, *c2, *c3]),
            ModelFamily::HilbertTeleparallel { .. } => Some([1.0, 2.0, -4.0]),
        }
    }

    /// Internal metric the model needs, if any.
    pub fn eta(&self) -> Option<&BilinearForm> {
        match &self.family {
            ModelFamily::GLBornInfeld { .. } => None,
            ModelFamily::QuadraticTeleparallel { eta, .. } | ModelFamily::HilbertTeleparallel { eta } => Some(eta),
        }
    }

    pub fn is_gl_invariant(&self) -> bool {
        matches!(self.family, ModelFamily::GLBornInfeld { .. })
    }
}

/// Lagrange tensor with its root-determinant density.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeTensor {
    pub l: SquareMatrix,
    pub det: f64,
    /// The Lagrangian value.
    pub density: f64,
    pub sign: i8,
    /// `det L` vanishes (`√0` singularity).
    pub degenerate: bool,
}

fn is_degenerate(l: &SquareMatrix, det: f64) -> bool {
    let scale = l.max_abs();
    scale == 0.0 || math::abs(det) <= DEGENERACY_REL_TOL * math::powi(scale, l.dim() as i32)
}

/// `prefactor · √|det L|`.
pub fn sqrt_det(l: &SquareMatrix, prefactor: f64) -> LagrangeTensor {
    let det = l.determinant();
    LagrangeTensor {
        l: l.clone(),
        det,
        density: prefactor * math::sqrt(math::abs(det)),
        sign: math::sign(det),
        degenerate: is_degenerate(l, det),
    }
}

/// The GL(n)-invariant Lagrange tensor
/// `4λ S^k_{im} S^m_{jk} + 4μ T_i T_j + 4ν T_l S^l_{ij}` with `T_i = S^k_{ik}`.
pub fn gl_lagrange_tensor(s: &Tensor3, lambda: f64, mu: f64, nu: f64) -> SquareMatrix {
    let n = s.dim();
    let t = torsion_trace(s);
    let gamma = killing_tensor(&TorsionPoint::new(s.clone())).g;
    SquareMatrix::from_fn(n, |i, j| {
        let third: f64 = (0..n).map(|l| t[l] * s[(l, i, j)]).sum();
        lambda * gamma[(i, j)] + 4.0 * mu * (t[i] * t[j]) + 4.0 * nu * third
    })
}

/// `(J₁, J₂, J₃)`:
/// `J₁ = h_ai h^bj h^ck S^a_{bc} S^i_{jk}`, `J₂ = h^ij S^a_{ib} S^b_{ja}`,
/// `J₃ = h^ij S^a_{ai} S^b_{bj}`.
pub fn weitzenbock_invariants(tp: &TorsionPoint, h: &MetricPoint) -> Result<[f64; 3]> {
    let n = tp.dim();
    let hi = h.inverse()?;
    let s = &tp.s;
    let j1 = contract_j1(s, &h.g, hi);
    let mut j2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if hi[(i, j)] == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += s[(a, i, b)] * s[(b, j, a)];
                }
            }
            j2 += hi[(i, j)] * acc;
        }
    }
    let t = torsion_trace(s);
    let mut j3 = 0.0;
    for i in 0..n {
        for j in 0..n {
            j3 += hi[(i, j)] * t[i] * t[j];
        }
    }
    Ok([j1, j2, j3])
}

// g_ai g^bj g^ck S^a_{bc} S^i_{jk}
fn contract_j1(s: &Tensor3, g: &SquareMatrix, gi: &SquareMatrix) -> f64 {
    let n = s.dim();
    // Lower the upper index, raise the two lower ones, one at a time.
    let lowered = Tensor3::from_fn(n, |i, b, c| (0..n).map(|a| g[(a, i)] * s[(a, b, c)]).sum());
    let raised1 = Tensor3::from_fn(n, |i, j, c| (0..n).map(|b| gi[(b, j)] * lowered[(i, b, c)]).sum());
    let raised2 = Tensor3::from_fn(n, |i, j, k| (0..n).map(|c| gi[(c, k)] * raised1[(i, j, c)]).sum());
    raised2.contract_all(s)
}

/// Zeroth-order homogeneous scalars available to a [`Potential`]:
/// `p1 = γ_il γ^jm γ^kn S^i_{jk} S^l_{mn}`, `p2 = γ^ij T_i T_j`,
/// `p3 = Γ^i_j Γ^j_i` with `Γ^i_j = γ^im Γ_mj`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialScalars {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

pub fn potential_scalars(tp: &TorsionPoint) -> Result<PotentialScalars> {
    let n = tp.dim();
    let gamma = killing_tensor(tp);
    let gi = gamma.inverse()?;
    let t = tp.trace();
    let big = crate::teleparallel::gamma_big(tp);
    let mixed = gi.matmul(&big);
    let mut p2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            p2 += gi[(i, j)] * t[i] * t[j];
        }
    }
    Ok(PotentialScalars {
        p1: contract_j1(&tp.s, &gamma.g, gi),
        p2,
        p3: mixed.matmul(&mixed).trace(),
    })
}

/// Model Lagrangian at a torsion value; quadratic models need `h`.
pub fn evaluate_with_metric(spec: &ModelSpec, tp: &TorsionPoint, h: Option<&MetricPoint>) -> Result<LagrangeTensor> {
    let mut lt = match &spec.family {
        ModelFamily::GLBornInfeld { lambda, mu, nu } => {
            sqrt_det(&gl_lagrange_tensor(&tp.s, *lambda, *mu, *nu), spec.prefactor)
        }
        _ => {
            let c = spec.quadratic_coefficients().unwrap_or([0.0; 3]);
            let h = h.ok_or(Error::MissingField("metric h[e, η]"))?;
            let j = weitzenbock_invariants(tp, h)?;
            let density = spec.prefactor * (c[0] * j[0] + c[1] * j[1] + c[2] * j[2]) * h.sqrt_abs_det();
            LagrangeTensor {
                l: h.g.clone(),
                det: h.g.determinant(),
                density,
                sign: math::sign(density),
                degenerate: tp.s.max_abs() == 0.0,
            }
        }
    };
    if let Some(p) = spec.potential {
        lt.density *= p(&potential_scalars(tp)?);
    }
    Ok(lt)
}

/// Model Lagrangian at a frame point with torsion `tp`.
pub fn evaluate_model(spec: &ModelSpec, tp: &TorsionPoint, fp: &FramePoint) -> Result<LagrangeTensor> {
    let h = match spec.eta() {
        Some(eta) => Some(dirac_einstein_metric(fp, eta)?),
        None => None,
    };
    evaluate_with_metric(spec, tp, h.as_ref())
}
