//! Coordinate charts and frame fields `e_A = e^i_A ∂_i` on them.
//!
//! Group frames live on canonical coordinates of the first kind: the point
//! with coordinates `x` is `exp(x^A T_A)`. The co-frame there is
//! `e^A_i = [f(ad_x)]^A_i` with `f(z) = (1 - e^{-z}) / z`, and its dual legs
//! close with the algebra's own constants, `[e_A, e_B] = +c^C_{AB} e_C`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fd;
use crate::lie::{jacobi_residual, StructureConstants, JACOBI_TOL};
use crate::math;
use crate::tensor::{SquareMatrix, Tensor3, Tensor4};

/// Frames with `|det e| ≤` this are rejected.
pub const FRAME_DET_TOL: f64 = 1e-12;

/// Series for `f(ad_x)` stops once a term drops below this max-norm.
pub const SERIES_TERM_TOL: f64 = 1e-18;

/// Hard cap on series terms.
pub const SERIES_MAX_TERMS: usize = 64;

/// `‖ad_x‖_F` above this is rejected: the frame stays away from the first
/// zero of `f` at `|z| = 2π`.
pub const SERIES_NORM_LIMIT: f64 = 2.0 * PI * 0.9;

pub const DEFAULT_SAMPLE_COUNT: usize = 20;
pub const DEFAULT_SEED: u64 = 42;
/// Sample points are drawn from the chart box shrunk about its center.
pub const DEFAULT_SAMPLE_SCALE: f64 = 0.5;

/// Axis-aligned coordinate box.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    lower: Vec<f64>,
    upper: Vec<f64>,
    label: String,
}

impl Chart {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidChart("bounds must be non-empty and of equal length"));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidChart("lower bound must be below upper bound"));
        }
        Ok(Chart {
            lower,
            upper,
            label: label.into(),
        })
    }

    /// `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64, label: impl Into<String>) -> Result<Self> {
        Self::new(alloc::vec![-half; dim], alloc::vec![half; dim], label)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn axis_range(&self, axis: usize) -> (f64, f64) {
        (self.lower[axis], self.upper[axis])
    }

    pub fn with_axis_range(&self, axis: usize, lo: f64, hi: f64) -> Result<Self> {
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        lower[axis] = lo;
        upper[axis] = hi;
        Self::new(lower, upper, self.label.clone())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    /// The box scaled by `scale` about its center.
    pub fn sub_box(&self, scale: f64) -> Self {
        let (lower, upper) = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| {
                let c = 0.5 * (l + u);
                let h = 0.5 * (u - l) * scale;
                (c - h, c + h)
            })
            .unzip();
        Chart {
            lower,
            upper,
            label: self.label.clone(),
        }
    }
}

/// Seeded uniform points in the chart's default sampling sub-box.
pub fn sample_points(chart: &Chart, count: usize, seed: u64) -> Vec<Vec<f64>> {
    sample_points_scaled(chart, count, seed, DEFAULT_SAMPLE_SCALE)
}

pub fn sample_points_scaled(chart: &Chart, count: usize, seed: u64, scale: f64) -> Vec<Vec<f64>> {
    let sub = chart.sub_box(scale);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            sub.lower
                .iter()
                .zip(&sub.upper)
                .map(|(l, u)| l + (u - l) * rng.gen::<f64>())
                .collect()
        })
        .collect()
}

/// How frame partials are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeStrategy {
    /// Supplied by the frame source (possibly composed from a base frame's
    /// own strategy).
    Analytic,
    /// Fourth-order central differences with the given step.
    FiniteDifference { step: f64 },
}

impl Default for DerivativeStrategy {
    fn default() -> Self {
        DerivativeStrategy::FiniteDifference { step: fd::DEFAULT_STEP }
    }
}

/// Frame value at a point with its partials.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePoint {
    /// `e[(i, a)] = e^i_A`.
    pub e: SquareMatrix,
    /// `de[(i, a, j)] = ∂_j e^i_A`.
    pub de: Tensor3,
    /// `dde[(i, a, j, k)] = ∂_j ∂_k e^i_A`, when requested.
    pub dde: Option<Tensor4>,
}

impl FramePoint {
    pub fn dim(&self) -> usize {
        self.e.dim()
    }
}

/// `e^A_i`, the matrix inverse of `e^i_A`.
pub fn coframe(fp: &FramePoint) -> Result<SquareMatrix> {
    fp.e.inverse(FRAME_DET_TOL)
        .map_err(|_| Error::DegenerateFrame(math::abs(fp.e.determinant())))
}

/// Pointwise evaluator behind a [`FrameField`].
pub trait FrameSource: Send + Sync {
    fn dim(&self) -> usize;

    /// `e^i_A` at `x`.
    fn frame(&self, x: &[f64]) -> Result<SquareMatrix>;

    /// `∂_j e^i_A` at `x`, when the source can supply it.
    fn frame_partials(&self, _x: &[f64]) -> Option<Result<Tensor3>> {
        None
    }

    /// Copy of a composed source whose inner finite-difference step is
    /// replaced.
    fn with_fd_step(&self, _step: f64) -> Option<Arc<dyn FrameSource>> {
        None
    }
}

/// What a frame is known to be; drives the theorem checks.
#[derive(Clone)]
pub enum FrameKind {
    Generic,
    Constant,
    Group(StructureConstants),
    /// Trivial central extension; carries the spatial algebra.
    Extended(StructureConstants),
    Deformed(Box<Deformation>),
}

impl fmt::Debug for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameKind::Generic => f.write_str("Generic"),
            FrameKind::Constant => f.write_str("Constant"),
            FrameKind::Group(_) => f.write_str("Group"),
            FrameKind::Extended(_) => f.write_str("Extended"),
            FrameKind::Deformed(d) => write!(f, "Deformed({:?})", d.spec),
        }
    }
}

/// Base frame and deformation behind a deformed frame.
#[derive(Clone)]
pub struct Deformation {
    pub base: FrameField,
    pub spatial: StructureConstants,
    pub spec: DeformationSpec,
}

#[derive(Clone)]
pub struct FrameField {
    chart: Chart,
    source: Arc<dyn FrameSource>,
    strategy: DerivativeStrategy,
    kind: FrameKind,
    label: String,
}

impl fmt::Debug for FrameField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameField")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("strategy", &self.strategy)
            .field("chart", &self.chart)
            .finish()
    }
}

impl FrameField {
    pub fn new(
        chart: Chart,
        source: Arc<dyn FrameSource>,
        strategy: DerivativeStrategy,
        label: impl Into<String>,
    ) -> Result<Self> {
        if chart.dim() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                got: source.dim(),
            });
        }
        Ok(FrameField {
            chart,
            source,
            strategy,
            kind: FrameKind::Generic,
            label: label.into(),
        })
    }

    /// Frame given by a closure, differentiated numerically.
    pub fn from_fn<F>(chart: Chart, label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<SquareMatrix> + Send + Sync + 'static,
    {
        let dim = chart.dim();
        Self::new(
            chart,
            Arc::new(FnSource { dim, f }),
            DerivativeStrategy::default(),
            label,
        )
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &FrameKind {
        &self.kind
    }

    pub fn strategy(&self) -> DerivativeStrategy {
        self.strategy
    }

    pub fn with_chart(mut self, chart: Chart) -> Result<Self> {
        if chart.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: chart.dim(),
            });
        }
        self.chart = chart;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same frame with every finite-difference step (including those of
    /// composed base frames) set to `step`.
    pub fn with_fd_step(&self, step: f64) -> Self {
        let mut out = self.clone();
        if let DerivativeStrategy::FiniteDifference { .. } = out.strategy {
            out.strategy = DerivativeStrategy::FiniteDifference { step };
        }
        if let Some(src) = self.source.with_fd_step(step) {
            out.source = src;
        }
        if let FrameKind::Deformed(d) = &self.kind {
            let mut d = (**d).clone();
            d.base = d.base.with_fd_step(step);
            out.kind = FrameKind::Deformed(Box::new(d));
        }
        out
    }

    /// `e^i_A` at `x`; fails on degenerate frames.
    pub fn value(&self, x: &[f64]) -> Result<SquareMatrix> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let e = self.source.frame(x)?;
        let det = e.determinant();
        if !(math::abs(det) > FRAME_DET_TOL) {
            return Err(Error::DegenerateFrame(math::abs(det)));
        }
        Ok(e)
    }

    fn partials(&self, x: &[f64]) -> Result<Tensor3> {
        match self.strategy {
            DerivativeStrategy::Analytic => match self.source.frame_partials(x) {
                Some(r) => r,
                None => self.fd_partials(x, fd::DEFAULT_STEP),
            },
            DerivativeStrategy::FiniteDifference { step } => self.fd_partials(x, step),
        }
    }

    fn fd_partials(&self, x: &[f64], step: f64) -> Result<Tensor3> {
        let n = self.dim();
        let grad = fd::gradient(|y| Ok(self.source.frame(y)?.as_slice().to_vec()), x, step)?;
        Ok(Tensor3::from_fn(n, |i, a, j| grad[j][i * n + a]))
    }

    /// Value and first partials.
    pub fn point(&self, x: &[f64]) -> Result<FramePoint> {
        let e = self.value(x)?;
        let de = self.partials(x)?;
        Ok(FramePoint { e, de, dde: None })
    }

    /// Value, first partials, and second partials (nested first derivatives
    /// with step [`fd::SECOND_STEP`]).
    pub fn point_with_second(&self, x: &[f64]) -> Result<FramePoint> {
        let mut fp = self.point(x)?;
        let n = self.dim();
        let grad = fd::gradient(|y| Ok(self.partials(y)?.as_slice().to_vec()), x, fd::SECOND_STEP)?;
        // grad[k] holds ∂_k of de[(i, a, j)].
        fp.dde = Some(Tensor4::from_fn(n, |i, a, j, k| grad[k][(i * n + a) * n + j]));
        Ok(fp)
    }

    /// Frame `e·A` for a constant invertible `A`: `e'_A = e_B A^B_A`.
    pub fn transformed(&self, a: &SquareMatrix) -> Result<Self> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        if !(math::abs(a.determinant()) > FRAME_DET_TOL) {
            return Err(Error::DegenerateFrame(math::abs(a.determinant())));
        }
        Ok(FrameField {
            chart: self.chart.clone(),
            source: Arc::new(TransformedSource {
                base: self.clone(),
                a: a.clone(),
            }),
            strategy: DerivativeStrategy::Analytic,
            kind: FrameKind::Generic,
            label: format!("{}·A", self.label),
        })
    }
}

struct FnSource<F> {
    dim: usize,
    f: F,
}

impl<F> FrameSource for FnSource<F>
where
    F: Fn(&[f64]) -> Result<SquareMatrix> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn frame(&self, x: &[f64]) -> Result<SquareMatrix> {
        (self.f)(x)
    }
}

struct ConstantSource(usize);

impl FrameSource for ConstantSource {
    fn dim(&self) -> usize {
        self.0
    }

    fn frame(&self, _x: &[f64]) -> Result<SquareMatrix> {
        Ok(SquareMatrix::identity(self.0))
    }

    fn frame_partials(&self, _x: &[f64]) -> Option<Result<Tensor3>> {
        Some(Ok(Tensor3::zeros(self.0)))
    }
}

/// `e^i_A = δ^i_A` on `[-1, 1]^n`, with exact zero partials.
pub fn constant_frame(n: usize) -> Result<FrameField> {
    let mut f = FrameField::new(
        Chart::cube(n, 1.0, "cube")?,
        Arc::new(ConstantSource(n)),
        DerivativeStrategy::Analytic,
        format!("constant({n})"),
    )?;
    f.kind = FrameKind::Constant;
    Ok(f)
}

struct GroupSource {
    sc: StructureConstants,
}

impl GroupSource {
    fn coframe(&self, x: &[f64]) -> Result<SquareMatrix> {
        let n = self.sc.dim();
        let neg_ad = self.sc.ad_matrix(x).scale(-1.0);
        let norm = neg_ad.frobenius();
        if !(norm <= SERIES_NORM_LIMIT) {
            return Err(Error::SeriesNonConvergent(norm));
        }
        // f(z) = Σ_k (-z)^k / (k+1)!
        let mut term = SquareMatrix::identity(n);
        let mut sum = term.clone();
        for k in 1..SERIES_MAX_TERMS {
            term = term.matmul(&neg_ad).scale(1.0 / (k as f64 + 1.0));
            sum = sum.add(&term);
            if term.max_abs() < SERIES_TERM_TOL {
                break;
            }
        }
        Ok(sum)
    }
}

impl FrameSource for GroupSource {
    fn dim(&self) -> usize {
        self.sc.dim()
    }

    fn frame(&self, x: &[f64]) -> Result<SquareMatrix> {
        let cof = self.coframe(x)?;
        cof.inverse(FRAME_DET_TOL)
            .map_err(|_| Error::DegenerateFrame(math::abs(cof.determinant())))
    }
}

fn check_jacobi(sc: &StructureConstants) -> Result<()> {
    let r = jacobi_residual(sc);
    if !(r < JACOBI_TOL) {
        return Err(Error::JacobiViolation(r));
    }
    Ok(())
}

/// Invariant frame of the group of `sc` on exponential coordinates
/// `[-radius, radius]^n`. Partials by finite differences.
pub fn group_frame(sc: &StructureConstants, radius: f64) -> Result<FrameField> {
    check_jacobi(sc)?;
    let n = sc.dim();
    let mut f = FrameField::new(
        Chart::cube(n, radius, "exponential coordinates")?,
        Arc::new(GroupSource { sc: sc.clone() }),
        DerivativeStrategy::default(),
        "group",
    )?;
    f.kind = FrameKind::Group(sc.clone());
    Ok(f)
}

struct ExtendedSource {
    group: GroupSource,
}

impl FrameSource for ExtendedSource {
    fn dim(&self) -> usize {
        self.group.dim() + 1
    }

    fn frame(&self, x: &[f64]) -> Result<SquareMatrix> {
        let inner = self.group.frame(&x[1..])?;
        Ok(SquareMatrix::from_fn(self.dim(), |i, a| match (i, a) {
            (0, 0) => 1.0,
            (0, _) | (_, 0) => 0.0,
            _ => inner[(i - 1, a - 1)],
        }))
    }
}

/// Frame of `R × G` in adapted coordinates `(τ, x)`: `E_0 = ∂_τ` and the
/// spatial legs are the group frame of `sc`. The chart is
/// `τ ∈ [-1, 1]` times `[-radius, radius]^{n-1}`.
pub fn extended_frame(sc: &StructureConstants, radius: f64) -> Result<FrameField> {
    check_jacobi(sc)?;
    let n = sc.dim() + 1;
    let mut f = FrameField::new(
        Chart::cube(n, radius, "adapted coordinates")?.with_axis_range(0, -1.0, 1.0)?,
        Arc::new(ExtendedSource {
            group: GroupSource { sc: sc.clone() },
        }),
        DerivativeStrategy::default(),
        "extended",
    )?;
    f.kind = FrameKind::Extended(sc.clone());
    Ok(f)
}

/// Scalar profile `ρ(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoProfile {
    /// `e^{rate·τ}`.
    Exp { rate: f64 },
    /// `offset + slope·τ`.
    Affine { offset: f64, slope: f64 },
    /// `coeff·τ^exponent`.
    Power { coeff: f64, exponent: i32 },
}

impl RhoProfile {
    /// `(ρ, dρ/dτ)`.
    pub fn eval(&self, tau: f64) -> (f64, f64) {
        match *self {
            RhoProfile::Exp { rate } => {
                let v = math::exp(rate * tau);
                (v, rate * v)
            }
            RhoProfile::Affine { offset, slope } => (offset + slope * tau, slope),
            RhoProfile::Power { coeff, exponent } => {
                let d = if exponent == 0 {
                    0.0
                } else {
                    coeff * exponent as f64 * math::powi(tau, exponent - 1)
                };
                (coeff * math::powi(tau, exponent), d)
            }
        }
    }
}

/// Which legs get rescaled by `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformVariant {
    /// `E` itself.
    Base,
    /// `e = ρE`: every leg.
    Scaled,
    /// `'e_0 = E_0`, `'e_Σ = ρE_Σ`.
    PrimeScaled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationSpec {
    pub rho: RhoProfile,
    pub variant: DeformVariant,
}

const RHO_SCAN_POINTS: usize = 2001;

impl DeformationSpec {
    /// Checks `ρ > 0` and that `dρ/dτ` neither vanishes nor changes sign on
    /// `[lo, hi]`.
    pub fn validate(&self, lo: f64, hi: f64) -> Result<()> {
        let mut prev_sign = 0i8;
        for k in 0..RHO_SCAN_POINTS {
            let tau = lo + (hi - lo) * k as f64 / (RHO_SCAN_POINTS - 1) as f64;
            let (r, dr) = self.rho.eval(tau);
            let s = math::sign(dr);
            if s == 0 || (prev_sign != 0 && s != prev_sign) {
                return Err(Error::CriticalRho(tau));
            }
            if !(r > 0.0) {
                return Err(Error::NonPositiveRho(tau));
            }
            prev_sign = s;
        }
        Ok(())
    }
}

struct DeformedSource {
    base: FrameField,
    spec: DeformationSpec,
}

impl DeformedSource {
    fn leg_scale(&self, leg: usize, tau: f64) -> (f64, f64) {
        let (r, dr) = self.spec.rho.eval(tau);
        match (self.spec.variant, leg) {
            (DeformVariant::Base, _) | (DeformVariant::PrimeScaled, 0) => (1.0, 0.0),
            _ => (r, dr),
        }
    }
}

impl FrameSource for DeformedSource {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn frame(&self, x: &[f64]) -> Result<SquareMatrix> {
        let e = self.base.source.frame(x)?;
        Ok(SquareMatrix::from_fn(self.dim(), |i, a| {
            self.leg_scale(a, x[0]).0 * e[(i, a)]
        }))
    }

    fn frame_partials(&self, x: &[f64]) -> Option<Result<Tensor3>> {
        let base = match self.base.point(x) {
            Ok(p) => p,
            Err(e) => return Some(Err(e)),
        };
        let n = self.dim();
        Some(Ok(Tensor3::from_fn(n, |i, a, j| {
            let (s, ds) = self.leg_scale(a, x[0]);
            let tau_term = if j == 0 { ds * base.e[(i, a)] } else { 0.0 };
            tau_term + s * base.de[(i, a, j)]
        })))
    }

    fn with_fd_step(&self, step: f64) -> Option<Arc<dyn FrameSource>> {
        Some(Arc::new(DeformedSource {
            base: self.base.with_fd_step(step),
            spec: self.spec,
        }))
    }
}

/// Rescales the legs of an extended frame by `ρ(τ)` after validating `ρ`
/// on the chart's τ-range.
pub fn deform(frame: &FrameField, spec: DeformationSpec) -> Result<FrameField> {
    if !matches!(frame.kind, FrameKind::Extended(_)) {
        return Err(Error::NotExtendedFrame);
    }
    let (lo, hi) = frame.chart.axis_range(0);
    spec.validate(lo, hi)?;
    deform_unchecked(frame, spec)
}

/// [`deform`] without the profile check (a constant `ρ` is allowed).
pub fn deform_unchecked(frame: &FrameField, spec: DeformationSpec) -> Result<FrameField> {
    let spatial = match &frame.kind {
        FrameKind::Extended(sc) => sc.clone(),
        _ => return Err(Error::NotExtendedFrame),
    };
    let variant = match spec.variant {
        DeformVariant::Base => "E",
        DeformVariant::Scaled => "e",
        DeformVariant::PrimeScaled => "e'",
    };
    Ok(FrameField {
        chart: frame.chart.clone(),
        source: Arc::new(DeformedSource {
            base: frame.clone(),
            spec,
        }),
        strategy: DerivativeStrategy::Analytic,
        kind: FrameKind::Deformed(Box::new(Deformation {
            base: frame.clone(),
            spatial,
            spec,
        })),
        label: format!("deformed[{variant}]"),
    })
}

struct TransformedSource {
    base: FrameField,
    a: SquareMatrix,
}

impl FrameSource for TransformedSource {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn frame(&self, x: &[f64]) -> Result<SquareMatrix> {
        Ok(self.base.source.frame(x)?.matmul(&self.a))
    }

    fn frame_partials(&self, x: &[f64]) -> Option<Result<Tensor3>> {
        let base = match self.base.point(x) {
            Ok(p) => p,
            Err(e) => return Some(Err(e)),
        };
        let n = self.dim();
        Some(Ok(Tensor3::from_fn(n, |i, a, j| {
            (0..n).map(|b| base.de[(i, b, j)] * self.a[(b, a)]).sum()
        })))
    }

    fn with_fd_step(&self, step: f64) -> Option<Arc<dyn FrameSource>> {
        Some(Arc::new(TransformedSource {
            base: self.base.with_fd_step(step),
            a: self.a.clone(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;

    // Lie bracket of legs straight from frame partials:
    // [e_A, e_B]^i = e^j_A ∂_j e^i_B - e^j_B ∂_j e^i_A, then γ^C_AB = e^C_i [..]^i.
    fn bracket_constants(fp: &FramePoint) -> Tensor3 {
        let n = fp.dim();
        let cof = coframe(fp).unwrap();
        Tensor3::from_fn(n, |c, a, b| {
            (0..n)
                .map(|i| {
                    let br: f64 = (0..n)
                        .map(|j| fp.e[(j, a)] * fp.de[(i, b, j)] - fp.e[(j, b)] * fp.de[(i, a, j)])
                        .sum();
                    cof[(c, i)] * br
                })
                .sum()
        })
    }

    #[test]
    fn coframe_examples() {
        let id = FramePoint {
            e: SquareMatrix::identity(3),
            de: Tensor3::zeros(3),
            dde: None,
        };
        assert_eq!(coframe(&id).unwrap(), SquareMatrix::identity(3));
        let d = FramePoint {
            e: SquareMatrix::diag(&[2.0, 3.0]),
            de: Tensor3::zeros(2),
            dde: None,
        };
        let cof = coframe(&d).unwrap();
        assert!(cof.max_abs_diff(&SquareMatrix::diag(&[0.5, 1.0 / 3.0])) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = SquareMatrix::from_fn(4, |i, j| rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 });
        let fp = FramePoint {
            e,
            de: Tensor3::zeros(4),
            dde: None,
        };
        let cof = coframe(&fp).unwrap();
        assert!(cof.matmul(&fp.e).max_abs_diff(&SquareMatrix::identity(4)) <= 1e-12);
        let bad = FramePoint {
            e: SquareMatrix::zeros(2),
            de: Tensor3::zeros(2),
            dde: None,
        };
        assert!(matches!(coframe(&bad), Err(Error::DegenerateFrame(_))));
    }

    #[test]
    fn constant_frame_is_identity_with_zero_partials() {
        let f = constant_frame(3).unwrap();
        let fp = f.point(&[0.1, -0.2, 0.3]).unwrap();
        assert_eq!(fp.e, SquareMatrix::identity(3));
        assert_eq!(fp.de, Tensor3::zeros(3));
    }

    #[test]
    fn group_frame_at_identity_and_abelian() {
        let f = group_frame(&catalog("su2").unwrap(), 1.0).unwrap();
        assert_eq!(f.value(&[0.0; 3]).unwrap(), SquareMatrix::identity(3));
        let ab = group_frame(&catalog("abelian(3)").unwrap(), 1.0).unwrap();
        assert_eq!(ab.value(&[0.4, -0.3, 0.2]).unwrap(), SquareMatrix::identity(3));
    }

    #[test]
    fn group_frame_legs_close_on_structure_constants() {
        for name in ["su2", "sl2r", "direct_sum(su2,su2)"] {
            let sc = catalog(name).unwrap();
            let f = group_frame(&sc, 1.0).unwrap();
            for x in sample_points(f.chart(), 20, DEFAULT_SEED) {
                let fp = f.point(&x).unwrap();
                let gamma = bracket_constants(&fp);
                assert!(gamma.max_abs_diff(sc.constants()) < 1e-8, "{name} at {x:?}");
                let cof = coframe(&fp).unwrap();
                assert!(cof.matmul(&fp.e).max_abs_diff(&SquareMatrix::identity(sc.dim())) < 1e-12);
            }
        }
    }

    #[test]
    fn su2_bracket_at_norm_point_three() {
        let sc = catalog("su2").unwrap();
        let f = group_frame(&sc, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = math::sqrt(v.iter().map(|a| a * a).sum());
        let x: Vec<f64> = v.iter().map(|a| 0.3 * a / norm).collect();
        let gamma = bracket_constants(&f.point(&x).unwrap());
        assert!(gamma.max_abs_diff(sc.constants()) < 1e-10);
    }

    #[test]
    fn second_partials_are_symmetric() {
        let f = group_frame(&catalog("su2").unwrap(), 1.0).unwrap();
        let fp = f.point_with_second(&[0.2, -0.1, 0.35]).unwrap();
        let dde = fp.dde.unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for a in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        worst = worst.max((dde[(i, a, j, k)] - dde[(i, a, k, j)]).abs());
                    }
                }
            }
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn group_frame_errors() {
        let f = group_frame(&catalog("su2").unwrap(), 10.0).unwrap();
        assert!(matches!(f.value(&[6.0, 0.0, 0.0]), Err(Error::SeriesNonConvergent(_))));
        let mut c = catalog("su2").unwrap().constants().clone();
        c[(1, 1, 2)] += 0.1;
        c[(1, 2, 1)] -= 0.1;
        let bad = StructureConstants::new(c).unwrap();
        assert!(matches!(group_frame(&bad, 1.0), Err(Error::JacobiViolation(_))));
    }

    #[test]
    fn extended_frame_blocks() {
        let sc = catalog("su2").unwrap();
        let f = extended_frame(&sc, 1.0).unwrap();
        assert_eq!(f.dim(), 4);
        assert_eq!(f.chart().axis_range(0), (-1.0, 1.0));
        let x = [0.3, 0.1, -0.2, 0.25];
        let fp = f.point(&x).unwrap();
        assert_eq!(fp.e[(0, 0)], 1.0);
        for s in 1..4 {
            assert_eq!(fp.e[(0, s)], 0.0);
            assert_eq!(fp.e[(s, 0)], 0.0);
        }
        let gamma = bracket_constants(&fp);
        for c in 0..4 {
            for b in 0..4 {
                assert!(gamma[(c, 0, b)].abs() < 1e-10);
            }
        }
    }

    #[test]
    fn deformation_rules() {
        let sc = catalog("su2").unwrap();
        let ext = extended_frame(&sc, 1.0).unwrap();
        let x = [0.2, 0.1, -0.3, 0.15];

        let unit = deform_unchecked(
            &ext,
            DeformationSpec {
                rho: RhoProfile::Affine {
                    offset: 1.0,
                    slope: 0.0,
                },
                variant: DeformVariant::Scaled,
            },
        )
        .unwrap();
        assert_eq!(unit.value(&x).unwrap(), ext.value(&x).unwrap());

        let critical = DeformationSpec {
            rho: RhoProfile::Power {
                coeff: 1.0,
                exponent: 2,
            },
            variant: DeformVariant::Scaled,
        };
        assert!(matches!(deform(&ext, critical), Err(Error::CriticalRho(_))));
        let group = group_frame(&sc, 1.0).unwrap();
        let spec = DeformationSpec {
            rho: RhoProfile::Exp { rate: 1.0 },
            variant: DeformVariant::Scaled,
        };
        assert!(matches!(deform(&group, spec), Err(Error::NotExtendedFrame)));

        // Composed partials agree with direct differencing of the deformed values.
        for variant in [DeformVariant::Scaled, DeformVariant::PrimeScaled] {
            let d = deform(
                &ext,
                DeformationSpec {
                    rho: RhoProfile::Exp { rate: 1.0 },
                    variant,
                },
            )
            .unwrap();
            let composed = d.point(&x).unwrap().de;
            let direct = FrameField::from_fn(d.chart().clone(), "direct", {
                let d = d.clone();
                move |y| d.value(y)
            })
            .unwrap()
            .point(&x)
            .unwrap()
            .de;
            assert!(composed.max_abs_diff(&direct) < 1e-9);
        }
    }

    #[test]
    fn rho_profiles() {
        assert_eq!(RhoProfile::Exp { rate: 2.0 }.eval(0.0), (1.0, 2.0));
        assert_eq!(
            RhoProfile::Affine {
                offset: 1.0,
                slope: 0.5
            }
            .eval(1.0),
            (1.5, 0.5)
        );
        assert_eq!(
            RhoProfile::Power {
                coeff: 1.0,
                exponent: 2
            }
            .eval(3.0),
            (9.0, 6.0)
        );
        let aff = DeformationSpec {
            rho: RhoProfile::Affine {
                offset: 1.0,
                slope: 0.5,
            },
            variant: DeformVariant::Scaled,
        };
        assert!(aff.validate(0.0, 1.0).is_ok());
        assert!(matches!(aff.validate(-3.0, 1.0), Err(Error::NonPositiveRho(_))));
    }

    #[test]
    fn sampling_is_seeded_and_inside_sub_box() {
        let chart = Chart::cube(3, 1.0, "c").unwrap();
        let a = sample_points(&chart, 20, 42);
        assert_eq!(a, sample_points(&chart, 20, 42));
        assert_ne!(a, sample_points(&chart, 20, 43));
        assert!(a.iter().all(|p| chart.sub_box(0.5).contains(p)));
        assert!(Chart::new(alloc::vec![1.0], alloc::vec![0.0], "bad").is_err());
    }
}
