//! Theorem suites: residual sweeps over sampled chart points, metric-form
//! and signature checks for deformed frames, and the stationary-versus-
//! expanding contrast between `γ[e]` and `h[e, η]`.

use std::collections::BTreeMap;

use nleg_core::frame::{
    deform, deform_unchecked, extended_frame, group_frame, sample_points, sample_points_scaled, Deformation, FrameKind,
    DEFAULT_SAMPLE_COUNT, DEFAULT_SAMPLE_SCALE, DEFAULT_SEED,
};
use nleg_core::lagrangian::ModelFamily;
use nleg_core::lie::{catalog, is_semisimple, killing_form, SEMISIMPLE_TOL};
use nleg_core::teleparallel::{dirac_einstein_metric, frame_torsion, killing_tensor};
use nleg_core::tensor::DEFAULT_ZERO_TOL;
use nleg_core::variation::residual_with_step;
use nleg_core::{
    fd, BilinearForm, DeformVariant, DeformationSpec, Error, FrameField, ModelSpec, RhoProfile, Signature, SquareMatrix,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{SuiteError, SuiteResult};

pub const DEFAULT_TOL: f64 = 1e-6;
/// A pass needs at least this many sample points.
pub const MIN_PASS_POINTS: usize = 20;
pub const METRIC_FORM_TOL: f64 = 1e-8;
pub const VARIANT_TOL: f64 = 1e-10;
pub const EXPANSION_SAMPLES: usize = 10;
/// Points used for the `h` / `h/2` convergence table.
pub const CONVERGENCE_POINTS: usize = 5;
pub const DEFAULT_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
    /// Half-width of the chart cube.
    pub radius: f64,
    pub fd_step: f64,
    pub tol: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            count: DEFAULT_SAMPLE_COUNT,
            seed: DEFAULT_SEED,
            radius: DEFAULT_RADIUS,
            fd_step: fd::DEFAULT_STEP,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInfo {
    pub family: String,
    pub parameters: BTreeMap<String, f64>,
    pub prefactor: f64,
    pub potential: bool,
}

impl From<&ModelSpec> for ModelInfo {
    fn from(spec: &ModelSpec) -> Self {
        let (family, params): (&str, Vec<(&str, f64)>) = match &spec.family {
            ModelFamily::GLBornInfeld { lambda, mu, nu } => {
                ("gl-born-infeld", vec![("lambda", *lambda), ("mu", *mu), ("nu", *nu)])
            }
            ModelFamily::QuadraticTeleparallel { c1, c2, c3, .. } => {
                ("quadratic", vec![("c1", *c1), ("c2", *c2), ("c3", *c3)])
            }
            ModelFamily::HilbertTeleparallel { .. } => ("hilbert", vec![]),
        };
        ModelInfo {
            family: family.to_string(),
            parameters: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            prefactor: spec.prefactor,
            potential: spec.potential.is_some(),
        }
    }
}

/// `[plus, minus, zero]`.
pub type SignatureTriple = [usize; 3];

fn triple(s: Signature) -> SignatureTriple {
    [s.plus, s.minus, s.zero]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub coords: Vec<f64>,
    /// `None` at degenerate points.
    pub max_abs: Option<f64>,
    pub frobenius: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub step: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub fd_step: f64,
    pub seed: u64,
    pub count: usize,
    pub radius: f64,
    pub tolerance: f64,
    pub timestamp: Option<String>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricFormReport {
    /// Max over points of `|γ - closed form|`.
    pub max_deviation: f64,
    /// Max over points of `|γ[e] - γ['e]|`.
    pub variant_deviation: f64,
    /// Max over points of `|∂_τ γ_AB|` in the undeformed leg basis.
    pub adapted_tau_derivative: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub taus: Vec<f64>,
    /// `ln |det|` of the spatial block of `h[e, η]`.
    pub h_log_det: Vec<f64>,
    /// `ln |det|` of the spatial block of `γ[e]`.
    pub gamma_log_det: Vec<f64>,
    /// Fitted per-component exponential rate of the `h` spatial block.
    pub h_rate: f64,
    pub gamma_rate: f64,
    /// Sign of `h_00` for `β` and for `-β`.
    pub h_time_sign: [i8; 2],
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub model: ModelInfo,
    pub frame: String,
    pub points: Vec<PointRecord>,
    pub verdict: Verdict,
    /// Signature of `γ[e]` at each point (`None` where `γ` is unavailable).
    pub signature: Vec<Option<SignatureTriple>>,
    pub convergence: Vec<ConvergenceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_form: Option<MetricFormReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionReport>,
    pub metadata: Metadata,
}

impl ResidualReport {
    pub fn max_residual(&self) -> Option<f64> {
        self.points.iter().filter_map(|p| p.max_abs).reduce(f64::max)
    }

    pub fn degenerate_count(&self) -> usize {
        self.points.iter().filter(|p| p.degenerate).count()
    }

    /// Residual verdict together with any attached metric-form verdict.
    pub fn overall(&self) -> Verdict {
        match &self.metric_form {
            Some(m) if !m.verdict.passed() => Verdict::Fail,
            _ => self.verdict,
        }
    }
}

/// Pass iff enough points were sampled, one of them is non-degenerate, and
/// every non-degenerate point is below `tol`.
pub fn residual_verdict(points: &[PointRecord], tol: f64) -> Verdict {
    let live: Vec<f64> = points.iter().filter_map(|p| p.max_abs).collect();
    let ok = points.len() >= MIN_PASS_POINTS && !live.is_empty() && live.iter().all(|&r| r < tol);
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn residual_at(frame: &FrameField, spec: &ModelSpec, x: &[f64], step: f64) -> SuiteResult<Option<f64>> {
    Ok(point_record(frame, spec, x, step)?.max_abs)
}

fn point_record(frame: &FrameField, spec: &ModelSpec, x: &[f64], step: f64) -> SuiteResult<PointRecord> {
    match residual_with_step(frame, spec, x, step) {
        Ok(r) => Ok(PointRecord {
            coords: x.to_vec(),
            max_abs: Some(r.max_abs),
            frobenius: Some(r.frobenius),
            degenerate: false,
        }),
        Err(Error::DegenerateLagrangeTensor(_)) => Ok(PointRecord {
            coords: x.to_vec(),
            max_abs: None,
            frobenius: None,
            degenerate: true,
        }),
        Err(e) => Err(e.into()),
    }
}

fn gamma_signature(frame: &FrameField, x: &[f64]) -> SuiteResult<Option<SignatureTriple>> {
    let (_, _, tp) = frame_torsion(frame, x)?;
    match killing_tensor(&tp).g.signature(DEFAULT_ZERO_TOL) {
        Ok(s) => Ok(Some(triple(s))),
        Err(_) => Ok(None),
    }
}

/// `SOURCE_DATE_EPOCH` when set; reports are otherwise timestamp-free so
/// that identical runs give identical bytes.
pub fn report_timestamp() -> Option<String> {
    std::env::var("SOURCE_DATE_EPOCH").ok().filter(|s| !s.is_empty())
}

/// Residual sweep of `spec` on `frame` over `sampling.count` seeded points.
pub fn residual_report(frame: &FrameField, spec: &ModelSpec, sampling: &Sampling) -> SuiteResult<ResidualReport> {
    if !(sampling.fd_step > 0.0 && sampling.fd_step.is_finite()) {
        return Err(SuiteError::Config("fd step must be positive".into()));
    }
    if sampling.tol.is_nan() || sampling.tol <= 0.0 {
        return Err(SuiteError::Config("tolerance must be positive".into()));
    }
    let h = sampling.fd_step;
    let frame = frame.with_fd_step(h);
    let xs = sample_points(frame.chart(), sampling.count, sampling.seed);
    let evaluated: Vec<SuiteResult<(PointRecord, Option<SignatureTriple>)>> = xs
        .par_iter()
        .map(|x| Ok((point_record(&frame, spec, x, h)?, gamma_signature(&frame, x)?)))
        .collect();
    let mut points = Vec::with_capacity(xs.len());
    let mut signature = Vec::with_capacity(xs.len());
    for r in evaluated {
        let (p, s) = r?;
        points.push(p);
        signature.push(s);
    }
    let verdict = residual_verdict(&points, sampling.tol);
    let convergence = convergence_table(&frame, spec, &points, h)?;
    Ok(ResidualReport {
        model: ModelInfo::from(spec),
        frame: frame.label().to_string(),
        points,
        verdict,
        signature,
        convergence,
        metric_form: None,
        expansion: None,
        metadata: Metadata {
            fd_step: h,
            seed: sampling.seed,
            count: sampling.count,
            radius: sampling.radius,
            tolerance: sampling.tol,
            timestamp: report_timestamp(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

fn convergence_table(
    frame: &FrameField,
    spec: &ModelSpec,
    points: &[PointRecord],
    h: f64,
) -> SuiteResult<Vec<ConvergenceRow>> {
    let live: Vec<&PointRecord> = points
        .iter()
        .filter(|p| !p.degenerate)
        .take(CONVERGENCE_POINTS)
        .collect();
    if live.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows = Vec::with_capacity(2);
    for step in [h, 0.5 * h] {
        let f = frame.with_fd_step(step);
        let worst = live
            .par_iter()
            .map(|p| residual_at(&f, spec, &p.coords, step))
            .collect::<SuiteResult<Vec<_>>>()?
            .into_iter()
            .flatten()
            .fold(0.0, f64::max);
        rows.push(ConvergenceRow { step, max_abs: worst });
    }
    Ok(rows)
}

fn semisimple_algebra(name: &str) -> SuiteResult<nleg_core::StructureConstants> {
    let sc = catalog(name)?;
    if !is_semisimple(&sc, SEMISIMPLE_TOL) {
        return Err(SuiteError::NotSemisimple(name.to_string()));
    }
    Ok(sc)
}

/// Residual sweep on the invariant frame of a semisimple group.
pub fn verify_theorem1(algebra: &str, spec: &ModelSpec, sampling: &Sampling) -> SuiteResult<ResidualReport> {
    let sc = semisimple_algebra(algebra)?;
    let frame = group_frame(&sc, sampling.radius)?.with_label(format!("group({algebra})"));
    residual_report(&frame, spec, sampling)
}

/// A deformation profile with the τ-range it is checked on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoChoice {
    pub name: &'static str,
    pub profile: RhoProfile,
    /// Restriction of the chart's τ-axis; `None` keeps `[-1, 1]`.
    pub tau_range: Option<(f64, f64)>,
}

pub const RHO_PRESETS: &[&str] = &["exp", "exp2", "affine"];

impl RhoChoice {
    /// `exp`: `e^τ`; `exp2`: `e^{2τ}`; `affine`: `1 + τ/2` on `τ ∈ [0, 1]`.
    pub fn preset(name: &str) -> SuiteResult<Self> {
        let (name, profile, tau_range) = match name {
            "exp" => ("exp", RhoProfile::Exp { rate: 1.0 }, None),
            "exp2" => ("exp2", RhoProfile::Exp { rate: 2.0 }, None),
            "affine" => (
                "affine",
                RhoProfile::Affine {
                    offset: 1.0,
                    slope: 0.5,
                },
                Some((0.0, 1.0)),
            ),
            other => {
                return Err(SuiteError::Config(format!(
                    "unknown rho preset `{other}` (expected one of {})",
                    RHO_PRESETS.join(", ")
                )))
            }
        };
        Ok(RhoChoice {
            name,
            profile,
            tau_range,
        })
    }
}

/// `deform(extended_frame(algebra))` for `rho` and `variant`.
pub fn deformed_frame(algebra: &str, rho: &RhoChoice, variant: DeformVariant, radius: f64) -> SuiteResult<FrameField> {
    let sc = semisimple_algebra(algebra)?;
    let mut ext = extended_frame(&sc, radius)?;
    if let Some((lo, hi)) = rho.tau_range {
        let chart = ext.chart().with_axis_range(0, lo, hi)?;
        ext = ext.with_chart(chart)?;
    }
    let v = match variant {
        DeformVariant::Base => "E",
        DeformVariant::Scaled => "e",
        DeformVariant::PrimeScaled => "e'",
    };
    Ok(deform(
        &ext,
        DeformationSpec {
            rho: rho.profile,
            variant,
        },
    )?
    .with_label(format!("{v}[R x {algebra}, rho={}]", rho.name)))
}

/// Residual sweep on a deformed central extension, with the metric-form
/// check and the expansion contrast attached.
pub fn verify_theorem2(
    algebra: &str,
    rho: &RhoChoice,
    variant: DeformVariant,
    spec: &ModelSpec,
    sampling: &Sampling,
) -> SuiteResult<ResidualReport> {
    let frame = deformed_frame(algebra, rho, variant, sampling.radius)?;
    let mut report = residual_report(&frame, spec, sampling)?;
    let xs: Vec<Vec<f64>> = report.points.iter().map(|p| p.coords.clone()).collect();
    report.metric_form = Some(metric_form_check(&frame, &xs)?);
    report.expansion = Some(expansion_contrast(&frame, 1.0)?);
    Ok(report)
}

fn deformation(frame: &FrameField) -> SuiteResult<&Deformation> {
    match frame.kind() {
        FrameKind::Deformed(d) => Ok(d),
        _ => Err(SuiteError::Config("expected a deformed frame".into())),
    }
}

/// `(n-1)(ρ'/ρ)² E⁰⊗E⁰ + C_ΛΣ E^Λ⊗E^Σ`, which equals
/// `(n-1)ρ'² e⁰⊗e⁰ + ρ² C_ΛΣ e^Λ⊗e^Σ` for `e = ρE`.
pub fn closed_form_metric(d: &Deformation, c: &BilinearForm, x: &[f64]) -> SuiteResult<SquareMatrix> {
    let n = x.len();
    let cof = nleg_core::frame::coframe(&d.base.point(x)?)?;
    let (r, dr) = d.spec.rho.eval(x[0]);
    let time = (n as f64 - 1.0) * (dr / r) * (dr / r);
    let c = c.matrix();
    Ok(SquareMatrix::from_fn(n, |i, j| {
        let mut v = time * cof[(0, i)] * cof[(0, j)];
        for l in 1..n {
            for s in 1..n {
                v += c[(l - 1, s - 1)] * cof[(l, i)] * cof[(s, j)];
            }
        }
        v
    }))
}

fn gamma_at(frame: &FrameField, x: &[f64]) -> SuiteResult<SquareMatrix> {
    Ok(killing_tensor(&frame_torsion(frame, x)?.2).g)
}

/// Compares `γ` of a deformed frame with its closed form and with `γ` of
/// the other variant, and measures `∂_τ γ_AB` in the undeformed leg basis.
pub fn metric_form_check(frame: &FrameField, points: &[Vec<f64>]) -> SuiteResult<MetricFormReport> {
    let d = deformation(frame)?;
    let c = killing_form(&d.spatial);
    let other_variant = match d.spec.variant {
        DeformVariant::Scaled => DeformVariant::PrimeScaled,
        DeformVariant::PrimeScaled => DeformVariant::Scaled,
        DeformVariant::Base => DeformVariant::Base,
    };
    let other = deform_unchecked(
        &d.base,
        DeformationSpec {
            variant: other_variant,
            ..d.spec
        },
    )?;
    let adapted = |y: &[f64]| -> nleg_core::Result<Vec<f64>> {
        let g = killing_tensor(&frame_torsion(frame, y)?.2).g;
        Ok(g.congruence(&d.base.value(y)?).as_slice().to_vec())
    };
    let per_point: Vec<SuiteResult<[f64; 3]>> = points
        .par_iter()
        .map(|x| {
            let g = gamma_at(frame, x)?;
            let dev = g.max_abs_diff(&closed_form_metric(d, &c, x)?);
            let var = g.max_abs_diff(&gamma_at(&other, x)?);
            let dtau = fd::partial(adapted, x, 0, fd::DEFAULT_STEP)?
                .into_iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            Ok([dev, var, dtau])
        })
        .collect();
    let mut worst = [0.0f64; 3];
    for r in per_point {
        let r = r?;
        for k in 0..3 {
            worst[k] = worst[k].max(r[k]);
        }
    }
    let ok = !points.is_empty() && worst[0] < METRIC_FORM_TOL && worst[1] < VARIANT_TOL;
    Ok(MetricFormReport {
        max_deviation: worst[0],
        variant_deviation: worst[1],
        adapted_tau_derivative: worst[2],
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}

fn spatial_log_det(m: &SquareMatrix) -> f64 {
    let n = m.dim();
    let block = SquareMatrix::from_fn(n - 1, |a, b| m[(a + 1, b + 1)]);
    block.determinant().abs().ln()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Tabulates the spatial blocks of `h[e, η]` and `γ[e]` along τ at the
/// spatial centre of the chart, `η = β ⊕ C` with `C` the Killing form of
/// the spatial algebra, and fits their exponential rates.
pub fn expansion_contrast(frame: &FrameField, beta: f64) -> SuiteResult<ExpansionReport> {
    let d = deformation(frame)?;
    let n = frame.dim();
    let c = killing_form(&d.spatial);
    let eta = BilinearForm::time_plus_spatial(beta, &c);
    let flipped = BilinearForm::time_plus_spatial(-beta, &c);
    let inner = frame.chart().sub_box(DEFAULT_SAMPLE_SCALE);
    let (lo, hi) = inner.axis_range(0);
    let centre: Vec<f64> = (0..n)
        .map(|i| {
            let (l, u) = inner.axis_range(i);
            0.5 * (l + u)
        })
        .collect();
    let taus: Vec<f64> = (0..EXPANSION_SAMPLES)
        .map(|k| lo + (hi - lo) * k as f64 / (EXPANSION_SAMPLES - 1) as f64)
        .collect();
    let mut h_log_det = Vec::with_capacity(taus.len());
    let mut gamma_log_det = Vec::with_capacity(taus.len());
    let mut h_time_sign = [0i8; 2];
    for (k, &tau) in taus.iter().enumerate() {
        let mut x = centre.clone();
        x[0] = tau;
        let fp = frame.point(&x)?;
        let h = dirac_einstein_metric(&fp, &eta)?;
        h_log_det.push(spatial_log_det(&h.g));
        gamma_log_det.push(spatial_log_det(&gamma_at(frame, &x)?));
        if k == 0 {
            h_time_sign = [
                nleg_core::math::sign(h.g[(0, 0)]),
                nleg_core::math::sign(dirac_einstein_metric(&fp, &flipped)?.g[(0, 0)]),
            ];
        }
    }
    let spatial = (n - 1) as f64;
    Ok(ExpansionReport {
        h_rate: fit_slope(&taus, &h_log_det) / spatial,
        gamma_rate: fit_slope(&taus, &gamma_log_det) / spatial,
        taus,
        h_log_det,
        gamma_log_det,
        h_time_sign,
        beta,
    })
}

/// Points of `frame`'s chart used by the sweeps, for callers that need the
/// same sample outside a report.
pub fn sweep_points(frame: &FrameField, sampling: &Sampling) -> Vec<Vec<f64>> {
    sample_points_scaled(frame.chart(), sampling.count, sampling.seed, DEFAULT_SAMPLE_SCALE)
}
