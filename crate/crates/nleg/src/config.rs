//! Run configuration: a flat JSON object whose keys mirror the CLI flags.
//! Precedence is flag > config file > built-in default.

use std::path::{Path, PathBuf};

use nleg_core::{BilinearForm, DeformVariant, ModelSpec};
use serde::Deserialize;

use crate::error::{SuiteError, SuiteResult};
use crate::suite::{RhoChoice, Sampling};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: Option<String>,
    pub family: Option<String>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    /// `η_00` of the Dirac-Einstein metric for deformed frames.
    pub beta: Option<f64>,
    pub rho: Option<String>,
    pub variant: Option<String>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub radius: Option<f64>,
    pub fd_step: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

pub const FAMILIES: &[&str] = &["gl", "quadratic", "hilbert"];

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),+) => {
        RunConfig { $($field: $top.$field.or($base.$field)),+ }
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> SuiteResult<Self> {
        serde_json::from_str(text).map_err(|e| SuiteError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> SuiteResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SuiteError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Values set in `flags` win over `self`.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, flags; algebra, family, lambda, mu, nu, c1, c2, c3, beta, rho, variant, points, seed, radius, fd_step, tol, out)
    }

    pub fn algebra(&self) -> SuiteResult<&str> {
        self.algebra
            .as_deref()
            .ok_or_else(|| SuiteError::Config("no algebra given".into()))
    }

    pub fn sampling(&self) -> SuiteResult<Sampling> {
        let d = Sampling::default();
        let s = Sampling {
            count: self.points.unwrap_or(d.count),
            seed: self.seed.unwrap_or(d.seed),
            radius: self.radius.unwrap_or(d.radius),
            fd_step: self.fd_step.unwrap_or(d.fd_step),
            tol: self.tol.unwrap_or(d.tol),
        };
        if s.count == 0 {
            return Err(SuiteError::Config("points must be positive".into()));
        }
        for (name, v) in [("radius", s.radius), ("fd_step", s.fd_step), ("tol", s.tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SuiteError::Config(format!("{name} must be positive and finite")));
            }
        }
        Ok(s)
    }

    /// The model; quadratic families use `eta` as their internal metric.
    pub fn model(&self, eta: impl FnOnce() -> BilinearForm) -> SuiteResult<ModelSpec> {
        let family = self.family.as_deref().unwrap_or("gl");
        let spec = match family {
            "gl" => ModelSpec::gl_born_infeld(
                self.lambda.unwrap_or(1.0),
                self.mu.unwrap_or(0.0),
                self.nu.unwrap_or(0.0),
            ),
            "quadratic" => ModelSpec::quadratic(
                self.c1.unwrap_or(1.0),
                self.c2.unwrap_or(2.0),
                self.c3.unwrap_or(-4.0),
                eta(),
            ),
            "hilbert" => ModelSpec::hilbert(eta()),
            other => {
                return Err(SuiteError::Config(format!(
                    "unknown family `{other}` (expected one of {})",
                    FAMILIES.join(", ")
                )))
            }
        };
        Ok(spec?)
    }

    pub fn variant(&self) -> SuiteResult<DeformVariant> {
        match self.variant.as_deref().unwrap_or("e") {
            "e" => Ok(DeformVariant::Scaled),
            "e-prime" | "e'" | "prime" => Ok(DeformVariant::PrimeScaled),
            other => Err(SuiteError::Config(format!(
                "unknown variant `{other}` (expected e or e-prime)"
            ))),
        }
    }

    pub fn rho(&self) -> SuiteResult<RhoChoice> {
        RhoChoice::preset(self.rho.as_deref().unwrap_or("exp"))
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"algebra":"su2","lamda":1}"#).is_err());
        let c = RunConfig::from_json(r#"{"algebra":"su2","lambda":2,"seed":7}"#).unwrap();
        assert_eq!(c.lambda, Some(2.0));
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig::from_json(r#"{"algebra":"su2","lambda":2,"seed":7}"#).unwrap();
        let flags = RunConfig {
            lambda: Some(3.0),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.lambda, Some(3.0));
        assert_eq!(merged.seed, Some(7));
        assert_eq!(merged.algebra.as_deref(), Some("su2"));
    }

    #[test]
    fn validation() {
        let c = RunConfig {
            points: Some(0),
            ..Default::default()
        };
        assert!(c.sampling().is_err());
        let c = RunConfig {
            family: Some("nope".into()),
            ..Default::default()
        };
        assert!(c.model(|| BilinearForm::identity(3)).is_err());
        assert!(RunConfig::default().variant().is_ok());
        assert!(RunConfig {
            rho: Some("cosh".into()),
            ..Default::default()
        }
        .rho()
        .is_err());
    }
}
