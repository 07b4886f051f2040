//! Experiment configuration schema (versioned JSON) and validation.
//!
//! Validation happens before any computation and rejects each bad value
//! with a diagnostic naming the offending field.

use lpmult::{AnalyticModel, ClosedCircleSet, Complex64};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

/// Current schema version.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("config field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ConfigError {
    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn field(&self) -> &str {
        match self {
            ConfigError::Invalid { field, .. } => field,
        }
    }
}

type Check = Result<(), ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Star domain + bounded pole family: derivative margin plus norm
    /// brackets over (p, N); the expected signature is a flattening
    /// lower-bound curve.
    TheoremProbe,
    /// Singular inner symbol: norm brackets over (p, N); the expected
    /// signature is growth for p != 2 and a flat ceiling at p = 2.
    VerbitskiiProbe,
    /// Derivative-distance sweep against the geometric bound only.
    MikhlinVerify,
    /// Quadratic-function constant brackets over (p, N).
    LpConstants,
    /// Plain norm bracket table for an explicit model.
    NormTable,
}

/// Boundary-set specification: either a named generator with its order, or
/// explicit angles (radians) with optional accumulation flags.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accumulation: Option<Vec<f64>>,
}

impl SetSpec {
    pub fn validate(&self, field: &str) -> Check {
        match (&self.generator, &self.angles) {
            (Some(_), Some(_)) => Err(ConfigError::invalid(
                field,
                "give either `generator` or `angles`, not both",
            )),
            (None, None) => Err(ConfigError::invalid(
                field,
                "needs a `generator` name or explicit `angles`",
            )),
            (Some(g), None) => {
                let k = self.k.ok_or_else(|| {
                    ConfigError::invalid(&format!("{field}.k"), "generator order is required")
                })?;
                match normalize_generator(g).as_str() {
                    "dyadic_gap" => {
                        if k < 1 {
                            return Err(ConfigError::invalid(
                                &format!("{field}.k"),
                                "must be at least 1",
                            ));
                        }
                        Ok(())
                    }
                    "superlacunary" => {
                        if !(1..=5).contains(&k) {
                            return Err(ConfigError::invalid(
                                &format!("{field}.k"),
                                "superlacunary order must lie in 1..=5",
                            ));
                        }
                        Ok(())
                    }
                    other => Err(ConfigError::invalid(
                        &format!("{field}.generator"),
                        format!("unknown generator `{other}` (expected dyadic_gap or superlacunary)"),
                    )),
                }
            }
            (None, Some(angles)) => {
                if angles.len() < 2 {
                    return Err(ConfigError::invalid(
                        &format!("{field}.angles"),
                        "needs at least two angles",
                    ));
                }
                if let Some(a) = angles.iter().find(|a| !a.is_finite() || !(0.0..TAU).contains(*a))
                {
                    return Err(ConfigError::invalid(
                        &format!("{field}.angles"),
                        format!("angle {a} outside [0, 2pi)"),
                    ));
                }
                // Full invariants (duplicates, arc lengths) checked by the
                // set constructor; surface those under the same field name.
                self.build().map(|_| ())
            }
        }
    }

    pub fn build(&self) -> Result<ClosedCircleSet, ConfigError> {
        if let Some(g) = &self.generator {
            let k = self
                .k
                .ok_or_else(|| ConfigError::invalid("set.k", "generator order is required"))?;
            return match normalize_generator(g).as_str() {
                "dyadic_gap" => lpmult::lacunary::generate_dyadic_gap(k)
                    .map_err(|e| ConfigError::invalid("set.k", e.to_string())),
                "superlacunary" => lpmult::lacunary::generate_superlacunary(k)
                    .map_err(|e| ConfigError::invalid("set.k", e.to_string())),
                other => Err(ConfigError::invalid(
                    "set.generator",
                    format!("unknown generator `{other}`"),
                )),
            };
        }
        let angles = self
            .angles
            .clone()
            .ok_or_else(|| ConfigError::invalid("set", "missing angles"))?;
        let acc = self.accumulation.clone().unwrap_or_default();
        ClosedCircleSet::with_accumulation(angles, &acc)
            .map_err(|e| ConfigError::invalid("set.angles", e.to_string()))
    }
}

pub fn normalize_generator(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('-', "_")
}

/// Analytic model specification. `auto` is resolved by probes that know
/// their domain (poles placed just outside the closure above accumulation
/// points).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<[f64; 2]>>,
}

fn to_c64(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl ModelSpec {
    pub fn auto() -> Self {
        ModelSpec {
            variant: "auto".to_string(),
            coeffs: None,
            poles: None,
            weights: None,
            zeros: None,
        }
    }

    pub fn is_auto(&self) -> bool {
        self.variant == "auto"
    }

    pub fn validate(&self, field: &str, allow_auto: bool) -> Check {
        let variant_field = format!("{field}.variant");
        match self.variant.as_str() {
            "auto" => {
                if allow_auto {
                    Ok(())
                } else {
                    Err(ConfigError::invalid(
                        &variant_field,
                        "`auto` is only meaningful for probes that build a domain",
                    ))
                }
            }
            "polynomial" => {
                if self.coeffs.is_none() {
                    Err(ConfigError::invalid(
                        &format!("{field}.coeffs"),
                        "polynomial variant needs `coeffs`",
                    ))
                } else {
                    Ok(())
                }
            }
            "pole_sum" => {
                let poles = self.poles.as_ref().ok_or_else(|| {
                    ConfigError::invalid(&format!("{field}.poles"), "pole_sum needs `poles`")
                })?;
                let weights = self.weights.as_ref().ok_or_else(|| {
                    ConfigError::invalid(&format!("{field}.weights"), "pole_sum needs `weights`")
                })?;
                if poles.len() != weights.len() {
                    return Err(ConfigError::invalid(
                        &format!("{field}.weights"),
                        "must match `poles` in length",
                    ));
                }
                if let Some(p) = poles.iter().find(|p| (p[0] * p[0] + p[1] * p[1]) <= 1.0) {
                    return Err(ConfigError::invalid(
                        &format!("{field}.poles"),
                        format!("pole [{}, {}] is not outside the closed unit disk", p[0], p[1]),
                    ));
                }
                Ok(())
            }
            "blaschke" => {
                let zeros = self.zeros.as_ref().ok_or_else(|| {
                    ConfigError::invalid(&format!("{field}.zeros"), "blaschke needs `zeros`")
                })?;
                if let Some(z) = zeros.iter().find(|z| (z[0] * z[0] + z[1] * z[1]) >= 1.0) {
                    return Err(ConfigError::invalid(
                        &format!("{field}.zeros"),
                        format!("zero [{}, {}] is not inside the open unit disk", z[0], z[1]),
                    ));
                }
                Ok(())
            }
            "singular_inner" => Ok(()),
            other => Err(ConfigError::invalid(
                &variant_field,
                format!("unknown variant `{other}`"),
            )),
        }
    }

    /// Builds the model; `None` for `auto`.
    pub fn build(&self) -> Result<Option<AnalyticModel>, ConfigError> {
        let model = match self.variant.as_str() {
            "auto" => return Ok(None),
            "polynomial" => AnalyticModel::polynomial(to_c64(
                self.coeffs.as_deref().unwrap_or_default(),
            )),
            "pole_sum" => AnalyticModel::pole_sum(
                to_c64(self.poles.as_deref().unwrap_or_default()),
                to_c64(self.weights.as_deref().unwrap_or_default()),
            )
            .map_err(|e| ConfigError::invalid("model.poles", e.to_string()))?,
            "blaschke" => AnalyticModel::blaschke(to_c64(self.zeros.as_deref().unwrap_or_default()))
                .map_err(|e| ConfigError::invalid("model.zeros", e.to_string()))?,
            "singular_inner" => AnalyticModel::singular_inner(),
            other => {
                return Err(ConfigError::invalid(
                    "model.variant",
                    format!("unknown variant `{other}`"),
                ))
            }
        };
        Ok(Some(model))
    }
}

fn default_grid() -> usize {
    8192
}

fn default_trials() -> usize {
    500
}

fn default_tol() -> f64 {
    1e-8
}

/// One experiment: kind plus the parameters its probe needs. Unused
/// parameters are allowed to stay at their defaults but every parameter the
/// probe reads is validated up front.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub p_list: Vec<f64>,
    #[serde(default)]
    pub n_list: Vec<usize>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| ConfigError::invalid("<config>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Check {
        if self.version != CONFIG_VERSION {
            return Err(ConfigError::invalid(
                "version",
                format!("unsupported schema version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(ConfigError::invalid("tol", "must be positive and finite"));
        }
        match self.kind {
            ExperimentKind::TheoremProbe => {
                self.require_set()?;
                self.require_theta0()?;
                self.require_p_list(false)?;
                self.require_n_list()?;
                self.require_grid()?;
                if let Some(m) = &self.model {
                    m.validate("model", true)?;
                    if !m.is_auto() && m.variant != "pole_sum" {
                        return Err(ConfigError::invalid(
                            "model.variant",
                            "theorem_probe expects `auto` or `pole_sum`",
                        ));
                    }
                }
                Ok(())
            }
            ExperimentKind::VerbitskiiProbe => {
                if let Some(m) = &self.model {
                    if m.variant != "singular_inner" {
                        return Err(ConfigError::invalid(
                            "model.variant",
                            "verbitskii_probe uses the singular_inner model",
                        ));
                    }
                }
                self.require_p_list(false)?;
                self.require_n_list()
            }
            ExperimentKind::MikhlinVerify => {
                self.require_set()?;
                self.require_theta0()?;
                self.require_grid()?;
                let m = self.model.as_ref().ok_or_else(|| {
                    ConfigError::invalid("model", "mikhlin_verify needs a model (or `auto`)")
                })?;
                m.validate("model", true)
            }
            ExperimentKind::LpConstants => {
                self.require_set()?;
                self.require_p_list(true)?;
                if self.n_list.is_empty() {
                    return Err(ConfigError::invalid("n_list", "must not be empty"));
                }
                if let Some(&n) = self.n_list.iter().find(|&&n| !n.is_power_of_two() || n < 8) {
                    return Err(ConfigError::invalid(
                        "n_list",
                        format!("{n} is not a power of two >= 8"),
                    ));
                }
                if self.trials < 100 {
                    return Err(ConfigError::invalid("trials", "needs at least 100 trials"));
                }
                Ok(())
            }
            ExperimentKind::NormTable => {
                let m = self.model.as_ref().ok_or_else(|| {
                    ConfigError::invalid("model", "norm_table needs an explicit model")
                })?;
                m.validate("model", false)?;
                self.require_p_list(false)?;
                self.require_n_list()
            }
        }
    }

    fn require_set(&self) -> Check {
        match &self.set {
            None => Err(ConfigError::invalid("set", "this probe needs a boundary set")),
            Some(s) => s.validate("set"),
        }
    }

    fn require_theta0(&self) -> Check {
        match self.theta0 {
            None => Err(ConfigError::invalid("theta0", "this probe needs theta0")),
            Some(t) if t > 0.0 && t.is_finite() => Ok(()),
            Some(t) => Err(ConfigError::invalid(
                "theta0",
                format!("must be positive and finite, got {t}"),
            )),
        }
    }

    /// `strict_interior`: exponents must lie strictly inside (1, inf).
    fn require_p_list(&self, strict_interior: bool) -> Check {
        if self.p_list.is_empty() {
            return Err(ConfigError::invalid("p_list", "must not be empty"));
        }
        for &p in &self.p_list {
            if !p.is_finite() || p.is_nan() {
                return Err(ConfigError::invalid("p_list", format!("{p} is not finite")));
            }
            if strict_interior && !(p > 1.0) {
                return Err(ConfigError::invalid(
                    "p_list",
                    format!("{p} must lie strictly inside (1, inf)"),
                ));
            }
            if !strict_interior && p < 1.0 {
                return Err(ConfigError::invalid("p_list", format!("{p} must be >= 1")));
            }
        }
        Ok(())
    }

    fn require_n_list(&self) -> Check {
        if self.n_list.is_empty() {
            return Err(ConfigError::invalid("n_list", "must not be empty"));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(ConfigError::invalid(
                "n_list",
                format!("dimension {n} is below the minimum of 2"),
            ));
        }
        Ok(())
    }

    fn require_grid(&self) -> Check {
        if self.grid < 1024 {
            return Err(ConfigError::invalid(
                "grid",
                format!("{} is below the minimum sweep grid of 1024", self.grid),
            ));
        }
        Ok(())
    }
}
