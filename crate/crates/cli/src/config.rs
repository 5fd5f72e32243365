//! Scenario configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, ConfigError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Series,
    Absorption,
    Example43,
    KatoSimon,
    NeumannDirichlet,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Series => "series",
            ScenarioKind::Absorption => "absorption",
            ScenarioKind::Example43 => "example43",
            ScenarioKind::KatoSimon => "kato_simon",
            ScenarioKind::NeumannDirichlet => "neumann_dirichlet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    Zero,
    Constant,
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    pub rule: TailKind,
    /// Ratio for the geometric tail.
    #[serde(default)]
    pub rho: Option<f64>,
    /// Number of head terms.
    #[serde(default = "default_head_len")]
    pub head_len: usize,
}

fn default_head_len() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    #[serde(default = "default_tol_conv")]
    pub tol_conv: f64,
}

fn default_rank_tol() -> f64 {
    sectorial::DEFAULT_RANK_TOL
}

fn default_tol_conv() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_tol: default_rank_tol(),
            tol_conv: default_tol_conv(),
        }
    }
}

/// A scenario run. Indices `n` follow the shifted absorption convention
/// `a_n = a + (n - 1) b`, so `n` here is one more than the multiplier of `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub kind: ScenarioKind,
    pub dimension: usize,
    pub seed: u64,
    #[serde(default)]
    pub tail: Option<TailConfig>,
    pub schedule: Vec<u64>,
    pub t_values: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Output directory; falls back to `SECTORIAL_OUTPUT_DIR`, then `.`.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

pub const OUTPUT_DIR_ENV: &str = "SECTORIAL_OUTPUT_DIR";

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| ConfigError {
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        ScenarioConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |field: &str, message: &str| {
            Err(ConfigError {
                field: field.into(),
                message: message.into(),
            })
        };
        if self.version != SCHEMA_VERSION {
            return fail("version", &format!("unsupported schema version (expected {SCHEMA_VERSION})"));
        }
        if self.dimension == 0 {
            return fail("dimension", "must be at least 1");
        }
        let min_dim = match self.kind {
            ScenarioKind::Absorption => 2,
            ScenarioKind::NeumannDirichlet => 3,
            _ => 1,
        };
        if self.dimension < min_dim {
            return fail("dimension", &format!("{} needs dimension ≥ {min_dim}", self.kind.name()));
        }
        if self.schedule.is_empty() {
            return fail("schedule", "must not be empty");
        }
        if self.schedule[0] == 0 {
            return fail("schedule", "entries must be positive");
        }
        if self.schedule.windows(2).any(|w| w[1] <= w[0]) {
            return fail("schedule", "must be strictly increasing");
        }
        if self.t_values.is_empty() {
            return fail("t_values", "must not be empty");
        }
        if self.t_values.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return fail("t_values", "entries must be positive and finite");
        }
        let tol = &self.tolerances;
        if !(tol.rank_tol > 0.0 && tol.rank_tol < 1.0) {
            return fail("tolerances.rank_tol", "must lie in (0, 1)");
        }
        if !(tol.tol_conv > 0.0 && tol.tol_conv.is_finite()) {
            return fail("tolerances.tol_conv", "must be positive");
        }
        if let Some(tail) = &self.tail {
            if tail.head_len == 0 {
                return fail("tail.head_len", "must be at least 1");
            }
            match (tail.rule, tail.rho) {
                (TailKind::Geometric, None) => return fail("tail.rho", "geometric tail needs rho"),
                (TailKind::Geometric, Some(r)) if !(r > 0.0 && r < 1.0) => {
                    return fail("tail.rho", "must lie in (0, 1)")
                }
                (TailKind::Zero | TailKind::Constant, Some(_)) => {
                    return fail("tail.rho", "only the geometric tail takes rho")
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"version":1,"kind":"example43","dimension":2,"seed":7,"schedule":[1,2,4],"t_values":[1.0]}"#;

    #[test]
    fn minimal_document_parses() {
        let c = ScenarioConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.kind, ScenarioKind::Example43);
        assert_eq!(c.tolerances, Tolerances::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("\"seed\":7", "\"seed\":7,\"colour\":\"red\"");
        assert!(ScenarioConfig::from_json(&text).is_err());
    }

    #[test]
    fn field_diagnostics() {
        let cases = [
            (MINIMAL.replace("\"version\":1", "\"version\":2"), "version"),
            (MINIMAL.replace("[1,2,4]", "[1,4,2]"), "schedule"),
            (MINIMAL.replace("[1.0]", "[-1.0]"), "t_values"),
            (MINIMAL.replace("\"dimension\":2", "\"dimension\":0"), "dimension"),
        ];
        for (text, field) in cases {
            match ScenarioConfig::from_json(&text) {
                Err(CliError::Config(e)) => assert_eq!(e.field, field),
                other => panic!("expected a config error on {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn geometric_tail_needs_rho() {
        let text = MINIMAL.replace("\"seed\":7", "\"seed\":7,\"tail\":{\"rule\":\"geometric\"}");
        match ScenarioConfig::from_json(&text) {
            Err(CliError::Config(e)) => assert_eq!(e.field, "tail.rho"),
            other => panic!("{other:?}"),
        }
    }
}
