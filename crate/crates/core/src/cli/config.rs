//! Serializable run configurations. Every subcommand resolves its flags
//! into one of these; `--dump-config` prints it and `--config` reads it back.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactsol::{CaseId, CaseKind, CaseParams};
use crate::funcspace::{CoefficientFunction, Family};
use crate::integrator::IntegratorConfig;
use crate::lhsystems::{Algebra, Chart, SystemSpec};
use crate::structcheck::Suite;

/// Integration constants of an exact-solution run. Without `base` they are
/// constants in the special-case library convention when the spec is one
/// of those cases, and base-point constants at the run's `t0` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub c1: f64,
    pub c2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_samples() -> usize {
    101
}

/// Configuration of `simulate`, `exact` and `residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spec: SystemSpec,
    /// State at `t0`, in the chart of `spec`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<[f64; 2]>,
    pub t0: f64,
    pub t1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsConfig>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    /// Points of the uniform output grid, endpoints included.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spec: SystemSpec::b2_buchdahl(
                0.0,
                CoefficientFunction::reciprocal(3.0),
                CoefficientFunction::reciprocal(1.0),
            ),
            initial: None,
            t0: 1.0,
            t1: 5.0,
            constants: Some(ConstantsConfig {
                c1: 0.5,
                c2: 0.5,
                base: None,
            }),
            integrator: IntegratorConfig::default(),
            samples: default_samples(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t1.is_finite()) {
            return Err(Error::Parse("t0 and t1 must be finite".into()));
        }
        if self.samples < 2 {
            return Err(Error::Parse(format!("need at least 2 samples, got {}", self.samples)));
        }
        if let Some(s) = self.initial {
            if !(s[0].is_finite() && s[1].is_finite()) {
                return Err(Error::Parse("initial state must be finite".into()));
            }
        }
        self.integrator.validate()
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t0, self.t1, self.samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            _ => Err(Error::Parse(format!("unknown figure '{s}' (expected fig1 or fig2)"))),
        }
    }
}

/// Data behind the two figures: first-order deformed classical solutions
/// for a list of deformation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSpec {
    pub figure: Figure,
    pub c1: f64,
    pub c2: f64,
    pub z_values: Vec<f64>,
    pub t_range: (f64, f64),
    pub samples: usize,
    #[serde(default)]
    pub output: OutputConfig,
}

impl FigureSpec {
    pub fn new(figure: Figure) -> Self {
        let z_values = match figure {
            Figure::Fig1 => vec![0.0, 0.2, 0.4, 0.6],
            Figure::Fig2 => vec![0.0, -0.2, -0.4, -0.6],
        };
        FigureSpec {
            figure,
            c1: 0.5,
            c2: 0.5,
            z_values,
            t_range: (0.05, 5.0),
            samples: 100,
            output: OutputConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.z_values.is_empty() {
            return Err(Error::Parse("figure needs at least one z value".into()));
        }
        for &z in &self.z_values {
            let ok = match self.figure {
                Figure::Fig1 => z >= 0.0,
                Figure::Fig2 => z <= 0.0,
            };
            if !ok || !z.is_finite() {
                return Err(Error::Parse(format!("z = {z} has the wrong sign for {:?}", self.figure)));
            }
        }
        let (lo, hi) = self.t_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Parse(format!("bad t range ({lo}, {hi})")));
        }
        if self.samples < 2 {
            return Err(Error::Parse(format!("need at least 2 samples, got {}", self.samples)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t_range.0, self.t_range.1, self.samples)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Restricts spec-dependent suites to this variant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SystemSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualSource {
    /// Closed-form solution.
    #[default]
    Exact,
    /// First-order truncation in `z`.
    FirstOrder,
}

/// Residual of the second-order equation along a sampled solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualConfig {
    pub run: RunConfig,
    #[serde(default)]
    pub source: ResidualSource,
}

/// Systems that only differ by a vanishing `b2` are the same book-algebra
/// system; the oscillator form is folded onto it so both produce the same
/// configuration and output.
pub fn normalize_spec(spec: SystemSpec) -> Result<SystemSpec> {
    match spec.b2() {
        Some(b2) if spec.algebra() == Algebra::H4 && b2.is_zero() => SystemSpec::new(
            Algebra::B2,
            spec.z(),
            spec.chart(),
            spec.a().copied(),
            *spec.b1(),
            None,
            spec.t_ref(),
        ),
        _ => Ok(spec),
    }
}

/// The special case a Buchdahl-chart spec belongs to, if it has a tabulated
/// closed form: `b1 = 1/t`, `a = α/x` and a constant (or absent) `b2`.
pub fn match_case(spec: &SystemSpec, branch: f64) -> Option<(CaseId, CaseParams)> {
    if spec.chart() != Chart::Buchdahl || spec.b1().family != Family::Reciprocal(1.0) {
        return None;
    }
    let kind = match spec.a()?.family {
        Family::Reciprocal(a) if a == 3.0 => CaseKind::ClassicalBuchdahl,
        Family::Reciprocal(a) if a == 1.0 => CaseKind::LogCase,
        Family::Reciprocal(a) => CaseKind::PowerCase(a),
        _ => return None,
    };
    let b2 = match spec.b2().map(|b| b.family) {
        None | Some(Family::Zero) => None,
        Some(Family::Constant(c)) => Some(c),
        Some(_) => return None,
    };
    let deformed = spec.z() != 0.0;
    let case = CaseId::new(kind, deformed, b2.is_some()).ok()?;
    let params = CaseParams {
        z: spec.z(),
        b2: b2.unwrap_or(0.0),
        branch: if branch < 0.0 { -1.0 } else { 1.0 },
    };
    Some((case, params))
}

pub fn uniform_grid(t0: f64, t1: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2) - 1;
    (0..=n)
        .map(|i| if i == n { t1 } else { t0 + (t1 - t0) * i as f64 / n as f64 })
        .collect()
}

/// Hex SHA-256 of the canonical JSON form of a configuration.
pub fn config_hash<T: Serialize>(cfg: &T) -> String {
    let json = serde_json::to_string(cfg).expect("configurations serialize");
    Sha256::digest(json.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_round_trips() {
        let cfg = RunConfig::default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = parse_json(&json).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(config_hash(&back), config_hash(&cfg));
        assert_eq!(config_hash(&cfg).len(), 64);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let json = serde_json::to_string(&RunConfig::default()).unwrap();
        let bad = json.replacen('{', "{\"bogus\":1,", 1);
        assert!(matches!(parse_json::<RunConfig>(&bad), Err(Error::Parse(_))));
        assert!(parse_json::<RunConfig>("{not json").is_err());
    }

    #[test]
    fn zero_b2_folds_onto_book_algebra() {
        let a = CoefficientFunction::reciprocal(3.0);
        let b = CoefficientFunction::reciprocal(1.0);
        let h4 = SystemSpec::h4_buchdahl(0.1, a, b, CoefficientFunction::constant(0.0));
        assert_eq!(normalize_spec(h4).unwrap(), SystemSpec::b2_buchdahl(0.1, a, b));
        let kept = SystemSpec::h4_buchdahl(0.1, a, b, CoefficientFunction::constant(0.2));
        assert_eq!(normalize_spec(kept).unwrap(), kept);
    }

    #[test]
    fn case_matching() {
        let b = CoefficientFunction::reciprocal(1.0);
        let spec = SystemSpec::b2_buchdahl(0.0, CoefficientFunction::reciprocal(3.0), b);
        let (case, _) = match_case(&spec, 1.0).unwrap();
        assert_eq!(case.kind, CaseKind::ClassicalBuchdahl);
        assert!(!case.deformed && !case.extended);
        let spec = SystemSpec::h4_buchdahl(0.1, CoefficientFunction::reciprocal(2.0), b, CoefficientFunction::constant(0.2));
        let (case, params) = match_case(&spec, -3.0).unwrap();
        assert_eq!(case.kind, CaseKind::PowerCase(2.0));
        assert!(case.deformed && case.extended);
        assert_eq!((params.b2, params.branch), (0.2, -1.0));
        let spec = SystemSpec::b2_buchdahl(0.0, CoefficientFunction::monomial(1.0, 2.0), b);
        assert!(match_case(&spec, 1.0).is_none());
        let spec = SystemSpec::b2_canonical(0.0, b);
        assert!(match_case(&spec, 1.0).is_none());
    }

    #[test]
    fn figure_sign_rules() {
        let mut fs = FigureSpec::new(Figure::Fig1);
        assert!(fs.validate().is_ok());
        fs.z_values.push(-0.1);
        assert!(fs.validate().is_err());
        assert!(FigureSpec::new(Figure::Fig2).validate().is_ok());
        let g = FigureSpec::new(Figure::Fig1).grid();
        assert_eq!(g.len(), 100);
        assert!((g[1] - g[0] - 0.05).abs() < 1e-15);
        assert_eq!(*g.last().unwrap(), 5.0);
    }
}
