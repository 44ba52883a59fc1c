use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::limits::{DeterminationMode, LimitProbe, SampleRegion};
use crate::operators::OperatorSpec;
use crate::resolvent::Schedule;
use crate::space::SpaceSpec;
use crate::tol::Tolerances;

/// A config that could not be read, parsed or validated. The message leads
/// with the path of the offending field when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn at(path: &str, msg: impl fmt::Display) -> ConfigError {
    if path.is_empty() || path == "." {
        ConfigError(msg.to_string())
    } else {
        ConfigError(format!("{path}: {msg}"))
    }
}

/// Deserializes `value`, reporting the full field path under `prefix`.
fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner == ".") {
            (true, _) => inner,
            (false, true) => prefix.to_string(),
            (false, false) => format!("{prefix}.{inner}"),
        };
        at(&path, e.into_inner())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    FaceLimsup,
    FaceConstructive,
    FaceMinnorm,
    SupportMinnorm,
    SupportSelection,
    Boundary,
    Decomposition,
    LocalBound,
    UniqueDetermination,
    Lipschitz,
    YosidaMinNorm,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::FaceLimsup => "face_limsup",
            TheoremId::FaceConstructive => "face_constructive",
            TheoremId::FaceMinnorm => "face_minnorm",
            TheoremId::SupportMinnorm => "support_minnorm",
            TheoremId::SupportSelection => "support_selection",
            TheoremId::Boundary => "boundary",
            TheoremId::Decomposition => "decomposition",
            TheoremId::LocalBound => "local_bound",
            TheoremId::UniqueDetermination => "unique_determination",
            TheoremId::Lipschitz => "lipschitz",
            TheoremId::YosidaMinNorm => "yosida_min_norm",
        }
    }

    fn needs_point(self) -> bool {
        !matches!(self, TheoremId::UniqueDetermination | TheoremId::Lipschitz)
    }

    fn needs_direction(self) -> bool {
        matches!(
            self,
            TheoremId::FaceLimsup | TheoremId::FaceConstructive | TheoremId::FaceMinnorm | TheoremId::SupportMinnorm | TheoremId::SupportSelection
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Report directory, relative to the config file.
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

/// One verification to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub theorem_id: TheoremId,
    pub label: String,
    pub x: Vec<f64>,
    pub v: Option<Vec<f64>>,
    pub probe: LimitProbe,
    pub tolerances: Tolerances,
    /// `x*` for the constructive sequence.
    pub xstar: Option<Vec<f64>>,
    /// Sequence length for the constructive sequence.
    pub terms: usize,
    pub radius: Option<f64>,
    pub rho: Option<f64>,
    pub samples: usize,
    /// Second operator of a unique-determination check.
    pub other: Option<OperatorSpec>,
    pub mode: DeterminationMode,
    pub region: Option<SampleRegion>,
    pub ell: Option<f64>,
    pub schedule: Schedule,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    theorem_id: TheoremId,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    x: Option<Vec<f64>>,
    #[serde(default)]
    v: Option<Vec<f64>>,
    #[serde(default)]
    probe: Option<Value>,
    #[serde(default)]
    tolerances: Option<Tolerances>,
    #[serde(default)]
    xstar: Option<Vec<f64>>,
    #[serde(default)]
    terms: Option<usize>,
    #[serde(default)]
    radius: Option<f64>,
    #[serde(default)]
    rho: Option<f64>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    other: Option<Value>,
    #[serde(default)]
    mode: Option<DeterminationMode>,
    #[serde(default)]
    region: Option<SampleRegion>,
    #[serde(default)]
    ell: Option<f64>,
    #[serde(default)]
    schedule: Option<Schedule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    name: Option<String>,
    space: SpaceSpec,
    operator: Value,
    checks: Vec<Value>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    output: Option<Output>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub space: SpaceSpec,
    pub operator: OperatorSpec,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub output: Option<Output>,
}

/// An inline spec, or a string naming a JSON file relative to `base`.
fn operator(value: Value, path: &str, base: Option<&Path>) -> Result<OperatorSpec, ConfigError> {
    match value {
        Value::String(file) => {
            let full = base.map_or_else(|| PathBuf::from(&file), |b| b.join(&file));
            let text = std::fs::read_to_string(&full).map_err(|e| at(path, format!("cannot read {}: {e}", full.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| at(path, format!("{}: {e}", full.display())))?;
            typed(v, path)
        }
        other => typed(other, path),
    }
}

impl ExperimentConfig {
    /// Parses a config; operator files named by string are resolved against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| at(&e.path().to_string(), e.into_inner()))?;
        de.end().map_err(|e| ConfigError(e.to_string()))?;
        let op = operator(raw.operator, "operator", base)?;
        let mut checks = Vec::with_capacity(raw.checks.len());
        for (i, value) in raw.checks.into_iter().enumerate() {
            let path = format!("checks[{i}]");
            let c: RawCheck = typed(value, &path)?;
            checks.push(Self::check(c, &path, raw.seed, raw.space.dim(), base)?);
        }
        if checks.is_empty() {
            return Err(at("checks", "at least one check is required"));
        }
        let name = raw.name.unwrap_or_else(|| "experiment".into());
        Ok(ExperimentConfig { name, space: raw.space, operator: op, checks, seed: raw.seed, output: raw.output })
    }

    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    fn check(c: RawCheck, path: &str, seed: u64, dim: usize, base: Option<&Path>) -> Result<Check, ConfigError> {
        let id = c.theorem_id;
        let x = match (c.x, id.needs_point()) {
            (Some(x), _) => x,
            (None, false) => Vec::new(),
            (None, true) => return Err(at(&format!("{path}.x"), format!("{} needs a point", id.as_str()))),
        };
        if id.needs_point() && x.len() != dim {
            return Err(at(&format!("{path}.x"), format!("expected {dim} coordinates, got {}", x.len())));
        }
        if id.needs_direction() && c.v.is_none() {
            return Err(at(&format!("{path}.v"), format!("{} needs a direction", id.as_str())));
        }
        let require = |field: &str, present: bool| {
            if present {
                Ok(())
            } else {
                Err(at(&format!("{path}.{field}"), format!("{} needs {field}", id.as_str())))
            }
        };
        match id {
            TheoremId::FaceConstructive => require("xstar", c.xstar.is_some())?,
            TheoremId::LocalBound => {
                require("radius", c.radius.is_some())?;
                require("rho", c.rho.is_some())?;
            }
            TheoremId::UniqueDetermination => {
                require("other", c.other.is_some())?;
                require("region", c.region.is_some())?;
            }
            TheoremId::Lipschitz => {
                require("ell", c.ell.is_some())?;
                require("region", c.region.is_some())?;
            }
            _ => {}
        }
        // the config seed drives the probe unless the override names its own
        let mut probe = c.probe.unwrap_or_else(|| Value::Object(Default::default()));
        if let Value::Object(map) = &mut probe {
            map.entry("seed").or_insert(Value::from(seed));
        }
        let probe: LimitProbe = typed(probe, &format!("{path}.probe"))?;
        probe.validate().map_err(|e| at(&format!("{path}.probe"), e))?;
        let other = c.other.map(|v| operator(v, &format!("{path}.other"), base)).transpose()?;
        let schedule = c.schedule.unwrap_or_default();
        schedule.validate().map_err(|e| at(&format!("{path}.schedule"), e))?;
        let label = c.label.unwrap_or_else(|| id.as_str().to_string());
        Ok(Check {
            theorem_id: id,
            label,
            x,
            v: c.v,
            probe,
            tolerances: c.tolerances.unwrap_or_default(),
            xstar: c.xstar,
            terms: c.terms.unwrap_or(40),
            radius: c.radius,
            rho: c.rho,
            samples: c.samples.unwrap_or(200),
            other,
            mode: c.mode.unwrap_or(DeterminationMode::Minnorm),
            region: c.region,
            ell: c.ell,
            schedule,
        })
    }
}
