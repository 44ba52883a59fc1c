use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Error;
use crate::limits::{
    boundary_estimate, constructive_face_sequence, decompose, estimate_limsup_face, lipschitz_bound, local_bound_check, minnorm_limsup_face,
    support_via_minnorm, support_via_selection, unique_determination_check, yosida_min_norm_check, Quantity, Status, VerificationReport,
};
use crate::numfmt::sci;
use crate::operators::{Operator, OperatorSpec};
use crate::resolvent::{yosida_trajectory, Trajectory};

use super::config::{Check, ConfigError, ExperimentConfig, Format, TheoremId};

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Config(ConfigError),
    /// A check could not be evaluated: a violated precondition or a solver failure.
    Check { index: usize, label: String, source: Error },
    Io(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Check { index, label, source } => write!(f, "check {index} ({label}): {source}"),
            RunError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub index: usize,
    pub label: String,
    pub theorem_id: TheoremId,
    pub report: VerificationReport,
}

impl CheckResult {
    /// Short remark for tables: strictness of a min-norm face, or a violated premise.
    pub fn note(&self) -> String {
        if self.report.status == Status::PremiseFailed {
            return "premise violated".into();
        }
        match self.report.diagnostics.get("strict").and_then(|v| v.as_bool()) {
            Some(true) => format!("strict inclusion {} < {}", compact(&self.report.estimated), compact(&self.report.oracle)),
            Some(false) => "equality".into(),
            None => String::new(),
        }
    }
}

fn point(p: &[f64]) -> String {
    let c: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
    format!("({})", c.join(" "))
}

/// `{(a b) (c d)} + cone{(e f)}` with shortest round-trip floats.
fn compact(q: &Quantity) -> String {
    let Quantity::Set { set } = q else { return String::new() };
    let verts: Vec<String> = set.vertices().iter().map(|v| point(v)).collect();
    let mut s = format!("{{{}}}", verts.join(" "));
    if !set.rays().is_empty() {
        let rays: Vec<String> = set.rays().iter().map(|v| point(v)).collect();
        s.push_str(&format!(" + cone{{{}}}", rays.join(" ")));
    }
    s
}

/// Pass and premise failures leave the exit status at 0; anything else is 1.
pub fn exit_code(results: &[CheckResult]) -> i32 {
    if results.iter().all(|r| matches!(r.report.status, Status::Pass | Status::PremiseFailed)) {
        0
    } else {
        1
    }
}

fn run_check(op: &Operator, cfg: &ExperimentConfig, c: &Check) -> crate::error::Result<VerificationReport> {
    let (x, t) = (&c.x[..], &c.tolerances);
    let v = || c.v.as_deref().expect("validated at parse time");
    match c.theorem_id {
        TheoremId::FaceLimsup => estimate_limsup_face(op, x, v(), &c.probe, t),
        TheoremId::FaceMinnorm => minnorm_limsup_face(op, x, v(), &c.probe, t),
        TheoremId::FaceConstructive => {
            let xstar = c.xstar.as_deref().expect("validated at parse time");
            constructive_face_sequence(op, x, xstar, v(), c.terms, t).map(|(_, r)| r)
        }
        TheoremId::SupportMinnorm => support_via_minnorm(op, x, v(), &c.probe, t),
        TheoremId::SupportSelection => support_via_selection(op, x, v(), &c.probe, t),
        TheoremId::Boundary => boundary_estimate(op, x, &c.probe, t),
        TheoremId::Decomposition => decompose(op, x, &c.probe, t),
        TheoremId::LocalBound => local_bound_check(op, x, c.radius.expect("validated"), c.rho.expect("validated"), c.samples, t),
        TheoremId::UniqueDetermination => {
            let other = Operator::new(c.other.clone().expect("validated"), cfg.space)?;
            unique_determination_check(op, &other, c.mode, c.region.as_ref().expect("validated"), t)
        }
        TheoremId::Lipschitz => match op.spec() {
            OperatorSpec::SubdiffMaxAffine { function } => lipschitz_bound(function, &cfg.space, c.region.as_ref().expect("validated"), c.ell.expect("validated"), t),
            _ => Err(Error::InvalidArgument("lipschitz needs a subdiff_max_affine operator".into())),
        },
        TheoremId::YosidaMinNorm => yosida_min_norm_check(op, x, &c.schedule, t),
    }
}

/// Runs every check in config order; checks are evaluated on worker threads.
pub fn execute(cfg: &ExperimentConfig) -> Result<Vec<CheckResult>, RunError> {
    let op = Operator::new(cfg.operator.clone(), cfg.space).map_err(|e| RunError::Config(ConfigError(format!("operator: {e}"))))?;
    let outcomes: Vec<crate::error::Result<VerificationReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg.checks.iter().map(|c| s.spawn(|| run_check(&op, cfg, c))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    cfg.checks
        .iter()
        .zip(outcomes)
        .enumerate()
        .map(|(index, (c, out))| match out {
            Ok(report) => Ok(CheckResult { index, label: c.label.clone(), theorem_id: c.theorem_id, report }),
            Err(source) => Err(RunError::Check { index, label: c.label.clone(), source }),
        })
        .collect()
}

#[derive(Serialize)]
struct ReportFile<'a> {
    index: usize,
    label: &'a str,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub index: usize,
    pub label: String,
    pub theorem_id: String,
    pub status: Status,
    #[serde(with = "crate::json::extended")]
    pub distance: f64,
    pub tolerance: f64,
    pub note: String,
}

impl SummaryRow {
    pub fn of(r: &CheckResult) -> Self {
        SummaryRow {
            index: r.index,
            label: r.label.clone(),
            theorem_id: r.theorem_id.as_str().into(),
            status: r.report.status,
            distance: r.report.distance,
            tolerance: r.report.tolerance,
            note: r.note(),
        }
    }

    pub const CSV_HEADER: &'static str = "index,label,theorem_id,status,distance,tolerance,note";

    pub fn csv(&self) -> String {
        format!("{},{},{},{},{},{},{}", self.index, csv_field(&self.label), self.theorem_id, self.status.name(), sci(self.distance), sci(self.tolerance), csv_field(&self.note))
    }
}

/// Quotes a CSV field when it holds a separator or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    name: &'a str,
    seed: u64,
    exit_code: i32,
    checks: Vec<SummaryRow>,
}

/// Report file name of a check.
pub fn report_name(r: &CheckResult, format: Format) -> String {
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    format!("check-{:02}-{}.{ext}", r.index, r.theorem_id.as_str())
}

/// The contents of one report file.
pub fn report_text(r: &CheckResult, format: Format) -> String {
    match format {
        Format::Json => crate::json::to_string(&ReportFile { index: r.index, label: &r.label, report: &r.report }).expect("reports serialize"),
        Format::Csv => r.report.trace_csv(),
    }
}

/// The summary of a run.
pub fn summary_text(cfg: &ExperimentConfig, results: &[CheckResult], format: Format) -> String {
    let rows: Vec<SummaryRow> = results.iter().map(SummaryRow::of).collect();
    match format {
        Format::Json => crate::json::to_string(&Summary { name: &cfg.name, seed: cfg.seed, exit_code: exit_code(results), checks: rows }).expect("summary serializes"),
        Format::Csv => {
            let mut out = format!("{}\n", SummaryRow::CSV_HEADER);
            for r in &rows {
                out.push_str(&r.csv());
                out.push('\n');
            }
            out
        }
    }
}

/// Writes one report per check and a summary into the output directory,
/// resolved against `base`. Returns the written paths in order.
pub fn write_reports(cfg: &ExperimentConfig, base: Option<&Path>, results: &[CheckResult]) -> Result<Vec<PathBuf>, RunError> {
    let Some(out) = &cfg.output else { return Ok(Vec::new()) };
    let dir = base.map_or_else(|| out.path.clone(), |b| b.join(&out.path));
    std::fs::create_dir_all(&dir).map_err(|e| RunError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    let mut put = |name: String, text: String| -> Result<(), RunError> {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
        Ok(())
    };
    for r in results {
        put(report_name(r, out.format), report_text(r, out.format))?;
    }
    let ext = if out.format == Format::Csv { "csv" } else { "json" };
    put(format!("summary.{ext}"), summary_text(cfg, results, out.format))?;
    Ok(written)
}

/// The Yosida trajectory of the first `yosida_min_norm` check.
pub fn trajectory(cfg: &ExperimentConfig) -> Result<Trajectory, RunError> {
    let (index, c) = cfg
        .checks
        .iter()
        .enumerate()
        .find(|(_, c)| c.theorem_id == TheoremId::YosidaMinNorm)
        .ok_or_else(|| RunError::Config(ConfigError("checks: no yosida_min_norm check to export".into())))?;
    let op = Operator::new(cfg.operator.clone(), cfg.space).map_err(|e| RunError::Config(ConfigError(format!("operator: {e}"))))?;
    yosida_trajectory(&op, &c.x, &c.schedule).map_err(|source| RunError::Check { index, label: c.label.clone(), source })
}
