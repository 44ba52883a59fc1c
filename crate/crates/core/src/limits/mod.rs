//! Estimates of upper limits of operator values along shrinking probes,
//! each checked against an exact polyhedral oracle.

mod boundary;
mod corollaries;
mod faces;
mod probe;
mod support;
mod yosida;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convex::PolyhedralSet;
use crate::error::{Error, Result};
use crate::numfmt::sci;
use crate::operators::Operator;
use crate::tol::Tolerances;

pub use boundary::{boundary_estimate, decompose};
pub use corollaries::{lipschitz_bound, local_bound_check, unique_determination_check, DeterminationMode, Region as SampleRegion};
pub use faces::{constructive_face_sequence, estimate_limsup_face, minnorm_limsup_face, SequenceStep};
pub use probe::{agglomerate, place, strong_clusters, weak_clusters, DenseSet, LimitProbe, ProbePoint, Region, ScaleSchedule};
pub use support::{support_via_minnorm, support_via_selection};
pub use yosida::yosida_min_norm_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the checked statement does not hold on the sample.
    PremiseFailed,
    /// No feasible probe point was found.
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::PremiseFailed => "premise_failed",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// The compared objects of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    Set { set: PolyhedralSet },
    Union { pieces: Vec<PolyhedralSet> },
    Real {
        #[serde(with = "crate::json::extended")]
        value: f64,
    },
    None,
}

/// One scale of a probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub scale: usize,
    pub t: f64,
    pub feasible: usize,
    pub skipped: usize,
    /// Scale-specific statistic (the smallest pairing for support probes).
    pub statistic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub status: Status,
    pub pass: bool,
    pub estimated: Quantity,
    pub oracle: Quantity,
    #[serde(with = "crate::json::extended")]
    pub distance: f64,
    pub tolerance: f64,
    pub diagnostics: BTreeMap<String, Value>,
    pub trace: Vec<TraceRow>,
    pub tolerances: Tolerances,
}

impl VerificationReport {
    pub fn new(theorem_id: &str, status: Status, estimated: Quantity, oracle: Quantity, distance: f64, tolerance: f64, tolerances: &Tolerances) -> Self {
        VerificationReport {
            theorem_id: theorem_id.into(),
            status,
            pass: status == Status::Pass,
            estimated,
            oracle,
            distance,
            tolerance,
            diagnostics: BTreeMap::new(),
            trace: Vec::new(),
            tolerances: *tolerances,
        }
    }

    /// Pass iff `distance <= tolerance`.
    pub fn compare(theorem_id: &str, estimated: Quantity, oracle: Quantity, distance: f64, tolerance: f64, tolerances: &Tolerances) -> Self {
        let status = if distance <= tolerance { Status::Pass } else { Status::Fail };
        Self::new(theorem_id, status, estimated, oracle, distance, tolerance, tolerances)
    }

    pub fn diag(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.into(), value.into());
        self
    }

    pub fn with_trace(mut self, trace: Vec<TraceRow>) -> Self {
        self.trace = trace;
        self
    }

    pub(crate) fn set_status(&mut self, status: Status) {
        self.status = status;
        self.pass = status == Status::Pass;
    }

    /// Trace rows as CSV: `scale,t,feasible,skipped,statistic`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("scale,t,feasible,skipped,statistic\n");
        for r in &self.trace {
            let stat = r.statistic.map(sci).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{}\n", r.scale, sci(r.t), r.feasible, r.skipped, stat));
        }
        out
    }
}

/// Samples at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRecord {
    pub t: f64,
    pub feasible: usize,
    pub skipped: usize,
    pub points: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
    pub statistic: Option<f64>,
}

/// Cluster points of the sampled values at the finest scale.
#[derive(Debug, Clone, PartialEq)]
pub struct LimsupEstimate {
    pub cluster_points: Vec<Vec<f64>>,
    pub cluster_rays: Vec<Vec<f64>>,
    pub per_scale: Vec<ScaleRecord>,
    /// Every tail scale matches the cluster set within `cluster + t`.
    pub stabilized: bool,
    /// Strong and weak cluster extraction returned identical lists.
    pub weak_agrees: bool,
}

/// What one probe point contributes: points, rays and a statistic.
pub(crate) type Sample = (Vec<Vec<f64>>, Vec<Vec<f64>>, Option<f64>);

impl LimsupEstimate {
    /// Probe `x + t w` for `w` near each of `dirs`, over the last `tail`
    /// scales of the schedule (all scales when `tail` is `None`).
    pub(crate) fn collect(
        op: &Operator,
        x: &[f64],
        dirs: &[Vec<f64>],
        probe: &LimitProbe,
        region: Region,
        tail: Option<usize>,
        tols: &Tolerances,
        mut sample: impl FnMut(&ProbePoint) -> Result<Sample>,
    ) -> Result<Self> {
        probe.validate()?;
        let ts = probe.t_schedule.values();
        let skip = tail.map_or(0, |k| ts.len().saturating_sub(k));
        let mut per_scale = Vec::new();
        for &t in &ts[skip..] {
            let (pts, skipped) = probe::scale_points(op, x, dirs, t, probe, region);
            let mut rec = ScaleRecord { t, feasible: pts.len(), skipped, points: Vec::new(), rays: Vec::new(), statistic: None };
            for p in &pts {
                let (vs, rs, stat) = sample(p)?;
                rec.points.extend(vs);
                rec.rays.extend(rs);
                if let Some(s) = stat {
                    rec.statistic = Some(rec.statistic.map_or(s, |m: f64| m.min(s)));
                }
            }
            per_scale.push(rec);
        }
        let last = per_scale.last().expect("schedule is nonempty");
        let q = op.space().q();
        let cluster_points = probe::strong_clusters(&last.points, q, tols.cluster);
        let cluster_rays = probe::strong_clusters(&last.rays, 2.0, tols.cluster);
        let weak_agrees = probe::weak_clusters(&last.points, tols.cluster) == cluster_points
            && probe::weak_clusters(&last.rays, tols.cluster) == cluster_rays;
        let k = probe.stable_scales.min(per_scale.len());
        let stabilized = !cluster_points.is_empty()
            && per_scale[per_scale.len() - k..].iter().all(|r| {
                let tol = tols.cluster + r.t;
                r.feasible > 0
                    && probe::covered(&r.points, &cluster_points, tol)
                    && probe::covered(&cluster_points, &r.points, tol)
                    && probe::covered(&r.rays, &cluster_rays, tol)
                    && probe::covered(&cluster_rays, &r.rays, tol)
            });
        Ok(LimsupEstimate { cluster_points, cluster_rays, per_scale, stabilized, weak_agrees })
    }

    /// `conv(cluster points) + cone(cluster rays)`, empty without points.
    pub fn hull(&self, dim: usize) -> Result<PolyhedralSet> {
        PolyhedralSet::new(dim, self.cluster_points.clone(), self.cluster_rays.clone())
    }

    pub fn trace(&self) -> Vec<TraceRow> {
        self.per_scale
            .iter()
            .enumerate()
            .map(|(k, r)| TraceRow { scale: k, t: r.t, feasible: r.feasible, skipped: r.skipped, statistic: r.statistic })
            .collect()
    }

    pub fn feasible(&self) -> usize {
        self.per_scale.iter().map(|r| r.feasible).sum()
    }
}

/// Shared preconditions: `x` in the space and the domain, `v` nonzero.
pub(crate) fn check_point(op: &Operator, x: &[f64], v: Option<&[f64]>) -> Result<()> {
    op.space().check(x)?;
    if let Some(v) = v {
        op.space().check(v)?;
        if v.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroDirection);
        }
    }
    if !op.in_domain(x) {
        return Err(Error::OutsideDomain);
    }
    Ok(())
}

/// Vertices and rays of a set.
pub(crate) fn generators(set: &PolyhedralSet) -> Sample {
    (set.vertices().to_vec(), set.rays().to_vec(), None)
}

/// A set as a JSON diagnostic list of vertices.
pub(crate) fn points_value(points: &[Vec<f64>]) -> Value {
    Value::Array(points.iter().map(|p| Value::Array(p.iter().map(|c| crate::json::real(*c)).collect())).collect())
}
