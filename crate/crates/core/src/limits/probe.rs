//! Probe points `y = x + t w` along shrinking scales, and cluster extraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dist2, scale, sub};
use crate::operators::{Operator, OperatorSpec, SelectionPolicy};
use crate::sampling;
use crate::space::lp_norm;

/// Geometric scales `t_n = t0 * ratio^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleSchedule {
    pub t0: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Default for ScaleSchedule {
    fn default() -> Self {
        ScaleSchedule { t0: 1e-2, ratio: 0.5, steps: 20 }
    }
}

impl ScaleSchedule {
    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|n| self.t0 * self.ratio.powi(n as i32)).collect()
    }
}

/// Which points count as members of the dense set `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseSet {
    /// Every point of the domain.
    Domain,
    /// Interior points where no two max-affine pieces tie exactly. Points
    /// failing the test are nudged by at most `1e-6 t` before being skipped.
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitProbe {
    pub t_schedule: ScaleSchedule,
    /// Jitter radius relative to the scale: `δ_n = jitter_scale * t_n`.
    pub jitter_scale: f64,
    /// Jitter offsets per scale, the zero offset included.
    pub jitter_count: usize,
    pub dense_set: DenseSet,
    pub selection: SelectionPolicy,
    /// Tail scales that must agree with the cluster set.
    pub stable_scales: usize,
    /// Size of the direction net for boundary and decomposition probes.
    pub net_size: Option<usize>,
    pub seed: u64,
}

impl Default for LimitProbe {
    fn default() -> Self {
        LimitProbe {
            t_schedule: ScaleSchedule::default(),
            jitter_scale: 1e-5,
            jitter_count: 8,
            dense_set: DenseSet::Domain,
            selection: SelectionPolicy::MinNorm,
            stable_scales: 5,
            net_size: None,
            seed: 0,
        }
    }
}

impl LimitProbe {
    pub fn validate(&self) -> Result<()> {
        let s = &self.t_schedule;
        if !(s.t0 > 0.0 && s.t0.is_finite() && s.ratio > 0.0 && s.ratio < 1.0 && s.steps > 0) {
            return Err(Error::InvalidArgument("scale schedule needs t0 > 0, ratio in (0, 1) and steps > 0".into()));
        }
        if !(self.jitter_scale >= 0.0 && self.jitter_scale.is_finite()) || self.jitter_count == 0 {
            return Err(Error::InvalidArgument("jitter needs a finite nonnegative scale and at least one offset".into()));
        }
        if self.stable_scales == 0 || self.stable_scales > s.steps {
            return Err(Error::InvalidArgument("stable_scales must lie in 1..=steps".into()));
        }
        Ok(())
    }

    pub fn with_dense(mut self, dense: DenseSet, selection: SelectionPolicy) -> Self {
        self.dense_set = dense;
        self.selection = selection;
        self
    }

    /// Direction net for probes that range over all directions.
    pub fn net(&self, dim: usize) -> Vec<Vec<f64>> {
        let count = self.net_size.unwrap_or(match dim {
            1 => 2,
            2 => 64,
            3 => 150,
            _ => 200,
        });
        sampling::sphere_directions(dim, count, self.seed)
    }
}

/// Where probe points must land.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Domain,
    Dense(DenseSet),
}

/// A feasible probe point `y = x + t w` with the effective direction `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePoint {
    pub t: f64,
    pub w: Vec<f64>,
    pub y: Vec<f64>,
}

fn generic(op: &Operator, y: &[f64]) -> bool {
    op.domain_closure().interior_contains(y, 0.0)
        && op.spec().summands().iter().all(|s| match s {
            OperatorSpec::SubdiffMaxAffine { function } => !function.has_exact_tie(y),
            _ => true,
        })
}

/// Move `x + t w` into the region. Infeasible points are retracted into the
/// domain and kept when the effective direction moved by at most `sqrt t`;
/// the generic dense set additionally nudges by at most `1e-6 t`.
pub fn place(op: &Operator, x: &[f64], w: &[f64], t: f64, region: Region) -> Option<ProbePoint> {
    let raw = axpy(x, t, w);
    let y = if op.in_domain(&raw) { raw } else { op.domain_closure().retract(&raw) };
    if !op.in_domain(&y) {
        return None;
    }
    let weff = scale(1.0 / t, &sub(&y, x));
    if dist2(&weff, w) > t.sqrt() {
        return None;
    }
    let y = match region {
        Region::Domain | Region::Dense(DenseSet::Domain) => y,
        Region::Dense(DenseSet::Generic) => {
            if generic(op, &y) {
                y
            } else {
                let n = y.len();
                (0..4 * (1usize << n.min(6)))
                    .map(|k| axpy(&y, 1e-6 * t, &sampling::nudge_direction(n, k, k as u32)))
                    .find(|z| op.in_domain(z) && generic(op, z))?
            }
        }
    };
    let w = scale(1.0 / t, &sub(&y, x));
    if y == x {
        return None;
    }
    Some(ProbePoint { t, w, y })
}

/// Probe points for one scale: each base direction with every jitter offset.
pub fn scale_points(op: &Operator, x: &[f64], dirs: &[Vec<f64>], t: f64, probe: &LimitProbe, region: Region) -> (Vec<ProbePoint>, usize) {
    let jit = sampling::jitters(x.len(), probe.jitter_count);
    let delta = probe.jitter_scale * t;
    let mut pts = Vec::new();
    let mut skipped = 0;
    for d in dirs {
        for j in &jit {
            match place(op, x, &axpy(d, delta, j), t, region) {
                Some(p) => pts.push(p),
                None => skipped += 1,
            }
        }
    }
    (pts, skipped)
}

/// Single-linkage groups of `points` under the closeness test `close`.
/// Groups are listed by first member; each is represented by that member.
pub fn agglomerate(points: &[Vec<f64>], close: impl Fn(&[f64], &[f64]) -> bool) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..i {
            if close(&points[i], &points[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                // keep the earlier index as root so representatives are first members
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).map(|i| points[i].clone()).collect()
}

/// Norm-convergence clusters in the dual norm.
pub fn strong_clusters(points: &[Vec<f64>], q: f64, radius: f64) -> Vec<Vec<f64>> {
    agglomerate(points, |a, b| lp_norm(&sub(a, b), q) <= radius)
}

/// Clusters declared through the coordinate functionals, which generate the
/// weak topology in finite dimension.
pub fn weak_clusters(points: &[Vec<f64>], radius: f64) -> Vec<Vec<f64>> {
    agglomerate(points, |a, b| a.iter().zip(b).all(|(u, v)| (u - v).abs() <= radius))
}

/// Every point of `a` lies within `tol` (Euclidean) of some point of `b`.
pub fn covered(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.iter().all(|p| b.iter().any(|c| dist2(p, c) <= tol))
}
