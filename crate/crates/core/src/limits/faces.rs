use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convex::set_distance;
use crate::error::{Error, Result};
use crate::json::real;
use crate::linalg::{add, sub};
use crate::operators::{Operator, OperatorSpec};
use crate::resolvent::Resolvent;
use crate::space::{duality, lp_norm};
use crate::tol::{self, Tolerances};

use super::{check_point, generators, points_value, LimitProbe, LimsupEstimate, Quantity, Region, Status, VerificationReport};
use crate::convex::PolyhedralSet;

/// Upper limit of `A(x + t w)` for `w -> v`, `t -> 0` against the face of
/// `Ax` in direction `v`.
pub fn estimate_limsup_face(op: &Operator, x: &[f64], v: &[f64], probe: &LimitProbe, tols: &Tolerances) -> Result<VerificationReport> {
    check_point(op, x, Some(v))?;
    let oracle = op.value(x)?.face_of(v)?;
    let est = LimsupEstimate::collect(op, x, &[v.to_vec()], probe, Region::Domain, None, tols, |p| Ok(generators(&op.value(&p.y)?)))?;
    let estimated = est.hull(op.dim())?;
    let distance = set_distance(&estimated, &oracle)?;
    let empty_estimate = estimated.is_empty();
    let mut r = VerificationReport::compare("face_limsup", Quantity::Set { set: estimated }, Quantity::Set { set: oracle.clone() }, distance, tols.face, tols)
        .diag("stabilized", est.stabilized)
        .diag("weak_limsup_agrees", est.weak_agrees)
        .diag("feasible", est.feasible())
        .diag("weak_strong_distinction", "not applicable (finite dimension)")
        .with_trace(est.trace());
    if empty_estimate && !oracle.is_empty() {
        r.set_status(Status::Inconclusive);
    }
    Ok(r)
}

/// Cluster points of `A∘(x + t w)` must form a nonempty subset of the face.
/// Records whether the inclusion is strict.
pub fn minnorm_limsup_face(op: &Operator, x: &[f64], v: &[f64], probe: &LimitProbe, tols: &Tolerances) -> Result<VerificationReport> {
    check_point(op, x, Some(v))?;
    let oracle = op.value(x)?.face_of(v)?;
    if oracle.is_empty() {
        return Err(Error::Hypothesis("the face of Ax in direction v is empty".into()));
    }
    let est = LimsupEstimate::collect(op, x, &[v.to_vec()], probe, Region::Domain, None, tols, |p| {
        Ok((vec![op.min_norm(&p.y)?.0], Vec::new(), None))
    })?;
    let estimated = est.hull(op.dim())?;
    let mut excess = 0.0f64;
    for c in &est.cluster_points {
        excess = excess.max(oracle.distance(c)?);
    }
    let gap = set_distance(&estimated, &oracle)?;
    let status = if est.cluster_points.is_empty() {
        excess = f64::INFINITY;
        Status::Inconclusive
    } else if excess <= tols.face {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerificationReport::new("face_minnorm", status, Quantity::Set { set: estimated }, Quantity::Set { set: oracle }, excess, tols.face, tols)
        .diag("strict", gap > tols.face)
        .diag("hull_to_face_distance", real(gap))
        .diag("cluster_points", points_value(&est.cluster_points))
        .diag("stabilized", est.stabilized)
        .diag("weak_limsup_agrees", est.weak_agrees)
        .with_trace(est.trace()))
}

/// One term of the sequence built from the resolvent of `A - J(v) - x*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceStep {
    pub n: usize,
    pub t: f64,
    pub w: Vec<f64>,
    /// `-J(w) + J(v) + x*`, an element of `A(x + t w)`.
    pub a: Vec<f64>,
    /// Euclidean distance from `a` to `A(x + t w)`.
    pub membership: f64,
    pub w_error: f64,
    pub a_error: f64,
}

/// For `x*` in the face of `Ax` in direction `v`, the points
/// `x_n = (I + (1/n) J⁻¹B)⁻¹ x` of `B = A - J(v) - x*` give directions
/// `w_n = n (x_n - x) -> v` and elements `-J(w_n) + J(v) + x* -> x*` of
/// `A(x + w_n / n)`.
pub fn constructive_face_sequence(
    op: &Operator,
    x: &[f64],
    xstar: &[f64],
    v: &[f64],
    n_max: usize,
    tols: &Tolerances,
) -> Result<(Vec<SequenceStep>, VerificationReport)> {
    check_point(op, x, Some(v))?;
    op.space().check(xstar)?;
    if n_max == 0 {
        return Err(Error::InvalidArgument("the sequence needs at least one term".into()));
    }
    let face = op.value(x)?.face_of(v)?;
    if !face.contains(xstar, tol::GEOMETRY) {
        return Err(Error::Hypothesis("x* is not in the face of Ax in direction v".into()));
    }
    let (p, q) = (op.space().p(), op.space().q());
    let n = op.dim();
    let jv = duality(v, p);
    let shift: Vec<f64> = add(&jv, xstar).iter().map(|c| -c).collect();
    let zero = vec![vec![0.0; n]; n];
    let b = Operator::new(OperatorSpec::Sum { terms: vec![op.spec().clone(), OperatorSpec::affine(zero, shift)] }, *op.space())?;
    let solver = Resolvent::new(&b);
    let mut steps = Vec::with_capacity(n_max);
    let mut guess: Option<Vec<f64>> = None;
    for k in 1..=n_max {
        let t = 1.0 / k as f64;
        let it = solver.solve(x, t, guess.as_deref())?;
        let w = it.scaled_step.clone();
        let a = add(&it.yosida_value, &add(&jv, xstar));
        let membership = op.value(&it.x_lambda)?.distance(&a)?;
        steps.push(SequenceStep { n: k, t, w_error: lp_norm(&sub(&w, v), p), a_error: lp_norm(&sub(&a, xstar), q), w, a, membership });
        guess = Some(it.x_lambda.0);
    }
    let worst_membership = steps.iter().map(|s| s.membership).fold(0.0, f64::max);
    let last = steps.last().expect("n_max >= 1");
    let distance = last.w_error.max(last.a_error);
    let status = if worst_membership <= tols.sequence_membership && distance <= tols.sequence_final { Status::Pass } else { Status::Fail };
    // successive error ratios over the tail, where errors are above rounding
    let tail: Vec<f64> = steps.iter().rev().take(10).rev().map(|s| s.w_error).collect();
    let ratio = tail.windows(2).filter(|w| w[0] > 1e-14 && w[1] > 1e-14).map(|w| w[1] / w[0]).fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
    let report = VerificationReport::new(
        "face_constructive",
        status,
        Quantity::Set { set: PolyhedralSet::singleton(last.a.clone()) },
        Quantity::Set { set: PolyhedralSet::singleton(xstar.to_vec()) },
        distance,
        tols.sequence_final,
        tols,
    )
    .diag("max_membership_residual", real(worst_membership))
    .diag("final_w_error", real(last.w_error))
    .diag("final_a_error", real(last.a_error))
    .diag("tail_error_ratio", ratio.map_or(Value::Null, real))
    .diag("terms", steps.len());
    Ok((steps, report))
}
