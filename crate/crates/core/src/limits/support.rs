use serde_json::Value;

use crate::convex::SupportValue;
use crate::error::{Error, Result};
use crate::json::real;
use crate::linalg::dot;
use crate::operators::{Operator, SelectionPolicy, TangentClass};
use crate::tol::{self, Tolerances};

use super::{check_point, LimitProbe, LimsupEstimate, ProbePoint, Quantity, Region, Sample, Status, VerificationReport};

fn extended(s: &SupportValue) -> f64 {
    s.finite().unwrap_or(f64::INFINITY)
}

fn class_name(c: TangentClass) -> &'static str {
    match c {
        TangentClass::Interior => "interior",
        TangentClass::Boundary => "boundary",
        TangentClass::Outside => "outside",
    }
}

/// Liminf probe of `<Ã(x + t w), w>`, with the lower bound
/// `<Ã(x + t w), w> >= σ_Ax(w)` checked at every sample (up to the error
/// that near-active pieces allow).
struct Liminf {
    est: LimsupEstimate,
    value: f64,
    worst_lower: f64,
    running_min: f64,
}

fn liminf(op: &Operator, x: &[f64], v: &[f64], probe: &LimitProbe, region: Region, policy: &SelectionPolicy, tols: &Tolerances) -> Result<Liminf> {
    let ax = op.value(x)?;
    let mut worst_lower = f64::INFINITY;
    let est = LimsupEstimate::collect(op, x, &[v.to_vec()], probe, region, None, tols, |p: &ProbePoint| -> Result<Sample> {
        let s = op.select(&p.y, policy)?.0;
        let pairing = dot(&s, &p.w);
        if let Some(sigma) = ax.support_function(&p.w)?.finite() {
            let slack = tol::GEOMETRY + tol::ACTIVITY / p.t;
            worst_lower = worst_lower.min(pairing - sigma + slack);
        }
        Ok((vec![s], Vec::new(), Some(pairing)))
    })?;
    let k = probe.stable_scales;
    let stats: Vec<Option<f64>> = est.per_scale.iter().map(|r| r.statistic).collect();
    let value = stats[stats.len().saturating_sub(k)..].iter().flatten().copied().fold(f64::INFINITY, f64::min);
    // the tail minimum at every truncation depth
    let mut running_min = f64::INFINITY;
    for d in 0..stats.len() {
        let m = stats[d.saturating_sub(k - 1)..=d].iter().flatten().copied().fold(f64::INFINITY, f64::min);
        if m.is_finite() {
            running_min = running_min.min(m);
        }
    }
    Ok(Liminf { est, value, worst_lower, running_min })
}

fn liminf_report(id: &str, l: Liminf, oracle: f64, class: TangentClass, policy: &SelectionPolicy, tols: &Tolerances) -> VerificationReport {
    let distance = if oracle.is_finite() { (l.value - oracle).abs() } else { f64::INFINITY };
    let lhs_ok = !oracle.is_finite() || l.running_min >= oracle - tols.support;
    let lower_ok = l.worst_lower >= 0.0;
    let status = if l.est.feasible() == 0 || !l.value.is_finite() {
        Status::Inconclusive
    } else if distance <= tols.support && lhs_ok && lower_ok {
        Status::Pass
    } else {
        Status::Fail
    };
    VerificationReport::new(id, status, Quantity::Real { value: l.value }, Quantity::Real { value: oracle }, distance, tols.support, tols)
        .diag("tangent_class", class_name(class))
        .diag("selection", policy.name())
        .diag("running_liminf_min", real(l.running_min))
        .diag("one_sided_bound_holds", lhs_ok)
        .diag("sample_lower_bound_slack", real(l.worst_lower))
        .diag("stabilized", l.est.stabilized)
        .with_trace(l.est.trace())
}

fn outside_report(id: &str, oracle: f64, class: TangentClass, policy: &SelectionPolicy, tols: &Tolerances) -> VerificationReport {
    let distance = if oracle.is_infinite() { 0.0 } else { f64::INFINITY };
    VerificationReport::compare(id, Quantity::Real { value: f64::INFINITY }, Quantity::Real { value: oracle }, distance, tols.support, tols)
        .diag("tangent_class", class_name(class))
        .diag("selection", policy.name())
}

/// `σ_Ax(v)` as the liminf of `<A∘(x + t w), w>` for `v` tangent to the
/// domain, `+∞` otherwise.
pub fn support_via_minnorm(op: &Operator, x: &[f64], v: &[f64], probe: &LimitProbe, tols: &Tolerances) -> Result<VerificationReport> {
    check_point(op, x, Some(v))?;
    let oracle = extended(&op.value(x)?.support_function(v)?);
    let class = op.domain_closure().classify(x, v);
    let policy = SelectionPolicy::MinNorm;
    if class == TangentClass::Outside {
        return Ok(outside_report("support_minnorm", oracle, class, &policy, tols));
    }
    let l = liminf(op, x, v, probe, Region::Domain, &policy, tols)?;
    Ok(liminf_report("support_minnorm", l, oracle, class, &policy, tols))
}

/// `σ_Ax(v)` from a selection `Ã` on the dense set of the probe:
/// `<ξ, v>` for any cluster point `ξ` when `v` is interior to the tangent
/// cone, the liminf of `<Ã(x + t w), w>` on its boundary, `+∞` outside.
pub fn support_via_selection(op: &Operator, x: &[f64], v: &[f64], probe: &LimitProbe, tols: &Tolerances) -> Result<VerificationReport> {
    check_point(op, x, Some(v))?;
    if !op.domain_closure().has_interior() {
        return Err(Error::EmptyInterior);
    }
    let oracle = extended(&op.value(x)?.support_function(v)?);
    let class = op.domain_closure().classify(x, v);
    let policy = &probe.selection;
    let region = Region::Dense(probe.dense_set);
    match class {
        TangentClass::Outside => Ok(outside_report("support_selection", oracle, class, policy, tols)),
        TangentClass::Boundary => {
            let l = liminf(op, x, v, probe, region, policy, tols)?;
            Ok(liminf_report("support_selection", l, oracle, class, policy, tols))
        }
        TangentClass::Interior => {
            let est = LimsupEstimate::collect(op, x, &[v.to_vec()], probe, region, None, tols, |p| {
                Ok((vec![op.select(&p.y, policy)?.0], Vec::new(), None))
            })?;
            let pairings: Vec<f64> = est.cluster_points.iter().map(|xi| dot(xi, v)).collect();
            if pairings.is_empty() {
                return Ok(VerificationReport::new(
                    "support_selection",
                    Status::Inconclusive,
                    Quantity::None,
                    Quantity::Real { value: oracle },
                    f64::INFINITY,
                    tols.support,
                    tols,
                )
                .diag("tangent_class", class_name(class))
                .with_trace(est.trace()));
            }
            let lo = pairings.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = pairings.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let value = pairings[0];
            // every cluster point lies in the face, so any of them may serve as ξ
            let distance = if oracle.is_finite() { pairings.iter().map(|s| (s - oracle).abs()).fold(0.0, f64::max) } else { f64::INFINITY };
            let status = if distance <= tols.support && hi - lo <= tols.support { Status::Pass } else { Status::Fail };
            Ok(VerificationReport::new("support_selection", status, Quantity::Real { value }, Quantity::Real { value: oracle }, distance, tols.support, tols)
                .diag("tangent_class", class_name(class))
                .diag("selection", policy.name())
                .diag("cluster_pairings", Value::Array(pairings.iter().map(|s| real(*s)).collect()))
                .diag("stabilized", est.stabilized)
                .diag("weak_limsup_agrees", est.weak_agrees)
                .with_trace(est.trace()))
        }
    }
}
