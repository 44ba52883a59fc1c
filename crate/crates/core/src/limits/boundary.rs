use crate::convex::{set_distance, union_distance, PolyhedralSet};
use crate::error::{Error, Result};
use crate::linalg::{dist2, normalized, null_space, sub};
use crate::sampling;
use crate::tol::Tolerances;

use super::probe::place;
use super::{check_point, generators, LimitProbe, LimsupEstimate, Quantity, Region, Status, VerificationReport};
use crate::operators::Operator;

/// Appends `set` unless an equal one is already listed.
fn push_distinct(list: &mut Vec<PolyhedralSet>, set: PolyhedralSet, tol: f64) -> Result<()> {
    if set.is_empty() {
        return Ok(());
    }
    for s in list.iter() {
        if set_distance(s, &set)? <= tol {
            return Ok(());
        }
    }
    list.push(set);
    Ok(())
}

/// Boundary of a value as the union of its faces over the facet normals
/// and a dense direction net; a set without interior is its own boundary.
fn boundary_oracle(value: &PolyhedralSet, seed: u64) -> Result<Vec<PolyhedralSet>> {
    let dim = value.dim();
    if value.affine_dim().is_none_or(|d| d < dim) {
        return Ok(vec![value.clone()]);
    }
    let mut dirs: Vec<Vec<f64>> = value.hrep().iter().map(|h| h.a.clone()).collect();
    dirs.extend(sampling::sphere_directions(dim, if dim == 2 { 720 } else { 2000 }, seed));
    let mut out = Vec::new();
    for d in &dirs {
        push_distinct(&mut out, value.face_of(d)?, 1e-12)?;
    }
    Ok(out)
}

/// Directions orthogonal to the affine hull of small groups of observed
/// vertices, each pointing along the mean of the directions that produced them.
fn refinement_directions(clusters: &[Vec<f64>], sources: &[Vec<Vec<f64>>], dim: usize) -> Vec<Vec<f64>> {
    let k = clusters.len().min(12);
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    while let Some(group) = stack.pop() {
        let last = *group.last().expect("groups are nonempty");
        if group.len() < dim {
            for j in last + 1..k {
                let mut g = group.clone();
                g.push(j);
                stack.push(g);
            }
        }
        if group.len() < 2 {
            continue;
        }
        let rows: Vec<Vec<f64>> = group[1..].iter().map(|&i| sub(&clusters[i], &clusters[group[0]])).collect();
        let a = nalgebra::DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
        let basis = null_space(&a);
        if basis.is_empty() {
            continue;
        }
        let mut mean = vec![0.0; dim];
        for &i in &group {
            for w in &sources[i] {
                for (m, c) in mean.iter_mut().zip(w) {
                    *m += c;
                }
            }
        }
        let mut proj = vec![0.0; dim];
        for b in &basis {
            let c: f64 = b.iter().zip(&mean).map(|(u, v)| u * v).sum();
            for (p, bi) in proj.iter_mut().zip(b) {
                *p += c * bi;
            }
        }
        if let Some(d) = normalized(&proj) {
            if !out.iter().any(|o| dist2(o, &d) <= 1e-12) {
                out.push(d);
            }
        }
    }
    out
}

/// `bd(Ax)` as the upper limit of `A(y)` for `y -> x`, `y != x`.
pub fn boundary_estimate(op: &Operator, x: &[f64], probe: &LimitProbe, tols: &Tolerances) -> Result<VerificationReport> {
    check_point(op, x, None)?;
    let dim = op.dim();
    let value = op.value(x)?;
    let mut pr = probe.clone();
    pr.jitter_count = 1;
    let net = probe.net(dim);
    let t_min = *probe.t_schedule.values().last().expect("schedule is nonempty");
    let mut finest: Vec<(Vec<f64>, PolyhedralSet)> = Vec::new();
    let est = LimsupEstimate::collect(op, x, &net, &pr, Region::Domain, Some(probe.stable_scales), tols, |p| {
        let v = op.value(&p.y)?;
        let g = generators(&v);
        if p.t == t_min {
            finest.push((p.w.clone(), v));
        }
        Ok(g)
    })?;
    let sources: Vec<Vec<Vec<f64>>> = est
        .cluster_points
        .iter()
        .map(|c| finest.iter().filter(|(_, v)| v.vertices().iter().any(|u| dist2(u, c) <= tols.cluster)).map(|(w, _)| w.clone()).collect())
        .collect();
    let extra = refinement_directions(&est.cluster_points, &sources, dim);
    let mut pieces = Vec::new();
    for (_, v) in &finest {
        push_distinct(&mut pieces, v.clone(), tols.cluster)?;
    }
    for d in &extra {
        if let Some(p) = place(op, x, d, t_min, Region::Domain) {
            push_distinct(&mut pieces, op.value(&p.y)?, tols.cluster)?;
        }
    }
    let oracle = boundary_oracle(&value, probe.seed)?;
    let empty = pieces.is_empty();
    let distance = if empty { f64::INFINITY } else { union_distance(&pieces, &oracle)? };
    let mut r = VerificationReport::compare("boundary", Quantity::Union { pieces }, Quantity::Union { pieces: oracle }, distance, tols.boundary, tols)
        .diag("bounded_value", value.is_bounded())
        .diag("refinement_directions", extra.len())
        .diag("stabilized", est.stabilized)
        .diag("weak_limsup_agrees", est.weak_agrees)
        .with_trace(est.trace());
    if empty {
        r.set_status(Status::Inconclusive);
    }
    Ok(r)
}

/// `Ax = conv{cluster points of Ã(y), y -> x through D} + N(x; cl D(A))`,
/// compared through support functions in seeded directions.
pub fn decompose(op: &Operator, x: &[f64], probe: &LimitProbe, tols: &Tolerances) -> Result<VerificationReport> {
    op.space().check(x)?;
    let dom = op.domain_closure();
    if !dom.has_interior() {
        return Err(Error::EmptyInterior);
    }
    let dim = op.dim();
    if !op.in_domain(x) {
        let e = PolyhedralSet::empty(dim);
        return Ok(VerificationReport::compare("decomposition", Quantity::Set { set: e.clone() }, Quantity::Set { set: e }, 0.0, tols.decomposition, tols)
            .diag("both_sides_empty", true));
    }
    let mut pr = probe.clone();
    pr.jitter_count = 1;
    let net = probe.net(dim);
    let est = LimsupEstimate::collect(op, x, &net, &pr, Region::Dense(probe.dense_set), Some(probe.stable_scales), tols, |p| {
        Ok((vec![op.select(&p.y, &probe.selection)?.0], Vec::new(), None))
    })?;
    let lhs = op.value(x)?;
    let hull = est.hull(dim)?;
    if hull.is_empty() {
        return Ok(VerificationReport::new("decomposition", Status::Inconclusive, Quantity::None, Quantity::Set { set: lhs }, f64::INFINITY, tols.decomposition, tols)
            .with_trace(est.trace()));
    }
    let rhs = hull.minkowski_sum(&dom.normal_cone(x))?;
    let mut gap = 0.0f64;
    let mut mismatched = 0usize;
    for d in sampling::gaussian_directions(dim, 200, probe.seed) {
        match (lhs.support_function(&d)?.finite(), rhs.support_function(&d)?.finite()) {
            (Some(a), Some(b)) => gap = gap.max((a - b).abs()),
            (None, None) => {}
            _ => {
                mismatched += 1;
                gap = f64::INFINITY;
            }
        }
    }
    let cluster_count = est.cluster_points.len();
    Ok(VerificationReport::compare("decomposition", Quantity::Set { set: rhs }, Quantity::Set { set: lhs }, gap, tols.decomposition, tols)
        .diag("selection", probe.selection.name())
        .diag("cluster_points", cluster_count)
        .diag("infinity_mismatches", mismatched)
        .with_trace(est.trace()))
}
