use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{dist2, norm2};

use super::{nearest, PolyhedralSet};

/// One-sided excess of `a` over `b`: the largest distance from a vertex of
/// `a` to `b`, plus the largest angle between a ray of `a` and the
/// recession cone of `b`.
///
/// The vertex term is exact whenever the recession cones agree, since the
/// distance to `b` is convex and nonincreasing along rays of `b`.
pub fn set_excess(a: &PolyhedralSet, b: &PolyhedralSet) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut h = 0.0f64;
    for v in a.vertices() {
        h = h.max(dist2(v, &nearest::project(v, b.vertices(), b.rays())));
    }
    let mut ang = 0.0f64;
    for r in a.rays() {
        ang = ang.max(ray_angle(r, b.rays(), a.dim()));
    }
    Ok(h + ang)
}

/// Angle between the unit ray `r` and the cone generated by `rays`.
fn ray_angle(r: &[f64], rays: &[Vec<f64>], dim: usize) -> f64 {
    if rays.is_empty() {
        return FRAC_PI_2;
    }
    let p = nearest::project(r, &[vec![0.0; dim]], rays);
    let n = norm2(&p);
    if n <= 1e-15 {
        FRAC_PI_2
    } else {
        n.min(1.0).acos()
    }
}

/// Symmetric distance: Hausdorff distance of the generator sets plus the
/// angular distance between recession cones. Two empty sets are at distance
/// zero; an empty and a nonempty set at infinity.
pub fn set_distance(a: &PolyhedralSet, b: &PolyhedralSet) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(0.0),
        (true, false) | (false, true) => return Ok(f64::INFINITY),
        _ => {}
    }
    Ok(set_excess(a, b)?.max(set_excess(b, a)?))
}

/// Distance between two finite unions of polyhedra, symmetrized from the
/// excess of every piece over its best-matching piece on the other side.
/// It bounds the Hausdorff distance between the unions from above.
pub fn union_distance(a: &[PolyhedralSet], b: &[PolyhedralSet]) -> Result<f64> {
    fn one_sided(a: &[PolyhedralSet], b: &[PolyhedralSet]) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in a.iter().filter(|p| !p.is_empty()) {
            let mut best = f64::INFINITY;
            for q in b.iter().filter(|q| !q.is_empty()) {
                best = best.min(set_excess(p, q)?);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    }
    Ok(one_sided(a, b)?.max(one_sided(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(a: f64, b: f64) -> PolyhedralSet {
        PolyhedralSet::convex_hull(vec![vec![a], vec![b]]).unwrap()
    }

    #[test]
    fn distance_examples() {
        let c = interval(0.0, 1.0);
        assert_eq!(set_distance(&c, &c).unwrap(), 0.0);
        assert_eq!(set_distance(&interval(0.0, 1.0), &interval(0.0, 2.0)).unwrap(), 1.0);
        let a = PolyhedralSet::cone(2, vec![vec![1.0, 0.0]]).unwrap();
        let b = PolyhedralSet::cone(2, vec![vec![0.0, 1.0]]).unwrap();
        assert!((set_distance(&a, &b).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn union_of_endpoints() {
        let ends = vec![PolyhedralSet::singleton(vec![-1.0]), PolyhedralSet::singleton(vec![1.0])];
        let same = vec![PolyhedralSet::singleton(vec![1.0]), PolyhedralSet::singleton(vec![-1.0])];
        assert_eq!(union_distance(&ends, &same).unwrap(), 0.0);
        let one = vec![PolyhedralSet::singleton(vec![1.0])];
        assert_eq!(union_distance(&ends, &one).unwrap(), 2.0);
    }
}
