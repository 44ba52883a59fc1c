//! Closed domains `cl D(A)` of the supported operators.

use crate::convex::{cones, PolyhedralSet};
use crate::linalg::{dot, normalized, scale};
use crate::space::{duality, lp_norm};
use crate::tol;

/// Position of a direction relative to the tangent cone `T(x; cl D(A))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TangentClass {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Whole(usize),
    /// A polyhedron carrying its inequality description.
    Polyhedron(PolyhedralSet),
    /// Closed unit ball of lp.
    UnitBall { dim: usize, p: f64 },
    Intersection(Vec<Domain>),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Whole(d) => *d,
            Domain::Polyhedron(s) => s.dim(),
            Domain::UnitBall { dim, .. } => *dim,
            Domain::Intersection(parts) => parts[0].dim(),
        }
    }

    /// Intersection of two domains, flattening trivial cases.
    pub fn meet(self, other: Domain) -> Domain {
        match (self, other) {
            (Domain::Whole(_), d) | (d, Domain::Whole(_)) => d,
            (Domain::Intersection(mut a), Domain::Intersection(b)) => {
                a.extend(b);
                Domain::Intersection(a)
            }
            (Domain::Intersection(mut a), d) | (d, Domain::Intersection(mut a)) => {
                a.push(d);
                Domain::Intersection(a)
            }
            (a, b) => Domain::Intersection(vec![a, b]),
        }
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        match self {
            Domain::Whole(_) => true,
            Domain::Polyhedron(s) => s.contains(y, tol),
            Domain::UnitBall { p, .. } => lp_norm(y, *p) <= 1.0 + tol,
            Domain::Intersection(parts) => parts.iter().all(|d| d.contains(y, tol)),
        }
    }

    /// `y` lies in the interior with margin (for the ball: `||y|| < 1 - margin`).
    pub fn interior_contains(&self, y: &[f64], margin: f64) -> bool {
        match self {
            Domain::Whole(_) => true,
            Domain::Polyhedron(s) => {
                s.has_interior() && s.hrep().iter().all(|h| dot(&h.a, y) < h.b - margin)
            }
            Domain::UnitBall { p, .. } => lp_norm(y, *p) < 1.0 - margin,
            Domain::Intersection(parts) => parts.iter().all(|d| d.interior_contains(y, margin)),
        }
    }

    pub fn has_interior(&self) -> bool {
        self.interior_point().is_some()
    }

    /// Some interior point, if one is found. Exact for a single part; for
    /// intersections the retractions of a Halton cloud and their mean are tried.
    pub fn interior_point(&self) -> Option<Vec<f64>> {
        match self {
            Domain::Whole(d) => Some(vec![0.0; *d]),
            Domain::UnitBall { dim, .. } => Some(vec![0.0; *dim]),
            Domain::Polyhedron(s) => {
                if !s.has_interior() {
                    return None;
                }
                let mut c = vec![0.0; s.dim()];
                let n = s.vertices().len() as f64;
                for v in s.vertices() {
                    for (ci, vi) in c.iter_mut().zip(v) {
                        *ci += vi / n;
                    }
                }
                for r in s.rays() {
                    for (ci, ri) in c.iter_mut().zip(r) {
                        *ci += ri;
                    }
                }
                Some(c)
            }
            Domain::Intersection(parts) => {
                let dim = self.dim();
                let mut candidates = Vec::new();
                for d in parts {
                    candidates.push(d.interior_point()?);
                }
                let radius = 1.0 + self.extent();
                for k in 0..64u64 {
                    let h = crate::sampling::halton(k, dim);
                    candidates.push(h.iter().map(|t| radius * (2.0 * t - 1.0)).collect());
                }
                let retracted: Vec<Vec<f64>> = candidates.iter().map(|c| self.retract(c)).collect();
                let mut mean = vec![0.0; dim];
                for r in &retracted {
                    for (m, ri) in mean.iter_mut().zip(r) {
                        *m += ri / retracted.len() as f64;
                    }
                }
                std::iter::once(mean).chain(retracted).find(|z| self.interior_contains(z, 1e-9))
            }
        }
    }

    /// Largest absolute vertex coordinate of the polyhedral parts (1 for the ball).
    pub fn extent(&self) -> f64 {
        match self {
            Domain::Whole(_) => 0.0,
            Domain::UnitBall { .. } => 1.0,
            Domain::Polyhedron(s) => s.vertices().iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())),
            Domain::Intersection(parts) => parts.iter().map(Domain::extent).fold(0.0, f64::max),
        }
    }

    /// A nearby point of the domain: Euclidean projection for polyhedra,
    /// radial scaling for the ball, alternating projections for intersections.
    pub fn retract(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Domain::Whole(_) => y.to_vec(),
            Domain::Polyhedron(s) => s.project(y).unwrap_or_else(|_| y.to_vec()),
            Domain::UnitBall { p, .. } => {
                let n = lp_norm(y, *p);
                if n <= 1.0 {
                    y.to_vec()
                } else {
                    let mut z = scale(1.0 / n, y);
                    // guard against rounding just outside the sphere
                    while lp_norm(&z, *p) > 1.0 {
                        z = scale(1.0 - f64::EPSILON, &z);
                    }
                    z
                }
            }
            Domain::Intersection(parts) => {
                let mut z = y.to_vec();
                for _ in 0..200 {
                    for d in parts {
                        z = d.retract(&z);
                    }
                    if parts.iter().all(|d| d.contains(&z, 1e-13)) {
                        break;
                    }
                }
                z
            }
        }
    }

    /// Generators of the normal cone `N(x; cl D)` (unit vectors, possibly none).
    pub fn normal_generators(&self, x: &[f64]) -> Vec<Vec<f64>> {
        match self {
            Domain::Whole(_) => Vec::new(),
            Domain::Polyhedron(s) => s.active_normals(x).unwrap_or_default(),
            Domain::UnitBall { p, .. } => {
                if (lp_norm(x, *p) - 1.0).abs() <= tol::GEOMETRY {
                    normalized(&duality(x, *p)).into_iter().collect()
                } else {
                    Vec::new()
                }
            }
            Domain::Intersection(parts) => parts.iter().flat_map(|d| d.normal_generators(x)).collect(),
        }
    }

    /// `N(x; cl D)` as a polyhedral cone.
    pub fn normal_cone(&self, x: &[f64]) -> PolyhedralSet {
        let dim = self.dim();
        PolyhedralSet::cone(dim, self.normal_generators(x)).expect("normal generators have the domain dimension")
    }

    /// `T(x; cl D)` as a polyhedral cone.
    pub fn tangent_cone(&self, x: &[f64]) -> PolyhedralSet {
        let dim = self.dim();
        let rays = cones::cone_from_inequalities(dim, &self.normal_generators(x));
        PolyhedralSet::cone(dim, rays).expect("tangent generators have the domain dimension")
    }

    /// Classify `v` against the tangent cone at `x` with tolerance 1e-9 on
    /// the unit normal generators.
    pub fn classify(&self, x: &[f64], v: &[f64]) -> TangentClass {
        let gens = self.normal_generators(x);
        let worst = gens.iter().map(|n| dot(n, v)).fold(f64::NEG_INFINITY, f64::max);
        if worst > tol::GEOMETRY {
            TangentClass::Outside
        } else if worst >= -tol::GEOMETRY || !self.tangent_has_interior(&gens) {
            TangentClass::Boundary
        } else {
            TangentClass::Interior
        }
    }

    fn tangent_has_interior(&self, gens: &[Vec<f64>]) -> bool {
        // a cone {v : <n_i, v> <= 0} has interior iff the n_i lie in an open halfspace,
        // i.e. no nonnegative combination of them vanishes
        if gens.is_empty() {
            return true;
        }
        let dim = self.dim();
        let cone = PolyhedralSet::cone(dim, gens.to_vec()).expect("dimension");
        // pointed cone <=> 0 is the only point of the cone with norm 0 and no opposite rays
        let rays = cone.rays();
        !rays.iter().any(|r| {
            let neg = scale(-1.0, r);
            cone.contains(&neg, 1e-12)
        })
    }

    /// `v` lies in the tangent cone at `x`.
    pub fn tangent_contains(&self, x: &[f64], v: &[f64]) -> bool {
        self.classify(x, v) != TangentClass::Outside
    }

    /// The closed ball `B(x; r)` (Euclidean) lies inside the domain.
    pub fn contains_ball(&self, x: &[f64], r: f64) -> bool {
        match self {
            Domain::Whole(_) => true,
            Domain::Polyhedron(s) => s.has_interior() && s.hrep().iter().all(|h| dot(&h.a, x) + r <= h.b),
            Domain::UnitBall { p, .. } => {
                // ||y||_p <= ||x||_p + ||y - x||_p and ||.||_p <= c ||.||_2
                let n = x.len() as f64;
                let c = if *p >= 2.0 { 1.0 } else { n.powf(1.0 / p - 0.5) };
                lp_norm(x, *p) + c * r <= 1.0
            }
            Domain::Intersection(parts) => parts.iter().all(|d| d.contains_ball(x, r)),
        }
    }
}
