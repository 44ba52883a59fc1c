//! Generalized polyhedra `conv(V) + cone(R)` with exact support functions,
//! faces, nearest points, cones and set distances.

pub mod cones;
mod distance;
pub mod nearest;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dist2, dot, lex_cmp, norm2, normalized, rank, sub};
use crate::space::{Covector, SpaceSpec};
use crate::tol;

pub use distance::{set_distance, set_excess, union_distance};

/// The halfspace `<a, z> <= b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
}

/// A closed convex polyhedron given by generators, optionally with an
/// inequality description of the same set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct PolyhedralSet {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    rays: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    halfspaces: Option<Vec<Halfspace>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    vertices: Vec<Vec<f64>>,
    #[serde(default)]
    rays: Vec<Vec<f64>>,
    #[serde(default)]
    halfspaces: Option<Vec<Halfspace>>,
}

impl TryFrom<RawSet> for PolyhedralSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        let dim = raw
            .dim
            .or_else(|| raw.vertices.first().map(Vec::len))
            .or_else(|| raw.rays.first().map(Vec::len))
            .or_else(|| raw.halfspaces.as_ref().and_then(|h| h.first()).map(|h| h.a.len()))
            .ok_or(Error::ZeroDimension)?;
        match (raw.vertices.is_empty(), raw.halfspaces) {
            (true, Some(hs)) if raw.rays.is_empty() => PolyhedralSet::from_halfspaces(dim, hs),
            (_, hs) => {
                let set = PolyhedralSet::new(dim, raw.vertices, raw.rays)?;
                match hs {
                    Some(hs) => set.with_halfspaces(hs),
                    None => Ok(set),
                }
            }
        }
    }
}

/// Value of a support function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportValue {
    Finite { value: f64 },
    PlusInfinity { certificate: Vec<f64> },
}

impl SupportValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            SupportValue::Finite { value } => Some(*value),
            SupportValue::PlusInfinity { .. } => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SupportValue::PlusInfinity { .. })
    }
}

fn check_coords(dim: usize, v: &[f64]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn check_direction(dim: usize, d: &[f64]) -> Result<()> {
    check_coords(dim, d)?;
    if d.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

impl PolyhedralSet {
    /// `conv(vertices) + cone(rays)` in canonical form. An empty vertex list
    /// gives the empty set (rays are then ignored).
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>, rays: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for v in vertices.iter().chain(&rays) {
            check_coords(dim, v)?;
        }
        if vertices.is_empty() {
            return Ok(Self::empty(dim));
        }
        Ok(Self::canonical(dim, vertices, rays))
    }

    pub fn empty(dim: usize) -> Self {
        PolyhedralSet { dim, vertices: Vec::new(), rays: Vec::new(), halfspaces: None }
    }

    pub fn singleton(point: Vec<f64>) -> Self {
        PolyhedralSet { dim: point.len(), vertices: vec![point], rays: Vec::new(), halfspaces: None }
    }

    /// `cone(rays)` with apex at the origin.
    pub fn cone(dim: usize, rays: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(dim, vec![vec![0.0; dim]], rays)
    }

    /// The whole space.
    pub fn whole(dim: usize) -> Self {
        let mut rays = Vec::new();
        for i in 0..dim {
            rays.push(crate::linalg::unit(dim, i));
            rays.push(crate::linalg::scale(-1.0, &crate::linalg::unit(dim, i)));
        }
        Self::canonical(dim, vec![vec![0.0; dim]], rays).with_hrep(Vec::new())
    }

    /// The box `[lo, hi]` with both representations.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        let dim = lo.len();
        let mut hs = Vec::new();
        for i in 0..dim {
            if lo[i] > hi[i] {
                return Err(Error::EmptySet);
            }
            let e = crate::linalg::unit(dim, i);
            hs.push(Halfspace { a: e.clone(), b: hi[i] });
            hs.push(Halfspace { a: crate::linalg::scale(-1.0, &e), b: -lo[i] });
        }
        Self::from_halfspaces(dim, hs)
    }

    /// Convex hull of finitely many points.
    pub fn convex_hull(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptySet)?.len();
        Self::new(dim, points, Vec::new())
    }

    /// Polyhedron from an inequality description, by vertex enumeration.
    pub fn from_halfspaces(dim: usize, hs: Vec<Halfspace>) -> Result<Self> {
        for h in &hs {
            check_coords(dim, &h.a)?;
            if !h.b.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let hs = normalize_halfspaces(hs);
        let rows: Vec<(Vec<f64>, f64)> = hs.iter().map(|h| (h.a.clone(), h.b)).collect();
        let verts = cones::vertices_from_halfspaces(dim, &rows);
        if verts.is_empty() {
            return Err(Error::EmptySet);
        }
        let normals: Vec<Vec<f64>> = hs.iter().map(|h| h.a.clone()).collect();
        let rays = cones::cone_from_inequalities(dim, &normals);
        Ok(Self::canonical(dim, verts, rays).with_hrep(hs))
    }

    /// Attach an inequality description after checking it describes the same set.
    pub fn with_halfspaces(self, hs: Vec<Halfspace>) -> Result<Self> {
        for h in &hs {
            check_coords(self.dim, &h.a)?;
        }
        let hs = normalize_halfspaces(hs);
        for h in &hs {
            if self.vertices.iter().any(|v| dot(&h.a, v) > h.b + tol::GEOMETRY) {
                return Err(Error::InvalidArgument("a vertex violates a halfspace".into()));
            }
            match self.support_function(&h.a)? {
                SupportValue::Finite { value } if (value - h.b).abs() <= tol::GEOMETRY => {}
                _ => return Err(Error::InvalidArgument("a halfspace is not tight on the generators".into())),
            }
        }
        // the inequalities must not describe a larger set
        let from_h = Self::from_halfspaces(self.dim, hs.clone())?;
        if from_h.vertices.iter().any(|v| nearest_distance(&self, v) > tol::GEOMETRY) {
            return Err(Error::InvalidArgument("halfspaces describe a larger set than the generators".into()));
        }
        for r in &from_h.rays {
            let p = nearest::project(r, &[vec![0.0; self.dim]], &self.rays);
            if dist2(&p, r) > tol::GEOMETRY {
                return Err(Error::InvalidArgument("halfspaces allow a recession direction the generators lack".into()));
            }
        }
        let given = PolyhedralSet { halfspaces: Some(hs), ..self };
        Ok(given)
    }

    fn with_hrep(mut self, hs: Vec<Halfspace>) -> Self {
        self.halfspaces = Some(hs);
        self
    }

    /// Canonical form: unit rays without redundancy, vertices deduplicated,
    /// redundant ones removed, both lists sorted lexicographically.
    fn canonical(dim: usize, vertices: Vec<Vec<f64>>, rays: Vec<Vec<f64>>) -> Self {
        let mut rs: Vec<Vec<f64>> = Vec::new();
        for r in rays.iter().filter_map(|r| normalized(r)) {
            if !rs.iter().any(|s| dist2(s, &r) <= tol::GEOMETRY) {
                rs.push(r);
            }
        }
        rs.sort_by(|a, b| lex_cmp(a, b));
        let mut i = 0;
        while i < rs.len() {
            let others: Vec<Vec<f64>> = rs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
            if !others.is_empty() {
                let p = nearest::project(&rs[i], &[vec![0.0; dim]], &others);
                if dist2(&p, &rs[i]) <= tol::GEOMETRY {
                    rs.remove(i);
                    continue;
                }
            }
            i += 1;
        }

        let mut vs: Vec<Vec<f64>> = Vec::new();
        for v in vertices {
            if !vs.iter().any(|w| dist2(w, &v) <= tol::GEOMETRY) {
                vs.push(v);
            }
        }
        vs.sort_by(|a, b| lex_cmp(a, b));
        if vs.len() > 1 || !rs.is_empty() {
            let mut i = 0;
            while i < vs.len() && vs.len() > 1 {
                let others: Vec<Vec<f64>> = vs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
                let p = nearest::project(&vs[i], &others, &rs);
                if dist2(&p, &vs[i]) <= tol::GEOMETRY {
                    vs.remove(i);
                    continue;
                }
                i += 1;
            }
        }
        PolyhedralSet { dim, vertices: vs, rays: rs, halfspaces: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn halfspaces(&self) -> Option<&[Halfspace]> {
        self.halfspaces.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// Dimension of the affine hull (`-1` encoded as `None` for the empty set).
    pub fn affine_dim(&self) -> Option<usize> {
        let base = self.vertices.first()?;
        let mut dirs: Vec<Vec<f64>> = self.vertices[1..].iter().map(|v| sub(v, base)).collect();
        dirs.extend(self.rays.iter().cloned());
        if dirs.is_empty() {
            return Some(0);
        }
        Some(rank(&crate::linalg::columns(self.dim, &dirs)))
    }

    pub fn has_interior(&self) -> bool {
        self.affine_dim() == Some(self.dim)
    }

    /// The inequality description, derived from the generators when absent.
    pub fn hrep(&self) -> Cow<'_, [Halfspace]> {
        match &self.halfspaces {
            Some(h) => Cow::Borrowed(h),
            None => Cow::Owned(derive_halfspaces(self)),
        }
    }

    /// Copy of the set carrying an explicit inequality description.
    pub fn ensure_hrep(mut self) -> Self {
        if self.halfspaces.is_none() && !self.is_empty() {
            self.halfspaces = Some(derive_halfspaces(&self));
        }
        self
    }

    pub fn support_function(&self, d: &[f64]) -> Result<SupportValue> {
        check_direction(self.dim, d)?;
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(r) = self.rays.iter().find(|r| dot(d, r) > tol::RAY_TIE) {
            return Ok(SupportValue::PlusInfinity { certificate: r.clone() });
        }
        let value = self.vertices.iter().map(|v| dot(d, v)).fold(f64::NEG_INFINITY, f64::max);
        Ok(SupportValue::Finite { value })
    }

    /// Maximizers of `<d, .>` over the set; empty when the supremum is infinite.
    pub fn face_of(&self, d: &[f64]) -> Result<PolyhedralSet> {
        let value = match self.support_function(d)? {
            SupportValue::PlusInfinity { .. } => return Ok(Self::empty(self.dim)),
            SupportValue::Finite { value } => value,
        };
        let vs: Vec<Vec<f64>> = self.vertices.iter().filter(|v| dot(d, v) >= value - tol::GEOMETRY).cloned().collect();
        let rs: Vec<Vec<f64>> = self.rays.iter().filter(|r| dot(d, r).abs() <= tol::RAY_TIE).cloned().collect();
        Ok(Self::canonical(self.dim, vs, rs))
    }

    /// Point of smallest lr norm.
    pub fn min_norm_point_exponent(&self, r: f64) -> Result<Vec<f64>> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(nearest::min_norm_point(&self.vertices, &self.rays, r).point)
    }

    /// Minimal-norm element in the dual norm of `space`.
    pub fn min_norm_point(&self, space: &SpaceSpec) -> Result<Covector> {
        if space.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: space.dim() });
        }
        self.min_norm_point_exponent(space.q()).map(Covector)
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_coords(self.dim, z)?;
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if self.satisfies_hrep(z, 0.0) {
            return Ok(z.to_vec());
        }
        Ok(nearest::project(z, &self.vertices, &self.rays))
    }

    /// Euclidean distance to the set.
    pub fn distance(&self, z: &[f64]) -> Result<f64> {
        Ok(dist2(z, &self.project(z)?))
    }

    fn satisfies_hrep(&self, z: &[f64], slack: f64) -> bool {
        match &self.halfspaces {
            Some(hs) => hs.iter().all(|h| dot(&h.a, z) <= h.b + slack),
            None => false,
        }
    }

    /// `z` lies within Euclidean distance `tol` of the set.
    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        if self.is_empty() || z.len() != self.dim {
            return false;
        }
        if self.satisfies_hrep(z, 0.0) {
            return true;
        }
        nearest_distance(self, z) <= tol
    }

    /// Normal cone at `x`: the cone of outward normals of the constraints
    /// active at `x` (within the geometry tolerance).
    pub fn normal_cone(&self, x: &[f64]) -> Result<PolyhedralSet> {
        let active = self.active_normals(x)?;
        Ok(Self::canonical(self.dim, vec![vec![0.0; self.dim]], active))
    }

    /// Tangent cone at `x`, the polar of the normal cone.
    pub fn tangent_cone(&self, x: &[f64]) -> Result<PolyhedralSet> {
        let active = self.active_normals(x)?;
        let rays = cones::cone_from_inequalities(self.dim, &active);
        Ok(Self::canonical(self.dim, vec![vec![0.0; self.dim]], rays))
    }

    /// Unit normals of the constraints active at `x`.
    pub fn active_normals(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_coords(self.dim, x)?;
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if !self.contains(x, tol::GEOMETRY) {
            return Err(Error::NotInSet);
        }
        Ok(self
            .hrep()
            .iter()
            .filter(|h| dot(&h.a, x) >= h.b - tol::GEOMETRY)
            .map(|h| h.a.clone())
            .collect())
    }

    pub fn minkowski_sum(&self, other: &PolyhedralSet) -> Result<PolyhedralSet> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut vs = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(crate::linalg::add(a, b));
            }
        }
        let mut rs = self.rays.clone();
        rs.extend(other.rays.iter().cloned());
        Ok(Self::canonical(self.dim, vs, rs))
    }

    /// `-S`.
    pub fn negated(&self) -> PolyhedralSet {
        let neg = |v: &Vec<f64>| v.iter().map(|x| -x).collect::<Vec<f64>>();
        PolyhedralSet {
            dim: self.dim,
            vertices: {
                let mut v: Vec<Vec<f64>> = self.vertices.iter().map(neg).collect();
                v.sort_by(|a, b| lex_cmp(a, b));
                v
            },
            rays: {
                let mut r: Vec<Vec<f64>> = self.rays.iter().map(neg).collect();
                r.sort_by(|a, b| lex_cmp(a, b));
                r
            },
            halfspaces: self
                .halfspaces
                .as_ref()
                .map(|hs| hs.iter().map(|h| Halfspace { a: neg(&h.a), b: h.b }).collect()),
        }
    }

    /// The two sets share a point (within `tol`).
    pub fn intersects(&self, other: &PolyhedralSet, tol: f64) -> Result<bool> {
        let diff = self.minkowski_sum(&other.negated())?;
        Ok(norm2(&diff.min_norm_point_exponent(2.0)?) <= tol)
    }
}

fn nearest_distance(set: &PolyhedralSet, z: &[f64]) -> f64 {
    dist2(z, &nearest::project(z, &set.vertices, &set.rays))
}

fn normalize_halfspaces(hs: Vec<Halfspace>) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = Vec::new();
    for h in hs {
        let n = norm2(&h.a);
        if n == 0.0 {
            continue;
        }
        let h = Halfspace { a: h.a.iter().map(|x| x / n).collect(), b: h.b / n };
        if !out.iter().any(|g| dist2(&g.a, &h.a) <= tol::GEOMETRY && (g.b - h.b).abs() <= tol::GEOMETRY) {
            out.push(h);
        }
    }
    out.sort_by(|x, y| lex_cmp(&x.a, &y.a).then(x.b.total_cmp(&y.b)));
    out
}

/// Inequality description from generators: at every listed point, each
/// generator of the normal cone gives a supporting halfspace.
fn derive_halfspaces(set: &PolyhedralSet) -> Vec<Halfspace> {
    let mut hs = Vec::new();
    for v in &set.vertices {
        let mut rows: Vec<Vec<f64>> = set.vertices.iter().map(|p| sub(p, v)).filter(|d| norm2(d) > 1e-12).collect();
        rows.extend(set.rays.iter().cloned());
        for n in cones::cone_from_inequalities(set.dim, &rows) {
            let b = set.vertices.iter().map(|p| dot(&n, p)).fold(f64::NEG_INFINITY, f64::max);
            hs.push(Halfspace { a: n, b });
        }
    }
    normalize_halfspaces(hs)
}
