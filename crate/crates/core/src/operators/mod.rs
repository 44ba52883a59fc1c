//! Declarative maximal monotone operators with exact polyhedral values.

mod domain;
mod maxaffine;
mod probes;
mod selection;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::convex::PolyhedralSet;
use crate::error::{Error, Result};
use crate::linalg::{dot, normalized};
use crate::sampling;
use crate::space::{duality, lp_norm, Covector, SpaceSpec};
use crate::tol;

pub use domain::{Domain, TangentClass};
pub use maxaffine::{AffinePiece, MaxAffineFunction};
pub use probes::{graph_membership, monotonicity_probe, GraphMembership, MonotonicityReport};
pub use selection::SelectionPolicy;

/// Declarative description of an operator `A : X => X*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    /// `∂f` for a max-affine `f`.
    SubdiffMaxAffine { function: MaxAffineFunction },
    /// `N(x; C)` with domain `C`.
    NormalConeMap { set: PolyhedralSet },
    /// Normal cone of the closed unit ball of the space.
    UnitBallNormalCone,
    /// `x -> Mx + c` with `M + M^T` positive semidefinite.
    AffineMonotone { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
    /// The duality map `J`.
    DualityMapOp,
    Sum { terms: Vec<OperatorSpec> },
}

impl OperatorSpec {
    /// The sign operator `∂|.|` on the line.
    pub fn sign() -> Self {
        OperatorSpec::SubdiffMaxAffine {
            function: MaxAffineFunction::from_pairs(&[(&[1.0], 0.0), (&[-1.0], 0.0)]).expect("valid pieces"),
        }
    }

    pub fn subdiff(pairs: &[(&[f64], f64)]) -> Result<Self> {
        Ok(OperatorSpec::SubdiffMaxAffine { function: MaxAffineFunction::from_pairs(pairs)? })
    }

    pub fn normal_cone_map(set: PolyhedralSet) -> Self {
        OperatorSpec::NormalConeMap { set }
    }

    pub fn affine(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Self {
        OperatorSpec::AffineMonotone { matrix, offset }
    }

    /// Summands, with nested sums flattened.
    pub fn summands(&self) -> Vec<&OperatorSpec> {
        match self {
            OperatorSpec::Sum { terms } => terms.iter().flat_map(|t| t.summands()).collect(),
            other => vec![other],
        }
    }
}

/// A validated operator on a fixed space.
#[derive(Debug, Clone)]
pub struct Operator {
    spec: OperatorSpec,
    space: SpaceSpec,
    domain: Domain,
}

impl Operator {
    pub fn new(spec: OperatorSpec, space: SpaceSpec) -> Result<Self> {
        let spec = prepare(spec, &space)?;
        let domain = domain_of(&spec, &space);
        if let OperatorSpec::Sum { terms } = &spec {
            check_qualification(terms, &space)?;
        }
        Ok(Operator { spec, space, domain })
    }

    pub fn spec(&self) -> &OperatorSpec {
        &self.spec
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `cl D(A)`.
    pub fn domain_closure(&self) -> &Domain {
        &self.domain
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.domain.contains(x, tol::GEOMETRY)
    }

    /// The exact value `Ax`.
    pub fn value(&self, x: &[f64]) -> Result<PolyhedralSet> {
        self.space.check(x)?;
        if !self.in_domain(x) {
            return Err(Error::OutsideDomain);
        }
        value_of(&self.spec, &self.space, x)
    }

    /// `A∘x`, the element of least dual norm.
    pub fn min_norm(&self, x: &[f64]) -> Result<Covector> {
        self.value(x)?.min_norm_point(&self.space)
    }

    pub fn select(&self, x: &[f64], policy: &SelectionPolicy) -> Result<Covector> {
        policy.select(&self.value(x)?, &self.space, x)
    }

    /// Summed affine part `(M, c)`, if any summand is affine.
    pub(crate) fn affine_part(&self) -> (DMatrix<f64>, Vec<f64>) {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut c = vec![0.0; n];
        for t in self.spec.summands() {
            if let OperatorSpec::AffineMonotone { matrix, offset } = t {
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] += matrix[i][j];
                    }
                    c[i] += offset[i];
                }
            }
        }
        (m, c)
    }
}

fn prepare(spec: OperatorSpec, space: &SpaceSpec) -> Result<OperatorSpec> {
    let n = space.dim();
    Ok(match spec {
        OperatorSpec::SubdiffMaxAffine { function } => {
            function.validate(Some(n))?;
            OperatorSpec::SubdiffMaxAffine { function }
        }
        OperatorSpec::NormalConeMap { set } => {
            if set.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: set.dim() });
            }
            if set.is_empty() {
                return Err(Error::EmptySet);
            }
            OperatorSpec::NormalConeMap { set: set.ensure_hrep() }
        }
        OperatorSpec::AffineMonotone { matrix, offset } => {
            if matrix.len() != n || offset.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: matrix.len().max(offset.len()) });
            }
            if let Some(row) = matrix.iter().find(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            if matrix.iter().flatten().chain(&offset).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            let sym = DMatrix::from_fn(n, n, |i, j| matrix[i][j] + matrix[j][i]);
            let smallest = sym.symmetric_eigenvalues().min();
            if smallest < -1e-10 {
                return Err(Error::NotMonotone(smallest));
            }
            OperatorSpec::AffineMonotone { matrix, offset }
        }
        OperatorSpec::Sum { terms } => {
            if terms.is_empty() {
                return Err(Error::InvalidOperator("a sum needs at least one term".into()));
            }
            let terms = terms.into_iter().map(|t| prepare(t, space)).collect::<Result<Vec<_>>>()?;
            OperatorSpec::Sum { terms }
        }
        other => other,
    })
}

fn domain_of(spec: &OperatorSpec, space: &SpaceSpec) -> Domain {
    match spec {
        OperatorSpec::SubdiffMaxAffine { .. } | OperatorSpec::AffineMonotone { .. } | OperatorSpec::DualityMapOp => {
            Domain::Whole(space.dim())
        }
        OperatorSpec::NormalConeMap { set } => Domain::Polyhedron(set.clone()),
        OperatorSpec::UnitBallNormalCone => Domain::UnitBall { dim: space.dim(), p: space.p() },
        OperatorSpec::Sum { terms } => {
            terms.iter().fold(Domain::Whole(space.dim()), |acc, t| acc.meet(domain_of(t, space)))
        }
    }
}

/// Sampled qualification for sums: the domains meet, and some common point
/// lies in the interior of every domain but at most one.
fn check_qualification(terms: &[OperatorSpec], space: &SpaceSpec) -> Result<()> {
    let domains: Vec<Domain> = terms.iter().map(|t| domain_of(t, space)).filter(|d| !matches!(d, Domain::Whole(_))).collect();
    if domains.len() <= 1 {
        return Ok(());
    }
    let all = Domain::Intersection(domains.clone());
    let radius = 1.0 + all.extent();
    let mut candidates: Vec<Vec<f64>> = domains.iter().filter_map(Domain::interior_point).collect();
    for k in 0..256u64 {
        candidates.push(sampling::halton(k, space.dim()).iter().map(|h| radius * (2.0 * h - 1.0)).collect());
    }
    let mut met = false;
    for c in &candidates {
        let z = all.retract(c);
        if !all.contains(&z, tol::GEOMETRY) {
            continue;
        }
        met = true;
        let boundary_count = domains.iter().filter(|d| !d.interior_contains(&z, 0.0)).count();
        if boundary_count <= 1 {
            return Ok(());
        }
    }
    Err(Error::InvalidOperator(if met {
        "sum fails the interior qualification on every sampled common point".into()
    } else {
        "domains of the summands do not meet".into()
    }))
}

fn value_of(spec: &OperatorSpec, space: &SpaceSpec, x: &[f64]) -> Result<PolyhedralSet> {
    let n = space.dim();
    match spec {
        OperatorSpec::SubdiffMaxAffine { function } => function.subdifferential(x),
        OperatorSpec::NormalConeMap { set } => set.normal_cone(x),
        OperatorSpec::UnitBallNormalCone => {
            let norm = lp_norm(x, space.p());
            if norm > 1.0 + tol::GEOMETRY {
                Err(Error::OutsideDomain)
            } else if (norm - 1.0).abs() <= tol::GEOMETRY {
                let ray = normalized(&duality(x, space.p())).expect("x is on the sphere");
                PolyhedralSet::cone(n, vec![ray])
            } else {
                Ok(PolyhedralSet::singleton(vec![0.0; n]))
            }
        }
        OperatorSpec::AffineMonotone { matrix, offset } => {
            Ok(PolyhedralSet::singleton(matrix.iter().zip(offset).map(|(row, c)| dot(row, x) + c).collect()))
        }
        OperatorSpec::DualityMapOp => Ok(PolyhedralSet::singleton(duality(x, space.p()))),
        OperatorSpec::Sum { terms } => {
            let mut acc = PolyhedralSet::singleton(vec![0.0; n]);
            for t in terms {
                acc = acc.minkowski_sum(&value_of(t, space, x)?)?;
            }
            Ok(acc)
        }
    }
}
