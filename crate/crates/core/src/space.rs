//! The ambient space `R^n` with the lp norm, its dual lq, and the duality map.

use std::ops::Deref;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct SpaceSpec {
    dim: usize,
    p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    dim: usize,
    p: f64,
}

impl TryFrom<RawSpace> for SpaceSpec {
    type Error = Error;
    fn try_from(raw: RawSpace) -> Result<Self> {
        SpaceSpec::new(raw.dim, raw.p)
    }
}

impl SpaceSpec {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(SpaceSpec { dim, p })
    }

    /// Euclidean space of the given dimension.
    pub fn euclidean(dim: usize) -> Self {
        SpaceSpec { dim, p: 2.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent, `1/p + 1/q = 1`.
    pub fn q(&self) -> f64 {
        conjugate(self.p)
    }

    /// The dual space `X*`, i.e. lq with the roles of p and q swapped.
    pub fn dual(&self) -> SpaceSpec {
        SpaceSpec { dim: self.dim, p: self.q() }
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(lp_norm(x, self.p))
    }

    pub fn dual_norm(&self, xstar: &[f64]) -> Result<f64> {
        self.check(xstar)?;
        Ok(lp_norm(xstar, self.q()))
    }

    pub fn duality_map(&self, x: &Vector) -> Result<Covector> {
        self.check(x)?;
        Ok(Covector(duality(x, self.p)))
    }

    pub fn duality_map_inverse(&self, xstar: &Covector) -> Result<Vector> {
        self.check(xstar)?;
        Ok(Vector(duality(xstar, self.q())))
    }
}

pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// `(sum |x_i|^p)^(1/p)`, factored by `max |x_i|` so large entries do not overflow.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        return m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt();
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Duality map of lp: `||x||^(2-p) |x_i|^(p-1) sign(x_i)`, with `J(0) = 0`.
pub fn duality(x: &[f64], p: f64) -> Vec<f64> {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return vec![0.0; x.len()];
    }
    if p == 2.0 {
        return x.to_vec();
    }
    // with r = x / m: J(x) = m * ||r||^(2-p) * |r_i|^(p-1) sign(x_i)
    let nr = lp_norm(&x.iter().map(|v| v / m).collect::<Vec<_>>(), p);
    let c = m * nr.powf(2.0 - p);
    x.iter()
        .map(|v| {
            let r = v.abs() / m;
            c * r.powf(p - 1.0) * v.signum()
        })
        .collect()
}

/// Jacobian of the duality map of lp at `x`.
///
/// `J` is positively homogeneous of degree one, so the Jacobian only depends
/// on the direction of `x`. Entries `|r_i|^(p-2)` are evaluated with `|r_i|`
/// floored at `floor`, which keeps the matrix finite for `p < 2`.
pub fn duality_jacobian(x: &[f64], p: f64, floor: f64) -> DMatrix<f64> {
    let n = x.len();
    if p == 2.0 {
        return DMatrix::identity(n, n);
    }
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        // direction undefined; use the jacobian along the diagonal direction
        return duality_jacobian(&vec![1.0; n], p, floor);
    }
    let r: Vec<f64> = x.iter().map(|v| v / m).collect();
    let nr = lp_norm(&r, p);
    let phi: Vec<f64> = r.iter().map(|v| v.abs().powf(p - 1.0) * v.signum()).collect();
    let a = (2.0 - p) * nr.powf(2.0 - 2.0 * p);
    let d = (p - 1.0) * nr.powf(2.0 - p);
    DMatrix::from_fn(n, n, |i, j| {
        let mut v = a * phi[i] * phi[j];
        if i == j {
            v += d * r[i].abs().max(floor).powf(p - 2.0);
        }
        v
    })
}

/// Primal coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

/// Dual coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Covector(pub Vec<f64>);

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for Covector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<Vec<f64>> for Covector {
    fn from(v: Vec<f64>) -> Self {
        Covector(v)
    }
}
