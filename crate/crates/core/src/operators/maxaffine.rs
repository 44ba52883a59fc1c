use serde::{Deserialize, Serialize};

use crate::convex::PolyhedralSet;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePiece {
    pub slope: Vec<f64>,
    pub offset: f64,
}

/// `f(y) = max_i <a_i, y> + b_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxAffineFunction {
    pub pieces: Vec<AffinePiece>,
}

impl MaxAffineFunction {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        let f = MaxAffineFunction { pieces };
        f.validate(None)?;
        Ok(f)
    }

    /// Convenience constructor from `(slope, offset)` pairs.
    pub fn from_pairs(pairs: &[(&[f64], f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|(a, b)| AffinePiece { slope: a.to_vec(), offset: *b }).collect())
    }

    pub fn validate(&self, dim: Option<usize>) -> Result<()> {
        let first = self.pieces.first().ok_or_else(|| Error::InvalidOperator("max-affine function needs a piece".into()))?;
        let d = dim.unwrap_or(first.slope.len());
        for p in &self.pieces {
            if p.slope.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: p.slope.len() });
            }
            if p.slope.iter().any(|v| !v.is_finite()) || !p.offset.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].slope.len()
    }

    pub fn piece_values(&self, y: &[f64]) -> Vec<f64> {
        self.pieces.iter().map(|p| dot(&p.slope, y) + p.offset).collect()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.piece_values(y).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pieces within `tol` of the maximum at `y`.
    pub fn active(&self, y: &[f64], tol: f64) -> Vec<usize> {
        let vals = self.piece_values(y);
        let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..vals.len()).filter(|&i| vals[i] >= m - tol).collect()
    }

    /// Two pieces take exactly the maximal value at `y` (with distinct slopes).
    pub fn has_exact_tie(&self, y: &[f64]) -> bool {
        let vals = self.piece_values(y);
        let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == m).collect();
        tied.iter().any(|&i| tied.iter().any(|&j| self.pieces[i].slope != self.pieces[j].slope))
    }

    /// `conv{a_i : i active at y}`.
    pub fn subdifferential(&self, y: &[f64]) -> Result<PolyhedralSet> {
        let act = self.active(y, tol::ACTIVITY);
        PolyhedralSet::convex_hull(act.iter().map(|&i| self.pieces[i].slope.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_value() {
        let f = MaxAffineFunction::from_pairs(&[(&[1.0], 0.0), (&[-1.0], 0.0)]).unwrap();
        assert_eq!(f.eval(&[-2.0]), 2.0);
        assert_eq!(f.subdifferential(&[0.0]).unwrap().vertices(), &[vec![-1.0], vec![1.0]]);
        assert_eq!(f.subdifferential(&[2.0]).unwrap().vertices(), &[vec![1.0]]);
        assert!(f.has_exact_tie(&[0.0]));
        assert!(!f.has_exact_tie(&[1e-300]));
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(MaxAffineFunction::new(vec![]).is_err());
        assert!(MaxAffineFunction::from_pairs(&[(&[1.0], 0.0), (&[1.0, 2.0], 0.0)]).is_err());
    }
}
