use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convex::{PolyhedralSet, SupportValue};
use crate::error::{Error, Result};
use crate::sampling::hash_coords;
use crate::space::{Covector, SpaceSpec};

/// Rule picking one element of `Ax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelectionPolicy {
    MinNorm,
    /// Lexicographically first vertex.
    VertexLexicographic,
    /// Lexicographically first maximizer of `<., direction>`; falls back to
    /// the first vertex when the supremum is infinite.
    SupportArgmax { direction: Vec<f64> },
    /// A vertex drawn from a generator seeded by `seed` and the point.
    SeededRandomVertex { seed: u64 },
}

impl SelectionPolicy {
    pub fn select(&self, value: &PolyhedralSet, space: &SpaceSpec, x: &[f64]) -> Result<Covector> {
        if value.is_empty() {
            return Err(Error::OutsideDomain);
        }
        let first = || Covector(value.vertices()[0].clone());
        Ok(match self {
            SelectionPolicy::MinNorm => value.min_norm_point(space)?,
            SelectionPolicy::VertexLexicographic => first(),
            SelectionPolicy::SupportArgmax { direction } => match value.support_function(direction)? {
                SupportValue::PlusInfinity { .. } => first(),
                SupportValue::Finite { .. } => Covector(value.face_of(direction)?.vertices()[0].clone()),
            },
            SelectionPolicy::SeededRandomVertex { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_coords(x));
                let k = rng.random_range(0..value.vertices().len());
                Covector(value.vertices()[k].clone())
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SelectionPolicy::MinNorm => "min_norm",
            SelectionPolicy::VertexLexicographic => "vertex_lexicographic",
            SelectionPolicy::SupportArgmax { .. } => "support_argmax",
            SelectionPolicy::SeededRandomVertex { .. } => "seeded_random_vertex",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{Operator, OperatorSpec};

    #[test]
    fn sign_selections() {
        let a = Operator::new(OperatorSpec::sign(), SpaceSpec::euclidean(1)).unwrap();
        assert_eq!(a.select(&[0.0], &SelectionPolicy::MinNorm).unwrap().0, vec![0.0]);
        assert_eq!(a.select(&[0.0], &SelectionPolicy::SupportArgmax { direction: vec![1.0] }).unwrap().0, vec![1.0]);
        assert_eq!(a.select(&[0.0], &SelectionPolicy::VertexLexicographic).unwrap().0, vec![-1.0]);
        let r = SelectionPolicy::SeededRandomVertex { seed: 7 };
        assert_eq!(a.select(&[0.0], &r).unwrap(), a.select(&[0.0], &r).unwrap());
        assert_eq!(a.select(&[3.0], &SelectionPolicy::MinNorm), a.select(&[3.0], &r));
    }

    #[test]
    fn argmax_on_unbounded_value_falls_back() {
        let a = Operator::new(OperatorSpec::UnitBallNormalCone, SpaceSpec::euclidean(2)).unwrap();
        let pol = SelectionPolicy::SupportArgmax { direction: vec![1.0, 0.0] };
        assert_eq!(a.select(&[1.0, 0.0], &pol).unwrap().0, vec![0.0, 0.0]);
        assert_eq!(a.select(&[2.0, 0.0], &pol), Err(Error::OutsideDomain));
    }
}
