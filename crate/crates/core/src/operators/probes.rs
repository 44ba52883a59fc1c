use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, sub};
use crate::sampling;
use crate::tol;

use super::Operator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub pairs: usize,
    /// Smallest `<x* - y*, x - y>` over the sampled graph pairs.
    pub min_value: f64,
    pub pass: bool,
}

/// A random graph point: a domain point and an element of its value built
/// from a random vertex plus random multiples of the rays.
fn graph_point(a: &Operator, rng: &mut ChaCha8Rng) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = a.dim();
    let radius = 1.5 * (1.0 + a.domain_closure().extent());
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
    let x = a.domain_closure().retract(&raw);
    let value = a.value(&x)?;
    let k = rng.random_range(0..value.vertices().len());
    let mut xs = value.vertices()[k].clone();
    for r in value.rays() {
        xs = axpy(&xs, rng.random_range(0.0..3.0), r);
    }
    Ok((x, xs))
}

/// Checks `<x* - y*, x - y> >= -1e-10` on `n_pairs` seeded graph pairs.
pub fn monotonicity_probe(a: &Operator, n_pairs: usize, seed: u64) -> Result<MonotonicityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    for _ in 0..n_pairs {
        let (x, xs) = graph_point(a, &mut rng)?;
        let (y, ys) = graph_point(a, &mut rng)?;
        min_value = min_value.min(dot(&sub(&xs, &ys), &sub(&x, &y)));
    }
    Ok(MonotonicityReport { pairs: n_pairs, min_value, pass: min_value >= -1e-10 })
}

/// Outcome of the neighborhood test for `(x, x*)` next to exact membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMembership {
    /// `<x* - A∘y, x - y> >= -1e-9` at every sampled `y`.
    pub neighborhood: bool,
    /// `x* ∈ Ax` decided exactly.
    pub exact: bool,
    pub worst: f64,
    pub samples: usize,
}

impl GraphMembership {
    pub fn agrees(&self) -> bool {
        self.neighborhood == self.exact
    }

    /// Membership claimed by the neighborhood test, confirmed by the exact one.
    pub fn member(&self) -> bool {
        self.neighborhood && self.exact
    }
}

/// Tests `x* ∈ Ax` through the minimal-norm selection near `x`: samples
/// `y` from a Halton cloud in `B(x; radius)`, retracted into `cl D(A)`.
pub fn graph_membership(a: &Operator, x: &[f64], xstar: &[f64], radius: f64, n_samples: usize) -> Result<GraphMembership> {
    a.space().check(x)?;
    a.space().check(xstar)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if !a.in_domain(x) {
        return Err(Error::OutsideDomain);
    }
    let exact = a.value(x)?.contains(xstar, tol::GEOMETRY);
    let mut worst = f64::INFINITY;
    let mut samples = 0;
    for b in sampling::ball_points(a.dim(), n_samples, 0) {
        let y = a.domain_closure().retract(&axpy(x, radius, &b));
        if !a.in_domain(&y) {
            continue;
        }
        let m = a.min_norm(&y)?;
        worst = worst.min(dot(&sub(xstar, &m), &sub(x, &y)));
        samples += 1;
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("no sample fell in the domain".into()));
    }
    Ok(GraphMembership { neighborhood: worst >= -1e-9, exact, worst, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::OperatorSpec;
    use crate::space::SpaceSpec;

    #[test]
    fn sign_membership_examples() {
        let a = Operator::new(OperatorSpec::sign(), SpaceSpec::euclidean(1)).unwrap();
        let inside = graph_membership(&a, &[0.0], &[0.5], 0.1, 64).unwrap();
        assert!(inside.member() && inside.agrees());
        let outside = graph_membership(&a, &[0.5], &[0.5], 0.1, 64).unwrap();
        assert!(!outside.neighborhood && !outside.exact);
    }

    #[test]
    fn monotone_examples() {
        let a = Operator::new(OperatorSpec::sign(), SpaceSpec::euclidean(1)).unwrap();
        let r = monotonicity_probe(&a, 100, 1).unwrap();
        assert!(r.pass && r.min_value >= 0.0);
        let rot = OperatorSpec::affine(vec![vec![0.0, -1.0], vec![1.0, 0.0]], vec![0.0, 0.0]);
        let b = Operator::new(rot, SpaceSpec::euclidean(2)).unwrap();
        assert!(monotonicity_probe(&b, 100, 2).unwrap().pass);
    }
}
