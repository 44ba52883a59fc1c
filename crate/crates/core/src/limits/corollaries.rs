use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convex::{set_distance, PolyhedralSet};
use crate::error::{Error, Result};
use crate::json::real;
use crate::linalg::{axpy, scale, sub};
use crate::operators::{MaxAffineFunction, Operator, OperatorSpec};
use crate::sampling;
use crate::space::{lp_norm, SpaceSpec};
use crate::tol::Tolerances;

use super::{Quantity, Status, VerificationReport};

/// A ball `B(center; radius)` sampled by a Halton cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    200
}

impl Region {
    fn validate(&self, dim: usize) -> Result<()> {
        if self.center.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.center.len() });
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) || self.samples == 0 {
            return Err(Error::InvalidArgument("region needs a positive radius and samples".into()));
        }
        Ok(())
    }

    /// Two disjoint clouds of `samples` points each.
    fn clouds(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let dim = self.center.len();
        let offset = self.seed.wrapping_mul(7919) % (1 << 40);
        let pts: Vec<Vec<f64>> = sampling::ball_points(dim, 2 * self.samples, offset).iter().map(|b| axpy(&self.center, self.radius, b)).collect();
        let (a, b) = pts.split_at(self.samples);
        (a.to_vec(), b.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterminationMode {
    /// Equal minimal-norm selections determine the operator.
    Minnorm,
    /// Values meeting at every point of a dense set determine the operator.
    Intersection,
}

/// Points of the cloud inside the common domain; raw points outside are
/// retracted onto it. Errors when the two domains disagree on a raw point.
fn domain_points(a1: &Operator, a2: &Operator, raw: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for y in raw {
        if a1.in_domain(y) != a2.in_domain(y) {
            return Err(Error::InvalidArgument("the domains of the two operators differ on the sample".into()));
        }
        let z = if a1.in_domain(y) { y.clone() } else { a1.domain_closure().retract(y) };
        if a1.in_domain(&z) != a2.in_domain(&z) {
            return Err(Error::InvalidArgument("the domains of the two operators differ on the sample".into()));
        }
        if a1.in_domain(&z) {
            out.push(z);
        }
    }
    Ok(out)
}

/// Two operators with a common domain that agree on a premise (equal
/// minimal-norm selections, or intersecting values) must have equal values.
pub fn unique_determination_check(a1: &Operator, a2: &Operator, mode: DeterminationMode, region: &Region, tols: &Tolerances) -> Result<VerificationReport> {
    if a1.space() != a2.space() {
        return Err(Error::InvalidArgument("the operators live on different spaces".into()));
    }
    region.validate(a1.dim())?;
    let (c1, c2) = region.clouds();
    let premise_pts = domain_points(a1, a2, &c1)?;
    let mut check_pts = domain_points(a1, a2, &c2)?;
    if a1.in_domain(&region.center) {
        check_pts.push(region.center.clone());
    }
    if premise_pts.is_empty() || check_pts.is_empty() {
        return Err(Error::InvalidArgument("no sample fell in the domain".into()));
    }
    let q = a1.space().q();
    let mut premise_gap = 0.0f64;
    for y in &premise_pts {
        let gap = match mode {
            DeterminationMode::Minnorm => lp_norm(&sub(&a1.min_norm(y)?, &a2.min_norm(y)?), q),
            DeterminationMode::Intersection => {
                let (v1, v2) = (a1.value(y)?, a2.value(y)?);
                let diff = v1.minkowski_sum(&v2.negated())?;
                lp_norm(&diff.min_norm_point_exponent(2.0)?, 2.0)
            }
        };
        premise_gap = premise_gap.max(gap);
    }
    let mode_name = match mode {
        DeterminationMode::Minnorm => "minnorm",
        DeterminationMode::Intersection => "intersection",
    };
    if premise_gap > tols.premise {
        return Ok(VerificationReport::new("unique_determination", Status::PremiseFailed, Quantity::None, Quantity::None, f64::INFINITY, tols.agreement, tols)
            .diag("mode", mode_name)
            .diag("premise_gap", real(premise_gap)));
    }
    let mut worst = 0.0f64;
    for y in &check_pts {
        worst = worst.max(set_distance(&a1.value(y)?, &a2.value(y)?)?);
    }
    Ok(VerificationReport::compare("unique_determination", Quantity::Real { value: worst }, Quantity::Real { value: 0.0 }, worst, tols.agreement, tols)
        .diag("mode", mode_name)
        .diag("premise_gap", real(premise_gap))
        .diag("premise_samples", premise_pts.len())
        .diag("validation_samples", check_pts.len()))
}

/// Under `||A∘y|| <= ρ` on `B(x; r)`, every value there lies in
/// `N(y; cl D(A)) + ρ B*`, and inside `ρ B*` when the ball is in the domain.
pub fn local_bound_check(op: &Operator, x: &[f64], r: f64, rho: f64, n_samples: usize, tols: &Tolerances) -> Result<VerificationReport> {
    op.space().check(x)?;
    if !(r > 0.0 && r.is_finite()) || !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive and rho nonnegative".into()));
    }
    let (p, q, dim) = (op.space().p(), op.space().q(), op.dim());
    let dom = op.domain_closure();
    let mut pts: Vec<Vec<f64>> = Vec::new();
    if op.in_domain(x) {
        pts.push(x.to_vec());
    }
    for b in sampling::ball_points(dim, n_samples, 0) {
        // shrink the Euclidean cloud into the lp ball
        let b = scale(1.0 / lp_norm(&b, p).max(1.0), &b);
        let y = dom.retract(&axpy(x, r, &b));
        if op.in_domain(&y) && lp_norm(&sub(&y, x), p) <= r * (1.0 + 1e-12) {
            pts.push(y);
        }
    }
    if pts.is_empty() {
        return Err(Error::InvalidArgument("no feasible sample in the ball".into()));
    }
    let mut largest = 0.0f64;
    for y in &pts {
        largest = largest.max(lp_norm(&op.min_norm(y)?, q));
    }
    if largest > rho + tols.premise {
        return Ok(VerificationReport::new("local_bound", Status::PremiseFailed, Quantity::Real { value: largest }, Quantity::Real { value: rho }, f64::INFINITY, tols.containment, tols)
            .diag("largest_min_norm", real(largest)));
    }
    // the lp ball of radius r sits in the Euclidean ball of radius c r
    let c = (dim as f64).powf((0.5 - 1.0 / p).max(0.0));
    let interior = dom.contains_ball(x, c * r);
    let mut excess = 0.0f64;
    for y in &pts {
        let value = op.value(y)?;
        let normal = dom.normal_cone(y);
        for a in value.vertices() {
            let shifted = PolyhedralSet::new(dim, vec![a.iter().map(|c| -c).collect()], normal.rays().to_vec())?;
            let d = lp_norm(&shifted.min_norm_point_exponent(q)?, q);
            excess = excess.max(d - rho);
            if interior {
                excess = excess.max(lp_norm(a, q) - rho);
            }
        }
        for ray in value.rays() {
            excess = excess.max(if interior { f64::INFINITY } else { normal.distance(ray)? });
        }
    }
    let excess = excess.max(0.0);
    Ok(VerificationReport::compare("local_bound", Quantity::Real { value: rho + excess }, Quantity::Real { value: rho }, excess, tols.containment, tols)
        .diag("samples", pts.len())
        .diag("largest_min_norm", real(largest))
        .diag("ball_inside_domain", interior))
}

/// A max-affine `f` whose subdifferential meets `ell B*` on a dense set is
/// `ell`-Lipschitz; checked on seeded pairs and on every observed slope.
pub fn lipschitz_bound(f: &MaxAffineFunction, space: &SpaceSpec, region: &Region, ell: f64, tols: &Tolerances) -> Result<VerificationReport> {
    let op = Operator::new(OperatorSpec::SubdiffMaxAffine { function: f.clone() }, *space)?;
    region.validate(space.dim())?;
    if !(ell >= 0.0 && ell.is_finite()) {
        return Err(Error::InvalidArgument("ell must be finite and nonnegative".into()));
    }
    let (p, q) = (space.p(), space.q());
    let (cloud, _) = region.clouds();
    let mut largest = 0.0f64;
    let mut slope = 0.0f64;
    for y in &cloud {
        largest = largest.max(lp_norm(&op.min_norm(y)?, q));
        for a in op.value(y)?.vertices() {
            slope = slope.max(lp_norm(a, q));
        }
    }
    if largest > ell + tols.premise {
        return Ok(VerificationReport::new("lipschitz", Status::PremiseFailed, Quantity::Real { value: largest }, Quantity::Real { value: ell }, f64::INFINITY, tols.premise, tols)
            .diag("largest_min_norm", real(largest)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(region.seed);
    let dim = space.dim();
    let point = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let b: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        axpy(&region.center, region.radius, &b)
    };
    let mut pair_excess = f64::NEG_INFINITY;
    let mut ratio = 0.0f64;
    for _ in 0..500 {
        let (a, b) = (point(&mut rng), point(&mut rng));
        let gap = (f.eval(&a) - f.eval(&b)).abs();
        let d = lp_norm(&sub(&a, &b), p);
        pair_excess = pair_excess.max(gap - ell * d);
        if d > 0.0 {
            ratio = ratio.max(gap / d);
        }
    }
    let distance = pair_excess.max(slope - ell).max(0.0);
    Ok(VerificationReport::compare("lipschitz", Quantity::Real { value: ratio }, Quantity::Real { value: ell }, distance, tols.premise, tols)
        .diag("largest_min_norm", real(largest))
        .diag("largest_slope", real(slope))
        .diag("pairs", 500))
}
