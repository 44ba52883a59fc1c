#![allow(dead_code)]

use maxmono::operators::{Operator, OperatorSpec};
use maxmono::{PolyhedralSet, SpaceSpec};

pub fn triangle_subdiff() -> OperatorSpec {
    OperatorSpec::subdiff(&[(&[1.0, 0.0], 0.0), (&[0.0, 1.0], 0.0), (&[0.0, 0.0], 0.0)]).unwrap()
}

pub fn unit_box(dim: usize) -> PolyhedralSet {
    PolyhedralSet::boxed(&vec![-1.0; dim], &vec![1.0; dim]).unwrap()
}

pub fn build(spec: OperatorSpec, dim: usize, p: f64) -> Operator {
    Operator::new(spec, SpaceSpec::new(dim, p).unwrap()).unwrap()
}

/// Operators covering every variant, in dimensions 1 to 3.
pub fn suite() -> Vec<(&'static str, Operator)> {
    let tri_hull = PolyhedralSet::convex_hull(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.5]]).unwrap();
    let mut out = vec![
        ("sign", build(OperatorSpec::sign(), 1, 2.0)),
        ("triangle_p2", build(triangle_subdiff(), 2, 2.0)),
        ("triangle_p3", build(triangle_subdiff(), 2, 3.0)),
        ("triangle_p15", build(triangle_subdiff(), 2, 1.5)),
        ("box_normal", build(OperatorSpec::normal_cone_map(unit_box(2)), 2, 2.0)),
        ("box3_normal_p3", build(OperatorSpec::normal_cone_map(unit_box(3)), 3, 3.0)),
        ("hull_normal_p15", build(OperatorSpec::normal_cone_map(tri_hull), 2, 1.5)),
        ("ball_p2", build(OperatorSpec::UnitBallNormalCone, 2, 2.0)),
        ("ball_p3", build(OperatorSpec::UnitBallNormalCone, 2, 3.0)),
        ("affine_skew", build(OperatorSpec::affine(vec![vec![1.0, -2.0], vec![2.0, 0.5]], vec![0.3, -0.1]), 2, 2.0)),
        ("duality_p3", build(OperatorSpec::DualityMapOp, 2, 3.0)),
    ];
    let sum = OperatorSpec::Sum { terms: vec![triangle_subdiff(), OperatorSpec::normal_cone_map(unit_box(2))] };
    out.push(("triangle_plus_box", build(sum, 2, 2.0)));
    let sum2 = OperatorSpec::Sum {
        terms: vec![OperatorSpec::UnitBallNormalCone, OperatorSpec::affine(vec![vec![0.0, 1.0], vec![-1.0, 0.0]], vec![0.5, 0.0])],
    };
    out.push(("ball_plus_rotation_p15", build(sum2, 2, 1.5)));
    let abs3 = OperatorSpec::subdiff(&[
        (&[1.0, 1.0, 0.0], 0.0),
        (&[-1.0, 0.0, 1.0], 0.0),
        (&[0.0, -1.0, -1.0], 0.5),
        (&[0.0, 0.0, 0.0], 0.0),
    ])
    .unwrap();
    out.push(("maxaffine3_p3", build(abs3, 3, 3.0)));
    out
}

/// Seeded points of the closed domain, including boundary points reached by retraction.
pub fn domain_points(op: &Operator, count: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let r = 1.5 * (1.0 + op.domain_closure().extent());
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..op.dim()).map(|_| rng.random_range(-r..r)).collect();
            op.domain_closure().retract(&raw)
        })
        .collect()
}

pub fn simplex3() -> OperatorSpec {
    OperatorSpec::subdiff(&[(&[1.0, 0.0, 0.0], 0.0), (&[0.0, 1.0, 0.0], 0.0), (&[0.0, 0.0, 1.0], 0.0), (&[0.0, 0.0, 0.0], 0.0)]).unwrap()
}

pub fn by_name(name: &str) -> Operator {
    if name == "simplex3" {
        return build(simplex3(), 3, 2.0);
    }
    suite().into_iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no operator {name}")).1
}

/// The point of the lp unit sphere along `d`.
pub fn on_sphere(d: &[f64], p: f64) -> Vec<f64> {
    let n = maxmono::space::lp_norm(d, p);
    d.iter().map(|c| c / n).collect()
}

/// Position of a direction against the tangent cone of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Interior,
    Boundary,
    Outside,
}

/// Face instances `(operator, x, v, class of v)`. The class is read off the
/// domain by hand: whole-space domains give `Interior`; at a boundary point
/// the sign of `<n, v>` over the active outward normals decides.
pub fn face_instances() -> Vec<(&'static str, Vec<f64>, Vec<f64>, Expect)> {
    use Expect::*;
    let a3 = 0.5f64.powf(1.0 / 3.0);
    vec![
        ("sign", vec![0.0], vec![1.0], Interior),
        ("sign", vec![0.0], vec![-1.0], Interior),
        ("sign", vec![2.0], vec![-1.0], Interior),
        ("triangle_p2", vec![0.0, 0.0], vec![1.0, 1.0], Interior),
        ("triangle_p2", vec![0.0, 0.0], vec![1.0, -1.0], Interior),
        ("triangle_p3", vec![0.0, 0.0], vec![-1.0, -1.0], Interior),
        ("triangle_p15", vec![0.5, 0.5], vec![1.0, -2.0], Interior),
        ("triangle_p2", vec![0.5, 0.5], vec![-1.0, 1.0], Interior),
        ("triangle_p3", vec![0.5, 0.5], vec![1.0, 1.0], Interior),
        ("box_normal", vec![1.0, 0.0], vec![-1.0, 0.0], Interior),
        ("box_normal", vec![1.0, 0.0], vec![0.0, 1.0], Boundary),
        ("box_normal", vec![1.0, 1.0], vec![1.0, -1.0], Outside),
        ("box_normal", vec![1.0, 1.0], vec![-1.0, 0.0], Boundary),
        ("box3_normal_p3", vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], Boundary),
        ("box3_normal_p3", vec![1.0, -1.0, 0.3], vec![-1.0, 0.5, 0.2], Interior),
        ("hull_normal_p15", vec![0.0, 0.0], vec![1.0, 1.0], Interior),
        ("hull_normal_p15", vec![1.0, 0.0], vec![0.0, -1.0], Outside),
        ("ball_p2", vec![1.0, 0.0], vec![-1.0, 0.0], Interior),
        ("ball_p2", vec![1.0, 0.0], vec![0.0, 1.0], Boundary),
        ("ball_p3", vec![a3, a3], vec![1.0, -1.0], Boundary),
        ("ball_p3", vec![a3, a3], vec![1.0, 1.0], Outside),
        ("affine_skew", vec![0.3, -0.2], vec![1.0, 2.0], Interior),
        ("duality_p3", vec![1.0, -0.5], vec![0.0, 1.0], Interior),
        ("triangle_plus_box", vec![1.0, 0.0], vec![0.0, 1.0], Boundary),
        ("triangle_plus_box", vec![0.0, 0.0], vec![1.0, 1.0], Interior),
        ("triangle_plus_box", vec![1.0, 1.0], vec![0.0, 1.0], Outside),
        ("ball_plus_rotation_p15", vec![1.0, 0.0], vec![-1.0, 0.3], Interior),
        ("maxaffine3_p3", vec![0.0, 0.0, 0.25], vec![1.0, 1.0, 1.0], Interior),
        ("maxaffine3_p3", vec![0.0, 0.0, 0.25], vec![0.0, 1.0, -0.5], Interior),
        ("simplex3", vec![0.0, 0.0, 0.0], vec![1.0, 1.0, -1.0], Interior),
    ]
}

/// Triples `(operator, x, x*, v)` with `x*` in the face of `Ax` in direction `v`.
pub fn sequence_instances() -> Vec<(&'static str, Vec<f64>, Vec<f64>, Vec<f64>)> {
    vec![
        ("sign", vec![0.0], vec![1.0], vec![1.0]),
        ("sign", vec![0.0], vec![-1.0], vec![-1.0]),
        ("triangle_p2", vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, -1.0]),
        ("triangle_p3", vec![0.0, 0.0], vec![0.0, 1.0], vec![-1.0, 2.0]),
        ("triangle_p15", vec![0.0, 0.0], vec![0.0, 0.0], vec![-1.0, -1.0]),
        ("triangle_p2", vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0]),
        ("box_normal", vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]),
        ("box_normal", vec![1.0, 1.0], vec![0.0, 0.7], vec![-1.0, 0.0]),
        ("box3_normal_p3", vec![1.0, 1.0, 0.0], vec![0.5, 2.0, 0.0], vec![0.0, 0.0, 1.0]),
        ("ball_p2", vec![1.0, 0.0], vec![0.0, 0.0], vec![-1.0, 0.0]),
        ("triangle_plus_box", vec![1.0, 0.0], vec![1.5, 0.0], vec![0.0, 1.0]),
        ("maxaffine3_p3", vec![0.0, 0.0, 0.25], vec![-1.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]),
        ("simplex3", vec![0.0, 0.0, 0.0], vec![0.5, 0.5, 0.0], vec![1.0, 1.0, -1.0]),
    ]
}

/// Points with bounded values for the boundary formula.
pub fn boundary_instances() -> Vec<(&'static str, Vec<f64>)> {
    vec![
        ("sign", vec![0.0]),
        ("sign", vec![2.0]),
        ("triangle_p2", vec![0.0, 0.0]),
        ("triangle_p3", vec![0.0, 0.0]),
        ("triangle_p15", vec![0.5, 0.5]),
        ("affine_skew", vec![0.3, -0.2]),
        ("duality_p3", vec![1.0, -0.5]),
        ("maxaffine3_p3", vec![0.0, 0.0, 0.25]),
        ("simplex3", vec![0.0, 0.0, 0.0]),
        ("triangle_plus_box", vec![0.0, 0.0]),
    ]
}

/// Points for the decomposition, many on the boundary of a proper domain.
pub fn decomposition_instances() -> Vec<(&'static str, Vec<f64>)> {
    let a3 = 0.5f64.powf(1.0 / 3.0);
    vec![
        ("sign", vec![0.0]),
        ("triangle_p2", vec![0.0, 0.0]),
        ("box_normal", vec![1.0, 0.0]),
        ("box_normal", vec![1.0, 1.0]),
        ("box3_normal_p3", vec![1.0, 1.0, 0.0]),
        ("hull_normal_p15", vec![0.0, 0.0]),
        ("hull_normal_p15", vec![1.0, 0.75]),
        ("ball_p2", vec![1.0, 0.0]),
        ("ball_p3", vec![a3, a3]),
        ("triangle_plus_box", vec![1.0, 1.0]),
        ("triangle_plus_box", vec![1.0, 0.0]),
        ("ball_plus_rotation_p15", vec![0.0, 1.0]),
        ("maxaffine3_p3", vec![0.0, 0.0, 0.25]),
        ("simplex3", vec![0.0, 0.0, 0.0]),
    ]
}
