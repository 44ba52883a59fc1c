mod common;

use common::{build, triangle_subdiff, unit_box};
use maxmono::convex::set_distance;
use maxmono::limits::{
    boundary_estimate, constructive_face_sequence, decompose, estimate_limsup_face, lipschitz_bound, local_bound_check, minnorm_limsup_face,
    support_via_minnorm, support_via_selection, unique_determination_check, DenseSet, DeterminationMode, LimitProbe, Quantity, SampleRegion,
};
use maxmono::operators::{MaxAffineFunction, OperatorSpec, SelectionPolicy};
use maxmono::{Error, PolyhedralSet, SpaceSpec, Status, Tolerances};

fn tols() -> Tolerances {
    Tolerances::default()
}

fn set(q: &Quantity) -> &PolyhedralSet {
    match q {
        Quantity::Set { set } => set,
        other => panic!("expected a set, got {other:?}"),
    }
}

fn real(q: &Quantity) -> f64 {
    match q {
        Quantity::Real { value } => *value,
        other => panic!("expected a real, got {other:?}"),
    }
}

#[test]
fn sign_faces() {
    let a = build(OperatorSpec::sign(), 1, 2.0);
    let r = estimate_limsup_face(&a, &[0.0], &[1.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(set(&r.estimated).vertices(), &[vec![1.0]]);
    assert_eq!(r.diagnostics["weak_limsup_agrees"], true);
    assert_eq!(r.diagnostics["stabilized"], true);
}

#[test]
fn ball_face_against_inward_direction() {
    let a = build(OperatorSpec::UnitBallNormalCone, 2, 2.0);
    let r = estimate_limsup_face(&a, &[1.0, 0.0], &[-1.0, 0.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(set(&r.oracle).vertices(), &[vec![0.0, 0.0]]);
    assert!(set(&r.oracle).rays().is_empty());
}

#[test]
fn ball_face_tangent_and_outward() {
    let a = build(OperatorSpec::UnitBallNormalCone, 2, 2.0);
    let tangent = estimate_limsup_face(&a, &[1.0, 0.0], &[0.0, 1.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(tangent.pass, "{tangent:?}");
    assert_eq!(set(&tangent.oracle).rays(), &[vec![1.0, 0.0]]);
    let outward = estimate_limsup_face(&a, &[1.0, 0.0], &[1.0, 1.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(outward.pass && set(&outward.estimated).is_empty() && set(&outward.oracle).is_empty());
}

#[test]
fn triangle_face_is_a_segment() {
    let a = build(triangle_subdiff(), 2, 2.0);
    let r = estimate_limsup_face(&a, &[0.0, 0.0], &[1.0, 1.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    let seg = PolyhedralSet::convex_hull(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(set_distance(set(&r.estimated), &seg).unwrap() <= 1e-12);
}

#[test]
fn zero_direction_and_outside_point_are_errors() {
    let a = build(OperatorSpec::UnitBallNormalCone, 2, 2.0);
    assert_eq!(estimate_limsup_face(&a, &[1.0, 0.0], &[0.0, 0.0], &LimitProbe::default(), &tols()).unwrap_err(), Error::ZeroDirection);
    assert_eq!(estimate_limsup_face(&a, &[2.0, 0.0], &[1.0, 0.0], &LimitProbe::default(), &tols()).unwrap_err(), Error::OutsideDomain);
}

#[test]
fn constructive_sequences() {
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let (steps, r) = constructive_face_sequence(&sign, &[0.0], &[1.0], &[1.0], 40, &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    for s in &steps {
        // x_n = 1/n, w_n = 1, a_n = 1
        assert!((s.w[0] - 1.0).abs() <= 1e-12 && (s.a[0] - 1.0).abs() <= 1e-12, "{s:?}");
    }
    let tri = build(triangle_subdiff(), 2, 2.0);
    let (_, r) = constructive_face_sequence(&tri, &[0.0, 0.0], &[1.0, 0.0], &[1.0, -1.0], 40, &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    let bad = constructive_face_sequence(&tri, &[0.0, 0.0], &[0.0, 1.0], &[1.0, -1.0], 40, &tols());
    assert!(matches!(bad, Err(Error::Hypothesis(_))));
}

#[test]
fn strictness_example() {
    let a = build(OperatorSpec::UnitBallNormalCone, 2, 2.0);
    let r = minnorm_limsup_face(&a, &[1.0, 0.0], &[0.0, 1.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(set(&r.estimated).vertices(), &[vec![0.0, 0.0]]);
    assert!(set(&r.estimated).rays().is_empty());
    assert_eq!(set(&r.oracle).rays(), &[vec![1.0, 0.0]]);
    assert_eq!(r.diagnostics["strict"], true);
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let eq = minnorm_limsup_face(&sign, &[0.0], &[1.0], &LimitProbe::default(), &tols()).unwrap();
    assert!(eq.pass && eq.diagnostics["strict"] == false);
}

#[test]
fn support_examples() {
    let p = LimitProbe::default();
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let r = support_via_minnorm(&sign, &[0.0], &[1.0], &p, &tols()).unwrap();
    assert!(r.pass && (real(&r.estimated) - 1.0).abs() <= 1e-9, "{r:?}");
    let ball = build(OperatorSpec::UnitBallNormalCone, 2, 2.0);
    let out = support_via_minnorm(&ball, &[1.0, 0.0], &[1.0, 0.0], &p, &tols()).unwrap();
    assert!(out.pass && real(&out.estimated).is_infinite() && real(&out.oracle).is_infinite());
    let tan = support_via_minnorm(&ball, &[1.0, 0.0], &[0.0, 1.0], &p, &tols()).unwrap();
    assert!(tan.pass && real(&tan.estimated) == 0.0, "{tan:?}");
}

#[test]
fn selection_trichotomy() {
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let p = LimitProbe::default().with_dense(DenseSet::Generic, SelectionPolicy::VertexLexicographic);
    let r = support_via_selection(&sign, &[0.0], &[1.0], &p, &tols()).unwrap();
    assert!(r.pass && r.diagnostics["tangent_class"] == "interior", "{r:?}");
    assert_eq!(real(&r.estimated), 1.0);
    let bx = build(OperatorSpec::normal_cone_map(unit_box(2)), 2, 2.0);
    let p = LimitProbe::default().with_dense(DenseSet::Generic, SelectionPolicy::MinNorm);
    let bd = support_via_selection(&bx, &[1.0, 0.0], &[0.0, 1.0], &p, &tols()).unwrap();
    assert!(bd.pass && bd.diagnostics["tangent_class"] == "boundary", "{bd:?}");
    assert_eq!(real(&bd.estimated), 0.0);
    let out = support_via_selection(&bx, &[1.0, 0.0], &[1.0, 0.0], &p, &tols()).unwrap();
    assert!(out.pass && out.diagnostics["tangent_class"] == "outside");
    let flat = build(OperatorSpec::normal_cone_map(PolyhedralSet::boxed(&[-1.0, 0.0], &[1.0, 0.0]).unwrap()), 2, 2.0);
    assert_eq!(support_via_selection(&flat, &[0.0, 0.0], &[1.0, 0.0], &p, &tols()).unwrap_err(), Error::EmptyInterior);
}

#[test]
fn boundary_examples() {
    let p = LimitProbe::default();
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let r = boundary_estimate(&sign, &[0.0], &p, &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    let single = boundary_estimate(&sign, &[2.0], &p, &tols()).unwrap();
    assert!(single.pass, "{single:?}");
    let tri = build(triangle_subdiff(), 2, 2.0);
    let edges = boundary_estimate(&tri, &[0.0, 0.0], &p, &tols()).unwrap();
    assert!(edges.pass, "{edges:?}");
    match &edges.estimated {
        Quantity::Union { pieces } => assert_eq!(pieces.iter().filter(|s| s.vertices().len() == 2).count(), 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn decomposition_examples() {
    let p = LimitProbe::default().with_dense(DenseSet::Generic, SelectionPolicy::MinNorm);
    let seg = build(OperatorSpec::normal_cone_map(unit_box(1)), 1, 2.0);
    let r = decompose(&seg, &[1.0], &p, &tols()).unwrap();
    assert!(r.pass, "{r:?}");
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let s = decompose(&sign, &[0.0], &p, &tols()).unwrap();
    assert!(s.pass, "{s:?}");
    let out = decompose(&seg, &[3.0], &p, &tols()).unwrap();
    assert!(out.pass && out.diagnostics["both_sides_empty"] == true);
}

#[test]
fn local_bound_examples() {
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    assert_eq!(local_bound_check(&sign, &[0.0], 1.0, 1.0, 64, &tols()).unwrap().status, Status::Pass);
    let bx = build(OperatorSpec::normal_cone_map(unit_box(2)), 2, 2.0);
    assert_eq!(local_bound_check(&bx, &[0.0, 0.0], 0.1, 0.0, 64, &tols()).unwrap().status, Status::Pass);
    let facet = local_bound_check(&bx, &[1.0, 0.0], 0.2, 0.0, 64, &tols()).unwrap();
    assert_eq!(facet.status, Status::Pass, "{facet:?}");
    assert_eq!(facet.diagnostics["ball_inside_domain"], false);
    assert_eq!(local_bound_check(&sign, &[0.0], 1.0, 0.5, 64, &tols()).unwrap().status, Status::PremiseFailed);
}

#[test]
fn unique_determination_examples() {
    let region = SampleRegion { center: vec![0.0], radius: 2.0, samples: 50, seed: 3 };
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let r = unique_determination_check(&sign, &sign, DeterminationMode::Minnorm, &region, &tols()).unwrap();
    assert_eq!(r.status, Status::Pass);
    let twice = build(OperatorSpec::subdiff(&[(&[2.0], 0.0), (&[-2.0], 0.0)]).unwrap(), 1, 2.0);
    let r = unique_determination_check(&sign, &twice, DeterminationMode::Minnorm, &region, &tols()).unwrap();
    assert_eq!(r.status, Status::PremiseFailed);
    let relu = build(OperatorSpec::subdiff(&[(&[1.0], 0.0), (&[0.0], 0.0)]).unwrap(), 1, 2.0);
    let relu2 = build(OperatorSpec::subdiff(&[(&[1.0], 0.0), (&[0.0], 0.0), (&[0.5], -1.0)]).unwrap(), 1, 2.0);
    let r = unique_determination_check(&relu, &relu2, DeterminationMode::Minnorm, &region, &tols()).unwrap();
    assert_eq!(r.status, Status::Pass);
    let r = unique_determination_check(&relu, &relu2, DeterminationMode::Intersection, &region, &tols()).unwrap();
    assert_eq!(r.status, Status::Pass);
    let shifted = build(OperatorSpec::subdiff(&[(&[4.0], 0.0), (&[3.0], 0.0)]).unwrap(), 1, 2.0);
    let r = unique_determination_check(&sign, &shifted, DeterminationMode::Intersection, &region, &tols()).unwrap();
    assert_eq!(r.status, Status::PremiseFailed);
    let bx = build(OperatorSpec::normal_cone_map(unit_box(1)), 1, 2.0);
    assert!(matches!(unique_determination_check(&sign, &bx, DeterminationMode::Minnorm, &region, &tols()), Err(Error::InvalidArgument(_))));
}

#[test]
fn lipschitz_examples() {
    let region = SampleRegion { center: vec![0.0, 0.0], radius: 3.0, samples: 100, seed: 1 };
    let tri = MaxAffineFunction::from_pairs(&[(&[1.0, 0.0], 0.0), (&[0.0, 1.0], 0.0), (&[0.0, 0.0], 0.0)]).unwrap();
    let r = lipschitz_bound(&tri, &SpaceSpec::euclidean(2), &region, 1.0, &tols()).unwrap();
    assert_eq!(r.status, Status::Pass, "{r:?}");
    let constant = MaxAffineFunction::from_pairs(&[(&[0.0, 0.0], 2.0)]).unwrap();
    assert_eq!(lipschitz_bound(&constant, &SpaceSpec::euclidean(2), &region, 0.0, &tols()).unwrap().status, Status::Pass);
    let line = MaxAffineFunction::from_pairs(&[(&[2.0], 0.0)]).unwrap();
    let r1 = SampleRegion { center: vec![0.0], radius: 1.0, samples: 20, seed: 0 };
    assert_eq!(lipschitz_bound(&line, &SpaceSpec::euclidean(1), &r1, 1.0, &tols()).unwrap().status, Status::PremiseFailed);
}
