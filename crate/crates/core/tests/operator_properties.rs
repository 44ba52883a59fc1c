mod common;

use maxmono::linalg::axpy;
use maxmono::operators::{graph_membership, monotonicity_probe, SelectionPolicy};
use rand::{Rng, SeedableRng};

fn policies(dim: usize) -> Vec<SelectionPolicy> {
    vec![
        SelectionPolicy::MinNorm,
        SelectionPolicy::VertexLexicographic,
        SelectionPolicy::SupportArgmax { direction: vec![1.0; dim] },
        SelectionPolicy::SeededRandomVertex { seed: 11 },
    ]
}

#[test]
fn selections_are_members_of_the_value() {
    for (name, op) in common::suite() {
        for x in common::domain_points(&op, 200, 5) {
            let value = op.value(&x).unwrap();
            for pol in policies(op.dim()) {
                let s = op.select(&x, &pol).unwrap();
                assert!(value.contains(&s, 1e-9), "{name} {:?} at {x:?}", pol);
            }
        }
    }
}

#[test]
fn values_are_demiclosed() {
    // x_n = x + d / n with x_n* a fixed-policy selection; the limit lies in Ax
    for (name, op) in common::suite() {
        for (k, x) in common::domain_points(&op, 20, 9).into_iter().enumerate() {
            let d = maxmono::sampling::nudge_direction(op.dim(), k, k as u32);
            let mut last = None;
            for n in [1e3, 1e5, 1e7, 1e9] {
                let xn = op.domain_closure().retract(&axpy(&x, 1.0 / n, &d));
                last = Some(op.select(&xn, &SelectionPolicy::VertexLexicographic).unwrap());
            }
            let limit = last.unwrap();
            assert!(op.value(&x).unwrap().contains(&limit, 1e-7), "{name} at {x:?}: {:?}", limit.0);
        }
    }
}

#[test]
fn monotonicity_holds_on_the_suite() {
    for (name, op) in common::suite() {
        let r = monotonicity_probe(&op, 300, 17).unwrap();
        assert!(r.pass, "{name}: {}", r.min_value);
    }
}

#[test]
fn graph_membership_matches_exact_membership() {
    let suite = common::suite();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut members = 0;
    for trial in 0..500 {
        let (name, op) = &suite[trial % suite.len()];
        let x = common::domain_points(op, 1, trial as u64)[0].clone();
        let value = op.value(&x).unwrap();
        let base = op.select(&x, &SelectionPolicy::SeededRandomVertex { seed: trial as u64 }).unwrap();
        // in the value, or clearly off it
        let xstar = loop {
            if rng.random_bool(0.4) {
                let mut s = base.0.clone();
                for r in value.rays() {
                    s = axpy(&s, rng.random_range(0.0..2.0), r);
                }
                break s;
            }
            let dir: Vec<f64> = (0..op.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let cand = axpy(&base, rng.random_range(0.1..0.6), &dir);
            let gap = value.distance(&cand).unwrap();
            if gap == 0.0 || gap >= 0.02 {
                break cand;
            }
        };
        let g = graph_membership(op, &x, &xstar, 0.05, 256).unwrap();
        assert!(g.agrees(), "trial {trial} {name} x {x:?} x* {xstar:?}: {g:?}");
        members += g.exact as usize;
    }
    assert!(members > 100 && members < 400, "{members}");
}

#[test]
fn sum_value_is_the_minkowski_sum() {
    let box_op = common::build(maxmono::operators::OperatorSpec::normal_cone_map(common::unit_box(2)), 2, 2.0);
    let tri = common::build(common::triangle_subdiff(), 2, 2.0);
    let (_, sum) = common::suite().into_iter().find(|(n, _)| *n == "triangle_plus_box").unwrap();
    for x in common::domain_points(&sum, 200, 3) {
        let expect = tri.value(&x).unwrap().minkowski_sum(&box_op.value(&x).unwrap()).unwrap();
        let d = maxmono::set_distance(&sum.value(&x).unwrap(), &expect).unwrap();
        assert!(d <= 1e-9, "{x:?}");
    }
}
