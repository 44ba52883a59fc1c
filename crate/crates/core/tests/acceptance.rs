//! One line per acceptance criterion; the test fails if any criterion does.

mod common;

use std::time::Instant;

use common::{boundary_instances, build, by_name, decomposition_instances, face_instances, sequence_instances, unit_box, Expect};
use maxmono::experiment::gallery;
use maxmono::experiment::Format;
use maxmono::limits::{
    boundary_estimate, constructive_face_sequence, decompose, estimate_limsup_face, lipschitz_bound, local_bound_check, minnorm_limsup_face,
    support_via_minnorm, support_via_selection, unique_determination_check, DenseSet, DeterminationMode, LimitProbe, Quantity, SampleRegion,
};
use maxmono::linalg::dist2;
use maxmono::operators::{MaxAffineFunction, Operator, OperatorSpec, SelectionPolicy};
use maxmono::resolvent::{min_norm_via_yosida, resolvent, Schedule};
use maxmono::{SpaceSpec, Status, Tolerances, VerificationReport};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn real(q: &Quantity) -> f64 {
    match q {
        Quantity::Real { value } => *value,
        other => panic!("not a real: {other:?}"),
    }
}

fn faces() -> Outcome {
    let tols = Tolerances::default();
    let cases = face_instances();
    ensure(cases.len() >= 20, || format!("only {} instances", cases.len()))?;
    let (mut worst, mut slowest) = (0.0f64, 0.0f64);
    for (name, x, v, _) in &cases {
        let op = by_name(name);
        let start = Instant::now();
        let r = estimate_limsup_face(&op, x, v, &LimitProbe::default(), &tols).map_err(|e| format!("{name}: {e}"))?;
        let secs = start.elapsed().as_secs_f64();
        ensure(r.status == Status::Pass && r.distance <= 1e-6, || format!("{name} x={x:?} v={v:?}: distance {:e}", r.distance))?;
        ensure(secs <= 10.0, || format!("{name}: {secs:.1} s"))?;
        worst = worst.max(r.distance);
        slowest = slowest.max(secs);
    }
    Ok(format!("{} instances, max distance {worst:.2e}, slowest {slowest:.2} s", cases.len()))
}

fn sequences() -> Outcome {
    let tols = Tolerances::default();
    let cases = sequence_instances();
    ensure(cases.len() >= 10, || format!("only {} triples", cases.len()))?;
    let (mut membership, mut fin) = (0.0f64, 0.0f64);
    for (name, x, xs, v) in &cases {
        let op = by_name(name);
        let (steps, _) = constructive_face_sequence(&op, x, xs, v, 40, &tols).map_err(|e| format!("{name}: {e}"))?;
        ensure(steps.len() == 40, || format!("{name}: {} terms", steps.len()))?;
        let m = steps.iter().map(|s| s.membership).fold(0.0, f64::max);
        let last = steps.last().expect("forty terms");
        ensure(m <= 1e-8, || format!("{name}: membership {m:e}"))?;
        ensure(last.w_error <= 1e-5 && last.a_error <= 1e-5, || format!("{name}: final errors {:e}, {:e}", last.w_error, last.a_error))?;
        membership = membership.max(m);
        fin = fin.max(last.w_error).max(last.a_error);
    }
    Ok(format!("{} triples, max membership {membership:.2e}, max final error {fin:.2e}", cases.len()))
}

fn support_minnorm() -> Outcome {
    let tols = Tolerances::default();
    let (mut worst, mut outside) = (0.0f64, 0);
    for (name, x, v, class) in face_instances() {
        let op = by_name(name);
        let r = support_via_minnorm(&op, &x, &v, &LimitProbe::default(), &tols).map_err(|e| format!("{name}: {e}"))?;
        let (est, oracle) = (real(&r.estimated), real(&r.oracle));
        if class == Expect::Outside {
            ensure(est == f64::INFINITY && oracle == f64::INFINITY, || format!("{name} v={v:?}: {est} vs {oracle}"))?;
            outside += 1;
            continue;
        }
        ensure(oracle.is_finite() && (est - oracle).abs() <= 1e-6, || format!("{name} v={v:?}: {est} vs {oracle}"))?;
        let running = r.diagnostics["running_liminf_min"].as_f64().ok_or("running minimum missing")?;
        ensure(running >= oracle - 1e-6, || format!("{name} v={v:?}: running liminf {running} below {oracle}"))?;
        ensure(r.diagnostics["one_sided_bound_holds"] == true, || format!("{name}: one-sided bound"))?;
        worst = worst.max((est - oracle).abs());
    }
    Ok(format!("max gap {worst:.2e}, {outside} directions outside the tangent cone"))
}

fn dense_selection() -> Outcome {
    let tols = Tolerances::default();
    let mut runs = 0;
    for (name, x, v, class) in face_instances() {
        let op = by_name(name);
        let dim = op.dim();
        let policies = [
            SelectionPolicy::MinNorm,
            SelectionPolicy::VertexLexicographic,
            SelectionPolicy::SupportArgmax { direction: (0..dim).map(|i| 0.3 + 0.4 * i as f64).collect() },
            SelectionPolicy::SeededRandomVertex { seed: 11 },
        ];
        let expected = match class {
            Expect::Interior => "interior",
            Expect::Boundary => "boundary",
            Expect::Outside => "outside",
        };
        for pol in policies {
            let probe = LimitProbe::default().with_dense(DenseSet::Generic, pol.clone());
            let r = support_via_selection(&op, &x, &v, &probe, &tols).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.diagnostics["tangent_class"] == expected, || format!("{name} v={v:?}: class {}", r.diagnostics["tangent_class"]))?;
            ensure(r.status == Status::Pass, || format!("{name} v={v:?} {}: distance {:e}", pol.name(), r.distance))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs over 4 selection policies, classification exact"))
}

fn yosida() -> Outcome {
    let schedule = Schedule::default();
    let final_lambda = *schedule.values().last().expect("nonempty");
    ensure(final_lambda <= 2e-10, || format!("final lambda {final_lambda:e}"))?;
    let mut worst = 0.0f64;
    let mut count = 0;
    for (name, op) in common::suite() {
        for x in common::domain_points(&op, 6, 21) {
            let c = min_norm_via_yosida(&op, &x, &schedule).map_err(|e| format!("{name} at {x:?}: {e}"))?;
            ensure(c.final_error <= 1e-5, || format!("{name} at {x:?}: {:e}", c.final_error))?;
            worst = worst.max(c.final_error);
            count += 1;
        }
    }
    for tag in gallery::tags() {
        let cfg = gallery::config(tag).expect("bundled");
        let op = Operator::new(cfg.operator.clone(), cfg.space).map_err(|e| e.to_string())?;
        for c in cfg.checks.iter().filter(|c| c.theorem_id.as_str() == "yosida_min_norm") {
            let conv = min_norm_via_yosida(&op, &c.x, &c.schedule).map_err(|e| format!("{tag}: {e}"))?;
            ensure(conv.final_error <= 1e-5, || format!("{tag} at {:?}: {:e}", c.x, conv.final_error))?;
            worst = worst.max(conv.final_error);
            count += 1;
        }
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let hilbert: Vec<_> = common::suite().into_iter().filter(|(_, op)| op.space().p() == 2.0).collect();
    for k in 0..100 {
        let (name, op) = &hilbert[k % hilbert.len()];
        let x: Vec<f64> = (0..op.dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..op.dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let lambda = rng.random_range(0.01..2.0);
        let (rx, ry) = (resolvent(op, &x, lambda).map_err(|e| e.to_string())?, resolvent(op, &y, lambda).map_err(|e| e.to_string())?);
        let s = dist2(&x, &y) + 1e-10 - dist2(&rx.x_lambda, &ry.x_lambda);
        ensure(s >= 0.0, || format!("{name}: resolvent expands a pair"))?;
    }
    Ok(format!("{count} points, max error {worst:.2e} at lambda {final_lambda:.2e}; 100 Hilbert pairs nonexpansive"))
}

fn boundary() -> Outcome {
    let tols = Tolerances::default();
    let mut worst = 0.0f64;
    for (name, x) in boundary_instances() {
        let op = by_name(name);
        let r = boundary_estimate(&op, &x, &LimitProbe::default(), &tols).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.diagnostics["bounded_value"] == true, || format!("{name}: unbounded value"))?;
        ensure(r.status == Status::Pass && r.distance <= 1e-5, || format!("{name} at {x:?}: {:e}", r.distance))?;
        worst = worst.max(r.distance);
    }
    // the unit-ball example: min-norm limits {0} sit strictly inside the face R+ (1, 0)
    let ball = build(OperatorSpec::UnitBallNormalCone, 2, 2.0);
    let r = minnorm_limsup_face(&ball, &[1.0, 0.0], &[0.0, 1.0], &LimitProbe::default(), &tols).map_err(|e| e.to_string())?;
    let (Quantity::Set { set: est }, Quantity::Set { set: face }) = (&r.estimated, &r.oracle) else {
        return Err("strictness report without sets".into());
    };
    ensure(est.vertices() == [vec![0.0, 0.0]] && est.rays().is_empty(), || format!("cluster set {est:?}"))?;
    ensure(face.vertices() == [vec![0.0, 0.0]] && face.rays() == [vec![1.0, 0.0]], || format!("face {face:?}"))?;
    ensure(r.pass && r.diagnostics["strict"] == true, || "inclusion not reported strict".into())?;
    Ok(format!("{} instances, max distance {worst:.2e}; strict inclusion {{0}} in R+(1,0) reproduced", boundary_instances().len()))
}

fn decomposition() -> Outcome {
    let tols = Tolerances::default();
    let cases = decomposition_instances();
    ensure(cases.len() >= 10, || format!("only {} instances", cases.len()))?;
    let mut worst = 0.0f64;
    let mut boundary_points = 0;
    for (name, x) in &cases {
        let op = by_name(name);
        let dom = op.domain_closure();
        if !dom.normal_cone(x).rays().is_empty() {
            boundary_points += 1;
        }
        for pol in [SelectionPolicy::MinNorm, SelectionPolicy::VertexLexicographic] {
            let probe = LimitProbe::default().with_dense(DenseSet::Generic, pol);
            let r = decompose(&op, x, &probe, &tols).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.diagnostics["infinity_mismatches"] == 0, || format!("{name} at {x:?}: infinity mismatch"))?;
            ensure(r.distance <= 1e-6, || format!("{name} at {x:?}: gap {:e}", r.distance))?;
            worst = worst.max(r.distance);
        }
    }
    ensure(boundary_points > 0, || "no boundary point of a constrained domain".into())?;
    Ok(format!("{} instances ({boundary_points} on a domain boundary), 200 directions each, max gap {worst:.2e}", cases.len()))
}

fn corollaries() -> Outcome {
    let tols = Tolerances::default();
    let sign = build(OperatorSpec::sign(), 1, 2.0);
    let boxed = build(OperatorSpec::normal_cone_map(unit_box(2)), 2, 2.0);
    let twice = build(OperatorSpec::subdiff(&[(&[2.0], 0.0), (&[-2.0], 0.0)]).unwrap(), 1, 2.0);
    let tri = common::triangle_subdiff();
    let redundant = OperatorSpec::subdiff(&[(&[1.0, 0.0], 0.0), (&[0.0, 1.0], 0.0), (&[0.0, 0.0], 0.0), (&[0.5, 0.0], -1.0)]).unwrap();
    let line = |c: f64, r: f64| SampleRegion { center: vec![c], radius: r, samples: 200, seed: 0 };
    let plane = |r: f64| SampleRegion { center: vec![0.0, 0.0], radius: r, samples: 200, seed: 0 };
    let tri_f = MaxAffineFunction::from_pairs(&[(&[1.0, 0.0], 0.0), (&[0.0, 1.0], 0.0), (&[0.0, 0.0], 0.0)]).unwrap();
    let constant = MaxAffineFunction::from_pairs(&[(&[0.0, 0.0], 1.0)]).unwrap();
    let steep = MaxAffineFunction::from_pairs(&[(&[2.0], 0.0)]).unwrap();
    let (e1, e2) = (SpaceSpec::euclidean(1), SpaceSpec::euclidean(2));

    let positive: Vec<(&str, maxmono::Result<VerificationReport>)> = vec![
        ("local bound, sign", local_bound_check(&sign, &[0.0], 1.0, 1.0, 200, &tols)),
        ("local bound, box interior", local_bound_check(&boxed, &[0.0, 0.0], 0.5, 0.0, 200, &tols)),
        ("local bound, box facet", local_bound_check(&boxed, &[1.0, 0.0], 0.5, 0.0, 200, &tols)),
        ("min-norm determination", unique_determination_check(&sign, &sign, DeterminationMode::Minnorm, &line(0.0, 2.0), &tols)),
        (
            "intersection determination",
            unique_determination_check(&build(tri.clone(), 2, 2.0), &build(redundant, 2, 2.0), DeterminationMode::Intersection, &plane(1.0), &tols),
        ),
        ("lipschitz, triangle", lipschitz_bound(&tri_f, &e2, &plane(2.0), 1.0, &tols)),
        ("lipschitz, constant", lipschitz_bound(&constant, &e2, &plane(2.0), 0.0, &tols)),
    ];
    let violated: Vec<(&str, maxmono::Result<VerificationReport>)> = vec![
        ("local bound below the min-norm", local_bound_check(&sign, &[0.0], 1.0, 0.5, 200, &tols)),
        ("min-norm mismatch", unique_determination_check(&sign, &twice, DeterminationMode::Minnorm, &line(0.0, 2.0), &tols)),
        ("steep slope", lipschitz_bound(&steep, &e1, &line(0.0, 1.0), 1.0, &tols)),
        ("triangle with ell 1/2", lipschitz_bound(&tri_f, &e2, &plane(2.0), 0.5, &tols)),
    ];
    for (label, r) in &positive {
        let r = r.as_ref().map_err(|e| format!("{label}: {e}"))?;
        ensure(r.status == Status::Pass, || format!("{label}: {}", r.status.name()))?;
    }
    for (label, r) in &violated {
        let r = r.as_ref().map_err(|e| format!("{label}: {e}"))?;
        ensure(r.status == Status::PremiseFailed, || format!("{label}: {}", r.status.name()))?;
    }
    Ok(format!("{} positive instances pass, {} premise violations reported as premise_failed", positive.len(), violated.len()))
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let a = gallery::run(None).map_err(|e| e.to_string())?;
    let b = gallery::run(None).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64() / 2.0;
    for format in [None, Some(Format::Json), Some(Format::Csv)] {
        ensure(a.render(format) == b.render(format), || format!("{format:?} output differs between runs"))?;
    }
    ensure(a.exit_code() == 0, || "a gallery check failed".into())?;
    ensure(secs <= 300.0, || format!("gallery took {secs:.1} s"))?;
    Ok(format!("{} checks byte-identical in table, JSON and CSV; {secs:.2} s per run", a.rows.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("face representation", faces),
        ("constructive sequence", sequences),
        ("support via minimal-norm pairings", support_minnorm),
        ("dense-selection support", dense_selection),
        ("Yosida minimal-norm convergence", yosida),
        ("boundary formula and strictness", boundary),
        ("decomposition", decomposition),
        ("corollary premises", corollaries),
        ("gallery determinism and runtime", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(why) => {
                println!("criterion {} {name}: FAIL ({why})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
