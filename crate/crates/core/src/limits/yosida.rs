use crate::convex::PolyhedralSet;
use crate::error::Result;
use crate::json::real;
use crate::operators::Operator;
use crate::resolvent::{min_norm_via_yosida, Schedule};
use crate::tol::Tolerances;

use super::{check_point, Quantity, TraceRow, VerificationReport};

/// `λ⁻¹ J(x - x_λ) -> A∘x` along the schedule, compared with the exact
/// minimal-norm element at the final `λ`.
pub fn yosida_min_norm_check(op: &Operator, x: &[f64], schedule: &Schedule, tols: &Tolerances) -> Result<VerificationReport> {
    check_point(op, x, None)?;
    let conv = min_norm_via_yosida(op, x, schedule)?;
    let dim = op.dim();
    let point = |c: &[f64]| PolyhedralSet::new(dim, vec![c.to_vec()], Vec::new());
    let trace = schedule
        .values()
        .iter()
        .zip(&conv.errors)
        .enumerate()
        .map(|(k, (lambda, e))| TraceRow { scale: k, t: *lambda, feasible: 1, skipped: 0, statistic: Some(*e) })
        .collect();
    Ok(VerificationReport::compare(
        "yosida_min_norm",
        Quantity::Set { set: point(&conv.value)? },
        Quantity::Set { set: point(&conv.exact)? },
        conv.final_error,
        tols.yosida,
        tols,
    )
    .diag("final_lambda", real(*schedule.values().last().expect("schedule is nonempty")))
    .diag("steps", schedule.steps)
    .with_trace(trace))
}
