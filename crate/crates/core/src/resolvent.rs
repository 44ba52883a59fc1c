//! Resolvents `x_λ` with `0 ∈ J(x_λ - x) + λA(x_λ)` and Yosida trajectories.
//!
//! The inclusion is solved by enumerating active sets (pieces of each
//! max-affine summand, facets of the polyhedral domains, the sphere) and
//! running damped Newton on the resulting square system. Unknowns are scaled
//! by λ so that they stay of order one:
//!
//! * `ζ = (x_λ - x) / λ` and `ω = J(ζ)`, so the Yosida value is `-ω`;
//! * convex weights `θ` of the active slopes of every max-affine summand;
//! * level offsets `s` with `f(x_λ) = f(x) + λ s`;
//! * multipliers `μ` of active facets and `μ_b` of the sphere.
//!
//! For `p >= 2` the primary unknown is `ζ`, otherwise `ω`; either way the
//! map to the other one is a duality map with a bounded Jacobian.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::convex::cones::Subsets;
use crate::convex::Halfspace;
use crate::error::{Error, Result};
use crate::linalg::{self, columns, dot, norm2, rank, sub};
use crate::numfmt::sci;
use crate::operators::{MaxAffineFunction, Operator, OperatorSpec};
use crate::space::{duality, duality_jacobian, lp_norm, Covector, Vector};

const MAX_NEWTON: usize = 200;
const FEASIBILITY: f64 = 1e-10;
const RESIDUAL: f64 = 1e-10;
const JAC_FLOOR: f64 = 1e-8;

/// Geometric schedule `λ_n = lambda0 * ratio^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedule {
    pub lambda0: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { lambda0: 0.1, ratio: 0.5, steps: 30 }
    }
}

impl Schedule {
    pub fn new(lambda0: f64, ratio: f64, steps: usize) -> Result<Self> {
        let s = Schedule { lambda0, ratio, steps };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::InvalidArgument("schedule start must be positive".into()));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidArgument("schedule ratio must lie in (0, 1)".into()));
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("schedule needs at least one step".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.steps);
        let mut v = self.lambda0;
        for _ in 0..self.steps {
            out.push(v);
            v *= self.ratio;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YosidaIterate {
    pub lambda: f64,
    pub x_lambda: Vector,
    /// `λ⁻¹ J(x - x_λ)`.
    pub yosida_value: Covector,
    /// `dist(-J(x_λ - x), λ A(x_λ))`.
    pub residual: f64,
    /// `(x_λ - x) / λ`, exact to working precision even when λ is tiny.
    #[serde(skip)]
    pub scaled_step: Vec<f64>,
}

/// Active constraints of one candidate system.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ActiveSet {
    pieces: Vec<Vec<usize>>,
    facets: Vec<usize>,
    ball: bool,
}

/// Warm start carried along a trajectory.
#[derive(Debug, Clone)]
struct WarmStart {
    active: ActiveSet,
    z: Vec<f64>,
}

/// An operator flattened into the pieces the solver treats separately.
struct Flat {
    n: usize,
    p: f64,
    q: f64,
    m: DMatrix<f64>,
    c: Vec<f64>,
    kappa: f64,
    functions: Vec<MaxAffineFunction>,
    facets: Vec<Halfspace>,
    ball: bool,
}

impl Flat {
    fn new(op: &Operator) -> Self {
        let (m, c) = op.affine_part();
        let mut kappa = 0.0;
        let mut functions = Vec::new();
        let mut facets = Vec::new();
        let mut ball = false;
        for t in op.spec().summands() {
            match t {
                OperatorSpec::SubdiffMaxAffine { function } => functions.push(function.clone()),
                OperatorSpec::NormalConeMap { set } => facets.extend(set.hrep().iter().cloned()),
                OperatorSpec::UnitBallNormalCone => ball = true,
                OperatorSpec::DualityMapOp => kappa += 1.0,
                OperatorSpec::AffineMonotone { .. } | OperatorSpec::Sum { .. } => {}
            }
        }
        let sp = op.space();
        Flat { n: sp.dim(), p: sp.p(), q: sp.q(), m, c, kappa, functions, facets, ball }
    }
}

/// The square system for one active set at fixed `(x, λ)`.
struct System<'a> {
    flat: &'a Flat,
    x: &'a [f64],
    lambda: f64,
    active: &'a ActiveSet,
    /// `f_k,i(x) - f_k(x)` for every piece.
    gaps: Vec<Vec<f64>>,
    /// `<n_h, x> - b_h` for every facet.
    slacks: Vec<f64>,
    /// The primary unknown is `ζ` (otherwise `ω`).
    primal: bool,
}

struct Point {
    zeta: Vec<f64>,
    omega: Vec<f64>,
    y: Vec<f64>,
    dzeta: DMatrix<f64>,
    domega: DMatrix<f64>,
}

impl<'a> System<'a> {
    fn new(flat: &'a Flat, x: &'a [f64], lambda: f64, active: &'a ActiveSet) -> Self {
        let gaps = flat
            .functions
            .iter()
            .map(|f| {
                let v = f.piece_values(x);
                let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                v.iter().map(|vi| vi - m).collect()
            })
            .collect();
        let slacks = flat.facets.iter().map(|h| dot(&h.a, x) - h.b).collect();
        System { flat, x, lambda, active, gaps, slacks, primal: flat.p >= 2.0 }
    }

    /// The same system with the other primary unknown, and `z` rewritten for it.
    fn flipped(&self, z: &[f64]) -> (System<'a>, Vec<f64>) {
        let n = self.flat.n;
        let pt = self.point(&z[..n]);
        let mut w = z.to_vec();
        w[..n].copy_from_slice(if self.primal { &pt.omega } else { &pt.zeta });
        let sys = System {
            flat: self.flat,
            x: self.x,
            lambda: self.lambda,
            active: self.active,
            gaps: self.gaps.clone(),
            slacks: self.slacks.clone(),
            primal: !self.primal,
        };
        (sys, w)
    }

    fn size(&self) -> usize {
        let f = self.flat;
        f.n + self.active.pieces.iter().map(|s| s.len() + 1).sum::<usize>() + self.active.facets.len() + self.active.ball as usize
    }

    fn point(&self, xi: &[f64]) -> Point {
        let f = self.flat;
        let (zeta, omega, dzeta, domega) = if self.primal {
            (xi.to_vec(), duality(xi, f.p), DMatrix::identity(f.n, f.n), duality_jacobian(xi, f.p, JAC_FLOOR))
        } else {
            (duality(xi, f.q), xi.to_vec(), duality_jacobian(xi, f.q, JAC_FLOOR), DMatrix::identity(f.n, f.n))
        };
        let y = linalg::axpy(self.x, self.lambda, &zeta);
        Point { zeta, omega, y, dzeta, domega }
    }

    fn residual(&self, z: &[f64]) -> Vec<f64> {
        let f = self.flat;
        let n = f.n;
        let pt = self.point(&z[..n]);
        let jy = duality(&pt.y, f.p);
        let mut out = vec![0.0; self.size()];
        // stationarity
        let my = &f.m * DVector::from_column_slice(&pt.y);
        for i in 0..n {
            out[i] = pt.omega[i] + my[i] + f.c[i] + f.kappa * jy[i];
        }
        let mut k = n;
        let mut rows = n;
        let mut level_cols = Vec::new();
        for (fi, set) in self.active.pieces.iter().enumerate() {
            for &pi in set {
                let a = &f.functions[fi].pieces[pi].slope;
                for i in 0..n {
                    out[i] += z[k] * a[i];
                }
                k += 1;
            }
            level_cols.push(k);
            k += 1;
        }
        let facet_start = k;
        for (j, &h) in self.active.facets.iter().enumerate() {
            for i in 0..n {
                out[i] += z[facet_start + j] * f.facets[h].a[i];
            }
        }
        k += self.active.facets.len();
        if self.active.ball {
            for i in 0..n {
                out[i] += z[k] * jy[i];
            }
        }
        // level equalities and weight sums
        let mut col = n;
        for (fi, set) in self.active.pieces.iter().enumerate() {
            let s = z[level_cols[fi]];
            let mut wsum = 0.0;
            for &pi in set {
                let a = &f.functions[fi].pieces[pi].slope;
                out[rows] = dot(a, &pt.zeta) + self.gaps[fi][pi] / self.lambda - s;
                wsum += z[col];
                col += 1;
                rows += 1;
            }
            col += 1;
            out[rows] = wsum - 1.0;
            rows += 1;
        }
        for &h in &self.active.facets {
            out[rows] = dot(&f.facets[h].a, &pt.zeta) + self.slacks[h] / self.lambda;
            rows += 1;
        }
        if self.active.ball {
            out[rows] = 0.5 * (lp_norm(&pt.y, f.p).powi(2) - 1.0) / self.lambda;
        }
        out
    }

    fn jacobian(&self, z: &[f64]) -> DMatrix<f64> {
        let f = self.flat;
        let n = f.n;
        let size = self.size();
        let pt = self.point(&z[..n]);
        let jy = duality(&pt.y, f.p);
        let mut jac = DMatrix::zeros(size, size);
        let ball_mult = if self.active.ball { z[size - 1] } else { 0.0 };
        // d/dxi of the stationarity rows
        let mut inner = f.m.clone();
        if f.kappa + ball_mult != 0.0 {
            inner += duality_jacobian(&pt.y, f.p, JAC_FLOOR) * (f.kappa + ball_mult);
        }
        let top = &pt.domega + inner * &pt.dzeta * self.lambda;
        jac.view_mut((0, 0), (n, n)).copy_from(&top);
        let mut col = n;
        let mut row = n;
        for (fi, set) in self.active.pieces.iter().enumerate() {
            let level_col = col + set.len();
            for &pi in set {
                let a = &f.functions[fi].pieces[pi].slope;
                for i in 0..n {
                    jac[(i, col)] = a[i];
                }
                let da = DVector::from_column_slice(a).transpose() * &pt.dzeta;
                for i in 0..n {
                    jac[(row, i)] = da[i];
                }
                jac[(row, level_col)] = -1.0;
                col += 1;
                row += 1;
            }
            for c in (level_col - set.len())..level_col {
                jac[(row, c)] = 1.0;
            }
            col += 1;
            row += 1;
        }
        for &h in &self.active.facets {
            let a = &f.facets[h].a;
            for i in 0..n {
                jac[(i, col)] = a[i];
            }
            let da = DVector::from_column_slice(a).transpose() * &pt.dzeta;
            for i in 0..n {
                jac[(row, i)] = da[i];
            }
            col += 1;
            row += 1;
        }
        if self.active.ball {
            for i in 0..n {
                jac[(i, col)] = jy[i];
            }
            let dj = DVector::from_column_slice(&jy).transpose() * &pt.dzeta;
            for i in 0..n {
                jac[(row, i)] = dj[i];
            }
        }
        jac
    }

    fn initial(&self, guess_zeta: Option<&[f64]>) -> Vec<f64> {
        let f = self.flat;
        let n = f.n;
        let mut z = vec![0.0; self.size()];
        let zeta = match guess_zeta {
            Some(g) => g.to_vec(),
            None => {
                let mut g: Vec<f64> = (&f.m * DVector::from_column_slice(self.x)).iter().copied().collect();
                let jx = duality(self.x, f.p);
                for i in 0..n {
                    g[i] += f.c[i] + f.kappa * jx[i];
                }
                for (fi, set) in self.active.pieces.iter().enumerate() {
                    for &pi in set {
                        let a = &f.functions[fi].pieces[pi].slope;
                        for i in 0..n {
                            g[i] += a[i] / set.len() as f64;
                        }
                    }
                }
                duality(&linalg::scale(-1.0, &g), f.q)
            }
        };
        let xi = if self.primal { zeta } else { duality(&zeta, f.p) };
        z[..n].copy_from_slice(&xi);
        let mut k = n;
        for set in &self.active.pieces {
            for _ in set {
                z[k] = 1.0 / set.len() as f64;
                k += 1;
            }
            k += 1;
        }
        z
    }

    /// Damped Newton; returns the final iterate and its residual norm.
    fn newton(&self, mut z: Vec<f64>) -> (Vec<f64>, f64) {
        let mut r = self.residual(&z);
        let mut nr = norm2(&r);
        for _ in 0..MAX_NEWTON {
            if !nr.is_finite() || nr == 0.0 {
                break;
            }
            let jac = self.jacobian(&z);
            let step = linalg::solve(&jac, &DVector::from_vec(r.iter().map(|v| -v).collect()));
            if nr <= 1e-14 {
                // converged; one more full step if it does not hurt
                let cand: Vec<f64> = z.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
                let nc = norm2(&self.residual(&cand));
                if nc <= nr {
                    z = cand;
                    nr = nc;
                }
                break;
            }
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha >= 1e-10 {
                let cand: Vec<f64> = z.iter().zip(step.iter()).map(|(a, d)| a + alpha * d).collect();
                let rc = self.residual(&cand);
                let nc = norm2(&rc);
                if nc.is_finite() && nc <= (1.0 - 1e-4 * alpha) * nr {
                    z = cand;
                    r = rc;
                    nr = nc;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (z, nr)
    }

    /// Signs of the multipliers and the inactive constraints at the solution.
    fn feasible(&self, z: &[f64]) -> bool {
        let f = self.flat;
        let n = f.n;
        let pt = self.point(&z[..n]);
        let mut k = n;
        for (fi, set) in self.active.pieces.iter().enumerate() {
            if z[k..k + set.len()].iter().any(|&t| t < -FEASIBILITY) {
                return false;
            }
            let level = self.lambda * z[k + set.len()];
            for (pi, piece) in f.functions[fi].pieces.iter().enumerate() {
                if set.contains(&pi) {
                    continue;
                }
                let v = self.gaps[fi][pi] + self.lambda * dot(&piece.slope, &pt.zeta);
                if v > level + FEASIBILITY {
                    return false;
                }
            }
            k += set.len() + 1;
        }
        for j in 0..self.active.facets.len() {
            if z[k + j] < -FEASIBILITY {
                return false;
            }
        }
        for (h, hs) in f.facets.iter().enumerate() {
            if !self.active.facets.contains(&h) && self.slacks[h] + self.lambda * dot(&hs.a, &pt.zeta) > FEASIBILITY {
                return false;
            }
        }
        if self.active.ball {
            if z[self.size() - 1] < -FEASIBILITY {
                return false;
            }
        } else if f.ball && lp_norm(&pt.y, f.p) > 1.0 + FEASIBILITY {
            return false;
        }
        true
    }
}

/// Candidate active sets, plausible ones only, ordered by size and by how
/// far the constraints are from active at `x`.
fn candidates(flat: &Flat, x: &[f64], lambda: f64, bound: f64) -> Vec<ActiveSet> {
    let n = flat.n;
    let slack = |scale: f64| 1e-12 * (1.0 + scale);
    let mut per_function: Vec<Vec<(f64, Vec<usize>)>> = Vec::new();
    for f in &flat.functions {
        let vals = f.piece_values(x);
        let (top, fx) = vals.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let plausible: Vec<usize> = (0..vals.len())
            .filter(|&i| {
                if bound.is_infinite() {
                    return true;
                }
                let reach = lambda * bound * norm2(&sub(&f.pieces[i].slope, &f.pieces[top].slope));
                fx - vals[i] <= reach * 1.0001 + slack(fx.abs())
            })
            .collect();
        let mut options = Vec::new();
        for k in 1..=plausible.len().min(n + 1) {
            for sub_idx in Subsets::new(plausible.len(), k) {
                let set: Vec<usize> = sub_idx.iter().map(|&i| plausible[i]).collect();
                let base = &f.pieces[set[0]].slope;
                let diffs: Vec<Vec<f64>> = set[1..].iter().map(|&i| sub(&f.pieces[i].slope, base)).collect();
                if !diffs.is_empty() && rank(&columns(n, &diffs)) < diffs.len() {
                    continue;
                }
                let gap: f64 = set.iter().map(|&i| fx - vals[i]).sum();
                options.push((gap, set));
            }
        }
        per_function.push(options);
    }
    let facet_ok: Vec<usize> = (0..flat.facets.len())
        .filter(|&h| {
            let s = flat.facets[h].b - dot(&flat.facets[h].a, x);
            s <= lambda * bound * 1.0001 + slack(flat.facets[h].b.abs())
        })
        .collect();
    let mut facet_options = vec![(0.0, Vec::new())];
    for k in 1..=facet_ok.len().min(n) {
        for sub_idx in Subsets::new(facet_ok.len(), k) {
            let set: Vec<usize> = sub_idx.iter().map(|&i| facet_ok[i]).collect();
            let normals: Vec<Vec<f64>> = set.iter().map(|&h| flat.facets[h].a.clone()).collect();
            if rank(&columns(n, &normals)) < set.len() {
                continue;
            }
            let gap: f64 = set.iter().map(|&h| (flat.facets[h].b - dot(&flat.facets[h].a, x)).max(0.0)).sum();
            facet_options.push((gap, set));
        }
    }
    let mut ball_options = vec![(0.0, false)];
    if flat.ball {
        let s = 1.0 - lp_norm(x, flat.p);
        if s <= lambda * bound * 1.0001 + slack(1.0) {
            ball_options.push((s.max(0.0), true));
        }
    }

    let mut combos: Vec<(usize, f64, ActiveSet)> = vec![(0, 0.0, ActiveSet { pieces: Vec::new(), facets: Vec::new(), ball: false })];
    for options in &per_function {
        let mut next = Vec::with_capacity(combos.len() * options.len());
        for (size, gap, set) in &combos {
            for (g, s) in options {
                let mut a = set.clone();
                a.pieces.push(s.clone());
                next.push((size + s.len(), gap + g, a));
            }
        }
        combos = next;
    }
    let mut next = Vec::new();
    for (size, gap, set) in &combos {
        for (g, fs) in &facet_options {
            for (gb, b) in &ball_options {
                let mut a = set.clone();
                a.facets = fs.clone();
                a.ball = *b;
                next.push((size + fs.len() + *b as usize, gap + g + gb, a));
            }
        }
    }
    next.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    next.into_iter().map(|(_, _, a)| a).collect()
}

/// Distance from `-ω` to `A(y)`, times λ.
fn inclusion_residual(op: &Operator, y: &[f64], omega: &[f64], lambda: f64) -> f64 {
    match op.value(y) {
        Ok(v) => {
            let target: Vec<f64> = omega.iter().map(|w| -w).collect();
            lambda * v.distance(&target).unwrap_or(f64::INFINITY)
        }
        Err(_) => f64::INFINITY,
    }
}

/// Solver for resolvents of one operator.
pub struct Resolvent<'a> {
    op: &'a Operator,
    flat: Flat,
}

impl<'a> Resolvent<'a> {
    pub fn new(op: &'a Operator) -> Self {
        Resolvent { op, flat: Flat::new(op) }
    }

    /// `x_λ`, optionally warm-started from a guess of `x_λ`.
    pub fn solve(&self, x: &[f64], lambda: f64, guess: Option<&[f64]>) -> Result<YosidaIterate> {
        let zeta_guess = guess.map(|g| linalg::scale(1.0 / lambda, &sub(g, x)));
        self.solve_warm(x, lambda, zeta_guess.as_deref(), None).map(|(it, _)| it)
    }

    fn solve_warm(&self, x: &[f64], lambda: f64, zeta_guess: Option<&[f64]>, warm: Option<&WarmStart>) -> Result<(YosidaIterate, WarmStart)> {
        self.op.space().check(x)?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveLambda(lambda));
        }
        let n = self.flat.n;
        // ||A_λ x|| <= ||A∘x|| bounds the scaled step inside the domain
        let bound = match self.op.min_norm(x) {
            Ok(m) => {
                let c = (n as f64).powf((0.5 - 1.0 / self.flat.p).max(0.0));
                c * lp_norm(&m, self.flat.q)
            }
            Err(_) => f64::INFINITY,
        };
        let mut list = candidates(&self.flat, x, lambda, bound);
        if let Some(w) = warm {
            if let Some(pos) = list.iter().position(|a| *a == w.active) {
                let a = list.remove(pos);
                list.insert(0, a);
            }
        }
        let mut best = f64::INFINITY;
        for active in &list {
            let sys = System::new(&self.flat, x, lambda, active);
            let z0 = match warm {
                Some(w) if w.active == *active && zeta_guess.is_none() => w.z.clone(),
                _ => sys.initial(zeta_guess),
            };
            let (z, _) = sys.newton(z0);
            if z.iter().any(|v| !v.is_finite()) {
                continue;
            }
            // where the duality map is flat the residual barely sees the
            // primary unknown; a few steps in the other form sharpen it
            let (alt, w) = sys.flipped(&z);
            let (w, _) = alt.newton(w);
            let (_, z) = alt.flipped(&w);
            let pt = sys.point(&z[..n]);
            let res = inclusion_residual(self.op, &pt.y, &pt.omega, lambda);
            best = best.min(res);
            if res <= RESIDUAL && sys.feasible(&z) {
                let it = YosidaIterate {
                    lambda,
                    x_lambda: Vector(pt.y),
                    yosida_value: Covector(pt.omega.iter().map(|w| -w).collect()),
                    residual: res,
                    scaled_step: pt.zeta,
                };
                return Ok((it, WarmStart { active: active.clone(), z }));
            }
        }
        Err(Error::NoConvergence { iterations: MAX_NEWTON, residual: best })
    }
}

/// `x_λ` with `0 ∈ J(x_λ - x) + λA(x_λ)`.
pub fn resolvent(op: &Operator, x: &[f64], lambda: f64) -> Result<YosidaIterate> {
    Resolvent::new(op).solve(x, lambda, None)
}

/// One row of a trajectory: the iterate or the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub lambda: f64,
    pub iterate: Option<YosidaIterate>,
    pub failure: Option<String>,
    /// Smallest inclusion residual reached when the step failed.
    pub failure_residual: Option<f64>,
    /// `||x_λ - x||_p`.
    pub distance_to_x: Option<f64>,
    /// `||yosida_value - A∘x||_q` when `A∘x` exists.
    pub error_vs_exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub x: Vector,
    pub in_domain: bool,
    pub steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    pub fn last_iterate(&self) -> Option<&YosidaIterate> {
        self.steps.iter().rev().find_map(|s| s.iterate.as_ref())
    }

    /// Rows `lambda, x_lambda..., yosida..., residual, error_vs_exact, flag`.
    pub fn to_csv(&self) -> String {
        let n = self.x.len();
        let mut out = String::from("lambda");
        for i in 0..n {
            out.push_str(&format!(",x_lambda_{i}"));
        }
        for i in 0..n {
            out.push_str(&format!(",yosida_{i}"));
        }
        out.push_str(",residual,error_vs_exact,flag\n");
        for s in &self.steps {
            let mut row = vec![sci(s.lambda)];
            match &s.iterate {
                Some(it) => {
                    row.extend(it.x_lambda.iter().map(|v| sci(*v)));
                    row.extend(it.yosida_value.iter().map(|v| sci(*v)));
                    row.push(sci(it.residual));
                }
                None => {
                    row.extend(std::iter::repeat_n(String::new(), 2 * n));
                    row.push(sci(s.failure_residual.unwrap_or(f64::INFINITY)));
                }
            }
            row.push(s.error_vs_exact.map(sci).unwrap_or_default());
            let mut flags = Vec::new();
            if !self.in_domain {
                flags.push("outside_domain".to_string());
            }
            if let Some(f) = &s.failure {
                flags.push(format!("failed: {f}"));
            }
            row.push(flags.join("; "));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Resolvents along the schedule, warm-starting each step from the last.
/// Failures are recorded per step; the trajectory is returned regardless.
pub fn yosida_trajectory(op: &Operator, x: &[f64], schedule: &Schedule) -> Result<Trajectory> {
    op.space().check(x)?;
    schedule.validate()?;
    let solver = Resolvent::new(op);
    let exact = op.min_norm(x).ok();
    let mut warm: Option<WarmStart> = None;
    let mut steps = Vec::with_capacity(schedule.steps);
    for lambda in schedule.values() {
        match solver.solve_warm(x, lambda, None, warm.as_ref()) {
            Ok((it, w)) => {
                let distance_to_x = Some(lp_norm(&linalg::scale(lambda, &it.scaled_step), op.space().p()));
                let error_vs_exact = exact.as_ref().map(|e| lp_norm(&sub(&it.yosida_value, e), op.space().q()));
                warm = Some(w);
                steps.push(TrajectoryStep { lambda, iterate: Some(it), failure: None, failure_residual: None, distance_to_x, error_vs_exact });
            }
            Err(e) => {
                let failure_residual = match e {
                    Error::NoConvergence { residual, .. } => Some(residual),
                    _ => None,
                };
                steps.push(TrajectoryStep {
                    lambda,
                    iterate: None,
                    failure: Some(e.to_string()),
                    failure_residual,
                    distance_to_x: None,
                    error_vs_exact: None,
                });
            }
        }
    }
    Ok(Trajectory { x: Vector(x.to_vec()), in_domain: op.in_domain(x), steps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinNormConvergence {
    pub value: Covector,
    pub exact: Covector,
    /// `||yosida_value - A∘x||_q` per step.
    pub errors: Vec<f64>,
    pub final_error: f64,
}

/// `A∘x` as the limit of Yosida values, with the error curve against the
/// exact minimal-norm element.
pub fn min_norm_via_yosida(op: &Operator, x: &[f64], schedule: &Schedule) -> Result<MinNormConvergence> {
    op.space().check(x)?;
    if !op.in_domain(x) {
        return Err(Error::OutsideDomain);
    }
    let exact = op.min_norm(x)?;
    let traj = yosida_trajectory(op, x, schedule)?;
    if let Some(s) = traj.steps.iter().find(|s| s.failure.is_some()) {
        return Err(Error::NoConvergence { iterations: MAX_NEWTON, residual: s.failure_residual.unwrap_or(f64::INFINITY) });
    }
    let errors: Vec<f64> = traj.steps.iter().map(|s| s.error_vs_exact.unwrap_or(f64::INFINITY)).collect();
    let value = traj.last_iterate().expect("all steps succeeded").yosida_value.clone();
    let final_error = *errors.last().expect("schedule is nonempty");
    Ok(MinNormConvergence { value, exact, errors, final_error })
}
