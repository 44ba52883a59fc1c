//! Minimal-norm points of `conv(P) + cone(R)` in an arbitrary lr norm.
//!
//! A Wolfe-type active-set method: keep a corral of affinely independent
//! generators, minimize the norm over their affine hull, and step back to
//! the relative boundary whenever the affine minimizer leaves the corral.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{columns, dot, lstsq, norm2, null_space, range_basis, sub};
use crate::space::{conjugate, duality, lp_norm};

#[derive(Debug, Clone, PartialEq)]
pub struct NearestPoint {
    pub point: Vec<f64>,
    /// Convex weights on the points.
    pub weights: Vec<f64>,
    /// Nonnegative multipliers on the rays.
    pub multipliers: Vec<f64>,
}

const MAX_ITER: usize = 2000;

/// Point of smallest lr norm in `conv(points) + cone(rays)`.
///
/// `points` must be nonempty; `rays` need not be normalized.
pub fn min_norm_point(points: &[Vec<f64>], rays: &[Vec<f64>], r: f64) -> NearestPoint {
    assert!(!points.is_empty(), "min_norm_point needs at least one point");
    let dim = points[0].len();
    let np = points.len();

    let start = (0..np)
        .min_by(|&a, &b| lp_norm(&points[a], r).total_cmp(&lp_norm(&points[b], r)))
        .expect("nonempty");
    // corral entries: index < np is a point, index >= np is ray (index - np)
    let mut corral: Vec<usize> = vec![start];
    let mut coef: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();

    let gen = |i: usize| -> &Vec<f64> {
        if i < np {
            &points[i]
        } else {
            &rays[i - np]
        }
    };

    let mut iter = 0;
    'major: while iter < MAX_ITER {
        iter += 1;
        let g = duality(&x, r);
        let gx = dot(&g, &x);
        let gnorm = norm2(&g);
        if gnorm == 0.0 {
            break;
        }
        // most violated optimality condition
        let mut best: Option<(usize, f64)> = None;
        for i in 0..np + rays.len() {
            if corral.contains(&i) {
                continue;
            }
            let gi = gen(i);
            let (viol, size) = if i < np {
                (dot(&g, gi) - gx, norm2(&sub(gi, &x)).max(1.0))
            } else {
                (dot(&g, gi), norm2(gi))
            };
            if size == 0.0 {
                continue;
            }
            let tol = 1e-13 * gnorm * size.max(norm2(&x));
            if viol < -tol {
                let score = viol / size;
                if best.is_none_or(|(_, s)| score < s) {
                    best = Some((i, score));
                }
            }
        }
        let Some((add, _)) = best else { break };
        corral.push(add);
        coef.push(0.0);

        let mut first_minor = true;
        loop {
            iter += 1;
            if iter > MAX_ITER {
                break 'major;
            }
            let (y, cy) = affine_minimizer(&corral, np, &gen, dim, r);
            let interior = corral
                .iter()
                .zip(&cy)
                .all(|(_, &c)| c > 1e-14);
            if interior {
                x = y;
                coef = cy;
                break;
            }
            // step from x toward y until the first coefficient hits zero
            let mut theta = 1.0f64;
            for (&c, &d) in coef.iter().zip(&cy) {
                if d <= 1e-14 && c - d > 0.0 {
                    theta = theta.min(c / (c - d));
                }
            }
            theta = theta.clamp(0.0, 1.0);
            for (c, d) in coef.iter_mut().zip(&cy) {
                *c += theta * (d - *c);
            }
            x = x.iter().zip(&y).map(|(a, b)| a + theta * (b - a)).collect();
            let last = corral.len() - 1;
            let mut keep_c = Vec::new();
            let mut keep_w = Vec::new();
            let mut dropped_new = false;
            for (k, (&i, &c)) in corral.iter().zip(&coef).enumerate() {
                if c > 1e-14 {
                    keep_c.push(i);
                    keep_w.push(c);
                } else if k == last {
                    dropped_new = true;
                }
            }
            if !keep_c.iter().any(|&i| i < np) {
                // numerical collapse of the point weights; keep the heaviest point
                let (i, _) = corral
                    .iter()
                    .zip(&coef)
                    .filter(|(&i, _)| i < np)
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(&i, &c)| (i, c))
                    .unwrap_or((start, 1.0));
                keep_c.insert(0, i);
                keep_w.insert(0, 1.0);
            }
            corral = keep_c;
            coef = keep_w;
            if first_minor && dropped_new {
                // the violator could not enter the corral: x is optimal to working precision
                break 'major;
            }
            first_minor = false;
            // keep the point weights summing to one
            let s: f64 = corral.iter().zip(&coef).filter(|(&i, _)| i < np).map(|(_, c)| c).sum();
            if s > 0.0 {
                for (&i, c) in corral.iter().zip(coef.iter_mut()) {
                    if i < np {
                        *c /= s;
                    }
                }
            }
            x = combine(&corral, &coef, &gen, dim);
        }
    }

    let mut weights = vec![0.0; np];
    let mut multipliers = vec![0.0; rays.len()];
    for (&i, &c) in corral.iter().zip(&coef) {
        if i < np {
            weights[i] = c;
        } else {
            multipliers[i - np] = c;
        }
    }
    NearestPoint { point: x, weights, multipliers }
}

fn combine<'a>(corral: &[usize], coef: &[f64], gen: &impl Fn(usize) -> &'a Vec<f64>, dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&i, &c) in corral.iter().zip(coef) {
        for (xi, gi) in x.iter_mut().zip(gen(i)) {
            *xi += c * gi;
        }
    }
    x
}

/// Minimizer of the lr norm over the affine hull of the corral points plus
/// the span of the corral rays, with its coefficients in the corral.
fn affine_minimizer<'a>(
    corral: &[usize],
    np: usize,
    gen: &impl Fn(usize) -> &'a Vec<f64>,
    dim: usize,
    r: f64,
) -> (Vec<f64>, Vec<f64>) {
    let pts: Vec<usize> = corral.iter().copied().filter(|&i| i < np).collect();
    let base = gen(pts[0]).clone();
    let mut dirs: Vec<Vec<f64>> = pts[1..].iter().map(|&i| sub(gen(i), &base)).collect();
    dirs.extend(corral.iter().filter(|&&i| i >= np).map(|&i| gen(i).clone()));
    let basis = range_basis(dim, &dirs);
    let y = min_norm_affine(&base, &basis, r);

    // coefficients relative to the base point: y - base = D c, base weight 1 - sum;
    // solving in differences keeps far-away generators well conditioned
    let a = columns(dim, &dirs);
    let c = lstsq(&a, &DVector::from_vec(sub(&y, &base)));
    let mut coef = vec![0.0; corral.len()];
    let (mut k, mut rest) = (0, 1.0);
    for (j, &i) in corral.iter().enumerate() {
        if i < np && i != pts[0] {
            coef[j] = c[k];
            rest -= c[k];
            k += 1;
        }
    }
    for (j, &i) in corral.iter().enumerate() {
        if i >= np {
            coef[j] = c[k];
            k += 1;
        }
    }
    let first = corral.iter().position(|&i| i == pts[0]).expect("base is in the corral");
    coef[first] = rest;
    (y, coef)
}

/// Point of smallest lr norm in `x0 + span(basis)`, `basis` orthonormal.
pub fn min_norm_affine(x0: &[f64], basis: &[Vec<f64>], r: f64) -> Vec<f64> {
    let dim = x0.len();
    if basis.is_empty() {
        return x0.to_vec();
    }
    // Euclidean projection of the origin onto the affine set
    let mut y = x0.to_vec();
    for b in basis {
        let c = dot(b, x0);
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi -= c * bi;
        }
    }
    if r == 2.0 || norm2(&y) == 0.0 {
        return y;
    }
    if r > 2.0 {
        return newton_power(&y, basis, r);
    }
    // r < 2: minimize the conjugate norm over the dual affine set
    // {u in L^perp : <u, x0> = 1}; then y = J_s(u) / ||u||_s^2.
    let s = conjugate(r);
    let z = y.clone();
    let zz = dot(&z, &z);
    let u0: Vec<f64> = z.iter().map(|v| v / zz).collect();
    let mut rows: Vec<Vec<f64>> = basis.to_vec();
    rows.push(z.clone());
    let a = columns(dim, &rows).transpose();
    let c_basis = null_space(&a);
    let u = if c_basis.is_empty() { u0 } else { newton_power(&u0, &c_basis, s) };
    let us = lp_norm(&u, s);
    let mut out: Vec<f64> = duality(&u, s).iter().map(|v| v / (us * us)).collect();
    // remove the drift off the affine set
    let diff = sub(&out, x0);
    let mut perp = diff.clone();
    for b in basis {
        let c = dot(b, &diff);
        for (pi, bi) in perp.iter_mut().zip(b) {
            *pi -= c * bi;
        }
    }
    for (o, p) in out.iter_mut().zip(&perp) {
        *o -= p;
    }
    out
}

/// Damped Newton for `min (1/r) sum |y0 + B c|^r`, `r >= 2`, started at `c = 0`.
fn newton_power(y0: &[f64], basis: &[Vec<f64>], r: f64) -> Vec<f64> {
    let k = basis.len();
    let dim = y0.len();
    let bmat = columns(dim, basis);
    let scale = y0.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    // work with y / scale to keep |y|^r in range
    let w0: Vec<f64> = y0.iter().map(|v| v / scale).collect();
    let point = |c: &DVector<f64>| -> Vec<f64> {
        let bc = &bmat * c;
        w0.iter().zip(bc.iter()).map(|(a, b)| a + b).collect()
    };
    let obj = |w: &[f64]| -> f64 { w.iter().map(|v| v.abs().powf(r)).sum::<f64>() / r };
    let mut c: DVector<f64> = DVector::zeros(k);
    let mut w = point(&c);
    let mut f = obj(&w);
    for _ in 0..500 {
        let grad_y: Vec<f64> = w.iter().map(|v| v.abs().powf(r - 1.0) * v.signum()).collect();
        let g = bmat.transpose() * DVector::from_vec(grad_y);
        let dvals: Vec<f64> = w.iter().map(|v| (r - 1.0) * v.abs().powf(r - 2.0)).collect();
        let mut h: DMatrix<f64> = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                h[(i, j)] = (0..dim).map(|t| bmat[(t, i)] * dvals[t] * bmat[(t, j)]).sum();
            }
        }
        let hn = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..k {
            h[(i, i)] += 1e-14 * hn.max(1e-300);
        }
        let step = match h.clone().cholesky() {
            Some(ch) => -ch.solve(&g),
            None => -lstsq(&h, &g),
        };
        if step.norm() <= 1e-15 * (1.0 + c.norm()) {
            break;
        }
        let slope = g.dot(&step);
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cn: DVector<f64> = &c + &step * alpha;
            let wn = point(&cn);
            let fnew = obj(&wn);
            if fnew <= f + 1e-4 * alpha * slope {
                c = cn;
                w = wn;
                f = fnew;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    w.iter().map(|v| v * scale).collect()
}

/// Euclidean projection of `z` onto `conv(points) + cone(rays)`.
pub fn project(z: &[f64], points: &[Vec<f64>], rays: &[Vec<f64>]) -> Vec<f64> {
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| sub(p, z)).collect();
    let np = min_norm_point(&shifted, rays, 2.0);
    np.point.iter().zip(z).map(|(a, b)| a + b).collect()
}
