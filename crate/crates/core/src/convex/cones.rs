//! Conversions between inequality descriptions and generators.
//!
//! Everything here enumerates subsets of constraints, which is exact and
//! cheap in the small dimensions this crate targets.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{dot, lstsq, normalized, null_space, rank, scale};

/// Unit generators of the cone `{y : <a_i, y> <= 0 for all i}`.
///
/// The lineality space contributes both `b` and `-b` for each basis vector.
pub fn cone_from_inequalities(dim: usize, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows: Vec<Vec<f64>> = rows.iter().filter_map(|r| normalized(r)).collect();
    let a = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let lineality = if rows.is_empty() {
        (0..dim).map(|i| crate::linalg::unit(dim, i)).collect()
    } else {
        null_space(&a)
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    for b in &lineality {
        push_unique(&mut out, b.clone());
        push_unique(&mut out, scale(-1.0, b));
    }
    let pointed_dim = dim - lineality.len();
    if pointed_dim == 0 {
        return out;
    }
    let need = pointed_dim - 1;
    for subset in Subsets::new(rows.len(), need) {
        let mut eq: Vec<&Vec<f64>> = subset.iter().map(|&i| &rows[i]).collect();
        eq.extend(lineality.iter());
        let m = DMatrix::from_fn(eq.len(), dim, |i, j| eq[i][j]);
        let ns = if eq.is_empty() {
            (0..dim).map(|i| crate::linalg::unit(dim, i)).collect()
        } else {
            null_space(&m)
        };
        if ns.len() != 1 {
            continue;
        }
        for sign in [1.0, -1.0] {
            let r = scale(sign, &ns[0]);
            if rows.iter().all(|a| dot(a, &r) <= 1e-10) {
                push_unique(&mut out, r);
            }
        }
    }
    out
}

/// Vertices of `{y : <a_i, y> <= b_i}` intersected with the orthogonal
/// complement of its lineality space.
pub fn vertices_from_halfspaces(dim: usize, rows: &[(Vec<f64>, f64)]) -> Vec<Vec<f64>> {
    let a = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i].0[j]);
    let lineality = if rows.is_empty() {
        (0..dim).map(|i| crate::linalg::unit(dim, i)).collect()
    } else {
        null_space(&a)
    };
    let need = dim - lineality.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for subset in Subsets::new(rows.len(), need) {
        let k = subset.len() + lineality.len();
        let mut m = DMatrix::zeros(k, dim);
        let mut rhs = DVector::zeros(k);
        for (r, &i) in subset.iter().enumerate() {
            for j in 0..dim {
                m[(r, j)] = rows[i].0[j];
            }
            rhs[r] = rows[i].1;
        }
        for (r, l) in lineality.iter().enumerate() {
            for j in 0..dim {
                m[(subset.len() + r, j)] = l[j];
            }
        }
        if rank(&m) < dim {
            continue;
        }
        let y: Vec<f64> = lstsq(&m, &rhs).iter().copied().collect();
        if rows.iter().all(|(a, b)| dot(a, &y) <= b + 1e-9) {
            push_unique(&mut out, y);
        }
    }
    out
}

fn push_unique(list: &mut Vec<Vec<f64>>, v: Vec<f64>) {
    if !list.iter().any(|w| crate::linalg::dist2(w, &v) <= 1e-9) {
        list.push(v);
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
