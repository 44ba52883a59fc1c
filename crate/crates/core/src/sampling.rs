//! Deterministic point sets: Halton sequences, sphere nets and fixed
//! irrational nudge directions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{norm2, scale};

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % b) as f64;
        index /= b;
        f *= inv;
    }
    r
}

/// Halton point in `[0,1)^dim`; index 0 is skipped so no coordinate is exactly zero.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim).map(|i| radical_inverse(index + 1, PRIMES[i % PRIMES.len()])).collect()
}

/// Low-discrepancy points in the closed unit Euclidean ball, by rejection
/// from the Halton sequence on `[-1,1]^dim`.
pub fn ball_points(dim: usize, count: usize, offset: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut i = offset;
    while out.len() < count {
        let p: Vec<f64> = halton(i, dim).iter().map(|h| 2.0 * h - 1.0).collect();
        if norm2(&p) <= 1.0 {
            out.push(p);
        }
        i += 1;
    }
    out
}

/// A net of unit directions.
///
/// One dimension gives `{+1, -1}`; two dimensions an evenly spaced circle;
/// three a Fibonacci sphere; higher dimensions seeded Gaussian samples.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let a = golden * k as f64;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
        _ => gaussian_directions(dim, count, seed),
    }
}

pub fn gaussian_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = norm2(&g);
        if n > 1e-6 {
            out.push(scale(1.0 / n, &g));
        }
    }
    out
}

/// Jitter offsets for a probe: index 0 is the zero offset, the rest are
/// Halton points in the unit ball.
pub fn jitters(dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; dim]];
    if count > 1 {
        out.extend(ball_points(dim, count - 1, 0));
    }
    out
}

/// The `k`-th fixed nudge direction, with entries `frac(m * sqrt 2) - 1/2`
/// for consecutive `m`. Signs are flipped according to the bits of `signs`.
pub fn nudge_direction(dim: usize, k: usize, signs: u32) -> Vec<f64> {
    let s2 = std::f64::consts::SQRT_2;
    (0..dim)
        .map(|i| {
            let m = (k * dim + i + 1) as f64;
            let v = (m * s2).fract() - 0.5;
            if signs >> (i % 32) & 1 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// FNV-1a hash of the bit patterns of a coordinate array.
pub fn hash_coords(x: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for v in x {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}
