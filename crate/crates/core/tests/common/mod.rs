#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            let f = rows[r][c].clone();
            for k in c..cols {
                let v = (&pivot * &rows[r][k] - &f * &rows[rank][k]) / &prev;
                rows[r][k] = v;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform nonzero integer in `[-bound, bound]`.
pub fn small_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.random_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Exponent vectors of degree `t` in `vars` variables.
pub fn monomials(vars: usize, t: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![t]];
    }
    let mut out = Vec::new();
    for a in (0..=t).rev() {
        for mut rest in monomials(vars - 1, t - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// `dim (I_X)_t` over Q for integer points with multiplicities: each
/// point contributes every derivative of order `mult - 1` of every
/// monomial, evaluated at the point.
pub fn hilbert_oracle(vars: usize, t: u32, points: &[(Vec<i64>, u32)]) -> u64 {
    let cols = monomials(vars, t);
    let mut rows = Vec::new();
    for (p, mult) in points {
        if *mult == 0 {
            continue;
        }
        for alpha in monomials(vars, mult - 1) {
            let row: Vec<BigInt> = cols
                .iter()
                .map(|beta| {
                    let mut v = BigInt::from(1);
                    for j in 0..vars {
                        if beta[j] < alpha[j] {
                            return BigInt::zero();
                        }
                        for k in 0..alpha[j] {
                            v *= beta[j] - k;
                        }
                        v *= BigInt::from(p[j]).pow(beta[j] - alpha[j]);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
    }
    cols.len() as u64 - bareiss_rank(rows) as u64
}

/// Affine cone of the Segre point `⊗ (a_i, b_i)` and its tangent
/// directions, as integer vectors of length `2^n`. Index bit `i` selects
/// `b_i`.
pub fn segre_tangent_rows(pairs: &[(i64, i64)]) -> Vec<Vec<BigInt>> {
    let n = pairs.len();
    let tensor = |factors: &[(i64, i64)]| -> Vec<BigInt> {
        (0..1usize << n)
            .map(|idx| {
                let mut v = BigInt::from(1);
                for (i, &(a, b)) in factors.iter().enumerate() {
                    v *= if idx >> i & 1 == 0 { a } else { b };
                }
                v
            })
            .collect()
    };
    let mut rows = Vec::new();
    for i in 0..n {
        for w in [(1, 0), (0, 1)] {
            let mut f = pairs.to_vec();
            f[i] = w;
            rows.push(tensor(&f));
        }
    }
    rows
}

/// `dim σ_s(V_n)` over Q at `s` random integer points.
pub fn exact_secant_dim(n: usize, s: usize, rng: &mut ChaCha8Rng) -> u64 {
    let mut rows = Vec::new();
    for _ in 0..s {
        let pairs: Vec<(i64, i64)> = (0..n).map(|_| (small_nonzero(rng, 40), small_nonzero(rng, 40))).collect();
        rows.extend(segre_tangent_rows(&pairs));
    }
    bareiss_rank(rows) as u64 - 1
}
