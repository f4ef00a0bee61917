//! The Segre embedding of `(P^1)^n` into `P^(2^n - 1)` and secant
//! dimensions through Terracini's lemma.
//!
//! Basis vectors of the ambient space are indexed by subsets
//! `S ⊆ {1, …, n}` written as bitmasks, bit `i` standing for factor `i + 1`.
//! The coordinate of a factor point `((a_1:b_1), …, (a_n:b_n))` at `S` is
//! `∏_{i∈S} b_i · ∏_{i∉S} a_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{
    cell_seed, failure_bound, random_element, validate_sampling, EchelonBasis, PrimeField, SampleRng, Seed,
};

/// Largest `n` accepted anywhere a `2^n`-long vector is materialized.
pub const MAX_MATERIALIZED_FACTORS: u32 = 20;

/// The pair `(n, s)`: `s` points on the Segre image of `n` projective lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SecantProblem {
    pub n: u32,
    pub s: u32,
}

impl SecantProblem {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if s == 0 {
            return Err(Error::InvalidParameter("s must be at least 1".into()));
        }
        if n > 62 {
            return Err(Error::InvalidParameter(format!("n = {n} overflows 2^n - 1")));
        }
        (s as u64).checked_mul(n as u64 + 1).ok_or_else(|| Error::InvalidParameter("s(n+1) overflows".into()))?;
        Ok(Self { n, s })
    }

    /// `N = 2^n - 1`.
    pub fn ambient_dim(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn expected_dim(&self) -> u64 {
        expected_dim(self.n, self.s).expect("validated on construction")
    }
}

/// `min(2^n - 1, s(n+1) - 1)`.
pub fn expected_dim(n: u32, s: u32) -> Result<u64> {
    if n == 0 || s == 0 {
        return Err(Error::InvalidParameter("expected_dim needs n >= 1 and s >= 1".into()));
    }
    if n > 62 {
        return Err(Error::InvalidParameter(format!("n = {n} overflows 2^n - 1")));
    }
    let big_n = (1u64 << n) - 1;
    let count =
        (s as u64).checked_mul(n as u64 + 1).ok_or_else(|| Error::InvalidParameter("s(n+1) overflows".into()))?;
    Ok(big_n.min(count - 1))
}

/// A point of `(P^1)^n`, one homogeneous pair per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPoint {
    field: PrimeField,
    pairs: Vec<(u32, u32)>,
}

impl FactorPoint {
    pub fn new(field: PrimeField, pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("factor point needs at least one factor".into()));
        }
        let p = field.modulus();
        if let Some(i) = pairs.iter().position(|&(a, b)| a as u64 % p == 0 && b as u64 % p == 0) {
            return Err(Error::InvalidParameter(format!("factor {} is the zero pair", i + 1)));
        }
        let pairs = pairs.into_iter().map(|(a, b)| (field.reduce(a as u64), field.reduce(b as u64))).collect();
        Ok(Self { field, pairs })
    }

    /// Uniform random factor point; pairs are resampled until nonzero.
    pub fn random(field: PrimeField, n: usize, rng: &mut SampleRng) -> Self {
        let pairs = (0..n)
            .map(|_| loop {
                let a = random_element(field, rng);
                let b = random_element(field, rng);
                if a != 0 || b != 0 {
                    break (a, b);
                }
            })
            .collect();
        Self { field, pairs }
    }

    /// Random factor point inside the chart `a_1 ⋯ a_n ≠ 0`.
    pub fn random_in_chart(field: PrimeField, n: usize, rng: &mut SampleRng) -> Self {
        let pairs = (0..n)
            .map(|_| loop {
                let a = random_element(field, rng);
                let b = random_element(field, rng);
                if a != 0 {
                    break (a, b);
                }
            })
            .collect();
        Self { field, pairs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn in_chart(&self) -> bool {
        self.pairs.iter().all(|&(a, _)| a != 0)
    }

    /// Image under the chart map to `P^n`:
    /// `(1, b_1/a_1, …, b_n/a_n)`. `None` outside the chart.
    pub fn chart_image(&self) -> Option<Vec<u32>> {
        if !self.in_chart() {
            return None;
        }
        let f = self.field;
        let mut v = Vec::with_capacity(self.n() + 1);
        v.push(1);
        v.extend(self.pairs.iter().map(|&(a, b)| f.mul(b, f.inv(a))));
        Some(v)
    }

    /// Tangent direction used for factor `i`: `(0,1)` unless the factor is
    /// proportional to `(0:1)`, in which case `(1,0)`.
    pub fn direction(&self, i: usize) -> (u32, u32) {
        if self.pairs[i].0 == 0 {
            (1, 0)
        } else {
            (0, 1)
        }
    }
}

/// Segre image of `pt`: a vector of length `2^n` in bitmask order.
pub fn segre_coordinates(pt: &FactorPoint) -> Vec<u32> {
    kron_pairs(pt.field, pt.pairs.iter().copied())
}

fn kron_pairs(field: PrimeField, pairs: impl Iterator<Item = (u32, u32)>) -> Vec<u32> {
    let mut v = vec![1u32];
    for (a, b) in pairs {
        let len = v.len();
        let mut next = vec![0u32; 2 * len];
        for (mask, &x) in v.iter().enumerate() {
            next[mask] = field.mul(x, a);
            next[mask + len] = field.mul(x, b);
        }
        v = next;
    }
    v
}

/// The Segre image of `pt` followed by, for each factor `i`, the image
/// with factor `i` replaced by its tangent direction. The `n + 1` rows span
/// the affine cone over the tangent space at the image point.
pub fn tangent_rows(pt: &FactorPoint) -> Vec<Vec<u32>> {
    let n = pt.n();
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(segre_coordinates(pt));
    for i in 0..n {
        let d = pt.direction(i);
        let pairs = pt.pairs.iter().enumerate().map(|(j, &ab)| if j == i { d } else { ab });
        rows.push(kron_pairs(pt.field, pairs));
    }
    rows
}

/// Dimension of `σ_s(V_n)` as observed by sampling, with its evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub problem: SecantProblem,
    pub expected: u64,
    pub observed: u64,
    pub defect: u64,
    pub primes: Vec<u64>,
    pub trials: usize,
    pub seed: Seed,
    /// Observed dimension in each `(prime, trial)` cell, prime-major.
    pub cell_observed: Vec<u64>,
    /// Cells whose observation equals `observed`.
    pub cells_agreeing: usize,
    /// Degree bound `D` of the maximal minors in the sampled coordinates.
    pub degree_bound: u64,
    /// Per-cell failure probability bound `D / p_min`.
    pub failure_bound: f64,
}

impl DimensionReport {
    pub fn cells(&self) -> usize {
        self.cell_observed.len()
    }

    /// A positive defect is claimed only when every cell shows the same
    /// shortfall; otherwise the evidence is mixed.
    pub fn defect_claimed(&self) -> bool {
        self.defect > 0 && self.cells_agreeing == self.cells()
    }

    /// `dim (I_Z)_{(1,…,1)} = 2^n - 1 - observed`.
    pub fn multigraded_ideal_dim(&self) -> u64 {
        self.problem.ambient_dim() - self.observed
    }
}

/// Ranks of the stacked tangent matrix for every prefix `1..=s_max` of one
/// cell's point stream. Entry `s - 1` is the rank with `s` points.
pub fn prefix_ranks(n: u32, s_max: u32, field: PrimeField, rng: &mut SampleRng) -> Vec<usize> {
    let cols = 1usize << n;
    let mut basis = EchelonBasis::new(field, cols);
    let mut ranks = Vec::with_capacity(s_max as usize);
    for _ in 0..s_max {
        // Points are always drawn, so the stream stays aligned with
        // `sample_points` even after the basis fills up.
        let pt = FactorPoint::random(field, n as usize, rng);
        if !basis.is_full() {
            basis.push_block(&tangent_rows(&pt));
        }
        ranks.push(basis.rank());
    }
    ranks
}

/// The first `s` points of a cell's stream, as used by [`prefix_ranks`].
pub fn sample_points(n: u32, s: u32, field: PrimeField, rng: &mut SampleRng) -> Vec<FactorPoint> {
    (0..s).map(|_| FactorPoint::random(field, n as usize, rng)).collect()
}

fn check_materializable(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > MAX_MATERIALIZED_FACTORS {
        return Err(Error::Resource(format!(
            "n = {n} needs vectors of length 2^{n}; limit is n <= {MAX_MATERIALIZED_FACTORS}"
        )));
    }
    Ok(())
}

/// Reports for every `s` in `1..=s_max`, computed from one incremental
/// elimination per cell. The `s`-point sample is a prefix of the
/// `(s+1)`-point sample.
pub fn secant_profile(n: u32, s_max: u32, primes: &[u64], trials: usize, seed: Seed) -> Result<Vec<DimensionReport>> {
    check_materializable(n)?;
    let fields = validate_sampling(primes, trials)?;
    let mut per_cell: Vec<Vec<usize>> = Vec::with_capacity(fields.len() * trials);
    for field in &fields {
        for trial in 0..trials {
            let mut rng = cell_seed(seed, field.modulus(), trial).rng();
            per_cell.push(prefix_ranks(n, s_max, *field, &mut rng));
        }
    }
    (1..=s_max)
        .map(|s| {
            let problem = SecantProblem::new(n, s)?;
            let observed_cells: Vec<u64> = per_cell.iter().map(|r| r[s as usize - 1] as u64 - 1).collect();
            let observed = *observed_cells.iter().max().expect("at least one cell");
            let expected = problem.expected_dim();
            debug_assert!(observed <= expected);
            let rows = s as u64 * (n as u64 + 1);
            let degree_bound = rows.min(1u64 << n) * n as u64;
            Ok(DimensionReport {
                problem,
                expected,
                observed,
                defect: expected - observed,
                primes: primes.to_vec(),
                trials,
                seed,
                cells_agreeing: observed_cells.iter().filter(|&&o| o == observed).count(),
                cell_observed: observed_cells,
                degree_bound,
                failure_bound: failure_bound(degree_bound, &fields),
            })
        })
        .collect()
}

/// `dim σ_s(V_n)` by Terracini: rank of the stacked tangent rows at `s`
/// sampled points, minus one.
pub fn secant_dim_sample(problem: SecantProblem, primes: &[u64], trials: usize, seed: Seed) -> Result<DimensionReport> {
    let mut reports = secant_profile(problem.n, problem.s, primes, trials, seed)?;
    Ok(reports.pop().expect("s >= 1"))
}

/// `dim (I_Z)_{(1,…,1)}` for `s` generic double points on `(P^1)^n`:
/// `2^n` minus the maximal sampled rank. `s = 0` gives `2^n`.
pub fn multigraded_ideal_dim(n: u32, s: u32, primes: &[u64], trials: usize, seed: Seed) -> Result<u64> {
    check_materializable(n)?;
    if s == 0 {
        validate_sampling(primes, trials)?;
        return Ok(1u64 << n);
    }
    let report = secant_dim_sample(SecantProblem::new(n, s)?, primes, trials, seed)?;
    Ok(report.multigraded_ideal_dim())
}
