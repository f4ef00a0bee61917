use serde::{Deserialize, Serialize};

use super::field::{PrimeField, DEFAULT_PRIMES};
use super::matrix::PrimeMatrix;
use super::seed::{SampleRng, Seed};
use crate::error::Result;

/// Rank observed in one `(prime, trial)` cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRank {
    pub prime: u64,
    pub trial: usize,
    pub rank: usize,
}

/// Outcome of sampling a parametrized matrix over several primes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiPrimeRank {
    /// Maximum over all cells; a lower bound for the generic rank in
    /// characteristic zero.
    pub rank: usize,
    pub cells: Vec<CellRank>,
    /// Bound `D` on the total degree of the maximal minors in the random
    /// parameters.
    pub degree_bound: u64,
    /// `D / p_min`: per-cell probability that a generic-rank sample drops.
    pub failure_bound: f64,
}

impl MultiPrimeRank {
    /// Number of cells that attained the maximum.
    pub fn cells_at_max(&self) -> usize {
        self.cells.iter().filter(|c| c.rank == self.rank).count()
    }
}

/// Seed for cell `(prime, trial)`. Keyed by the prime's value, not its
/// position, so enlarging the prime list never changes existing cells.
pub fn cell_seed(seed: Seed, prime: u64, trial: usize) -> Seed {
    seed.derive(&[prime, trial as u64])
}

/// Samples `build` once per `(prime, trial)` cell and returns the maximal
/// rank together with the per-cell ranks.
///
/// `entry_degree` bounds the total degree of each matrix entry in the
/// random parameters; the reported failure bound is
/// `min(rows, cols) * entry_degree / p`.
pub fn multi_prime_rank<F>(
    build: F,
    entry_degree: u64,
    primes: &[u64],
    trials: usize,
    seed: Seed,
) -> Result<MultiPrimeRank>
where
    F: Fn(PrimeField, &mut SampleRng) -> Result<PrimeMatrix>,
{
    let fields = validate_sampling(primes, trials)?;
    let mut cells = Vec::with_capacity(fields.len() * trials);
    let mut minor_size = 0usize;
    for field in &fields {
        for trial in 0..trials {
            let mut rng = cell_seed(seed, field.modulus(), trial).rng();
            let m = build(*field, &mut rng)?;
            minor_size = minor_size.max(m.rows().min(m.cols()));
            cells.push(CellRank { prime: field.modulus(), trial, rank: m.rank() });
        }
    }
    let rank = cells.iter().map(|c| c.rank).max().unwrap_or(0);
    let degree_bound = minor_size as u64 * entry_degree;
    Ok(MultiPrimeRank { rank, cells, degree_bound, failure_bound: failure_bound(degree_bound, &fields) })
}

/// Checks a prime list and trial count, returning the fields.
pub fn validate_sampling(primes: &[u64], trials: usize) -> Result<Vec<PrimeField>> {
    if primes.is_empty() {
        return Err(crate::Error::InvalidParameter("prime list is empty".into()));
    }
    if trials == 0 {
        return Err(crate::Error::InvalidParameter("trials must be at least 1".into()));
    }
    primes.iter().map(|&p| PrimeField::new(p)).collect()
}

/// Primes, trial count and root seed of a sampled computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub primes: Vec<u64>,
    pub trials: usize,
    pub seed: Seed,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { primes: DEFAULT_PRIMES.to_vec(), trials: 3, seed: Seed::default() }
    }
}

impl Sampling {
    pub fn new(primes: Vec<u64>, trials: usize, seed: Seed) -> Self {
        Self { primes, trials, seed }
    }

    pub fn with_seed(&self, seed: Seed) -> Self {
        Self { seed, ..self.clone() }
    }

    /// One `(field, trial, rng)` triple per cell, prime-major. The stream
    /// for a cell matches [`cell_seed`].
    pub fn cells(&self) -> Result<Vec<(PrimeField, usize, SampleRng)>> {
        let fields = validate_sampling(&self.primes, self.trials)?;
        let mut out = Vec::with_capacity(fields.len() * self.trials);
        for f in fields {
            for trial in 0..self.trials {
                out.push((f, trial, cell_seed(self.seed, f.modulus(), trial).rng()));
            }
        }
        Ok(out)
    }
}

pub(crate) fn failure_bound(degree_bound: u64, fields: &[PrimeField]) -> f64 {
    let p_min = fields.iter().map(|f| f.modulus()).min().unwrap_or(1);
    (degree_bound as f64 / p_min as f64).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::DEFAULT_PRIMES;
    use crate::Error;

    #[test]
    fn constant_identity_generator() {
        let out = multi_prime_rank(|f, _| Ok(PrimeMatrix::identity(f, 2)), 0, &DEFAULT_PRIMES, 4, Seed(1)).unwrap();
        assert_eq!(out.rank, 2);
        assert_eq!(out.cells.len(), 12);
        assert_eq!(out.cells_at_max(), 12);
    }

    #[test]
    fn rejects_small_primes_and_empty_inputs() {
        let gen = |f, _: &mut SampleRng| Ok(PrimeMatrix::identity(f, 1));
        assert!(matches!(multi_prime_rank(gen, 0, &[101], 1, Seed(0)), Err(Error::PrimeTooSmall { p: 101 })));
        assert!(multi_prime_rank(gen, 0, &[], 1, Seed(0)).is_err());
        assert!(multi_prime_rank(gen, 0, &DEFAULT_PRIMES, 0, Seed(0)).is_err());
    }
}
