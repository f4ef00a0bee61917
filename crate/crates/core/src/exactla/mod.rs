//! Exact dense linear algebra over word-sized prime fields, seeded sampling
//! and multi-prime rank aggregation.

mod field;
mod matrix;
mod multiprime;
mod rational;
mod seed;

pub use field::{is_prime, PrimeField, DEFAULT_PRIME, DEFAULT_PRIMES, MIN_PRIME};
pub use matrix::{independent_subset, nullspace, rank, EchelonBasis, PrimeMatrix};
pub(crate) use multiprime::failure_bound;
pub use multiprime::{cell_seed, multi_prime_rank, validate_sampling, CellRank, MultiPrimeRank, Sampling};
pub use rational::{integer_rank, rational_rank};
pub use seed::{normalize_projective, random_element, random_nonzero, random_projective_point, SampleRng, Seed};
