use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secant_core::exactla::{PrimeField, PrimeMatrix};
use std::time::Instant;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2048);
    let field = PrimeField::default_field();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows: Vec<Vec<u32>> =
        (0..n).map(|_| (0..n).map(|_| rng.random_range(0..field.modulus()) as u32).collect()).collect();
    let m = PrimeMatrix::from_rows(field, n, rows).unwrap();
    let t = Instant::now();
    let r = m.rank();
    println!("n={n} rank={r} elapsed={:?}", t.elapsed());
}
