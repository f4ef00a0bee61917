mod common;

use common::{exact_secant_dim, rng};
use secant_core::exactla::{Seed, DEFAULT_PRIMES};
use secant_core::segre::{expected_dim, secant_profile};

fn e_star(n: u32) -> u32 {
    (1u32 << n).div_ceil(n + 1)
}

#[test]
fn modular_sampling_matches_rational_rank() {
    let mut r = rng(11);
    for n in 3..=6u32 {
        let s_max = e_star(n) + 1;
        let profile = secant_profile(n, s_max, &DEFAULT_PRIMES, 2, Seed(5)).unwrap();
        for (k, report) in profile.iter().enumerate() {
            let s = k + 1;
            let exact = (0..2).map(|_| exact_secant_dim(n as usize, s, &mut r)).max().unwrap();
            assert_eq!(report.observed, exact, "n = {n}, s = {s}");
        }
    }
}

#[test]
fn only_defect_is_four_three() {
    let mut r = rng(12);
    for n in 3..=6u32 {
        for s in 1..=e_star(n) + 1 {
            let exact = exact_secant_dim(n as usize, s as usize, &mut r);
            let expected = expected_dim(n, s).unwrap();
            if (n, s) == (4, 3) {
                assert_eq!((expected, exact), (14, 13));
            } else {
                assert_eq!(exact, expected, "n = {n}, s = {s}");
            }
        }
    }
}

#[test]
fn four_three_shortfall_persists_over_q() {
    let mut r = rng(13);
    for _ in 0..30 {
        assert_eq!(exact_secant_dim(4, 3, &mut r), 13);
    }
}
