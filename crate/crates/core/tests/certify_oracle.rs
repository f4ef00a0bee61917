mod common;

use common::{exact_secant_dim, rng};
use secant_core::horace::{main_theorem_certify, CertifyOptions, Status};

// Root claims checked against `2^n - 1 - dim σ_s` computed over Q.
#[test]
fn certified_roots_match_rational_terracini() {
    let mut r = rng(31);
    for (n, s, frozen) in [(5u32, 5u64, 2i64), (6, 9, 1)] {
        let oracle = (1i64 << n) - 1 - exact_secant_dim(n as usize, s as usize, &mut r) as i64;
        assert_eq!(oracle, frozen);
        let cert = main_theorem_certify(n, s, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.root.claimed, oracle);
        assert_eq!(cert.root.computed, Some(oracle));
        assert_eq!(cert.status, Status::Verified);
    }
}

#[test]
fn certificate_json_is_reproducible() {
    let a = main_theorem_certify(5, 5, &CertifyOptions::default()).unwrap().to_json();
    let b = main_theorem_certify(5, 5, &CertifyOptions::default()).unwrap().to_json();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["root"]["rule"], "lemzero");
    assert_eq!(v["status"], "verified");
}
