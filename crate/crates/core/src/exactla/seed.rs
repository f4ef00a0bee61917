use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::PrimeField;

/// Generator behind every random choice in the crate.
pub type SampleRng = ChaCha8Rng;

/// Root of a deterministic, splittable random stream.
///
/// Child seeds are derived by mixing tags into the parent with SplitMix64,
/// so a given `(seed, tags)` pair always names the same ChaCha stream no
/// matter in which order or on which thread it is consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn derive(self, tags: &[u64]) -> Seed {
        let mut state = splitmix(self.0 ^ 0x5eca_47e1_0000_0000);
        for &t in tags {
            state = splitmix(state ^ splitmix(t.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        }
        Seed(state)
    }

    pub fn rng(self) -> SampleRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl Default for Seed {
    fn default() -> Self {
        Seed(20_090_101)
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform element of the field.
pub fn random_element(field: PrimeField, rng: &mut SampleRng) -> u32 {
    rng.random_range(0..field.modulus()) as u32
}

/// Uniform nonzero element of the field.
pub fn random_nonzero(field: PrimeField, rng: &mut SampleRng) -> u32 {
    rng.random_range(1..field.modulus()) as u32
}

/// A random point of `P^dim`: `dim + 1` coordinates, not all zero, with the
/// first nonzero coordinate scaled to 1.
pub fn random_projective_point(field: PrimeField, dim: usize, rng: &mut SampleRng) -> Vec<u32> {
    loop {
        let mut v: Vec<u32> = (0..=dim).map(|_| random_element(field, rng)).collect();
        if normalize_projective(field, &mut v) {
            return v;
        }
    }
}

/// Scales `v` so that its first nonzero entry is 1. Returns false for the
/// zero vector.
pub fn normalize_projective(field: PrimeField, v: &mut [u32]) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else {
        return false;
    };
    let inv = field.inv(lead);
    for x in v.iter_mut() {
        *x = field.mul(*x, inv);
    }
    true
}
