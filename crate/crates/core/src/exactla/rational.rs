use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank over the rationals by fraction-exact Gaussian elimination.
///
/// Only meant for small cross-checks (a few hundred entries per side).
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = BigRational::one() / m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &factor * y;
            }
        }
        rank += 1;
    }
    rank
}

/// [`rational_rank`] for integer input.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let q: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    rational_rank(&q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integer_ranks() {
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
        assert_eq!(integer_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(integer_rank(&[]), 0);
    }
}
