use super::field::PrimeField;
use crate::error::{Error, Result};

const LOW63: u64 = (1 << 63) - 1;

/// Dense row-major matrix over a prime field. Entries are always reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PrimeMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from already reduced rows of equal length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        let p = field.modulus();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            if let Some(&bad) = r.iter().find(|&&x| x as u64 >= p) {
                return Err(Error::Shape(format!("row {i} holds unreduced entry {bad}")));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = self.field.reduce(v as u64);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend(row.iter().map(|&x| self.field.reduce(x as u64)));
        self.rows += 1;
    }

    /// Rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Rank over the field. The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.field, self.cols);
        for chunk in self.data.chunks(self.cols.max(1) * BLOCK_ROWS) {
            if self.cols == 0 || basis.is_full() {
                break;
            }
            let block: Vec<&[u32]> = chunk.chunks(self.cols).collect();
            basis.push_block(&block);
        }
        basis.rank()
    }
}

/// Convenience wrapper around [`PrimeMatrix::rank`].
pub fn rank(m: &PrimeMatrix) -> usize {
    m.rank()
}

/// Basis of `{x : M x = 0}` for the `rows.len() × cols` matrix `rows`.
pub fn nullspace(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = field.inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    let d = field.mul(f, a[r][j]);
                    a[i][j] = field.sub(a[i][j], d);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(a[i][f]);
            }
            v
        })
        .collect()
}

/// Greedy maximal independent subset of `vectors`, in input order.
pub fn independent_subset(field: PrimeField, vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let Some(cols) = vectors.first().map(Vec::len) else { return Vec::new() };
    let mut basis = EchelonBasis::new(field, cols);
    let mut out = Vec::new();
    for v in vectors {
        let before = basis.rank();
        if basis.push_block(&[v]) > before {
            out.push(v.clone());
        }
    }
    out
}

const BLOCK_ROWS: usize = 16;

/// Row-echelon basis grown incrementally, one block of rows at a time.
///
/// Every stored row is normalized to have a leading 1 at its pivot and zeros
/// before it. Rows pushed later are reduced against the stored rows in
/// ascending pivot order, which keeps the echelon property regardless of
/// insertion order. The rank after each push is the rank of the prefix of
/// rows seen so far, so nested samples get all prefix ranks from a single
/// elimination.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    /// Indices into `rows`, sorted by pivot column.
    order: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        Self { field, cols, rows: Vec::new(), pivots: Vec::new(), order: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Pivot columns, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces a block of rows against the basis and adds the independent
    /// part. Returns the new rank.
    pub fn push_block<R: AsRef<[u32]>>(&mut self, block: &[R]) -> usize {
        if block.is_empty() || self.is_full() {
            return self.rank();
        }
        let p = self.field.modulus();
        let fold = self.field.fold_constant();
        let mut work: Vec<Vec<u64>> = block
            .iter()
            .map(|r| {
                let r = r.as_ref();
                assert_eq!(r.len(), self.cols, "row length mismatch");
                r.iter().map(|&x| x as u64 % p).collect()
            })
            .collect();

        for &bi in &self.order {
            let piv = self.pivots[bi];
            let brow = &self.rows[bi];
            for w in work.iter_mut() {
                let c = w[piv] % p;
                w[piv] = 0;
                if c != 0 {
                    axpy_lazy(&mut w[piv + 1..], &brow[piv + 1..], p - c, fold);
                }
            }
        }

        let mut fresh: Vec<usize> = Vec::new();
        for mut w in work {
            for x in w.iter_mut() {
                *x %= p;
            }
            // Reduce against rows added from this block, in pivot order.
            fresh.sort_by_key(|&i| self.pivots[i]);
            for &bi in &fresh {
                let piv = self.pivots[bi];
                let c = w[piv] % p;
                w[piv] = 0;
                if c != 0 {
                    axpy_lazy(&mut w[piv + 1..], &self.rows[bi][piv + 1..], p - c, fold);
                }
            }
            let mut lead = None;
            for (j, x) in w.iter_mut().enumerate() {
                *x %= p;
                if lead.is_none() && *x != 0 {
                    lead = Some(j);
                }
            }
            let Some(piv) = lead else { continue };
            let inv = self.field.inv(w[piv] as u32) as u64;
            let row: Vec<u32> = w.iter().map(|&x| (x * inv % p) as u32).collect();
            let idx = self.rows.len();
            self.rows.push(row);
            self.pivots.push(piv);
            let pos = self.order.partition_point(|&i| self.pivots[i] < piv);
            self.order.insert(pos, idx);
            fresh.push(idx);
            if self.is_full() {
                break;
            }
        }
        self.rank()
    }

    /// True if `row` lies in the span of the basis.
    pub fn contains(&self, row: &[u32]) -> bool {
        let mut probe = self.clone();
        let before = probe.rank();
        probe.push_block(&[row]) == before
    }
}

/// `dst += c * src` with lazy reduction.
///
/// Invariant: every `dst` entry is below 2^63 on entry and on exit. With
/// `c, src < 2^31` the product is below 2^62, so the sum stays below
/// 2^63 + 2^62; a set top bit is folded back as `2^63 mod p`.
#[inline]
fn axpy_lazy(dst: &mut [u64], src: &[u32], c: u64, fold: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        // Wrapping ops never wrap here; they keep the loop free of
        // overflow checks in builds that enable them.
        let v = d.wrapping_add(c.wrapping_mul(s as u64));
        *d = (v & LOW63).wrapping_add((v >> 63).wrapping_mul(fold));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(PrimeMatrix::identity(f(), 3).rank(), 3);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(PrimeMatrix::zeros(f(), 4, 6).rank(), 0);
    }

    #[test]
    fn proportional_rows_mod_seven_field() {
        // 7 is below the accepted modulus range; the same rows are
        // proportional over every field.
        let m = PrimeMatrix::from_i64_rows(f(), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(PrimeMatrix::zeros(f(), 0, 5).rank(), 0);
        assert_eq!(PrimeMatrix::zeros(f(), 5, 0).rank(), 0);
    }

    #[test]
    fn lazy_kernel_matches_naive_reduction() {
        let field = f();
        let p = field.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let src: Vec<u32> = (0..64).map(|_| rng.random_range(0..p) as u32).collect();
        let mut lazy: Vec<u64> = (0..64).map(|_| rng.random_range(0..p)).collect();
        let mut exact: Vec<u32> = lazy.iter().map(|&x| x as u32).collect();
        for _ in 0..50 {
            let c = rng.random_range(0..p);
            axpy_lazy(&mut lazy, &src, c, field.fold_constant());
            for (e, &s) in exact.iter_mut().zip(&src) {
                *e = field.add(*e, field.mul(c as u32, s));
            }
        }
        for (l, e) in lazy.iter().zip(&exact) {
            assert!(*l < 1 << 63);
            assert_eq!((*l % p) as u32, *e);
        }
    }

    #[test]
    fn nullspace_of_a_line() {
        let field = f();
        let ker = nullspace(field, 3, &[vec![1, 2, 3]]);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let dot = (0..3).fold(0, |acc, j| field.add(acc, field.mul(v[j], [1, 2, 3][j])));
            assert_eq!(dot, 0);
        }
        assert_eq!(nullspace(field, 2, &PrimeMatrix::identity(field, 2).to_rows()).len(), 0);
        assert_eq!(nullspace(field, 4, &[]).len(), 4);
    }

    #[test]
    fn independent_subset_drops_dependent_vectors() {
        let field = f();
        let vs = vec![vec![1, 0, 0], vec![2, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert_eq!(independent_subset(field, &vs), vec![vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn prefix_ranks_match_full_ranks() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = field.modulus();
        // 9 x 6 matrix of rank 4: product of random 9x4 and 4x6 factors.
        let a: Vec<Vec<u32>> = (0..9).map(|_| (0..4).map(|_| rng.random_range(0..p) as u32).collect()).collect();
        let b: Vec<Vec<u32>> = (0..4).map(|_| (0..6).map(|_| rng.random_range(0..p) as u32).collect()).collect();
        let rows: Vec<Vec<u32>> = a
            .iter()
            .map(|ar| (0..6).map(|j| (0..4).fold(0, |acc, k| field.add(acc, field.mul(ar[k], b[k][j])))).collect())
            .collect();
        let mut basis = EchelonBasis::new(field, 6);
        for (i, r) in rows.iter().enumerate() {
            let got = basis.push_block(&[r]);
            let full = PrimeMatrix::from_rows(field, 6, rows[..=i].to_vec()).unwrap().rank();
            assert_eq!(got, full);
            assert!(got <= 4);
        }
        assert_eq!(basis.rank(), 4);
        assert!(basis.contains(&rows[0]));
    }
}
