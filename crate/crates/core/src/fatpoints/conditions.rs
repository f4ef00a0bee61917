use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::monomials::{binomial, monomial_count, monomials_capped, Exponent};
use super::scheme::{FatPoint, LinearSpace, SchemeSpec};
use crate::error::{Error, Result};
use crate::exactla::{EchelonBasis, PrimeField, PrimeMatrix, Sampling};

/// Largest degree accepted.
pub const MAX_DEGREE: u32 = 32;
/// Largest number of degree-`t` monomials accepted.
pub const MAX_MONOMIALS: u64 = 10_000_000;

/// How coordinate fat points are handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Assembly {
    /// A fat point `m e_j` kills exactly the monomials with `a_j > t - m`;
    /// those columns are removed instead of adding rows.
    #[default]
    MonomialFastPath,
    /// Every component contributes explicit rows.
    Full,
}

/// Conditions imposed by a scheme on forms of degree `t`.
#[derive(Clone, Debug)]
pub struct Conditions {
    pub degree: u32,
    /// `C(t + n, n)`.
    pub monomials: u64,
    /// Monomials surviving the coordinate fat points; the matrix columns.
    pub columns: Vec<Exponent>,
    pub matrix: PrimeMatrix,
    /// Row count before rank reduction, including rows of zeros that were
    /// not materialized and the coordinate conditions absorbed by the fast
    /// path.
    pub nominal_rows: u64,
}

impl Conditions {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `dim (I_X)_t`.
    pub fn ideal_dim(&self) -> u64 {
        (self.columns.len() - self.rank()) as u64
    }
}

fn check_degree(spec: &SchemeSpec, t: u32) -> Result<()> {
    if t > MAX_DEGREE {
        return Err(Error::Resource(format!("degree {t} exceeds the limit {MAX_DEGREE}")));
    }
    let count = monomial_count(spec.ambient(), t);
    if count > MAX_MONOMIALS {
        return Err(Error::Resource(format!("C(t+n, n) = {count} monomials exceed the limit {MAX_MONOMIALS}")));
    }
    if let Some(fp) = spec.points().iter().find(|fp| fp.mult > t + 1) {
        return Err(Error::Guard(format!("fat point of multiplicity {} exceeds t + 1 = {}", fp.mult, t + 1)));
    }
    if let Some(s) = spec.spaces().iter().find(|s| s.mult > t + 1) {
        return Err(Error::Guard(format!("linear component of multiplicity {} exceeds t + 1 = {}", s.mult, t + 1)));
    }
    Ok(())
}

/// Builds the conditions matrix of `spec` in degree `t`.
pub fn conditions_matrix(spec: &SchemeSpec, t: u32) -> Result<Conditions> {
    conditions_matrix_with(spec, t, Assembly::MonomialFastPath)
}

pub fn conditions_matrix_with(spec: &SchemeSpec, t: u32, assembly: Assembly) -> Result<Conditions> {
    check_degree(spec, t)?;
    let field = spec.field();
    let n = spec.ambient();
    let mut caps = vec![t; n + 1];
    let mut nominal_rows = 0u64;
    let mut row_points: Vec<&FatPoint> = Vec::new();
    let mut empty = false;
    for fp in spec.points() {
        match (assembly, fp.point.coordinate_index()) {
            (Assembly::MonomialFastPath, Some(j)) => {
                // m = t + 1 kills every monomial.
                match t.checked_sub(fp.mult) {
                    Some(c) => caps[j] = caps[j].min(c),
                    None => empty = true,
                }
                nominal_rows += binomial(n as u64 + fp.mult as u64 - 1, n as u64);
            }
            _ => row_points.push(fp),
        }
    }
    let columns = if empty { Vec::new() } else { monomials_capped(t, &caps) };
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for fp in row_points {
        nominal_rows += binomial(n as u64 + fp.mult as u64 - 1, n as u64);
        rows.extend(fat_point_rows(field, fp, &columns, t));
    }
    for s in spec.spaces() {
        nominal_rows += linear_space_row_count(n, s.dim(), s.mult, t);
        rows.extend(linear_space_rows(field, s, &columns, t)?);
    }
    let cols = columns.len();
    let matrix = PrimeMatrix::from_rows(field, cols, rows)?;
    Ok(Conditions { degree: t, monomials: monomial_count(n, t), columns, matrix, nominal_rows })
}

/// Hasse derivatives of order exactly `m - 1` at `P`, one row per
/// multi-index `α`, `|α| = m - 1`: the entry at `x^β` is
/// `∏ C(β_i, α_i) P_i^{β_i - α_i}`. In degree `t ≥ m - 1` these span all
/// conditions of order `< m` by Euler's relation.
fn fat_point_rows(field: PrimeField, fp: &FatPoint, columns: &[Exponent], t: u32) -> Vec<Vec<u32>> {
    let p = fp.point.coords();
    let vars = p.len();
    let mut pw = vec![vec![1u32; t as usize + 1]; vars];
    for (i, row) in pw.iter_mut().enumerate() {
        for e in 1..=t as usize {
            row[e] = field.mul(row[e - 1], p[i]);
        }
    }
    let binom = binomial_table(field, t);
    let alphas = monomials_capped(fp.mult - 1, &vec![fp.mult - 1; vars]);
    alphas
        .iter()
        .map(|alpha| {
            columns
                .iter()
                .map(|beta| {
                    let mut acc = 1u32;
                    for i in 0..vars {
                        let (b, a) = (beta[i] as usize, alpha[i] as usize);
                        if b < a {
                            return 0;
                        }
                        acc = field.mul(acc, field.mul(binom[b][a], pw[i][b - a]));
                        if acc == 0 {
                            return 0;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn binomial_table(field: PrimeField, t: u32) -> Vec<Vec<u32>> {
    let t = t as usize;
    let mut c = vec![vec![0u32; t + 1]; t + 1];
    for i in 0..=t {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = field.add(c[i - 1][j - 1], if j < i { c[i - 1][j] } else { 0 });
        }
    }
    c
}

/// Number of monomials `y^a` of degree `t` in `n + 1` variables whose
/// degree in the `n - k` normal variables is below `ℓ`.
pub fn linear_space_row_count(n: usize, k: usize, mult: u32, t: u32) -> u64 {
    let normal = (n - k) as u64;
    (0..mult.min(t + 1) as u64)
        .map(|d| {
            let in_normal = if normal == 0 { u64::from(d == 0) } else { binomial(d + normal - 1, normal - 1) };
            in_normal.saturating_mul(binomial(t as u64 - d + k as u64, k as u64))
        })
        .fold(0u64, u64::saturating_add)
}

/// Adapted frame: the spanning vectors of `Λ` followed by standard basis
/// vectors completing them to a basis. Returned as rows `L_i`, where
/// `x_i = L_i(y)`.
fn adapted_frame(field: PrimeField, space: &LinearSpace) -> Vec<Vec<u32>> {
    let n1 = space.ambient() + 1;
    let mut basis = EchelonBasis::new(field, n1);
    basis.push_block(space.span());
    let mut cols: Vec<Vec<u32>> = space.span().to_vec();
    for j in 0..n1 {
        if basis.is_full() {
            break;
        }
        let mut e = vec![0u32; n1];
        e[j] = 1;
        let before = basis.rank();
        if basis.push_block(&[&e]) > before {
            cols.push(e);
        }
    }
    (0..n1).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Rows for `ℓ Λ`: in the adapted frame `x = A y`, a form `F` lies in
/// `I_Λ^ℓ` iff `F(Ay)` has no monomial of normal degree `< ℓ`. Each such
/// monomial gives one row; monomials never reached are zero rows and are
/// skipped.
fn linear_space_rows(field: PrimeField, space: &LinearSpace, columns: &[Exponent], t: u32) -> Result<Vec<Vec<u32>>> {
    let frame = adapted_frame(field, space);
    let k = space.dim();
    let ell = space.mult;
    let vars = frame.len();
    // Linear forms restricted to the variables that can survive truncation.
    let forms: Vec<Vec<(usize, u32)>> = frame
        .iter()
        .map(|row| {
            row.iter().enumerate().filter(|&(j, &a)| a != 0 && (j <= k || ell > 1)).map(|(j, &a)| (j, a)).collect()
        })
        .collect();
    let normal_degree = |m: &Exponent| -> u32 { m[k + 1..].iter().map(|&e| e as u32).sum() };

    let col_index: HashMap<&Exponent, usize> = columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut row_index: HashMap<Exponent, usize> = HashMap::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let width = columns.len();

    // Depth-first over variables so that products of shared prefixes are
    // computed once.
    struct Walk<'a> {
        field: PrimeField,
        forms: &'a [Vec<(usize, u32)>],
        ell: u32,
        vars: usize,
        normal_degree: &'a dyn Fn(&Exponent) -> u32,
    }
    type Poly = HashMap<Exponent, u32>;
    fn times_form(w: &Walk, poly: &Poly, form: &[(usize, u32)]) -> Poly {
        let mut out: Poly = HashMap::with_capacity(poly.len() * form.len());
        for (m, &c) in poly {
            for &(j, a) in form {
                let mut m2 = m.clone();
                m2[j] += 1;
                if (w.normal_degree)(&m2) >= w.ell {
                    continue;
                }
                let e = out.entry(m2).or_insert(0);
                *e = w.field.add(*e, w.field.mul(c, a));
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        w: &Walk,
        i: usize,
        left: u32,
        poly: Poly,
        cur: &mut Exponent,
        emit: &mut dyn FnMut(&Exponent, &Poly),
        caps: &[u32],
    ) {
        if i + 1 == w.vars {
            if left > caps[i] {
                return;
            }
            let mut p = poly;
            for _ in 0..left {
                p = times_form(w, &p, &w.forms[i]);
            }
            cur[i] = left as u8;
            emit(cur, &p);
            cur[i] = 0;
            return;
        }
        // Exponents ascend here so each power reuses the previous one.
        let hi = left.min(caps[i]);
        let mut p = poly;
        for e in 0..=hi {
            if e > 0 {
                p = times_form(w, &p, &w.forms[i]);
            }
            cur[i] = e as u8;
            go(w, i + 1, left - e, p.clone(), cur, emit, caps);
        }
        cur[i] = 0;
    }

    // Caps from the surviving columns: the largest exponent seen per variable.
    let mut caps = vec![0u32; vars];
    for c in columns {
        for (cap, &e) in caps.iter_mut().zip(c) {
            *cap = (*cap).max(e as u32);
        }
    }
    let walk = Walk { field, forms: &forms, ell, vars, normal_degree: &normal_degree };
    let mut one: Poly = HashMap::new();
    one.insert(vec![0u8; vars], 1);
    let mut cur = vec![0u8; vars];
    let mut emit = |beta: &Exponent, poly: &Poly| {
        let Some(&col) = col_index.get(beta) else { return };
        for (m, &c) in poly {
            let r = *row_index.entry(m.clone()).or_insert_with(|| {
                rows.push(vec![0u32; width]);
                rows.len() - 1
            });
            rows[r][col] = c;
        }
    };
    go(&walk, 0, t, one, &mut cur, &mut emit, &caps);
    // Row order follows the order rows were first met; make it canonical.
    let mut keyed: Vec<(Exponent, usize)> = row_index.into_iter().collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, r)| std::mem::take(&mut rows[r])).collect())
}

/// `dim (I_X)_t` for one concrete scheme.
pub fn ideal_dim_at(spec: &SchemeSpec, t: u32) -> Result<u64> {
    Ok(conditions_matrix(spec, t)?.ideal_dim())
}

/// Value of a sampled Hilbert function together with its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDimReport {
    pub degree: u32,
    /// Minimum over all cells.
    pub value: u64,
    pub cells: Vec<u64>,
    pub columns: usize,
    pub rows: usize,
    pub rank: usize,
}

/// `dim (I_X)_t` for the scheme produced by `build` in every sampling cell;
/// the reported value is the minimum.
pub fn ideal_dim<F>(build: F, t: u32, sampling: &Sampling) -> Result<IdealDimReport>
where
    F: Fn(PrimeField, &mut crate::exactla::SampleRng) -> Result<SchemeSpec>,
{
    let mut best: Option<(u64, usize, usize, usize)> = None;
    let mut cells = Vec::new();
    for (field, _, mut rng) in sampling.cells()? {
        let spec = build(field, &mut rng)?;
        let c = conditions_matrix(&spec, t)?;
        let rank = c.rank();
        let v = (c.columns.len() - rank) as u64;
        cells.push(v);
        if best.is_none_or(|b| v < b.0) {
            best = Some((v, c.columns.len(), c.matrix.rows(), rank));
        }
    }
    let (value, columns, rows, rank) = best.expect("at least one cell");
    Ok(IdealDimReport { degree: t, value, cells, columns, rows, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Seed;
    use crate::fatpoints::scheme::{PointTag, ProjPoint};

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    fn e(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n + 1];
        v[i] = 1;
        v
    }

    #[test]
    fn double_point_in_the_plane() {
        let mut s = SchemeSpec::new(f(), 2);
        s.add_generic_point(2, &mut Seed(1).rng()).unwrap();
        let c = conditions_matrix(&s, 2).unwrap();
        assert_eq!(c.matrix.rows(), 3);
        assert_eq!(c.rank(), 3);
        assert_eq!(c.ideal_dim(), 3);
    }

    #[test]
    fn empty_scheme_has_all_forms() {
        let s = SchemeSpec::new(f(), 3);
        for t in 0..6 {
            assert_eq!(ideal_dim_at(&s, t).unwrap(), monomial_count(3, t));
        }
    }

    #[test]
    fn coordinate_points_give_two_to_the_m() {
        for m in 3..=7 {
            let mut s = SchemeSpec::new(f(), m);
            for i in 1..=m {
                s.add_coordinate_point(i, m as u32 - 1).unwrap();
            }
            assert_eq!(ideal_dim_at(&s, m as u32).unwrap(), 1 << m);
            let full = conditions_matrix_with(&s, m as u32, Assembly::Full).unwrap();
            assert_eq!(full.ideal_dim(), 1 << m);
        }
    }

    #[test]
    fn line_in_p3_imposes_three_conditions_on_quadrics() {
        let mut s = SchemeSpec::new(f(), 3);
        s.add_space(LinearSpace::new(f(), vec![e(3, 0), e(3, 1)], 1, None).unwrap()).unwrap();
        let c = conditions_matrix(&s, 2).unwrap();
        assert_eq!(c.rank(), 3);
        assert_eq!(c.ideal_dim(), 7);
        assert_eq!(c.nominal_rows, 3);
        // Same line in a skew frame.
        let mut s2 = SchemeSpec::new(f(), 3);
        s2.add_space(LinearSpace::new(f(), vec![vec![1, 2, 3, 4], vec![5, 6, 7, 9]], 1, None).unwrap()).unwrap();
        assert_eq!(ideal_dim_at(&s2, 2).unwrap(), 7);
    }

    #[test]
    fn fat_point_via_frame_matches_derivatives() {
        // A point included as I_P^m through the frame equals the fat point.
        let field = f();
        let mut rng = Seed(8).rng();
        for n in 2..=4 {
            for m in 1..=3u32 {
                let p = ProjPoint::generic(field, n, &mut rng);
                let mut a = SchemeSpec::new(field, n);
                a.add_point(p.clone(), m).unwrap();
                let space = LinearSpace::new(field, vec![p.coords().to_vec()], m, None).unwrap();
                let rows = linear_space_rows(field, &space, &monomials_capped(3, &vec![3; n + 1]), 3).unwrap();
                let m_rows = PrimeMatrix::from_rows(field, monomial_count(n, 3) as usize, rows).unwrap();
                assert_eq!(monomial_count(n, 3) - m_rows.rank() as u64, ideal_dim_at(&a, 3).unwrap(), "n={n} m={m}");
                assert_eq!(
                    conditions_matrix(&a, 3).unwrap().rank() as u64,
                    binomial(n as u64 + m as u64 - 1, n as u64)
                );
            }
        }
    }

    #[test]
    fn double_line_counts() {
        // 2·L in P^3, quartics: rows with normal degree 0 or 1.
        let field = f();
        let mut s = SchemeSpec::new(field, 3);
        s.add_space(LinearSpace::new(field, vec![e(3, 2), e(3, 3)], 2, None).unwrap()).unwrap();
        let c = conditions_matrix(&s, 4).unwrap();
        assert_eq!(c.nominal_rows, 5 + 2 * 4);
        assert_eq!(c.rank(), 13);
    }

    #[test]
    fn fast_path_equals_full_assembly_with_generic_points() {
        let field = f();
        let mut rng = Seed(21).rng();
        let mut s = SchemeSpec::new(field, 4);
        for i in 1..=4 {
            s.add_coordinate_point(i, 3).unwrap();
        }
        for _ in 0..3 {
            s.add_point(ProjPoint::generic(field, 4, &mut rng), 2).unwrap();
        }
        let fast = conditions_matrix(&s, 4).unwrap().ideal_dim();
        let full = conditions_matrix_with(&s, 4, Assembly::Full).unwrap().ideal_dim();
        assert_eq!((fast, full), (2, 2));
    }

    #[test]
    fn guards() {
        let mut s = SchemeSpec::new(f(), 2);
        s.add_point(ProjPoint::new(f(), vec![1, 1, 1], PointTag::Generic).unwrap(), 5).unwrap();
        assert!(matches!(conditions_matrix(&s, 3), Err(Error::Guard(_))));
        assert!(matches!(conditions_matrix(&s, 33), Err(Error::Resource(_))));
        let big = SchemeSpec::new(f(), 40);
        assert!(matches!(conditions_matrix(&big, 10), Err(Error::Resource(_))));
    }
}
