//! Castelnuovo and lemzero splits on concrete schemes, and the random
//! schemes used to fuzz them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{normalize_projective, PrimeField, SampleRng, Seed};
use crate::fatpoints::{
    ideal_dim_at, project_cone_from_point, residual, trace, Hyperplane, LinearSpace, ProjPoint, SchemeSpec,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastelnuovoReport {
    pub degree: u32,
    /// `dim (I_X)_t`.
    pub direct: u64,
    /// `dim (I_{Res_Π X})_{t-1}`.
    pub residual: u64,
    /// `dim (I_{Tr_Π X, Π})_t`.
    pub trace: u64,
    pub bound: u64,
    pub holds: bool,
}

/// Both sides of `dim (I_X)_t ≤ dim (I_{Res})_{t-1} + dim (I_{Tr})_t` on the
/// given scheme.
pub fn castelnuovo_bound(spec: &SchemeSpec, pi: &Hyperplane, t: u32) -> Result<CastelnuovoReport> {
    if t == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let direct = ideal_dim_at(spec, t)?;
    let res = ideal_dim_at(&residual(spec, pi)?, t - 1)?;
    let tr = ideal_dim_at(&trace(spec, pi)?, t)?;
    let bound = res + tr;
    Ok(CastelnuovoReport { degree: t, direct, residual: res, trace: tr, bound, holds: direct <= bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemzeroReport {
    pub degree: u32,
    /// `dim (I_X)_n`.
    pub direct: u64,
    /// `dim (I_{W,Π})_{n-1}`.
    pub w_dim: u64,
    /// `dim (I_{T,Π})_{n-1}`.
    pub t_dim: u64,
    pub bound: u64,
    pub holds: bool,
    /// `dim (I_{Res_Π X})_{n-1} = dim (I_W)_{n-1}`, checked when the apex
    /// keeps multiplicity exactly `n - 1` in the residual.
    pub cone_equality: Option<bool>,
    /// `dim (I_{Tr_Π X, Π})_n = dim (I_T)_{n-1}`.
    pub fixed_component_equality: bool,
}

/// The two schemes of the lemzero split, both in `Π ≅ P^{n-1}`.
#[derive(Clone, Debug)]
pub struct LemzeroSplit {
    pub residual: SchemeSpec,
    pub trace: SchemeSpec,
    /// Projection of the residual from `Q_1`.
    pub w: SchemeSpec,
    /// `Res_{Π'}(Tr_Π X)` with `Π' = <Q_2, …, Q_n>`.
    pub t: SchemeSpec,
}

fn normalized(field: PrimeField, v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    normalize_projective(field, &mut v);
    v
}

/// Checks the lemzero preconditions and builds `W` and `T`. `qs` lists
/// `Q_1, …, Q_n`; `Q_1` is the apex.
pub fn lemzero_split(spec: &SchemeSpec, qs: &[Vec<u32>], pi: &Hyperplane) -> Result<LemzeroSplit> {
    let field = spec.field();
    let n = spec.ambient();
    if n < 2 {
        return Err(Error::Guard("lemzero needs n >= 2".into()));
    }
    if qs.len() != n {
        return Err(Error::Guard(format!("lemzero needs n = {n} points Q_j, got {}", qs.len())));
    }
    for (j, q) in qs.iter().enumerate() {
        let q = normalized(field, q);
        let mult = spec.points().iter().find(|fp| fp.point.coords() == q.as_slice()).map_or(0, |fp| fp.mult);
        if mult < n as u32 - 1 {
            return Err(Error::Guard(format!(
                "lemzero needs (n-1)Q_{} with n - 1 = {}, found multiplicity {mult}",
                j + 1,
                n - 1
            )));
        }
    }
    if pi.contains_point(field, &qs[0]) {
        return Err(Error::Guard("lemzero needs Q_1 off the hyperplane".into()));
    }
    if let Some(j) = qs[1..].iter().position(|q| !pi.contains_point(field, q)) {
        return Err(Error::Guard(format!("lemzero needs Q_{} on the hyperplane", j + 2)));
    }
    let residual_x = residual(spec, pi)?;
    let w = project_cone_from_point(&residual_x, &qs[0], pi)?;
    let trace_x = trace(spec, pi)?;
    let local: Vec<Vec<u32>> = qs[1..].iter().map(|q| pi.to_local(q)).collect();
    let pi_prime = Hyperplane::through(field, &local)
        .map_err(|e| Error::Guard(format!("Q_2, …, Q_n must span a hyperplane of Π: {e}")))?;
    let t = residual(&trace_x, &pi_prime)?;
    Ok(LemzeroSplit { residual: residual_x, trace: trace_x, w, t })
}

/// `dim (I_X)_n ≤ dim (I_{W,Π})_{n-1} + dim (I_{T,Π})_{n-1}` on the given
/// scheme, with the two equalities used to derive it.
pub fn lemzero_bound(spec: &SchemeSpec, qs: &[Vec<u32>], pi: &Hyperplane) -> Result<LemzeroReport> {
    let split = lemzero_split(spec, qs, pi)?;
    let n = spec.ambient() as u32;
    let field = spec.field();
    let direct = ideal_dim_at(spec, n)?;
    let w_dim = ideal_dim_at(&split.w, n - 1)?;
    let t_dim = ideal_dim_at(&split.t, n - 1)?;
    let apex = normalized(field, &qs[0]);
    let apex_mult = split.residual.points().iter().find(|fp| fp.point.coords() == apex.as_slice()).map(|fp| fp.mult);
    let cone_equality =
        if apex_mult == Some(n - 1) { Some(ideal_dim_at(&split.residual, n - 1)? == w_dim) } else { None };
    let fixed_component_equality = ideal_dim_at(&split.trace, n)? == t_dim;
    let bound = w_dim + t_dim;
    Ok(LemzeroReport {
        degree: n,
        direct,
        w_dim,
        t_dim,
        bound,
        holds: direct <= bound,
        cone_equality,
        fixed_component_equality,
    })
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; n + 1];
    v[i] = 1;
    v
}

/// A random scheme in `P^n` carrying `(n-1)e_1 + ⋯ + (n-1)e_n`, and a
/// random hyperplane `Π` through `e_2, …, e_n` (registered as `Pi`).
/// The rest is random: generic points of multiplicity 1 or 2, points on
/// `Π`, and possibly a line or a plane.
pub fn random_scheme(field: PrimeField, n: usize, rng: &mut SampleRng) -> Result<(SchemeSpec, Hyperplane)> {
    if n < 2 {
        return Err(Error::InvalidParameter("random schemes need n >= 2".into()));
    }
    let mut spec = SchemeSpec::new(field, n);
    for j in 1..=n {
        spec.add_coordinate_point(j, n as u32 - 1)?;
    }
    let through: Vec<Vec<u32>> = (2..=n).map(|j| unit(n, j)).collect();
    let pi = loop {
        let pi = Hyperplane::generic_through(field, n, &through, rng)?;
        if !pi.contains_point(field, &unit(n, 1)) {
            break pi;
        }
    };
    spec.register("Pi", pi.span(field))?;
    for _ in 0..rng.random_range(0..=n) {
        spec.add_generic_point(rng.random_range(1..=2), rng)?;
    }
    for _ in 0..rng.random_range(0..=2) {
        spec.add_point_on("Pi", rng.random_range(1..=2), rng)?;
    }
    for (dim, odds) in [(1usize, 2u32), (2, 3)] {
        if dim + 1 < n && rng.random_range(0..odds) == 0 {
            let span = (0..=dim).map(|_| ProjPoint::generic(field, n, rng).coords().to_vec()).collect();
            spec.add_space(LinearSpace::new(field, span, 1, Some(format!("L{dim}")))?)?;
        }
    }
    Ok((spec, pi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzOutcome {
    pub n: u32,
    pub seed: u64,
    pub description: String,
    /// Along the hyperplane through `e_2, …, e_n`.
    pub castelnuovo: CastelnuovoReport,
    /// Along an unrelated random hyperplane.
    pub castelnuovo_random: CastelnuovoReport,
    pub lemzero: LemzeroReport,
    pub passed: bool,
}

/// One fuzz instance in `P^n`, degree `n`.
pub fn fuzz_instance(n: usize, seed: Seed) -> Result<FuzzOutcome> {
    let field = PrimeField::default_field();
    let mut rng = seed.derive(&[n as u64]).rng();
    let (spec, pi) = random_scheme(field, n, &mut rng)?;
    let t = n as u32;
    let castelnuovo = castelnuovo_bound(&spec, &pi, t)?;
    let other = Hyperplane::generic_through(field, n, &[], &mut rng)?;
    let castelnuovo_random = castelnuovo_bound(&spec, &other, t)?;
    let qs: Vec<Vec<u32>> = (1..=n).map(|j| unit(n, j)).collect();
    let lemzero = lemzero_bound(&spec, &qs, &pi)?;
    let passed = castelnuovo.holds
        && castelnuovo_random.holds
        && lemzero.holds
        && lemzero.cone_equality != Some(false)
        && lemzero.fixed_component_equality;
    Ok(FuzzOutcome {
        n: n as u32,
        seed: seed.0,
        description: spec.describe(),
        castelnuovo,
        castelnuovo_random,
        lemzero,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    #[test]
    fn empty_trace_bound() {
        // Nothing on Π: the trace imposes nothing.
        let mut rng = Seed(2).rng();
        let mut spec = SchemeSpec::new(f(), 3);
        spec.add_generic_point(2, &mut rng).unwrap();
        let pi = Hyperplane::generic_through(f(), 3, &[], &mut rng).unwrap();
        let r = castelnuovo_bound(&spec, &pi, 3).unwrap();
        assert_eq!(r.trace, 10);
        assert_eq!(r.bound, r.residual + 10);
        assert!(r.holds);
    }

    #[test]
    fn coordinate_points_only() {
        for n in 3..=6usize {
            let mut spec = SchemeSpec::new(f(), n);
            for j in 1..=n {
                spec.add_coordinate_point(j, n as u32 - 1).unwrap();
            }
            let through: Vec<Vec<u32>> = (2..=n).map(|j| unit(n, j)).collect();
            let pi = Hyperplane::generic_through(f(), n, &through, &mut Seed(5).rng()).unwrap();
            let qs: Vec<Vec<u32>> = (1..=n).map(|j| unit(n, j)).collect();
            let r = lemzero_bound(&spec, &qs, &pi).unwrap();
            let half = 1u64 << (n - 1);
            assert_eq!((r.w_dim, r.t_dim, r.bound, r.direct), (half, half, 2 * half, 2 * half));
            assert_eq!(r.cone_equality, Some(true));
            assert!(r.fixed_component_equality);
        }
    }

    #[test]
    fn missing_multiplicity_is_reported() {
        let mut spec = SchemeSpec::new(f(), 3);
        spec.add_coordinate_point(1, 2).unwrap();
        spec.add_coordinate_point(2, 1).unwrap();
        spec.add_coordinate_point(3, 2).unwrap();
        let pi = Hyperplane::from_form(f(), vec![1, 1, 0, 0]).unwrap();
        let qs: Vec<Vec<u32>> = (1..=3).map(|j| unit(3, j)).collect();
        let err = lemzero_bound(&spec, &qs, &pi).unwrap_err();
        assert!(err.to_string().contains("Q_2"), "{err}");
    }

    #[test]
    fn fuzz_smoke() {
        for n in 3..=5 {
            for s in 0..10 {
                let o = fuzz_instance(n, Seed(s)).unwrap();
                assert!(o.passed, "{o:?}");
            }
        }
    }
}
