//! Direct checks of the lemmas on fat points with coordinate supports.
//!
//! `Q_1, …, Q_m` are always the coordinate points `e_1, …, e_m` of `P^m`
//! and `e_0` is left free. Planes `H_i` pass through `Q_{2i}`, `Q_{2i+1}`
//! and a random point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{PrimeField, SampleRng, Sampling};
use crate::fatpoints::{ideal_dim, ideal_dim_at, JPair, LinearSpace, ProjPoint, SchemeSpec};

/// Largest `m` accepted by [`LemmaInstance`]; keeps `2^m` in an `i64`.
pub const MAX_LEMMA_M: u32 = 62;

/// Parameters `(m, x, y)` of the residue and trace schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaInstance {
    pub m: u32,
    pub x: u32,
    pub y: u32,
}

impl LemmaInstance {
    pub fn new(m: u32, x: u32, y: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::Guard(format!("m >= 3 violated: m = {m}")));
        }
        if m > MAX_LEMMA_M {
            return Err(Error::Guard(format!("m <= {MAX_LEMMA_M} violated: m = {m}")));
        }
        if x > (m - 1) / 2 {
            return Err(Error::Guard(format!("0 <= x <= floor((m-1)/2) = {} violated: x = {x}", (m - 1) / 2)));
        }
        if u64::from(y) > 1u64 << m {
            return Err(Error::Guard(format!("y <= 2^m violated: y = {y}")));
        }
        Ok(Self { m, x, y })
    }

    /// `2^m - 2mx - (m+1)y`.
    pub fn residue_formula(&self) -> i64 {
        let (m, x, y) = (self.m as i64, self.x as i64, self.y as i64);
        (1i64 << m) - 2 * m * x - (m + 1) * y
    }

    /// `2^m - 4x - (m+1)y`.
    pub fn trace_formula(&self) -> i64 {
        let (m, x, y) = (self.m as i64, self.x as i64, self.y as i64);
        (1i64 << m) - 4 * x - (m + 1) * y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    Residue,
    Trace,
}

fn residue_base(m: u32, x: u32, y: u32) -> Option<&'static str> {
    let bound = ((1i64 << m) - 2 * m as i64 * x as i64).div_euclid(m as i64 + 1);
    match (m, x, y) {
        (_, 0, 0) => Some("i"),
        (_, 1, 0) => Some("ii"),
        (4, 1, 1) => Some("v.1"),
        (5, 1, 3) => Some("vi"),
        _ if x % 2 == 0 && y % 2 == 0 && (y as i64) <= bound => Some("vii"),
        _ => None,
    }
}

fn trace_base(m: u32, x: u32, y: u32) -> Option<&'static str> {
    let bound = ((1i64 << m) - 4 * x as i64).div_euclid(m as i64 + 1);
    match (m, x, y) {
        (_, 1, 0) => Some("i"),
        (4, 1, 2) => Some("iv"),
        (5, 2, 4) => Some("v"),
        _ if m >= 4 && x % 2 == 0 && y % 2 == 0 && (y as i64) <= bound => Some("vi"),
        _ => None,
    }
}

/// The case of the lemma giving equality at `inst`, directly or through
/// the domination step `x ≤ x'`, `y ≤ y'`. `None` when no case applies.
pub fn lemma_case(kind: LemmaKind, inst: &LemmaInstance) -> Option<String> {
    let (base, via, extra): (fn(u32, u32, u32) -> Option<&'static str>, &str, [u32; 3]) = match kind {
        LemmaKind::Residue => (residue_base, "iii", [0, 1, 3]),
        LemmaKind::Trace => (trace_base, "ii", [0, 2, 4]),
    };
    let LemmaInstance { m, x, y } = *inst;
    if let Some(c) = base(m, x, y) {
        return Some(c.to_string());
    }
    let mut ys: Vec<u32> = vec![y, y + 1];
    ys.extend(extra.iter().copied().filter(|&v| v >= y));
    for xp in x..=(m - 1) / 2 {
        for &yp in &ys {
            if let Some(c) = base(m, xp, yp) {
                return Some(format!("{c} via {via} at (x', y') = ({xp}, {yp})"));
            }
        }
    }
    None
}

fn plane_through(field: PrimeField, m: usize, a: usize, b: usize, rng: &mut SampleRng) -> Vec<Vec<u32>> {
    let e = |i: usize| {
        let mut v = vec![0u32; m + 1];
        v[i] = 1;
        v
    };
    let (ea, eb) = (e(a), e(b));
    vec![ea, eb, ProjPoint::generic(field, m, rng).coords().to_vec()]
}

fn coordinate_base(field: PrimeField, m: usize) -> Result<SchemeSpec> {
    let mut spec = SchemeSpec::new(field, m);
    for j in 1..=m {
        spec.add_coordinate_point(j, m as u32 - 1)?;
    }
    Ok(spec)
}

/// `(m-1)Q_1 + ⋯ + (m-1)Q_m + J^(2)_{H_1} + ⋯ + J^(2)_{H_x} + 2R_1 + ⋯ + 2R_y`.
pub fn residue_scheme(field: PrimeField, inst: &LemmaInstance, rng: &mut SampleRng) -> Result<SchemeSpec> {
    let m = inst.m as usize;
    let mut spec = coordinate_base(field, m)?;
    for i in 1..=inst.x as usize {
        let name = format!("H{i}");
        spec.register(&name, plane_through(field, m, 2 * i, 2 * i + 1, rng))?;
        JPair::new(&name, 2)?.realize(&mut spec, rng)?;
    }
    for _ in 0..inst.y {
        spec.add_generic_point(2, rng)?;
    }
    Ok(spec)
}

/// `(m-1)Q_1 + ⋯ + (m-1)Q_m + H_1 + ⋯ + H_x + 2R_1 + ⋯ + 2R_y`.
pub fn trace_scheme(field: PrimeField, inst: &LemmaInstance, rng: &mut SampleRng) -> Result<SchemeSpec> {
    let m = inst.m as usize;
    let mut spec = coordinate_base(field, m)?;
    for i in 1..=inst.x as usize {
        let name = format!("H{i}");
        spec.register(&name, plane_through(field, m, 2 * i, 2 * i + 1, rng))?;
        spec.include_subspace(&name, 1)?;
    }
    for _ in 0..inst.y {
        spec.add_generic_point(2, rng)?;
    }
    Ok(spec)
}

/// The residue scheme at `(4, 1, 1)` plus, if `with_pair`, two simple
/// points on a plane `H` through `Q_1`, `Q_4`.
pub fn residue_v2_scheme(field: PrimeField, with_pair: bool, rng: &mut SampleRng) -> Result<SchemeSpec> {
    let inst = LemmaInstance::new(4, 1, 1)?;
    let mut spec = residue_scheme(field, &inst, rng)?;
    if with_pair {
        spec.register("H", plane_through(field, 4, 1, 4, rng))?;
        JPair::new("H", 1)?.realize(&mut spec, rng)?;
    }
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaKind,
    pub m: u32,
    pub x: u32,
    pub y: u32,
    /// `dim (I_X)_m`, the minimum over sampling cells.
    pub value: u64,
    pub cells: Vec<u64>,
    pub formula: i64,
    /// `value ≥ formula`.
    pub lower_bound: bool,
    /// Case giving equality, if any.
    pub case: Option<String>,
    /// `value == formula`, checked only when a case applies.
    pub equality: Option<bool>,
    pub passed: bool,
}

fn lemma_report(kind: LemmaKind, inst: LemmaInstance, sampling: &Sampling) -> Result<LemmaReport> {
    let r = match kind {
        LemmaKind::Residue => ideal_dim(|f, rng| residue_scheme(f, &inst, rng), inst.m, sampling)?,
        LemmaKind::Trace => ideal_dim(|f, rng| trace_scheme(f, &inst, rng), inst.m, sampling)?,
    };
    let formula = match kind {
        LemmaKind::Residue => inst.residue_formula(),
        LemmaKind::Trace => inst.trace_formula(),
    };
    let case = lemma_case(kind, &inst);
    let value = r.value;
    let lower_bound = value as i64 >= formula;
    let equality = case.as_ref().map(|_| value as i64 == formula);
    let passed = lower_bound && equality != Some(false);
    Ok(LemmaReport {
        lemma: kind,
        m: inst.m,
        x: inst.x,
        y: inst.y,
        value,
        cells: r.cells,
        formula,
        lower_bound,
        case,
        equality,
        passed,
    })
}

/// `dim (I_X)_m` for the residue scheme, checked against
/// `2^m - 2mx - (m+1)y`: equality where a case applies, `≥` always.
pub fn residue_lemma_check(inst: LemmaInstance, sampling: &Sampling) -> Result<LemmaReport> {
    lemma_report(LemmaKind::Residue, inst, sampling)
}

/// `dim (I_X)_m` for the trace scheme, checked against
/// `2^m - 4x - (m+1)y`. Needs `m ≥ 4`, except `(x, y) = (1, 0)` which is
/// also accepted at `m = 3`.
pub fn trace_lemma_check(inst: LemmaInstance, sampling: &Sampling) -> Result<LemmaReport> {
    if inst.m < 4 && (inst.x, inst.y) != (1, 0) {
        return Err(Error::Guard(format!("m >= 4 violated: m = {} (m = 3 only with x = 1, y = 0)", inst.m)));
    }
    lemma_report(LemmaKind::Trace, inst, sampling)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueV2Report {
    /// With the two simple points on `H`; expected 1.
    pub value: u64,
    pub cells: Vec<u64>,
    /// Without them; expected 3.
    pub without_pair: u64,
    pub passed: bool,
}

/// The `m = 4, x = 1, y = 1` residue scheme with two extra simple points on
/// a plane through `Q_1` and `Q_4`.
pub fn residue_lemma_v2_check(sampling: &Sampling) -> Result<ResidueV2Report> {
    let with = ideal_dim(|f, rng| residue_v2_scheme(f, true, rng), 4, sampling)?;
    let without = ideal_dim(|f, rng| residue_v2_scheme(f, false, rng), 4, sampling)?;
    let passed = with.value == 1 && without.value == 3;
    Ok(ResidueV2Report { value: with.value, cells: with.cells, without_pair: without.value, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionReport {
    pub m: u32,
    pub x: u32,
    /// `dim (I_Y)_m`.
    pub y_dim: u64,
    /// `dim (I_{X'})_m`, with a double point on each plane.
    pub x_prime_dim: u64,
    /// `dim (I_X)_m`, with two simple points on each plane.
    pub x_dim: u64,
    /// `dim (I_{X'})_m = dim (I_Y)_m - x(m+1)`.
    pub hypothesis: bool,
    /// `dim (I_X)_m = dim (I_Y)_m - 2x`.
    pub conclusion: bool,
    pub passed: bool,
    pub note: Option<String>,
}

/// `Y = (m-1)Q_1 + ⋯ + (m-1)Q_m` with `x` random planes registered as
/// `H1`, `H2`, ….
pub fn substitution_instance(
    field: PrimeField,
    m: u32,
    x: u32,
    rng: &mut SampleRng,
) -> Result<(SchemeSpec, Vec<String>)> {
    if m < 3 {
        return Err(Error::Guard(format!("m >= 3 violated: m = {m}")));
    }
    let mut spec = coordinate_base(field, m as usize)?;
    let mut planes = Vec::new();
    for i in 1..=x {
        let name = format!("H{i}");
        let span = (0..3).map(|_| ProjPoint::generic(field, m as usize, rng).coords().to_vec()).collect();
        spec.register(&name, span)?;
        planes.push(name);
    }
    Ok((spec, planes))
}

/// Compares `X' = Y + 2R_1 + ⋯ + 2R_x` (`R_i` on `H_i`) with
/// `X = Y + J^(1)_{H_1} + ⋯ + J^(1)_{H_x}` in degree `m`. The three
/// dimensions are minima over the sampling cells. If the double points
/// fail to impose independent conditions the check passes vacuously and
/// says so.
pub fn substitution_check<F>(build_y: F, planes: &[String], m: u32, sampling: &Sampling) -> Result<SubstitutionReport>
where
    F: Fn(PrimeField, &mut SampleRng) -> Result<SchemeSpec>,
{
    if m < 3 {
        return Err(Error::Guard(format!("m >= 3 violated: m = {m}")));
    }
    let mut dims: Option<(u64, u64, u64)> = None;
    for (field, _, mut rng) in sampling.cells()? {
        let y = build_y(field, &mut rng)?;
        if y.ambient() != m as usize {
            return Err(Error::Shape(format!("Y lives in P^{}, expected P^{m}", y.ambient())));
        }
        let mut xp = y.clone();
        let mut xs = y.clone();
        for h in planes {
            if y.subspace(h)?.len() != 3 {
                return Err(Error::InvalidParameter(format!("{h} is not a plane")));
            }
            xp.add_point_on(h, 2, &mut rng)?;
            JPair::new(h, 1)?.realize(&mut xs, &mut rng)?;
        }
        let cell = (ideal_dim_at(&y, m)?, ideal_dim_at(&xp, m)?, ideal_dim_at(&xs, m)?);
        dims = Some(match dims {
            None => cell,
            Some(d) => (d.0.min(cell.0), d.1.min(cell.1), d.2.min(cell.2)),
        });
    }
    let (y_dim, x_prime_dim, x_dim) = dims.expect("at least one cell");
    let x = planes.len() as i64;
    let hypothesis = x_prime_dim as i64 == y_dim as i64 - x * (m as i64 + 1);
    let conclusion = x_dim as i64 == y_dim as i64 - 2 * x;
    let note = (!hypothesis).then(|| "hypothesis not satisfied".to_string());
    Ok(SubstitutionReport {
        m,
        x: planes.len() as u32,
        y_dim,
        x_prime_dim,
        x_dim,
        hypothesis,
        conclusion,
        passed: !hypothesis || conclusion,
        note,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedComponentReport {
    pub i: u32,
    pub m: u32,
    pub n: u32,
    pub degree: u32,
    /// `dim (I_X)_{m+1}` for `X = mQ_1 + ⋯ + mQ_{i+1}`.
    pub without: u64,
    /// With `(m-i) H` added, `H = <Q_1, …, Q_{i+1}>`; only for `i < n`.
    pub with: Option<u64>,
    /// With `(m-i+1) H` added; shows the multiplicity is sharp.
    pub thicker: Option<u64>,
    pub passed: bool,
}

/// `i = n`: `(I_X)_{m+1} = 0`. `i < n`: `H` is a fixed component of
/// multiplicity `m - i`, so adding `(m-i)H` leaves the dimension unchanged.
pub fn fixed_component_check(i: u32, m: u32, n: u32) -> Result<FixedComponentReport> {
    if n < 2 {
        return Err(Error::Guard(format!("n >= 2 violated: n = {n}")));
    }
    if i < 1 || i > n {
        return Err(Error::Guard(format!("1 <= i <= n violated: i = {i}, n = {n}")));
    }
    if m <= i {
        return Err(Error::Guard(format!("m > i violated: m = {m}, i = {i}")));
    }
    let field = PrimeField::default_field();
    let nn = n as usize;
    let mut spec = SchemeSpec::new(field, nn);
    for j in 0..=i as usize {
        spec.add_coordinate_point(j, m)?;
    }
    let degree = m + 1;
    let without = ideal_dim_at(&spec, degree)?;
    if i == n {
        return Ok(FixedComponentReport { i, m, n, degree, without, with: None, thicker: None, passed: without == 0 });
    }
    let span: Vec<Vec<u32>> = (0..=i as usize)
        .map(|j| {
            let mut v = vec![0u32; nn + 1];
            v[j] = 1;
            v
        })
        .collect();
    let with_mult = |mult: u32| -> Result<u64> {
        let mut s = spec.clone();
        s.add_space(LinearSpace::new(field, span.clone(), mult, Some("H".into()))?)?;
        ideal_dim_at(&s, degree)
    };
    let with = with_mult(m - i)?;
    let thicker = if m - i < degree { Some(with_mult(m - i + 1)?) } else { None };
    Ok(FixedComponentReport { i, m, n, degree, without, with: Some(with), thicker, passed: with == without })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Seed;

    fn sampling() -> Sampling {
        Sampling::default().with_seed(Seed(11))
    }

    #[test]
    fn instance_guards() {
        assert!(LemmaInstance::new(2, 0, 0).unwrap_err().to_string().contains("m >= 3"));
        assert!(LemmaInstance::new(4, 2, 0).unwrap_err().to_string().contains("floor((m-1)/2)"));
        assert!(LemmaInstance::new(5, 2, 0).is_ok());
    }

    #[test]
    fn cases() {
        let c = |k, m, x, y| lemma_case(k, &LemmaInstance::new(m, x, y).unwrap());
        assert_eq!(c(LemmaKind::Residue, 4, 1, 1).as_deref(), Some("v.1"));
        assert_eq!(c(LemmaKind::Residue, 5, 1, 3).as_deref(), Some("vi"));
        assert_eq!(c(LemmaKind::Residue, 4, 0, 3), None);
        assert_eq!(c(LemmaKind::Residue, 7, 2, 11).as_deref(), Some("vii via iii at (x', y') = (2, 12)"));
        assert_eq!(c(LemmaKind::Trace, 4, 1, 2).as_deref(), Some("iv"));
        assert_eq!(c(LemmaKind::Trace, 5, 1, 4).as_deref(), Some("v via ii at (x', y') = (2, 4)"));
        assert_eq!(c(LemmaKind::Trace, 3, 0, 0).as_deref(), Some("i via ii at (x', y') = (1, 0)"));
    }

    #[test]
    fn residue_values() {
        for (m, x, y, v) in [(4, 1, 1, 3), (5, 1, 3, 4), (4, 1, 0, 8), (5, 1, 0, 22), (3, 0, 0, 8)] {
            let r = residue_lemma_check(LemmaInstance::new(m, x, y).unwrap(), &sampling()).unwrap();
            assert_eq!(r.value, v, "({m},{x},{y})");
            assert!(r.passed);
        }
    }

    #[test]
    fn residue_outside_cases_keeps_lower_bound() {
        // The defective instance: no case applies, value above the formula.
        let r = residue_lemma_check(LemmaInstance::new(4, 0, 3).unwrap(), &sampling()).unwrap();
        assert_eq!((r.value, r.formula), (2, 1));
        assert!(r.case.is_none() && r.lower_bound && r.passed);
    }

    #[test]
    fn trace_values() {
        for (m, x, y, v) in [(4, 1, 2, 2), (5, 2, 4, 0), (3, 1, 0, 4), (5, 1, 0, 28)] {
            let r = trace_lemma_check(LemmaInstance::new(m, x, y).unwrap(), &sampling()).unwrap();
            assert_eq!(r.value, v, "({m},{x},{y})");
            assert!(r.passed);
        }
        assert!(trace_lemma_check(LemmaInstance::new(3, 0, 1).unwrap(), &sampling()).is_err());
    }

    #[test]
    fn v2_instance() {
        let r = residue_lemma_v2_check(&sampling()).unwrap();
        assert_eq!((r.value, r.without_pair), (1, 3));
    }

    #[test]
    fn substitution_m3() {
        let r = substitution_check(
            |f, rng| Ok(substitution_instance(f, 3, 1, rng)?.0),
            &["H1".to_string()],
            3,
            &sampling(),
        )
        .unwrap();
        assert_eq!((r.y_dim, r.x_prime_dim, r.x_dim), (8, 4, 6));
        assert!(r.hypothesis && r.conclusion && r.passed);
    }

    #[test]
    fn fixed_components() {
        let r = fixed_component_check(2, 3, 2).unwrap();
        assert_eq!((r.without, r.passed), (0, true));
        let r = fixed_component_check(1, 2, 3).unwrap();
        assert_eq!((r.without, r.with), (12, Some(12)));
        assert!(r.thicker.unwrap() < 12);
        let r = fixed_component_check(3, 4, 3).unwrap();
        assert_eq!((r.without, r.passed), (0, true));
        assert!(fixed_component_check(2, 2, 3).is_err());
    }
}
