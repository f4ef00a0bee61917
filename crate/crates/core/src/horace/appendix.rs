//! Exact re-check of the arithmetic behind the main theorem: the lemma
//! hypotheses for `m = n - 1, x = q`, the surplus identities and the
//! polynomial bounds used along the way.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::profile::{big, even_up, floor_div, is_even, pow2, Branch, ParameterProfile};
use crate::error::{Error, Result};

pub const APPENDIX_MAX_N: u32 = 4096;

/// One failed inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u32,
    pub check: String,
    pub detail: String,
}

/// Per-`n` summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub n: u32,
    pub branch: Option<Branch>,
    pub checks: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub n_min: u32,
    pub n_max: u32,
    pub checks: usize,
    pub rows: Vec<AppendixRow>,
    pub first_violation: Option<Violation>,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

struct Checker {
    n: u32,
    count: usize,
    failures: Vec<Violation>,
}

impl Checker {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(Violation { n: self.n, check: name.to_string(), detail: detail() });
        }
    }

    fn nonneg(&mut self, name: &str, v: &BigInt) {
        self.check(name, !v.is_negative(), || format!("value {v} is negative"));
    }

    fn nonpos(&mut self, name: &str, v: &BigInt) {
        self.check(name, !v.is_positive(), || format!("value {v} is positive"));
    }

    fn le(&mut self, name: &str, a: &BigInt, b: &BigInt) {
        self.check(name, a <= b, || format!("{a} > {b}"));
    }

    fn eq(&mut self, name: &str, a: &BigInt, b: &BigInt) {
        self.check(name, a == b, || format!("{a} != {b}"));
    }
}

/// Checks every `n` in `n_min..=n_max`. Values of `n` where neither `e`
/// nor `e*` is odd only get the profile identities.
pub fn appendix_check(n_min: u32, n_max: u32) -> Result<AppendixReport> {
    if n_min < 5 || n_min > n_max || n_max > APPENDIX_MAX_N {
        return Err(Error::Guard(format!("need 5 <= n_min <= n_max <= {APPENDIX_MAX_N}, got {n_min}..{n_max}")));
    }
    let mut rows = Vec::new();
    let mut first_violation = None;
    let mut checks = 0;
    for n in n_min..=n_max {
        let (row, mut failures) = check_n(n)?;
        checks += row.checks;
        if first_violation.is_none() && !failures.is_empty() {
            first_violation = Some(failures.remove(0));
        }
        rows.push(row);
    }
    Ok(AppendixReport { n_min, n_max, checks, rows, first_violation })
}

fn check_n(n: u32) -> Result<(AppendixRow, Vec<Violation>)> {
    let p = ParameterProfile::new(n)?;
    let mut c = Checker { n, count: 0, failures: Vec::new() };
    c.check("profile identities", p.identities_hold(), || "n = 4q + r or 2^n = (n+1)h + k fails".into());
    let branch = p.odd_branch();
    if let Some(b) = branch {
        c.check("k >= 1 when s is odd", p.k.is_positive(), || format!("k = {}", p.k));
        feasibility(&mut c, &p, b);
        residue_hypotheses(&mut c, &p, b);
        trace_hypotheses(&mut c, &p, b);
        surplus(&mut c, &p, b);
    }
    proof_bounds(&mut c, n - 1);
    let row = AppendixRow { n, branch, checks: c.count, passed: c.failures.is_empty() };
    Ok((row, c.failures))
}

struct Setup {
    m: BigInt,
    x: BigInt,
    /// `(s-1)/2`.
    u: BigInt,
    two_m: BigInt,
    half_floor: BigInt,
}

fn setup(p: &ParameterProfile, b: Branch) -> Setup {
    let m = big(p.n - 1);
    Setup {
        half_floor: floor_div(&(&m - 1), &big(2)),
        two_m: pow2(p.n - 1),
        x: big(p.q),
        u: p.half_of(b).expect("odd branch").clone(),
        m,
    }
}

fn feasibility(c: &mut Checker, p: &ParameterProfile, b: Branch) {
    let st = setup(p, b);
    let s = p.s_of(b);
    c.le("specialization: 2q + 1 <= n", &big(2 * p.q + 1), &big(p.n));
    c.le("specialization: 2q + (s-1)/2 <= s", &(big(2 * p.q) + &st.u), s);
}

/// The `x' ≤ ⌊(m-1)/2⌋` and `y' ≤ ⌊(2^m - a x')/(m+1)⌋` pair, with `x'`,
/// `y'` rounded up to even, plus the `x + 1`, `y + 1` forms the argument
/// actually proves.
fn even_domination(c: &mut Checker, tag: &str, st: &Setup, y: &BigInt, a: &BigInt) {
    let (m, x) = (&st.m, &st.x);
    let xp = even_up(x);
    let yp = even_up(y);
    c.le(&format!("{tag}: x' <= floor((m-1)/2)"), &xp, &st.half_floor);
    let bound = floor_div(&(&st.two_m - a * &xp), &(m + 1));
    c.le(&format!("{tag}: y' <= floor((2^m - a x')/(m+1))"), &yp, &bound);
    c.le(&format!("{tag}: x + 1 <= floor((m-1)/2)"), &(x + 1), &st.half_floor);
    let bound1 = floor_div(&(&st.two_m - a * (x + 1)), &(m + 1));
    c.le(&format!("{tag}: y + 1 <= floor((2^m - a(x+1))/(m+1))"), &(y + 1), &bound1);
}

fn residue_hypotheses(c: &mut Checker, p: &ParameterProfile, b: Branch) {
    let st = setup(p, b);
    let n = p.n;
    let nb = big(n);
    let y = &st.u + 1 - big(2 * p.q);
    c.nonneg("residue: y >= 0", &y);
    let two_m_coef = big(2) * &st.m;
    match (b, n) {
        (Branch::Floor, 5) => {
            c.check("residue n=5: (m,x,y) = (4,1,1)", st.m == big(4) && st.x == big(1) && y == big(1), || {
                format!("(m,x,y) = ({},{},{y})", st.m, st.x)
            })
        }
        (Branch::Floor, 6) => {
            c.check("residue n=6: (m,x,y) = (5,1,3)", st.m == big(5) && st.x == big(1) && y == big(3), || {
                format!("(m,x,y) = ({},{},{y})", st.m, st.x)
            })
        }
        (Branch::Floor, 9) => {
            let bound = floor_div(&(&st.two_m - &two_m_coef * &st.x), &(&st.m + 1));
            c.eq("residue n=9: y = 22", &y, &big(22));
            c.eq("residue n=9: bound = 24", &bound, &big(24));
            c.check("residue n=9: x, y even", is_even(&st.x) && is_even(&y), || format!("x = {}, y = {y}", st.x));
            c.le("residue n=9: x <= floor((m-1)/2)", &st.x, &st.half_floor);
            c.le("residue n=9: y <= bound", &y, &bound);
        }
        (Branch::Ceil, 8) => {
            let bound = floor_div(&(&st.two_m - &two_m_coef * &st.x), &(&st.m + 1));
            let yp = even_up(&y);
            c.eq("residue n=8: y = 11", &y, &big(11));
            c.eq("residue n=8: y' = 12", &yp, &big(12));
            c.eq("residue n=8: bound = 12", &bound, &big(12));
            c.le("residue n=8: x <= floor((m-1)/2)", &st.x, &st.half_floor);
            c.le("residue n=8: y' <= bound", &yp, &bound);
        }
        (_, n) if n >= 10 => {
            even_domination(c, "residue", &st, &y, &two_m_coef);
            c.check(
                "residue: x + 1 <= floor((m-1)/2) iff n >= 8 - r",
                (st.x.clone() + 1 <= st.half_floor) == (n + p.r >= 8),
                || "equivalence fails".into(),
            );
            let q = big(p.q);
            let r = big(p.r);
            let (s, t) = (p.s_of(b), &st.u);
            // y + 1 ≤ ⌊…⌋ ⟺ 2^{n-1} + 2q + 2 - 4n - tn ≥ 0.
            let lhs = pow2(n - 1) + big(2) * &q + 2 - big(4) * &nb - t * &nb;
            c.nonneg("residue: 2^{n-1} + 2q + 2 - 4n - tn >= 0", &lhs);
            let doubled = pow2(n) + 4 - big(6) * &nb - &r - &nb * s;
            c.eq("residue: 2(2^{n-1} + 2q + 2 - 4n - tn) = 2^n + 4 - 6n - r - ns", &(big(2) * &lhs), &doubled);
            let n1 = &nb + 1;
            let (floor_poly, name) = match b {
                Branch::Floor => (pow2(n) - (big(6) * &nb - 1) * &n1, "residue: 2^n - (6n-1)(n+1) >= 0"),
                Branch::Ceil => (pow2(n) - (big(7) * &nb - 1) * &n1, "residue: 2^n - (7n-1)(n+1) >= 0"),
            };
            c.le("residue: (n+1)(2^n + 4 - 6n - r - ns) >= polynomial bound", &floor_poly, &(&n1 * &doubled));
            c.nonneg(name, &floor_poly);
            if b == Branch::Ceil {
                c.nonneg("residue: 2^n - 6n(n+1) >= 0", &(pow2(n) - big(6) * &nb * &n1));
            }
        }
        _ => c.check("residue: n has a case", false, || format!("no argument for n = {n}")),
    }
}

fn trace_hypotheses(c: &mut Checker, p: &ParameterProfile, b: Branch) {
    let st = setup(p, b);
    let n = p.n;
    let nb = big(n);
    let y = st.u.clone();
    c.nonneg("trace: y >= 0", &y);
    let four = big(4);
    match (b, n) {
        (Branch::Floor, 5) => {
            c.check("trace n=5: (m,x,y) = (4,1,2)", st.m == big(4) && st.x == big(1) && y == big(2), || {
                format!("(m,x,y) = ({},{},{y})", st.m, st.x)
            })
        }
        (Branch::Floor, 6) => {
            c.check("trace n=6: (m,x,y) = (5,1,4)", st.m == big(5) && st.x == big(1) && y == big(4), || {
                format!("(m,x,y) = ({},{},{y})", st.m, st.x)
            });
            // Dominated by (x', y') = (2, 4).
            c.le("trace n=6: x <= 2", &st.x, &big(2));
            c.le("trace n=6: 2 <= floor((m-1)/2)", &big(2), &st.half_floor);
        }
        (Branch::Ceil, 8) => {
            let bound = floor_div(&(&st.two_m - &four * &st.x), &(&st.m + 1));
            c.eq("trace n=8: y = 14", &y, &big(14));
            c.eq("trace n=8: bound = 15", &bound, &big(15));
            c.check("trace n=8: x, y even", is_even(&st.x) && is_even(&y), || format!("x = {}, y = {y}", st.x));
            c.le("trace n=8: x <= floor((m-1)/2)", &st.x, &st.half_floor);
            c.le("trace n=8: y <= bound", &y, &bound);
        }
        (_, n) if n >= 9 => {
            even_domination(c, "trace", &st, &y, &four);
            let q = big(p.q);
            let r = big(p.r);
            let (s, t) = (p.s_of(b), &st.u);
            // y + 1 ≤ ⌊…⌋ ⟺ (t+1) n ≤ 2^{n-1} - 4(q+1).
            let lhs = pow2(n - 1) - &four * (&q + 1) - (t + 1) * &nb;
            c.nonneg("trace: 2^{n-1} - 4(q+1) - (t+1)n >= 0", &lhs);
            let doubled = pow2(n) - big(4) * &nb - 8 + big(2) * &r - &nb * s + &nb;
            c.eq("trace: 2(2^{n-1} - 4(q+1) - (t+1)n) = 2^n - 3n - 8 + 2r - ns", &(big(2) * &lhs), &doubled);
            let n1 = &nb + 1;
            let (poly, name) = match b {
                Branch::Floor => (pow2(n) - (big(3) * &nb + 8) * &n1, "trace: 2^n - (3n+8)(n+1) >= 0"),
                Branch::Ceil => (pow2(n) - big(4) * (&nb + 2) * &n1, "trace: 2^n - 4(n+2)(n+1) >= 0"),
            };
            c.le("trace: (n+1)(2^n - 3n - 8 + 2r - ns) >= polynomial bound", &poly, &(&n1 * &doubled));
            c.nonneg(name, &poly);
        }
        _ => c.check("trace: n has a case", false, || format!("no argument for n = {n}")),
    }
}

/// The simple-point surplus: `W' - (s-1)/2` and `T' - ((s+1)/2 - 2q)` are
/// `≥ 0` for `e` and `≤ 0` for `e*`, with their closed forms in `k`.
fn surplus(c: &mut Checker, p: &ParameterProfile, b: Branch) {
    let n = p.n;
    let nb = big(n);
    let q = big(p.q);
    let r = big(p.r);
    let k = &p.k;
    let t = p.half_of(b).expect("odd branch").clone();
    let n1 = &nb + 1;
    let res_form = pow2(n - 1) - big(2) * (&nb - 1) * &q - &nb * (&t + 1 - big(2) * &q) - &t;
    let res_short = pow2(n - 1) + big(2) * &q - &n1 * &t - &nb;
    c.eq("surplus: residue form identity", &res_form, &res_short);
    let tr_form = pow2(n - 1) - big(4) * &q - &nb * &t - (&t + 1 - big(2) * &q);
    let tr_short = pow2(n - 1) - big(2) * &q - &n1 * &t - 1;
    c.eq("surplus: trace form identity", &tr_form, &tr_short);
    match b {
        Branch::Floor => {
            c.eq("surplus e: 2 res = k - r + 1", &(big(2) * &res_short), &(k - &r + 1));
            c.nonneg("surplus e: res >= 0", &res_short);
            if p.r == 3 {
                c.check("surplus e: r = 3 gives k != 1", !(k == &big(1)), || "k = 1".into());
            }
            c.eq("surplus e: 2 tr = k + r - 1", &(big(2) * &tr_short), &(k + &r - 1));
            c.nonneg("surplus e: tr >= 0", &tr_short);
            // W + T = 2^n - (n+1) e.
            let total = &res_short + &tr_short;
            c.eq("surplus e: total = 2^n - (n+1)e", &total, &(pow2(n) - &n1 * &p.e));
        }
        Branch::Ceil => {
            c.eq("surplus e*: 2 res = k - r - n", &(big(2) * &res_short), &(k - &r - &nb));
            c.nonpos("surplus e*: res <= 0", &res_short);
            c.eq("surplus e*: 2 tr = k - n + r - 2", &(big(2) * &tr_short), &(k - &nb + &r - 2));
            if p.r == 3 {
                c.check("surplus e*: r = 3 gives k even", is_even(k), || format!("k = {k}"));
            }
            c.nonpos("surplus e*: tr <= 0", &tr_short);
        }
    }
}

/// Bounds used inside the inductive steps, at `m = n - 1` when in range.
fn proof_bounds(c: &mut Checker, m: u32) {
    let mb = big(m);
    let m2 = &mb * &mb;
    let m3 = &m2 * &mb;
    let p = pow2(m + 1);
    if m >= 10 {
        c.nonneg("2^{m+1} - m^3 - 4m^2 - m - 2 >= 0", &(&p - &m3 - big(4) * &m2 - &mb - 2));
        c.nonneg("2^{m+1} - (m-1)(m^2+9m+6) >= 0", &(&p - (&mb - 1) * (&m2 + big(9) * &mb + 6)));
    }
    if m >= 7 {
        c.nonneg("2^{m+1} - 4m^2 - 8m + 4 >= 0", &(&p - big(4) * &m2 - big(8) * &mb + 4));
    }
    if m >= 8 {
        c.nonneg("2^{m+1} - 4m^2 - 24m - 12 >= 0", &(&p - big(4) * &m2 - big(24) * &mb - 12));
    }
    if m == 7 {
        // x = 2, y ≤ 14: 2^m - 4x - my - 2m - 8 at the extreme.
        let v = pow2(7) - big(8) - big(7 * 14) - big(14) - big(8);
        c.check("m = 7: 2^m - 4x - my - 2m - 8 = 0 at x = 2, y = 14", v.is_zero(), || format!("{v}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_small_range() {
        let r = appendix_check(5, 64).unwrap();
        assert!(r.passed(), "{:?}", r.first_violation);
        assert_eq!(r.rows.len(), 60);
        assert!(r.rows.iter().all(|row| row.passed));
    }

    #[test]
    fn quoted_rows() {
        let r = appendix_check(5, 9).unwrap();
        let branches: Vec<_> = r.rows.iter().map(|row| row.branch).collect();
        assert_eq!(
            branches,
            vec![Some(Branch::Floor), Some(Branch::Floor), None, Some(Branch::Ceil), Some(Branch::Floor)]
        );
    }

    #[test]
    fn guards() {
        assert!(appendix_check(4, 10).is_err());
        assert!(appendix_check(10, 9).is_err());
        assert!(appendix_check(5, APPENDIX_MAX_N + 1).is_err());
    }
}
