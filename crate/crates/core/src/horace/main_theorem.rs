//! Certificate for `dim (I_X)_n = max(0, 2^n - (n+1)s)` where
//! `X = (n-1)Q_1 + ⋯ + (n-1)Q_n + 2P_1 + ⋯ + 2P_s` in `P^n` and `s` is the odd
//! member of `{e, e*}`.
//!
//! One specialization step is executed on concrete points: `P_{2i}` moves
//! onto `Λ_i = <Q_1, Q_{2i}, Q_{2i+1}, P_{2i-1}>`, `(s-1)/2` points move onto
//! a hyperplane `Π` through `Q_2, …, Q_n`, the fixed components `Λ_i` and
//! `L_j = <Q_1, P_j>` are added, and the result is split into `W` and `T`.
//! The values of the two halves come from the residue and trace lemmas,
//! computed directly below the cap.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::appendix::appendix_check;
use super::cert::{CertificateNode, Relation, Rule, Status};
use super::lemmas::{lemma_case, residue_lemma_check, trace_lemma_check, LemmaInstance, LemmaKind};
use super::profile::{to_i64, Branch, ParameterProfile};
use super::split::lemzero_split;
use crate::error::{Error, Result};
use crate::exactla::{PrimeField, SampleRng, Sampling};
use crate::fatpoints::{ideal_dim_at, monomial_count, Hyperplane, LinearSpace, ProjPoint, SchemeSpec};

pub const DEFAULT_DIRECT_CAP: u64 = 1_000_000;
/// Largest `n` accepted by [`main_theorem_certify`].
pub const MAX_CERTIFY_N: u32 = 62;

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub sampling: Sampling,
    /// Schemes in `P^d`, degree `d`, are ranked directly when
    /// `C(2d, d)` is at most this.
    pub direct_cap: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { sampling: Sampling::default(), direct_cap: DEFAULT_DIRECT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u32,
    pub s: i64,
    pub branch: Branch,
    pub q: u32,
    pub r: u32,
    pub e: i64,
    pub e_star: i64,
    /// `(s-1)/2`.
    pub half: i64,
    pub h: i64,
    pub k: i64,
    pub direct_cap: u64,
    pub primes: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    pub status: Status,
    pub root: CertificateNode,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; n + 1];
    v[i] = 1;
    v
}

fn coordinate_base(field: PrimeField, n: usize) -> Result<SchemeSpec> {
    let mut spec = SchemeSpec::new(field, n);
    for j in 1..=n {
        spec.add_coordinate_point(j, n as u32 - 1)?;
    }
    Ok(spec)
}

/// Dimensions from one sampling cell.
#[derive(Clone, Copy, Debug)]
struct StepCell {
    x: u64,
    x_tilde: u64,
    z: u64,
    w: u64,
    t: u64,
}

/// Also returns the notes the calculus left on `W` and `T`.
fn horace_cell(
    field: PrimeField,
    n: usize,
    s: usize,
    q: usize,
    u: usize,
    rng: &mut SampleRng,
) -> Result<(StepCell, Vec<String>)> {
    let mut generic = coordinate_base(field, n)?;
    for _ in 0..s {
        generic.add_generic_point(2, rng)?;
    }

    let mut special = coordinate_base(field, n)?;
    let mut ps: Vec<Vec<u32>> = Vec::with_capacity(s);
    for i in 1..=q {
        let a = ProjPoint::generic(field, n, rng);
        let name = format!("Lambda{i}");
        special.register(&name, vec![unit(n, 1), unit(n, 2 * i), unit(n, 2 * i + 1), a.coords().to_vec()])?;
        let b = ProjPoint::on_span(field, special.subspace(&name)?, &name, rng);
        ps.push(a.coords().to_vec());
        ps.push(b.coords().to_vec());
        special.add_point(a, 2)?;
        special.add_point(b, 2)?;
    }
    let through: Vec<Vec<u32>> = (2..=n).map(|j| unit(n, j)).collect();
    let pi = loop {
        let pi = Hyperplane::generic_through(field, n, &through, rng)?;
        if !pi.contains_point(field, &unit(n, 1)) {
            break pi;
        }
    };
    special.register("Pi", pi.span(field))?;
    for j in 2 * q + 1..=s {
        let p = if j <= 2 * q + u {
            ProjPoint::on_span(field, special.subspace("Pi")?, "Pi", rng)
        } else {
            ProjPoint::generic(field, n, rng)
        };
        ps.push(p.coords().to_vec());
        special.add_point(p, 2)?;
    }

    let mut z = special.clone();
    for i in 1..=q {
        z.include_subspace(&format!("Lambda{i}"), 1)?;
    }
    for (j, p) in ps.iter().enumerate().skip(2 * q) {
        z.add_space(LinearSpace::new(field, vec![unit(n, 1), p.clone()], 1, Some(format!("L{}", j + 1)))?)?;
    }

    let t = n as u32;
    let qs: Vec<Vec<u32>> = (1..=n).map(|j| unit(n, j)).collect();
    let split = lemzero_split(&z, &qs, &pi)?;
    let mut notes: Vec<String> = split.w.notes().to_vec();
    notes.extend(split.t.notes().iter().cloned());
    notes.sort();
    notes.dedup();
    let cell = StepCell {
        x: ideal_dim_at(&generic, t)?,
        x_tilde: ideal_dim_at(&special, t)?,
        z: ideal_dim_at(&z, t)?,
        w: ideal_dim_at(&split.w, t - 1)?,
        t: ideal_dim_at(&split.t, t - 1)?,
    };
    Ok((cell, notes))
}

fn under_cap(d: u32, cap: u64) -> bool {
    monomial_count(d as usize, d) <= cap
}

fn lemma_node(kind: LemmaKind, inst: LemmaInstance, opts: &CertifyOptions, label: &str) -> Result<CertificateNode> {
    let (rule, formula, scheme) = match kind {
        LemmaKind::Residue => (
            Rule::ResidueLemma,
            inst.residue_formula(),
            format!(
                "P^{m}: {}(Q_1..Q_{m}) + J2(H_1..H_{x}) + {y} double points",
                inst.m - 1,
                m = inst.m,
                x = inst.x,
                y = inst.y
            ),
        ),
        LemmaKind::Trace => (
            Rule::TraceLemma,
            inst.trace_formula(),
            format!(
                "P^{m}: {}(Q_1..Q_{m}) + H_1..H_{x} + {y} double points",
                inst.m - 1,
                m = inst.m,
                x = inst.x,
                y = inst.y
            ),
        ),
    };
    let mut node = CertificateNode::new(
        format!("{label}: (m, x, y) = ({}, {}, {})", inst.m, inst.x, inst.y),
        scheme,
        inst.m,
        rule,
        formula,
    );
    if under_cap(inst.m, opts.direct_cap) {
        let report = match kind {
            LemmaKind::Residue => residue_lemma_check(inst, &opts.sampling)?,
            LemmaKind::Trace => trace_lemma_check(inst, &opts.sampling)?,
        };
        node = node.computed(Some(report.value as i64), Relation::Eq).note(format!("cells {:?}", report.cells));
    } else {
        node = node.note("above the direct cap; value taken from the lemma case");
    }
    let cover = match lemma_case(kind, &inst) {
        Some(c) => CertificateNode::arithmetic(format!("lemma case applies: {c}"), true),
        None => CertificateNode::arithmetic("no lemma case applies", false),
    };
    Ok(node.child(cover))
}

/// Builds and checks the certificate tree for `(n, s)`.
pub fn main_theorem_certify(n: u32, s: u64, opts: &CertifyOptions) -> Result<Certificate> {
    if n == 4 && s == 3 {
        return Err(Error::Guard("exception case, dim (I_X)_4 = 2: sigma_3 of (P^1)^4 is defective".into()));
    }
    if n < 5 {
        return Err(Error::Guard(format!("n >= 5 violated: n = {n}")));
    }
    if n > MAX_CERTIFY_N {
        return Err(Error::Guard(format!("n <= {MAX_CERTIFY_N} violated: n = {n}")));
    }
    let p = ParameterProfile::new(n)?;
    let e = to_i64(&p.e);
    let e_star = to_i64(&p.e_star);
    if s % 2 == 0 {
        return Err(Error::Guard(format!(
            "s = {s} is even; even s is covered by direct computation and not certified"
        )));
    }
    let branch = if s as i64 == e {
        Branch::Floor
    } else if s as i64 == e_star {
        Branch::Ceil
    } else {
        return Err(Error::Guard(format!("s must be e = {e} or e* = {e_star}, got {s}")));
    };
    let half = to_i64(p.half_of(branch).expect("s is odd"));
    let (ni, si, q) = (n as i64, s as i64, p.q as i64);
    if 2 * q + 1 > ni {
        return Err(Error::Guard(format!("2q + 1 <= n violated: q = {q}, n = {n}")));
    }
    if 2 * q + half > si {
        return Err(Error::Guard(format!("2q + (s-1)/2 <= s violated: q = {q}, (s-1)/2 = {half}, s = {s}")));
    }
    let two_n = 1i64 << n;
    let root_claim = (two_n - (ni + 1) * si).max(0);
    let m = n - 1;
    let y_res = (si + 1) / 2 - 2 * q;
    let y_tr = half;
    let res_inst = LemmaInstance::new(m, p.q, y_res.to_u32().expect("small"))?;
    let tr_inst = LemmaInstance::new(m, p.q, y_tr.to_u32().expect("small"))?;
    let w_prime = res_inst.residue_formula();
    let t_prime = tr_inst.trace_formula();
    let w_claim = (w_prime - half).max(0);
    let t_claim = (t_prime - y_res).max(0);

    // Concrete step.
    let mut step_notes = Vec::new();
    let cells: Option<Vec<StepCell>> = if under_cap(n, opts.direct_cap) {
        let mut v = Vec::new();
        for (field, _, mut rng) in opts.sampling.cells()? {
            let (cell, notes) = horace_cell(field, n as usize, s as usize, p.q as usize, half as usize, &mut rng)?;
            if v.is_empty() {
                step_notes = notes;
            }
            v.push(cell);
        }
        Some(v)
    } else {
        None
    };
    let best = cells.as_ref().map(|c| *c.iter().min_by_key(|c| c.w + c.t).expect("cells"));
    let pick = |bad: fn(&StepCell) -> bool| -> Option<(StepCell, usize, usize)> {
        cells.as_ref().map(|c| {
            let failing = c.iter().filter(|x| bad(x)).count();
            let chosen = c.iter().find(|x| bad(x)).copied().unwrap_or(best.expect("cells"));
            (chosen, c.len() - failing, c.len())
        })
    };

    let scheme_x = format!("P^{n}: {}(Q_1..Q_{n}) + 2(P_1..P_{s})", n - 1);
    let scheme_xt = format!(
        "P^{n}: {}(Q_1..Q_{n}) + 2(P_1..P_{s}), P_2i on Lambda_i (i <= {q}), P_{}..P_{} on Pi",
        n - 1,
        2 * q + 1,
        2 * q + half
    );
    let scheme_z = format!("X~ + Lambda_1..Lambda_{q} + L_{}..L_{s}", 2 * q + 1);
    let scheme_w = format!(
        "Pi = P^{m}: {}(Q_2..Q_{n}) + J2(H_1..H_{q}) + H_1..H_{q} + {half} simple points + {y_res} double points",
        n - 2
    );
    let scheme_t =
        format!("Pi = P^{m}: {}(Q_2..Q_{n}) + H_1..H_{q} + {half} double points + {y_res} simple points", n - 2);

    let oracle = cells.as_ref().map(|c| c.iter().map(|x| x.x).min().expect("cells") as i64);
    let mut root = CertificateNode::new("dim (I_X)_n", scheme_x.clone(), n, Rule::Lemzero, root_claim)
        .computed(oracle, Relation::Eq);
    if let Some(c) = &cells {
        root = root.note(format!("direct rank per cell {:?}", c.iter().map(|x| x.x).collect::<Vec<_>>()));
    } else {
        root = root.note("above the direct cap; no direct rank");
    }

    root = root.child(
        CertificateNode::new(
            "lower bound: each double point imposes at most n + 1 conditions",
            "arithmetic",
            n,
            Rule::AppendixArithmetic,
            root_claim,
        )
        .computed(Some((two_n - (ni + 1) * si).max(0)), Relation::Eq),
    );

    let semi = pick(|c| c.x_tilde < c.x);
    let mut node = CertificateNode::new(
        "semicontinuity: dim (I_X~)_n >= dim (I_X)_n",
        scheme_xt.clone(),
        n,
        Rule::DirectRank,
        semi.map_or(root_claim, |(c, _, _)| c.x as i64),
    )
    .computed(semi.map(|(c, _, _)| c.x_tilde as i64), Relation::Ge);
    if let Some((_, ok, all)) = semi {
        node = node.note(format!("holds in {ok} of {all} cells"));
    }
    root = root.child(node);

    let fixed = pick(|c| c.z != c.x_tilde);
    let mut node = CertificateNode::new(
        "fixed components: Lambda_i and L_j",
        scheme_z.clone(),
        n,
        Rule::FixedComponent,
        fixed.map_or(root_claim, |(c, _, _)| c.x_tilde as i64),
    )
    .computed(fixed.map(|(c, _, _)| c.z as i64), Relation::Eq);
    if let Some((_, ok, all)) = fixed {
        node = node.note(format!("holds in {ok} of {all} cells"));
    }
    root = root.child(node);

    let ineq = pick(|c| c.z > c.w + c.t);
    let mut ineq_node = CertificateNode::new(
        "dim (I_Z)_n <= dim (I_W)_{n-1} + dim (I_T)_{n-1}",
        scheme_z.clone(),
        n,
        Rule::Castelnuovo,
        ineq.map_or(w_claim + t_claim, |(c, _, _)| (c.w + c.t) as i64),
    )
    .computed(ineq.map(|(c, _, _)| c.z as i64), Relation::Le);
    if let Some((_, ok, all)) = ineq {
        ineq_node = ineq_node.note(format!("holds in {ok} of {all} cells"));
    }

    let (surplus_rel, surplus_word) = match branch {
        Branch::Floor => (Relation::Ge, ">="),
        Branch::Ceil => (Relation::Le, "<="),
    };
    let mut w_node = CertificateNode::new("W: projection of Res_Pi Z from Q_1", scheme_w, m, Rule::Lemzero, w_claim)
        .computed(best.map(|c| c.w as i64), Relation::Le)
        .note("W keeps the planes H_i, so its value may lie below the claim");
    for note in &step_notes {
        w_node = w_node.note(format!("outside the residual calculus: {note}"));
    }
    let w_node = w_node.child(lemma_node(LemmaKind::Residue, res_inst, opts, "W'")?).child(
        CertificateNode::new(
            format!("W = max(0, W' - (s-1)/2) with W' {surplus_word} (s-1)/2"),
            "arithmetic",
            m,
            Rule::AppendixArithmetic,
            half,
        )
        .computed(Some(w_prime), surplus_rel),
    );
    let t_node = CertificateNode::new("T: Res_Pi' (Tr_Pi Z)", scheme_t, m, Rule::Lemzero, t_claim)
        .computed(best.map(|c| c.t as i64), Relation::Le)
        .note("the simple points P'_j come from the lines L_j")
        .child(lemma_node(LemmaKind::Trace, tr_inst, opts, "T'")?)
        .child(
            CertificateNode::new(
                format!("T = max(0, T' - ((s+1)/2 - 2q)) with T' {surplus_word} (s+1)/2 - 2q"),
                "arithmetic",
                m,
                Rule::AppendixArithmetic,
                y_res,
            )
            .computed(Some(t_prime), surplus_rel),
        );
    let split =
        CertificateNode::new("lemzero split of Z along Pi from Q_1", scheme_z, n, Rule::Lemzero, w_claim + t_claim)
            .computed(best.map(|c| c.z as i64), Relation::Le)
            .child(ineq_node)
            .child(w_node)
            .child(t_node);
    root = root.child(split);

    root = root.child(
        CertificateNode::new(
            "total: W + T = max(0, 2^n - (n+1)s)",
            "arithmetic",
            n,
            Rule::AppendixArithmetic,
            root_claim,
        )
        .computed(Some(w_claim + t_claim), Relation::Eq),
    );
    let appendix = appendix_check(n, n)?;
    let label = match &appendix.first_violation {
        None => format!("appendix inequalities for n = {n} ({} checks)", appendix.checks),
        Some(v) => format!("appendix inequality failed: {} ({})", v.check, v.detail),
    };
    root = root.child(CertificateNode::arithmetic(label, appendix.passed()));

    let status = root.settle();
    Ok(Certificate {
        n,
        s: si,
        branch,
        q: p.q,
        r: p.r,
        e,
        e_star,
        half,
        h: to_i64(&p.h),
        k: to_i64(&p.k),
        direct_cap: opts.direct_cap,
        primes: opts.sampling.primes.clone(),
        trials: opts.sampling.trials,
        seed: opts.sampling.seed.0,
        status,
        root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n5_s5() {
        let c = main_theorem_certify(5, 5, &CertifyOptions::default()).unwrap();
        assert_eq!(c.root.claimed, 2);
        assert_eq!(c.root.computed, Some(2));
        assert_eq!(c.status, Status::Verified, "{}", c.root.render_text());
    }

    #[test]
    fn n6_s9() {
        let c = main_theorem_certify(6, 9, &CertifyOptions::default()).unwrap();
        assert_eq!((c.root.claimed, c.root.computed), (1, Some(1)));
        assert_eq!(c.status, Status::Verified, "{}", c.root.render_text());
    }

    #[test]
    fn guards() {
        let o = CertifyOptions::default();
        assert!(main_theorem_certify(4, 3, &o).unwrap_err().to_string().contains("exception case"));
        assert!(main_theorem_certify(5, 6, &o).unwrap_err().to_string().contains("even"));
        assert!(main_theorem_certify(5, 3, &o).unwrap_err().to_string().contains("e = 5"));
        assert!(main_theorem_certify(63, 1, &o).is_err());
    }

    #[test]
    fn above_cap_is_bound_only() {
        let o = CertifyOptions { direct_cap: 10, ..Default::default() };
        let c = main_theorem_certify(9, 51, &o).unwrap();
        assert_eq!(c.status, Status::BoundOnly, "{}", c.root.render_text());
        assert_eq!(c.root.claimed, 2);
    }
}
