use secant_core::horace::{
    appendix_check, fixed_component_check, fuzz_instance, residue_lemma_check, residue_lemma_v2_check,
    substitution_check, substitution_instance, trace_lemma_check, LemmaInstance,
};
use serde::Serialize;

use crate::args::{Common, Format, Which};
use crate::output::{csv_flat, csv_table, json_sorted, text_flat, verdict, Report};
use crate::CliError;

/// Parameters of `secant lemmas`, as given on the command line.
#[derive(Clone, Debug)]
pub struct LemmaParams {
    pub which: Which,
    pub m: Option<u32>,
    pub x: Option<u32>,
    pub y: Option<u32>,
    pub i: Option<u32>,
    pub n: Option<u32>,
    pub n_min: u32,
    pub n_max: u32,
    pub v2: bool,
    pub count: u32,
}

fn need(v: Option<u32>, flag: &str, which: &str) -> Result<u32, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --which {which}")))
}

fn flat<T: Serialize>(common: &Common, value: &T, passed: bool, summary: String) -> Result<Report, CliError> {
    let data = match common.format {
        Format::Json => json_sorted(value)?,
        Format::Csv => csv_flat(value)?,
        Format::Text => {
            let mut s = text_flat(value)?;
            s.push_str(&format!("result  {}\n", verdict(passed)));
            s
        }
    };
    Ok(Report { data, matches: passed, summary: Some(summary) })
}

pub fn lemmas(common: &Common, p: &LemmaParams) -> Result<Report, CliError> {
    let sampling = common.sampling();
    match p.which {
        Which::Residue if p.v2 => {
            let r = residue_lemma_v2_check(&sampling)?;
            let summary =
                format!("residue v2: {} (without the pair {}), {}", r.value, r.without_pair, verdict(r.passed));
            flat(common, &r, r.passed, summary)
        }
        Which::Residue | Which::Trace => {
            let name = if p.which == Which::Residue { "residue" } else { "trace" };
            let inst = LemmaInstance::new(need(p.m, "m", name)?, need(p.x, "x", name)?, need(p.y, "y", name)?)?;
            let r = if p.which == Which::Residue {
                residue_lemma_check(inst, &sampling)?
            } else {
                trace_lemma_check(inst, &sampling)?
            };
            let summary = format!(
                "{name} (m, x, y) = ({}, {}, {}): {} (formula {}), {}",
                r.m,
                r.x,
                r.y,
                r.value,
                r.formula,
                verdict(r.passed)
            );
            flat(common, &r, r.passed, summary)
        }
        Which::Substitution => {
            let m = need(p.m, "m", "substitution")?;
            let x = p.x.unwrap_or(1);
            let planes: Vec<String> = (1..=x).map(|i| format!("H{i}")).collect();
            let r = substitution_check(|f, rng| Ok(substitution_instance(f, m, x, rng)?.0), &planes, m, &sampling)?;
            let summary = format!(
                "substitution m = {m}, x = {x}: Y {}, X' {}, X {}, {}",
                r.y_dim,
                r.x_prime_dim,
                r.x_dim,
                verdict(r.passed)
            );
            flat(common, &r, r.passed, summary)
        }
        Which::Fixcomp => {
            let (i, m, n) = (need(p.i, "i", "fixcomp")?, need(p.m, "m", "fixcomp")?, need(p.n, "n", "fixcomp")?);
            let r = fixed_component_check(i, m, n)?;
            let summary = format!(
                "fixcomp (i, m, n) = ({i}, {m}, {n}): {} in degree {}, {}",
                r.without,
                r.degree,
                verdict(r.passed)
            );
            flat(common, &r, r.passed, summary)
        }
        Which::Lemzero => lemzero(common, need(p.n, "n", "lemzero")?, p.count),
        Which::Appendix => {
            let r = appendix_check(p.n_min, p.n_max)?;
            let passed = r.first_violation.is_none();
            let mut summary =
                format!("appendix n = {}..{}: {} checks, {}", r.n_min, r.n_max, r.checks, verdict(passed));
            if let Some(v) = &r.first_violation {
                summary.push_str(&format!("; first violation at n = {}: {} ({})", v.n, v.check, v.detail));
            }
            let data = match common.format {
                Format::Json => json_sorted(&r)?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = r
                        .rows
                        .iter()
                        .map(|row| {
                            vec![
                                row.n.to_string(),
                                row.branch.map(|b| b.name().to_string()).unwrap_or_default(),
                                row.checks.to_string(),
                                row.passed.to_string(),
                            ]
                        })
                        .collect();
                    csv_table(&["n", "branch", "checks", "passed"], &rows)?
                }
                Format::Text => {
                    let mut s = String::new();
                    for row in &r.rows {
                        s.push_str(&format!(
                            "n = {:>4}  branch {:<4} checks {:>3}  {}\n",
                            row.n,
                            row.branch.map_or("-", |b| b.name()),
                            row.checks,
                            verdict(row.passed)
                        ));
                    }
                    s.push_str(&format!("result  {}\n", verdict(passed)));
                    s
                }
            };
            Ok(Report { data, matches: passed, summary: Some(summary) })
        }
    }
}

fn lemzero(common: &Common, n: u32, count: u32) -> Result<Report, CliError> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let base = common.seed();
    let outcomes =
        (0..count).map(|j| fuzz_instance(n as usize, base.derive(&[u64::from(j)]))).collect::<Result<Vec<_>, _>>()?;
    let passed = outcomes.iter().all(|o| o.passed);
    let failures = outcomes.iter().filter(|o| !o.passed).count();
    let summary = format!("lemzero n = {n}: {count} random schemes, {failures} violations, {}", verdict(passed));
    let data = match common.format {
        Format::Json => json_sorted(&outcomes)?,
        Format::Csv | Format::Text => {
            let header = [
                "seed",
                "castelnuovo_direct",
                "castelnuovo_bound",
                "lemzero_direct",
                "lemzero_w",
                "lemzero_t",
                "passed",
                "scheme",
            ];
            let rows: Vec<Vec<String>> = outcomes
                .iter()
                .map(|o| {
                    vec![
                        o.seed.to_string(),
                        o.castelnuovo.direct.to_string(),
                        o.castelnuovo.bound.to_string(),
                        o.lemzero.direct.to_string(),
                        o.lemzero.w_dim.to_string(),
                        o.lemzero.t_dim.to_string(),
                        o.passed.to_string(),
                        o.description.clone(),
                    ]
                })
                .collect();
            if common.format == Format::Csv {
                csv_table(&header, &rows)?
            } else {
                let mut s = String::new();
                for o in &outcomes {
                    s.push_str(&format!(
                        "seed {}: castelnuovo {} <= {}, lemzero {} <= {} + {}, {}\n  {}\n",
                        o.seed,
                        o.castelnuovo.direct,
                        o.castelnuovo.bound,
                        o.lemzero.direct,
                        o.lemzero.w_dim,
                        o.lemzero.t_dim,
                        verdict(o.passed),
                        o.description
                    ));
                }
                s.push_str(&format!("result  {}\n", verdict(passed)));
                s
            }
        }
    };
    Ok(Report { data, matches: passed, summary: Some(summary) })
}
