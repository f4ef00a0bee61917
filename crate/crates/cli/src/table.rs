use std::time::Instant;

use rayon::prelude::*;
use secant_core::fatpoints::transfer_consistency;
use secant_core::horace::{main_theorem_certify, CertifyOptions, Status};
use secant_core::segre::{secant_dim_sample, secant_profile, DimensionReport, SecantProblem};
use serde::Serialize;

use crate::args::{Common, Format, Method};
use crate::output::{csv_table, json_sorted, Report};
use crate::CliError;

/// Trials per prime before a defect is reported.
pub const ESCALATED_TRIALS: usize = 100;

/// Largest `n` the table accepts.
pub const TABLE_MAX_N: u32 = 20;

pub const CSV_COLUMNS: [&str; 11] = [
    "n",
    "s",
    "expected",
    "observed",
    "defect",
    "expected_defect",
    "matches",
    "methods",
    "cells_agreeing",
    "cells",
    "trials",
];

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub s: u32,
    pub expected: u64,
    pub observed: u64,
    pub defect: u64,
    pub expected_defect: u64,
    pub matches: bool,
    pub methods: Vec<&'static str>,
    pub cells_agreeing: usize,
    pub cells: usize,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl TableRow {
    fn csv(&self) -> Vec<String> {
        let mut r = vec![
            self.n.to_string(),
            self.s.to_string(),
            self.expected.to_string(),
            self.observed.to_string(),
            self.defect.to_string(),
            self.expected_defect.to_string(),
            self.matches.to_string(),
            self.methods.join(";"),
            self.cells_agreeing.to_string(),
            self.cells.to_string(),
            self.trials.to_string(),
        ];
        if let Some(ms) = self.runtime_ms {
            r.push(ms.to_string());
        }
        r
    }
}

/// The only defective pair.
pub fn expected_defect(n: u32, s: u32) -> u64 {
    u64::from((n, s) == (4, 3))
}

/// `ceil(2^n / (n+1))`.
pub fn e_star(n: u32) -> u32 {
    let two_n = 1u64 << n;
    two_n.div_ceil(u64::from(n) + 1) as u32
}

fn escalate(report: DimensionReport, common: &Common) -> Result<DimensionReport, CliError> {
    if report.defect == 0 || report.trials >= ESCALATED_TRIALS {
        return Ok(report);
    }
    log::info!(
        "(n, s) = ({}, {}) shows defect {}; rerunning with {ESCALATED_TRIALS} trials",
        report.problem.n,
        report.problem.s,
        report.defect
    );
    Ok(secant_dim_sample(report.problem, &common.primes(), ESCALATED_TRIALS, common.seed())?)
}

fn row_from(report: &DimensionReport) -> TableRow {
    let (n, s) = (report.problem.n, report.problem.s);
    let expected_defect = expected_defect(n, s);
    TableRow {
        n,
        s,
        expected: report.expected,
        observed: report.observed,
        defect: report.defect,
        expected_defect,
        matches: report.defect == expected_defect,
        methods: vec![Method::Terracini.tag()],
        cells_agreeing: report.cells_agreeing,
        cells: report.cells(),
        trials: report.trials,
        runtime_ms: None,
    }
}

fn odd_branch(n: u32, s: u32) -> bool {
    let e = ((1u64 << n) / (u64::from(n) + 1)) as u32;
    n >= 5 && s % 2 == 1 && (s == e || s == e_star(n))
}

/// Extra checks on one row. A check that runs and disagrees clears
/// `matches`; a check that agrees adds its tag.
fn cross_check(row: &mut TableRow, methods: &[Method], common: &Common, cap: u64) -> Result<(), CliError> {
    let ideal = (1u64 << row.n) - 1 - row.observed;
    if methods.contains(&Method::Fatpoints) && row.n >= 2 {
        let t = transfer_consistency(row.n, row.s, &common.sampling())?;
        if t.consistent() && t.samples.iter().all(|x| x.projective == ideal) {
            row.methods.push(Method::Fatpoints.tag());
        } else {
            log::warn!("fat-point transfer disagrees at (n, s) = ({}, {})", row.n, row.s);
            row.matches = false;
        }
    }
    if methods.contains(&Method::Certified) && odd_branch(row.n, row.s) {
        let opts = CertifyOptions { sampling: common.sampling(), direct_cap: cap };
        let cert = main_theorem_certify(row.n, u64::from(row.s), &opts)?;
        let claim_ok = cert.root.claimed == ideal as i64;
        match cert.status {
            Status::Verified if claim_ok => row.methods.push(Method::Certified.tag()),
            Status::BoundOnly if claim_ok => {}
            _ => {
                log::warn!("certificate disagrees at (n, s) = ({}, {})", row.n, row.s);
                row.matches = false;
            }
        }
    }
    Ok(())
}

fn block(n: u32, s_max: u32, methods: &[Method], common: &Common, cap: u64) -> Result<Vec<TableRow>, CliError> {
    let start = Instant::now();
    let profile = secant_profile(n, s_max, &common.primes(), common.trials as usize, common.seed())?;
    let mut rows = Vec::with_capacity(profile.len());
    for report in profile {
        let report = escalate(report, common)?;
        let mut row = row_from(&report);
        cross_check(&mut row, methods, common, cap)?;
        rows.push(row);
    }
    let elapsed = start.elapsed().as_millis();
    if common.timings {
        for r in &mut rows {
            r.runtime_ms = Some(elapsed);
        }
    }
    log::info!("n = {n}: {} rows", rows.len());
    Ok(rows)
}

pub fn table(
    common: &Common,
    n_min: u32,
    n_max: u32,
    s_max: Option<u32>,
    methods: &[Method],
    cap: u64,
) -> Result<Report, CliError> {
    if n_min == 0 || n_min > n_max {
        return Err(CliError::Usage(format!("need 1 <= n-min <= n-max, got {n_min}..{n_max}")));
    }
    if n_max > TABLE_MAX_N {
        return Err(CliError::Usage(format!(
            "resource guard: n-max = {n_max} exceeds {TABLE_MAX_N} (vectors of length 2^n)"
        )));
    }
    if s_max == Some(0) {
        return Err(CliError::Usage("s-max must be at least 1".into()));
    }
    common.sampling().cells()?;
    let blocks: Vec<Vec<TableRow>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| block(n, s_max.unwrap_or(e_star(n) + 1), methods, common, cap))
        .collect::<Result<_, _>>()?;
    let rows: Vec<TableRow> = blocks.into_iter().flatten().collect();
    let matches = rows.iter().all(|r| r.matches);
    let defective: Vec<String> = rows.iter().filter(|r| r.defect > 0).map(|r| format!("({}, {})", r.n, r.s)).collect();
    let summary = format!(
        "{} rows, defective: {}, {}",
        rows.len(),
        if defective.is_empty() { "none".to_string() } else { defective.join(" ") },
        if matches { "all rows match" } else { "MISMATCH" }
    );
    let data = render_rows(common, &rows)?;
    Ok(Report { data, matches, summary: Some(summary) })
}

#[derive(Serialize)]
struct TableJson<'a> {
    primes: Vec<u64>,
    trials: u32,
    seed: u64,
    rows: &'a [TableRow],
}

fn render_rows(common: &Common, rows: &[TableRow]) -> Result<String, CliError> {
    match common.format {
        Format::Json => {
            json_sorted(&TableJson { primes: common.primes(), trials: common.trials, seed: common.seed().0, rows })
        }
        Format::Csv => {
            let mut header = CSV_COLUMNS.to_vec();
            if common.timings {
                header.push("runtime_ms");
            }
            csv_table(&header, &rows.iter().map(TableRow::csv).collect::<Vec<_>>())
        }
        Format::Text => {
            let mut out = format!(
                "{:>3} {:>5} {:>9} {:>9} {:>6}  {:<6} {:>11}  methods\n",
                "n", "s", "expected", "observed", "defect", "match", "cells"
            );
            for r in rows {
                out.push_str(&format!(
                    "{:>3} {:>5} {:>9} {:>9} {:>6}  {:<6} {:>5}/{:<5}  {}",
                    r.n,
                    r.s,
                    r.expected,
                    r.observed,
                    r.defect,
                    if r.matches { "yes" } else { "NO" },
                    r.cells_agreeing,
                    r.cells,
                    r.methods.join(",")
                ));
                if let Some(ms) = r.runtime_ms {
                    out.push_str(&format!("  {ms} ms"));
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct SecdimJson {
    #[serde(flatten)]
    report: DimensionReport,
    expected_defect: u64,
    matches: bool,
    multigraded_ideal_dim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<u128>,
}

pub fn secdim(common: &Common, n: u32, s: u32) -> Result<Report, CliError> {
    let start = Instant::now();
    let problem = SecantProblem::new(n, s)?;
    let report = secant_dim_sample(problem, &common.primes(), common.trials as usize, common.seed())?;
    let report = escalate(report, common)?;
    let mut row = row_from(&report);
    let runtime = common.timings.then(|| start.elapsed().as_millis());
    row.runtime_ms = runtime;
    let summary = format!(
        "sigma_{s} of (P^1)^{n}: observed {}, expected {}, defect {} ({})",
        report.observed,
        report.expected,
        report.defect,
        if row.matches { "matches" } else { "MISMATCH" }
    );
    let data = match common.format {
        Format::Json => json_sorted(&SecdimJson {
            multigraded_ideal_dim: report.multigraded_ideal_dim(),
            expected_defect: row.expected_defect,
            matches: row.matches,
            report: report.clone(),
            runtime_ms: runtime,
        })?,
        Format::Csv => render_rows(common, std::slice::from_ref(&row))?,
        Format::Text => {
            let mut out = format!("sigma_{s} of (P^1)^{n} in P^{}\n", problem.ambient_dim());
            out.push_str(&format!("expected  {}\n", report.expected));
            out.push_str(&format!("observed  {}\n", report.observed));
            out.push_str(&format!("defect    {}\n", report.defect));
            out.push_str(&format!("dim (I_Z)_(1,...,1)  {}\n", report.multigraded_ideal_dim()));
            out.push_str(&format!(
                "cells     {} agreeing of {} ({} primes x {} trials)\n",
                report.cells_agreeing,
                report.cells(),
                report.primes.len(),
                report.trials
            ));
            out.push_str(&format!("per-cell observations  {:?}\n", distinct(&report.cell_observed)));
            out.push_str(&format!("failure bound per cell  {:.3e}\n", report.failure_bound));
            out.push_str(&format!("matches expectation  {}\n", if row.matches { "yes" } else { "no" }));
            if let Some(ms) = runtime {
                out.push_str(&format!("runtime  {ms} ms\n"));
            }
            out
        }
    };
    Ok(Report { data, matches: row.matches, summary: Some(summary) })
}

/// Distinct values with their counts, ascending.
fn distinct(values: &[u64]) -> Vec<(u64, usize)> {
    let mut m = std::collections::BTreeMap::new();
    for &v in values {
        *m.entry(v).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_star_values() {
        assert_eq!(e_star(3), 2);
        assert_eq!(e_star(4), 4);
        assert_eq!(e_star(7), 16);
        assert_eq!(e_star(8), 29);
    }

    #[test]
    fn odd_branch_cases() {
        assert!(odd_branch(5, 5));
        assert!(odd_branch(8, 29));
        assert!(!odd_branch(8, 28));
        assert!(!odd_branch(7, 16));
        assert!(!odd_branch(4, 3));
    }
}
