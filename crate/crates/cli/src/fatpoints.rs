use std::path::Path;

use secant_core::fatpoints::{ideal_dim, SchemeFile};
use serde::Serialize;

use crate::args::{Common, Format};
use crate::output::{csv_flat, json_sorted, text_flat, Report};
use crate::CliError;

#[derive(Serialize)]
struct FatpointsOut {
    file: String,
    ambient: usize,
    degree: u32,
    dimension: u64,
    columns: usize,
    rows: usize,
    rank: usize,
    cells: Vec<u64>,
    samples: usize,
    primes: Vec<u64>,
    trials: u32,
    seed: u64,
}

pub fn fatpoints(common: &Common, file: &Path, degree: Option<u32>) -> Result<Report, CliError> {
    let text =
        std::fs::read_to_string(file).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let scheme = SchemeFile::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    let degree = degree.unwrap_or(scheme.degree);
    let sampling = common.sampling();
    let r = ideal_dim(|f, rng| scheme.realize(f, rng), degree, &sampling)?;
    let out = FatpointsOut {
        file: file.display().to_string(),
        ambient: scheme.ambient,
        degree,
        dimension: r.value,
        columns: r.columns,
        rows: r.rows,
        rank: r.rank,
        samples: r.cells.len(),
        cells: r.cells,
        primes: sampling.primes.clone(),
        trials: common.trials,
        seed: sampling.seed.0,
    };
    let summary = format!(
        "dim (I_X)_{degree} = {} ({} x {} conditions, rank {}, {} samples)",
        out.dimension, out.rows, out.columns, out.rank, out.samples
    );
    let data = match common.format {
        Format::Json => json_sorted(&out)?,
        Format::Csv => csv_flat(&out)?,
        Format::Text => text_flat(&out)?,
    };
    Ok(Report { data, matches: true, summary: Some(summary) })
}
