use serde::{Deserialize, Serialize};

use super::conditions::ideal_dim_at;
use super::scheme::{PointTag, ProjPoint, SchemeSpec};
use crate::error::{Error, Result};
use crate::exactla::{EchelonBasis, PrimeField, SampleRng, Sampling};
use crate::segre::{tangent_rows, FactorPoint, MAX_MATERIALIZED_FACTORS};

/// `(n-1)Q_1 + ⋯ + (n-1)Q_n` at the coordinate points `e_1, …, e_n` of
/// `P^n`, plus a double point at each of `points`. `e_0` is left free.
pub fn fatpoint_scheme(field: PrimeField, n: usize, points: &[Vec<u32>]) -> Result<SchemeSpec> {
    if n < 2 {
        return Err(Error::InvalidParameter("the transfer needs n >= 2".into()));
    }
    let mut spec = SchemeSpec::new(field, n);
    for i in 1..=n {
        spec.add_coordinate_point(i, n as u32 - 1)?;
    }
    for p in points {
        spec.add_point(ProjPoint::new(field, p.clone(), PointTag::Generic)?, 2)?;
    }
    Ok(spec)
}

/// The scheme `W` whose degree-`n` forms compute `σ_s(V_n)`, with `s`
/// generic double points.
pub fn segre_to_fatpoints(field: PrimeField, n: usize, s: usize, rng: &mut SampleRng) -> Result<SchemeSpec> {
    let pts: Vec<Vec<u32>> = (0..s).map(|_| ProjPoint::generic(field, n, rng).coords().to_vec()).collect();
    fatpoint_scheme(field, n, &pts)
}

/// One sample of the transfer: both sides at the same points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferSample {
    pub prime: u64,
    pub trial: usize,
    /// `2^n` minus the rank of the stacked tangent rows.
    pub multigraded: u64,
    /// `dim (I_W)_n` with the charted points.
    pub projective: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub n: u32,
    pub s: u32,
    pub samples: Vec<TransferSample>,
}

impl TransferReport {
    /// Both sides agree in every sample.
    pub fn consistent(&self) -> bool {
        self.samples.iter().all(|s| s.multigraded == s.projective)
    }
}

/// Compares `dim (I_Z)_{(1,…,1)}` on `(P^1)^n` with `dim (I_W)_n` on `P^n`
/// for the same sampled points, carried over by the chart map. Points
/// outside the chart `a_1 ⋯ a_n ≠ 0` are never drawn.
pub fn transfer_consistency(n: u32, s: u32, sampling: &Sampling) -> Result<TransferReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("the transfer needs n >= 2".into()));
    }
    if n > MAX_MATERIALIZED_FACTORS {
        return Err(Error::Resource(format!("n = {n} is too large to materialize")));
    }
    let mut samples = Vec::new();
    for (field, trial, mut rng) in sampling.cells()? {
        let pts: Vec<FactorPoint> = (0..s).map(|_| FactorPoint::random_in_chart(field, n as usize, &mut rng)).collect();
        let mut basis = EchelonBasis::new(field, 1 << n);
        for p in &pts {
            basis.push_block(&tangent_rows(p));
        }
        let multigraded = (1u64 << n) - basis.rank() as u64;
        let charted: Vec<Vec<u32>> = pts.iter().map(|p| p.chart_image().expect("in chart")).collect();
        let spec = fatpoint_scheme(field, n as usize, &charted)?;
        let projective = ideal_dim_at(&spec, n)?;
        samples.push(TransferSample { prime: field.modulus(), trial, multigraded, projective });
    }
    Ok(TransferReport { n, s, samples })
}
