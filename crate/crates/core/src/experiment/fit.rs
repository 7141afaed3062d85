//! Least-squares growth exponents.

use serde::{Deserialize, Serialize};

use super::record::{ExperimentRecord, Model};
use crate::error::{Error, Result};

/// `1 - 2^{-n+1}`.
pub fn reference_exponent(n: usize) -> f64 {
    1.0 - 2f64.powi(1 - n as i32)
}

/// Fit of `log S = slope · log x + intercept`, where `x` is the record's
/// abscissa (`m`, or `log(R/r)` for continuous sweeps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub model: Model,
    pub n: usize,
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `log S`.
    pub residual: f64,
    pub reference_exponent: f64,
}

impl GrowthFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

pub fn fit_exponent(records: &[ExperimentRecord]) -> Result<GrowthFit> {
    let first = records
        .first()
        .ok_or_else(|| Error::InvalidParameter("fit needs at least 2 records, got 0".into()))?;
    if records.iter().any(|r| r.model != first.model || r.n != first.n) {
        return Err(Error::InvalidParameter("records mix models or degrees".into()));
    }
    let mut pts = Vec::with_capacity(records.len());
    for r in records {
        if !(r.s > 0.0 && r.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("nonpositive estimate S={} at abscissa {}", r.s, r.abscissa)));
        }
        if !(r.abscissa > 0.0 && r.abscissa.is_finite()) {
            return Err(Error::InvalidParameter(format!("abscissa must be positive, got {}", r.abscissa)));
        }
        pts.push((r.abscissa.ln(), r.s.ln()));
    }
    let distinct = {
        let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.len()
    };
    if distinct < 2 {
        return Err(Error::InvalidParameter(format!(
            "fit needs at least 2 distinct abscissae, got {distinct}"
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(GrowthFit {
        model: first.model,
        n: first.n,
        points: pts.len(),
        slope,
        intercept,
        residual: (sse / k).sqrt(),
        reference_exponent: reference_exponent(first.n),
    })
}
