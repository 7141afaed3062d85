//! Lebesgue exponents, Hölder tuples and normalization of function tuples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const HOELDER_TOL: f64 = 1e-12;

/// A Lebesgue exponent `p ∈ [1, ∞]`. Infinity is an explicit variant so the
/// max-norm is computed exactly rather than as a large power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

impl LpExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        Ok(LpExponent::Finite(p))
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            LpExponent::Finite(p) => 1.0 / p,
            LpExponent::Infinity => 0.0,
        }
    }

    /// Norm of a sequence of cell values, each cell carrying measure `cell_measure`.
    pub fn norm_of(self, values: &[f64], cell_measure: f64) -> f64 {
        match self {
            LpExponent::Infinity => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            LpExponent::Finite(p) => {
                let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if peak == 0.0 {
                    return 0.0;
                }
                // scale by the peak so large p cannot overflow
                let sum = crate::numerics::sum::pairwise_sum_map(values, |v| (v.abs() / peak).powf(p));
                peak * (sum * cell_measure).powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for LpExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpExponent::Finite(p) => write!(f, "{p}"),
            LpExponent::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for LpExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(LpExponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("not an exponent: {other:?}")))?;
                LpExponent::finite(p)
            }
        }
    }
}

/// Exponents `p_0..p_n ∈ (1, ∞]` with `Σ 1/p_i = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoelderExponents(Vec<LpExponent>);

impl HoelderExponents {
    pub fn new(exps: Vec<LpExponent>) -> Result<Self> {
        if exps.len() < 2 {
            return Err(Error::Shape(format!(
                "need at least two exponents, got {}",
                exps.len()
            )));
        }
        for e in &exps {
            if let LpExponent::Finite(p) = *e {
                if p <= 1.0 {
                    return Err(Error::InvalidExponent(p));
                }
            }
        }
        let sum: f64 = exps.iter().map(|e| e.reciprocal()).sum();
        if (sum - 1.0).abs() > HOELDER_TOL {
            return Err(Error::HoelderScaling { sum });
        }
        Ok(Self(exps))
    }

    pub fn from_finite(ps: &[f64]) -> Result<Self> {
        Self::new(ps.iter().map(|&p| LpExponent::finite(p)).collect::<Result<_>>()?)
    }

    /// `(2^n, 2^n, 2^{n-1}, ..., 2)`, the exponents of the power-type bound.
    pub fn power_type(n: usize) -> Self {
        assert!(n >= 1);
        let mut exps = vec![LpExponent::Finite((1u64 << n) as f64)];
        for i in 1..=n {
            exps.push(LpExponent::Finite((1u64 << (n - i + 1)) as f64));
        }
        Self(exps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> LpExponent {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[LpExponent] {
        &self.0
    }
}

impl fmt::Display for HoelderExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Functions that carry an L^p norm and can be rescaled.
pub trait LpNormed: Sized {
    fn lp_norm(&self, p: LpExponent) -> f64;
    fn scaled(&self, factor: f64) -> Self;
}

/// Rescales every function of the tuple to unit `p_i`-norm, preserving signs.
pub fn normalize_tuple<F: LpNormed>(fs: &[F], exps: &HoelderExponents) -> Result<Vec<F>> {
    if fs.len() != exps.len() {
        return Err(Error::Shape(format!(
            "{} functions for {} exponents",
            fs.len(),
            exps.len()
        )));
    }
    fs.iter()
        .enumerate()
        .map(|(i, f)| {
            let norm = f.lp_norm(exps.get(i));
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::ZeroFunction { index: i });
            }
            Ok(f.scaled(1.0 / norm))
        })
        .collect()
}

/// Product of `‖F_i‖_{p_i}` over a tuple.
pub fn norm_product<F: LpNormed>(fs: &[F], exps: &HoelderExponents) -> f64 {
    fs.iter()
        .enumerate()
        .map(|(i, f)| f.lp_norm(exps.get(i)))
        .product()
}

/// Truncation parameters `0 < r <= R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRange {
    r: f64,
    #[serde(rename = "R")]
    big_r: f64,
}

impl TruncationRange {
    pub fn new(r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0) || !(big_r >= r) || !big_r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "truncation range requires 0 < r <= R, got r={r}, R={big_r}"
            )));
        }
        Ok(Self { r, big_r })
    }

    pub fn inner(&self) -> f64 {
        self.r
    }

    pub fn outer(&self) -> f64 {
        self.big_r
    }

    pub fn log_ratio(&self) -> f64 {
        (self.big_r / self.r).ln()
    }

    /// Simultaneous dilation `(λr, λR)`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        Self::new(self.r * lambda, self.big_r * lambda)
    }
}
