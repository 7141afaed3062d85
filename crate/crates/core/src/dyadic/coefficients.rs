use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numerics::IntervalTuple;

/// Coefficients `ε_{l, I_0..I_n}` with `|ε| <= 1`. Entries that were never set
/// read as the per-scale default, which is itself 0 unless configured.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientMap {
    entries: HashMap<(u32, IntervalTuple), f64>,
    scale_defaults: HashMap<u32, f64>,
}

fn check(scale: u32, value: f64) -> Result<()> {
    if !(value.abs() <= 1.0) {
        return Err(Error::CoefficientOutOfRange { scale, value });
    }
    Ok(())
}

impl CoefficientMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tuple-independent coefficients `ε_l` per scale.
    pub fn per_scale(values: &[(u32, f64)]) -> Result<Self> {
        let mut map = Self::new();
        for &(scale, v) in values {
            map.set_scale_default(scale, v)?;
        }
        Ok(map)
    }

    pub fn insert(&mut self, tuple: IntervalTuple, value: f64) -> Result<()> {
        check(tuple.scale(), value)?;
        self.entries.insert((tuple.scale(), tuple), value);
        Ok(())
    }

    pub fn set_scale_default(&mut self, scale: u32, value: f64) -> Result<()> {
        check(scale, value)?;
        self.scale_defaults.insert(scale, value);
        Ok(())
    }

    pub fn get(&self, tuple: &IntervalTuple) -> f64 {
        // HashMap lookup needs an owned key; tuples are small.
        match self.entries.get(&(tuple.scale(), tuple.clone())) {
            Some(&v) => v,
            None => self.scale_defaults.get(&tuple.scale()).copied().unwrap_or(0.0),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.scale_defaults.is_empty()
    }

    /// Coefficients for the tuples of one scale, in enumeration order.
    pub fn dense_for(&self, tuples: &[IntervalTuple]) -> Vec<f64> {
        tuples.iter().map(|t| self.get(t)).collect()
    }
}

/// `sign(v)` with `sign(0) = +1`.
#[inline]
pub fn sign_or_plus(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}
