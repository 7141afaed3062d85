//! Piecewise-constant functions on the unit cells of `[0, 2^L)^n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::norm::{LpExponent, LpNormed};
use crate::error::{Error, Result};

/// Largest number of cells a single function may hold (2^26 doubles, 512 MiB).
const MAX_CELLS_LOG2: u32 = 26;

/// Exact piecewise-constant function on the unit cells of `[0, 2^L)^n`.
///
/// Values are stored row-major: the last argument varies fastest. Any finite
/// linear combination of Haar functions at scales `1..=L` supported in the cube
/// is represented exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CellFunctionRepr", into = "CellFunctionRepr")]
pub struct CellFunction {
    dimension: usize,
    side_exponent: u32,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CellFunctionRepr {
    dimension: usize,
    side_exponent: u32,
    values: Vec<f64>,
}

impl TryFrom<CellFunctionRepr> for CellFunction {
    type Error = Error;

    fn try_from(r: CellFunctionRepr) -> Result<Self> {
        CellFunction::from_values(r.dimension, r.side_exponent, r.values)
    }
}

impl From<CellFunction> for CellFunctionRepr {
    fn from(f: CellFunction) -> Self {
        CellFunctionRepr {
            dimension: f.dimension,
            side_exponent: f.side_exponent,
            values: f.values,
        }
    }
}

fn check_shape(dimension: usize, side_exponent: u32) -> Result<usize> {
    if dimension == 0 {
        return Err(Error::Shape("cell functions need dimension >= 1".into()));
    }
    let bits = side_exponent as usize * dimension;
    if bits > MAX_CELLS_LOG2 as usize {
        return Err(Error::Shape(format!(
            "2^({side_exponent}*{dimension}) cells exceeds the supported 2^{MAX_CELLS_LOG2}"
        )));
    }
    Ok(1usize << bits)
}

impl CellFunction {
    pub fn zeros(dimension: usize, side_exponent: u32) -> Result<Self> {
        let len = check_shape(dimension, side_exponent)?;
        Ok(Self {
            dimension,
            side_exponent,
            values: vec![0.0; len],
        })
    }

    pub fn constant(dimension: usize, side_exponent: u32, value: f64) -> Result<Self> {
        let mut f = Self::zeros(dimension, side_exponent)?;
        f.values.iter_mut().for_each(|v| *v = value);
        Ok(f)
    }

    pub fn from_values(dimension: usize, side_exponent: u32, values: Vec<f64>) -> Result<Self> {
        let len = check_shape(dimension, side_exponent)?;
        if values.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} cell values for dimension {dimension} and side 2^{side_exponent}, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cell value at flat index {pos} is not finite"
            )));
        }
        Ok(Self {
            dimension,
            side_exponent,
            values,
        })
    }

    /// Builds a function by evaluating `f` at each cell's integer coordinates.
    pub fn from_fn(
        dimension: usize,
        side_exponent: u32,
        mut f: impl FnMut(&[u64]) -> f64,
    ) -> Result<Self> {
        let len = check_shape(dimension, side_exponent)?;
        let mut coords = vec![0u64; dimension];
        let mut values = Vec::with_capacity(len);
        for flat in 0..len {
            decode_into(flat, side_exponent, &mut coords);
            values.push(f(&coords));
        }
        Self::from_values(dimension, side_exponent, values)
    }

    /// Independent uniform values in `[-1, 1]`.
    pub fn random_uniform(dimension: usize, side_exponent: u32, rng: &mut impl Rng) -> Result<Self> {
        let len = check_shape(dimension, side_exponent)?;
        let values = (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect();
        Self::from_values(dimension, side_exponent, values)
    }

    /// Independent integer values in `[-bound, bound]`; products and sums of
    /// these stay exact in double precision for the sizes used here.
    pub fn random_integer(
        dimension: usize,
        side_exponent: u32,
        bound: i64,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let len = check_shape(dimension, side_exponent)?;
        let values = (0..len)
            .map(|_| rng.random_range(-bound..=bound) as f64)
            .collect();
        Self::from_values(dimension, side_exponent, values)
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn side_exponent(&self) -> u32 {
        self.side_exponent
    }

    /// Number of cells per axis, `2^L`.
    #[inline]
    pub fn side(&self) -> u64 {
        1u64 << self.side_exponent
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn flat_index(&self, coords: &[u64]) -> usize {
        debug_assert_eq!(coords.len(), self.dimension);
        coords
            .iter()
            .fold(0usize, |acc, &c| (acc << self.side_exponent) | c as usize)
    }

    #[inline]
    pub fn at(&self, coords: &[u64]) -> f64 {
        self.values[self.flat_index(coords)]
    }

    /// Value at a real point; zero outside the cube.
    pub fn eval(&self, point: &[f64]) -> f64 {
        let side = self.side() as f64;
        let mut flat = 0usize;
        for &x in point {
            if !(x >= 0.0 && x < side) {
                return 0.0;
            }
            flat = (flat << self.side_exponent) | x.floor() as usize;
        }
        self.values[flat]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn lp_norm_checked(&self, p: f64) -> Result<f64> {
        Ok(self.lp_norm(LpExponent::finite(p)?))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Decodes a row-major flat index into coordinates (last axis fastest).
pub(crate) fn decode_into(mut flat: usize, side_exponent: u32, coords: &mut [u64]) {
    let mask = (1usize << side_exponent) - 1;
    for c in coords.iter_mut().rev() {
        *c = (flat & mask) as u64;
        flat >>= side_exponent;
    }
}

impl LpNormed for CellFunction {
    /// Unit cell measure.
    fn lp_norm(&self, p: LpExponent) -> f64 {
        p.norm_of(&self.values, 1.0)
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            dimension: self.dimension,
            side_exponent: self.side_exponent,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}
