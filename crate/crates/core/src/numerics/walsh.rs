//! Walsh group arithmetic, dyadic intervals and L^∞-normalized Haar functions.
//!
//! Dyadic points are handled at unit-cell resolution: a cell is identified by
//! its integer left endpoint `c` and stands for `[c, c + 1)`. Every Haar
//! function at scale `l >= 1` is constant on unit cells, so all integrals
//! against them reduce to finite sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Carry-free binary addition (the Walsh group law on nonnegative integers).
#[inline]
pub fn walsh_add(a: u64, b: u64) -> u64 {
    a ^ b
}

/// The dyadic interval `[2^scale * index, 2^scale * (index + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub scale: u32,
    pub index: u64,
}

impl DyadicInterval {
    pub fn new(scale: u32, index: u64) -> Result<Self> {
        if scale >= 63 || index.checked_shl(scale).is_none_or(|s| s >> scale != index) {
            return Err(Error::InvalidParameter(format!(
                "dyadic interval scale {scale} index {index} exceeds the supported range 2^63"
            )));
        }
        Ok(Self { scale, index })
    }

    /// The unique interval of the given scale containing the unit cell `cell`.
    #[inline]
    pub fn containing_cell(scale: u32, cell: u64) -> Self {
        Self {
            scale,
            index: cell >> scale,
        }
    }

    #[inline]
    pub fn left(&self) -> u64 {
        self.index << self.scale
    }

    #[inline]
    pub fn len(&self) -> u64 {
        1u64 << self.scale
    }

    /// Dyadic intervals are never empty; provided for clippy symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        let left = self.left() as f64;
        x >= left && x < left + self.len() as f64
    }

    #[inline]
    pub fn contains_cell(&self, cell: u64) -> bool {
        cell >> self.scale == self.index
    }

    /// Left (`side == 0`) or right (`side == 1`) child one scale down.
    ///
    /// Panics at scale 0, which has no dyadic children at integer resolution.
    #[inline]
    pub fn child(&self, side: u8) -> Self {
        assert!(self.scale > 0, "unit intervals have no integer-resolution children");
        Self {
            scale: self.scale - 1,
            index: (self.index << 1) | u64::from(side & 1),
        }
    }

    #[inline]
    pub fn parent(&self) -> Self {
        Self {
            scale: self.scale + 1,
            index: self.index >> 1,
        }
    }

    /// Haar sign on the unit cell `cell`: +1 on the left half, -1 on the right
    /// half, 0 outside. Only meaningful for `scale >= 1`.
    #[inline]
    pub fn haar_sign_at_cell(&self, cell: u64) -> i64 {
        if !self.contains_cell(cell) || self.scale == 0 {
            return 0;
        }
        if (cell >> (self.scale - 1)) & 1 == 0 {
            1
        } else {
            -1
        }
    }
}

/// `I1 ⊕ I2`: the same-scale interval whose left endpoint is the Walsh sum of
/// the two left endpoints.
pub fn interval_oplus(a: DyadicInterval, b: DyadicInterval) -> Result<DyadicInterval> {
    if a.scale != b.scale {
        return Err(Error::ScaleMismatch {
            left: a.scale,
            right: b.scale,
        });
    }
    Ok(DyadicInterval {
        scale: a.scale,
        index: walsh_add(a.index, b.index),
    })
}

/// L^∞-normalized Haar function of `interval` evaluated at a real point.
pub fn haar_eval(interval: DyadicInterval, x: f64) -> f64 {
    if !interval.contains(x) {
        return 0.0;
    }
    let mid = interval.left() as f64 + interval.len() as f64 / 2.0;
    if x < mid {
        1.0
    } else {
        -1.0
    }
}

/// Indicator of `interval` at a real point.
#[inline]
pub fn indicator_eval(interval: DyadicInterval, x: f64) -> f64 {
    if interval.contains(x) {
        1.0
    } else {
        0.0
    }
}

/// An (n+1)-tuple of same-scale dyadic intervals. Membership in the family
/// `I_l` additionally requires the indices to Walsh-sum to zero; see
/// [`IntervalTuple::is_walsh_balanced`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntervalTuple {
    scale: u32,
    indices: Vec<u64>,
}

impl IntervalTuple {
    pub fn new(scale: u32, indices: Vec<u64>) -> Result<Self> {
        if indices.len() < 2 {
            return Err(Error::Shape(format!(
                "an interval tuple needs at least two entries, got {}",
                indices.len()
            )));
        }
        Ok(Self { scale, indices })
    }

    /// Builds a member of `I_l` from the free indices of `I_1..I_n`; `I_0` is
    /// the Walsh sum of the others.
    pub fn balanced_from_free(scale: u32, free: &[u64]) -> Self {
        let first = free.iter().fold(0, |acc, &i| walsh_add(acc, i));
        let mut indices = Vec::with_capacity(free.len() + 1);
        indices.push(first);
        indices.extend_from_slice(free);
        Self { scale, indices }
    }

    pub fn from_intervals(intervals: &[DyadicInterval]) -> Result<Self> {
        let scale = intervals
            .first()
            .ok_or_else(|| Error::Shape("empty interval list".into()))?
            .scale;
        for iv in intervals {
            if iv.scale != scale {
                return Err(Error::ScaleMismatch {
                    left: scale,
                    right: iv.scale,
                });
            }
        }
        Self::new(scale, intervals.iter().map(|iv| iv.index).collect())
    }

    #[inline]
    pub fn scale(&self) -> u32 {
        self.scale
    }

    #[inline]
    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// Number of entries, `n + 1`.
    #[inline]
    pub fn arity(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn interval(&self, slot: usize) -> DyadicInterval {
        DyadicInterval {
            scale: self.scale,
            index: self.indices[slot],
        }
    }

    pub fn intervals(&self) -> impl Iterator<Item = DyadicInterval> + '_ {
        (0..self.arity()).map(move |i| self.interval(i))
    }

    /// True when `0 ∈ I_0 ⊕ ... ⊕ I_n`, i.e. the indices XOR to zero.
    pub fn is_walsh_balanced(&self) -> bool {
        self.indices.iter().fold(0, |acc, &i| walsh_add(acc, i)) == 0
    }

    /// The tuple of children `(I_0^{s_0}, ..., I_n^{s_n})` one scale down.
    pub fn children(&self, sides: &[u8]) -> Result<Self> {
        if sides.len() != self.arity() {
            return Err(Error::Shape(format!(
                "{} child selectors for a tuple of {} intervals",
                sides.len(),
                self.arity()
            )));
        }
        if self.scale == 0 {
            return Err(Error::InvalidParameter(
                "scale-0 intervals have no children at unit-cell resolution".into(),
            ));
        }
        Ok(Self {
            scale: self.scale - 1,
            indices: self
                .indices
                .iter()
                .zip(sides)
                .map(|(&i, &s)| (i << 1) | u64::from(s & 1))
                .collect(),
        })
    }

    /// Same tuple with entries permuted: entry `j` of the result is entry
    /// `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            scale: self.scale,
            indices: perm.iter().map(|&p| self.indices[p]).collect(),
        }
    }
}
