//! Uniformly sampled surrogates of Schwartz functions on `[-A, A]^n`.

use serde::{Deserialize, Serialize};

use super::norm::{LpExponent, LpNormed};
use crate::error::{Error, Result};

/// Default relative tail threshold: boundary samples must be below this
/// fraction of the peak magnitude.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-12;

/// Largest supported number of samples per axis.
pub const MAX_POINTS_PER_AXIS: usize = 1024;

/// Samples of a rapidly decaying function at the cell centres
/// `-A + (j + 1/2) δ`, `j = 0..N-1`, `N = 2A/δ`, on each axis.
///
/// Off-grid values are obtained by multilinear interpolation between centres,
/// with the function continued by zero beyond the outermost centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridSampledFunction {
    dimension: usize,
    extent: f64,
    spacing: f64,
    points: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    dimension: usize,
    extent: f64,
    spacing: f64,
    values: Vec<f64>,
}

impl TryFrom<GridRepr> for GridSampledFunction {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        GridSampledFunction::from_values(r.dimension, r.extent, r.spacing, r.values)
    }
}

impl From<GridSampledFunction> for GridRepr {
    fn from(g: GridSampledFunction) -> Self {
        GridRepr {
            dimension: g.dimension,
            extent: g.extent,
            spacing: g.spacing,
            values: g.values,
        }
    }
}

/// Validates `(A, δ)` and returns the number of samples per axis.
pub fn points_per_axis(extent: f64, spacing: f64) -> Result<usize> {
    if !(extent > 0.0 && extent.is_finite()) || !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "grid needs positive extent and spacing, got A={extent}, δ={spacing}"
        )));
    }
    let ratio = 2.0 * extent / spacing;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * ratio.max(1.0) || n < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "spacing {spacing} does not divide 2A = {}",
            2.0 * extent
        )));
    }
    let n = n as usize;
    if n > MAX_POINTS_PER_AXIS {
        return Err(Error::InvalidParameter(format!(
            "{n} samples per axis exceeds the supported {MAX_POINTS_PER_AXIS}"
        )));
    }
    Ok(n)
}

impl GridSampledFunction {
    pub fn from_values(dimension: usize, extent: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        Self::with_tail_threshold(dimension, extent, spacing, values, DEFAULT_TAIL_THRESHOLD)
    }

    pub fn with_tail_threshold(
        dimension: usize,
        extent: f64,
        spacing: f64,
        values: Vec<f64>,
        tail_threshold: f64,
    ) -> Result<Self> {
        if dimension == 0 || dimension > 4 {
            return Err(Error::Shape(format!(
                "grid functions support dimensions 1..=4, got {dimension}"
            )));
        }
        let points = points_per_axis(extent, spacing)?;
        let expected = points.pow(dimension as u32);
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} samples ({points}^{dimension}), got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("sample {pos} is not finite")));
        }
        let g = Self {
            dimension,
            extent,
            spacing,
            points,
            values,
        };
        let peak = g.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tail = g.boundary_max();
        if tail > tail_threshold * peak {
            return Err(Error::InvalidParameter(format!(
                "boundary samples reach {tail:e}, above {tail_threshold:e} of the peak {peak:e}; enlarge the extent"
            )));
        }
        Ok(g)
    }

    /// Samples `f` at the grid centres.
    pub fn sample(
        dimension: usize,
        extent: f64,
        spacing: f64,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let points = points_per_axis(extent, spacing)?;
        if dimension == 0 || dimension > 4 {
            return Err(Error::Shape(format!(
                "grid functions support dimensions 1..=4, got {dimension}"
            )));
        }
        let total = points.pow(dimension as u32);
        let mut coords = vec![0.0; dimension];
        let mut values = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            for c in coords.iter_mut().rev() {
                *c = -extent + ((rem % points) as f64 + 0.5) * spacing;
                rem /= points;
            }
            values.push(f(&coords));
        }
        Self::from_values(dimension, extent, spacing, values)
    }

    fn boundary_max(&self) -> f64 {
        let n = self.points;
        let mut m = 0.0f64;
        for (flat, v) in self.values.iter().enumerate() {
            let mut rem = flat;
            let mut on_boundary = false;
            for _ in 0..self.dimension {
                let j = rem % n;
                rem /= n;
                if j == 0 || j == n - 1 {
                    on_boundary = true;
                    break;
                }
            }
            if on_boundary {
                m = m.max(v.abs());
            }
        }
        m
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn extent(&self) -> f64 {
        self.extent
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Samples per axis.
    #[inline]
    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coordinate of the `j`-th centre on each axis.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        -self.extent + (j as f64 + 0.5) * self.spacing
    }

    /// Volume element `δ^n` of the product midpoint rule.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dimension as i32)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.points == other.points
            && (self.extent - other.extent).abs() <= 1e-12 * self.extent
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
    }

    /// Midpoint-rule integral.
    pub fn integral(&self) -> f64 {
        crate::numerics::sum::pairwise_sum(&self.values) * self.cell_volume()
    }

    /// Multilinear interpolation at an arbitrary point.
    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.dimension);
        let n = self.points as isize;
        let mut base = [0isize; 4];
        let mut frac = [0.0f64; 4];
        for (axis, &x) in point.iter().enumerate() {
            let u = (x + self.extent) / self.spacing - 0.5;
            let fl = u.floor();
            base[axis] = fl as isize;
            frac[axis] = u - fl;
        }
        let mut total = 0.0;
        for corner in 0..(1usize << self.dimension) {
            let mut weight = 1.0;
            let mut flat = 0usize;
            let mut inside = true;
            for axis in 0..self.dimension {
                let up = (corner >> (self.dimension - 1 - axis)) & 1;
                let j = base[axis] + up as isize;
                if j < 0 || j >= n {
                    inside = false;
                    break;
                }
                weight *= if up == 1 { frac[axis] } else { 1.0 - frac[axis] };
                flat = flat * self.points + j as usize;
            }
            if inside && weight != 0.0 {
                total += weight * self.values[flat];
            }
        }
        total
    }

    /// The same samples reinterpreted on the grid dilated by `lambda`, i.e. the
    /// function `x ↦ F(x / λ)`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        Self::from_values(
            self.dimension,
            self.extent * lambda,
            self.spacing * lambda,
            self.values.clone(),
        )
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Pointwise linear combination `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::Shape("linear combination of functions on different grids".into()));
        }
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl LpNormed for GridSampledFunction {
    /// Riemann-sum norm with cell volume `δ^n`.
    fn lp_norm(&self, p: LpExponent) -> f64 {
        p.norm_of(&self.values, self.cell_volume())
    }

    fn scaled(&self, factor: f64) -> Self {
        self.map_values(|v| v * factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(x: &[f64]) -> f64 {
        x.iter().map(|t| (-std::f64::consts::PI * t * t).exp()).product()
    }

    #[test]
    fn grid_validation() {
        assert_eq!(points_per_axis(4.0, 0.5).unwrap(), 16);
        assert!(points_per_axis(4.0, 0.3).is_err());
        assert!(points_per_axis(-1.0, 0.5).is_err());
        assert!(GridSampledFunction::sample(1, 1.0, 0.25, |_| 1.0).is_err(), "tails not decayed");
    }

    #[test]
    fn gaussian_mass_and_norms() {
        let g = GridSampledFunction::sample(2, 6.0, 0.125, bump).unwrap();
        assert!((g.integral() - 1.0).abs() < 1e-12);
        // ‖e^{-π|x|²}‖_2 on R² is (1/2)^{1/2}
        let l2 = g.lp_norm(LpExponent::Finite(2.0));
        assert!((l2 - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((g.lp_norm(LpExponent::Infinity) - bump(&[0.0625, 0.0625])).abs() < 1e-15);
    }

    #[test]
    fn interpolation_reproduces_nodes_and_is_linear_between() {
        let g = GridSampledFunction::sample(2, 6.0, 0.5, bump).unwrap();
        let (x, y) = (g.node(10), g.node(13));
        assert_eq!(g.eval(&[x, y]), bump(&[x, y]));
        let mid = g.eval(&[x + 0.25, y]);
        let expect = 0.5 * (bump(&[x, y]) + bump(&[x + 0.5, y]));
        assert!((mid - expect).abs() < 1e-15);
        assert_eq!(g.eval(&[100.0, 0.0]), 0.0);
    }

    #[test]
    fn json_round_trip() {
        let g = GridSampledFunction::sample(1, 6.0, 0.5, bump).unwrap();
        let back = GridSampledFunction::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(g.to_json().unwrap().starts_with(r#"{"dimension":1,"extent":6.0,"spacing":0.5,"values":["#));
    }
}
