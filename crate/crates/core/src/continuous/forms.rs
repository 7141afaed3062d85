//! Quadrature for the truncated simplex form
//! `Λ_{r,R} = ∫ Π_i F_i(x_{-i}) 1_{r<|x_0+…+x_n|<=R} / (x_0+…+x_n) dx`,
//! the smooth form `∫_r^R ∫ Π_i F_i(x_{-i}) h_t(x_0+…+x_n) dx dt/t`, and a
//! lattice discretization used by the maximization sweeps.
//!
//! Both quadrature forms go through the marginal
//! `P(x) = ∫ F_0(x_1..x_n) Π_{i>=1} F_i(x - x_1 - … - x_n, x_1..x̂_i..x_n) dx_1..dx_n`,
//! so that `Λ = ∫ K(x) P(x) dx` for the respective kernel `K`.

use rayon::prelude::*;

use super::kernels::{dilate, gaussian_deriv, truncated_cell_average};
use super::params::QuadratureSpec;
use crate::error::{Error, Result};
use crate::numerics::quad::CompositeGauss;
use crate::numerics::sum::{pairwise_sum, PairwiseAccumulator};
use crate::numerics::{GridSampledFunction, TruncationRange};

/// Largest degree `n` accepted by the quadrature forms.
pub const MAX_CONTINUOUS_DEGREE: usize = 3;

/// Largest grid accepted by the continuous forms.
pub const MAX_CONTINUOUS_POINTS: usize = 128;

/// Checks that `fs` are `n+1` functions of `n` variables on one grid.
pub fn check_grid_tuple(fs: &[GridSampledFunction]) -> Result<usize> {
    if fs.len() < 2 {
        return Err(Error::Shape(format!("need at least 2 functions, got {}", fs.len())));
    }
    let n = fs.len() - 1;
    if n > MAX_CONTINUOUS_DEGREE {
        return Err(Error::Unsupported(format!(
            "continuous forms are limited to n <= {MAX_CONTINUOUS_DEGREE}, got n={n}"
        )));
    }
    for (i, f) in fs.iter().enumerate() {
        if f.dimension() != n {
            return Err(Error::Shape(format!("F_{i} has dimension {}, expected {n}", f.dimension())));
        }
        if !f.same_grid(&fs[0]) {
            return Err(Error::Shape(format!("F_{i} is sampled on a different grid than F_0")));
        }
    }
    if fs[0].points() > MAX_CONTINUOUS_POINTS {
        return Err(Error::Unsupported(format!(
            "{} samples per axis exceed the supported {MAX_CONTINUOUS_POINTS}",
            fs[0].points()
        )));
    }
    Ok(n)
}

/// The marginal `P(x)` of a sampled tuple. The variables `x_1..x_n` run over
/// grid nodes, so only the first argument of `F_1..F_n` is interpolated.
pub struct Marginal<'a> {
    fs: &'a [GridSampledFunction],
    n: usize,
    points: usize,
    /// Per `F_i` (`i >= 1`) and per `x_j` (`j >= 1`): stride of `x_j`, 0 for `j = i`.
    strides: Vec<Vec<usize>>,
    lead_stride: usize,
}

impl<'a> Marginal<'a> {
    pub fn new(fs: &'a [GridSampledFunction]) -> Result<Self> {
        let n = check_grid_tuple(fs)?;
        let points = fs[0].points();
        let stride = |pos: usize| points.pow((n - 1 - pos) as u32);
        let strides = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| match j.cmp(&i) {
                        std::cmp::Ordering::Less => stride(j),
                        std::cmp::Ordering::Equal => 0,
                        std::cmp::Ordering::Greater => stride(j - 1),
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            fs,
            n,
            points,
            strides,
            lead_stride: stride(0),
        })
    }

    /// `P` vanishes for `|x|` beyond this.
    pub fn support_radius(&self) -> f64 {
        (self.n + 1) as f64 * self.fs[0].extent()
    }

    pub fn at(&self, x: f64) -> f64 {
        let grid = &self.fs[0];
        let (n, big_n) = (self.n, self.points);
        let base = (x + (n + 1) as f64 * grid.extent()) / grid.spacing() - (n + 1) as f64 / 2.0;
        let fl = base.floor();
        let w = base - fl;
        let b0 = fl as i64;
        let total = big_n.pow(n as u32);
        let mut coords = [0usize; MAX_CONTINUOUS_DEGREE];
        let mut offsets = [0usize; MAX_CONTINUOUS_DEGREE];
        let mut sum_coords = 0usize;
        let mut acc = PairwiseAccumulator::new();
        let f0 = self.fs[0].values();
        for (flat, &first) in f0.iter().enumerate().take(total) {
            if flat > 0 {
                // odometer step, last coordinate fastest
                let mut j = n - 1;
                loop {
                    coords[j] += 1;
                    sum_coords += 1;
                    for (i, off) in offsets.iter_mut().enumerate().take(n) {
                        *off += self.strides[i][j];
                    }
                    if coords[j] < big_n {
                        break;
                    }
                    sum_coords -= big_n;
                    for (i, off) in offsets.iter_mut().enumerate().take(n) {
                        *off -= big_n * self.strides[i][j];
                    }
                    coords[j] = 0;
                    j -= 1;
                }
            }
            let i0 = b0 - sum_coords as i64;
            if i0 < -1 || i0 >= big_n as i64 {
                continue;
            }
            let mut prod = first;
            for i in 1..=n {
                let vals = self.fs[i].values();
                let mut v = 0.0;
                if i0 >= 0 {
                    v += (1.0 - w) * vals[i0 as usize * self.lead_stride + offsets[i - 1]];
                }
                if i0 + 1 < big_n as i64 {
                    v += w * vals[(i0 + 1) as usize * self.lead_stride + offsets[i - 1]];
                }
                prod *= v;
            }
            acc.push(prod);
        }
        acc.total() * grid.cell_volume()
    }
}

/// Quadrature value of `Λ_{r,R}`: `∫_{log r}^{log R} (P(e^u) - P(-e^u)) du` by
/// composite Gauss-Legendre in `u`.
pub fn eval_simplex_truncated(
    fs: &[GridSampledFunction],
    range: &TruncationRange,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let marginal = Marginal::new(fs)?;
    quad.validate()?;
    let lo = range.inner().ln();
    let hi = range.outer().min(marginal.support_radius()).ln();
    if hi <= lo {
        return Ok(0.0);
    }
    let octaves = (hi - lo) / std::f64::consts::LN_2;
    let panels = ((octaves * quad.log_panels_per_octave as f64).ceil() as usize).max(1);
    let rule = CompositeGauss::new(lo, hi, panels, quad.gauss_order);
    let terms: Vec<f64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights())
        .map(|(&u, &w)| {
            let x = u.exp();
            w * (marginal.at(x) - marginal.at(-x))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Spacing of the `x` grid used by [`eval_smooth_form`]: `δ/2^k <= min(δ/4, r/8)`.
fn smooth_grid_step(spacing: f64, r: f64) -> f64 {
    let target = (0.25 * spacing).min(0.125 * r);
    let mut step = spacing;
    while step > target {
        step *= 0.5;
    }
    step
}

/// Quadrature value of `∫_r^R ∫ Π F_i(x_{-i}) h_t(x_0+…+x_n) dx dt/t`.
///
/// `t` runs over log-uniform midpoints, `quad.t_nodes_per_octave` per octave;
/// `∫ P h_t` is a trapezoid sum on a uniform grid fine enough for `h_r`.
pub fn eval_smooth_form(fs: &[GridSampledFunction], range: &TruncationRange, quad: &QuadratureSpec) -> Result<f64> {
    let marginal = Marginal::new(fs)?;
    quad.validate()?;
    if range.inner() == range.outer() {
        return Ok(0.0);
    }
    let step = smooth_grid_step(fs[0].spacing(), range.inner());
    let half = (marginal.support_radius() / step).ceil() as i64;
    let xs: Vec<f64> = (-half..=half).map(|j| j as f64 * step).collect();
    let p: Vec<f64> = xs.par_iter().map(|&x| marginal.at(x)).collect();
    let log_len = range.log_ratio();
    let octaves = log_len / std::f64::consts::LN_2;
    let nodes = ((octaves * quad.t_nodes_per_octave as f64).ceil() as usize).max(1);
    let dlog = log_len / nodes as f64;
    let per_t: Vec<f64> = (0..nodes)
        .into_par_iter()
        .map(|q| {
            let t = (range.inner().ln() + (q as f64 + 0.5) * dlog).exp();
            let terms: Vec<f64> = xs
                .iter()
                .zip(&p)
                .map(|(&x, &px)| px * dilate(gaussian_deriv, t, x).unwrap_or(0.0))
                .collect();
            pairwise_sum(&terms) * step * dlog
        })
        .collect();
    Ok(pairwise_sum(&per_t))
}

/// `Λ ≈ δ^{n+1} Σ_{a ∈ grid^{n+1}} Π_i F_i(a_{-i}) K_δ(a_0 + … + a_n)`, where
/// `K_δ` is the exact cell average of the truncated kernel. Multilinear in
/// plain sample vectors, which makes slot kernels cheap.
#[derive(Debug, Clone)]
pub struct LatticeForm {
    n: usize,
    points: usize,
    spacing: f64,
    /// `K_δ` at the node sum with index total `s`, times `δ^{n+1}`.
    kernel: Vec<f64>,
}

impl LatticeForm {
    pub fn new(n: usize, extent: f64, spacing: f64, range: &TruncationRange) -> Result<Self> {
        if n == 0 || n > MAX_CONTINUOUS_DEGREE {
            return Err(Error::Unsupported(format!("lattice form needs 1 <= n <= {MAX_CONTINUOUS_DEGREE}")));
        }
        let points = crate::numerics::grid::points_per_axis(extent, spacing)?;
        if points > MAX_CONTINUOUS_POINTS {
            return Err(Error::Unsupported(format!(
                "{points} samples per axis exceed the supported {MAX_CONTINUOUS_POINTS}"
            )));
        }
        let measure = spacing.powi(n as i32 + 1);
        let kernel = (0..=(n + 1) * (points - 1))
            .map(|s| {
                let x = -((n + 1) as f64) * extent + (s as f64 + (n + 1) as f64 / 2.0) * spacing;
                measure * truncated_cell_average(x, spacing, range)
            })
            .collect();
        Ok(Self {
            n,
            points,
            spacing,
            kernel,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Samples per slot, `N^n`.
    pub fn slot_len(&self) -> usize {
        self.points.pow(self.n as u32)
    }

    /// Cell measure `δ^n` of each slot.
    pub fn cell_measure(&self) -> f64 {
        self.spacing.powi(self.n as i32)
    }

    fn check(&self, fs: &[Vec<f64>]) -> Result<()> {
        if fs.len() != self.n + 1 || fs.iter().any(|f| f.len() != self.slot_len()) {
            return Err(Error::Shape(format!(
                "lattice form expects {} slots of {} samples",
                self.n + 1,
                self.slot_len()
            )));
        }
        Ok(())
    }

    /// Visits every node tuple `a ∈ [N]^{n+1}`, passing the flat index of each
    /// `F_i(a_{-i})` and the kernel weight.
    fn for_each(&self, mut visit: impl FnMut(&[usize], f64)) {
        let (n, big_n) = (self.n, self.points);
        let total = big_n.pow(n as u32 + 1);
        let mut digits = vec![0usize; n + 1];
        let mut flats = vec![0usize; n + 1];
        for code in 0..total {
            let mut rem = code;
            for d in digits.iter_mut().rev() {
                *d = rem % big_n;
                rem /= big_n;
            }
            let sum: usize = digits.iter().sum();
            for (i, flat) in flats.iter_mut().enumerate() {
                *flat = digits
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(0, |acc, (_, &d)| acc * big_n + d);
            }
            visit(&flats, self.kernel[sum]);
        }
    }

    pub fn value(&self, fs: &[Vec<f64>]) -> Result<f64> {
        self.check(fs)?;
        let mut acc = PairwiseAccumulator::new();
        self.for_each(|flats, k| {
            if k != 0.0 {
                let mut prod = k;
                for (f, &flat) in fs.iter().zip(flats) {
                    prod *= f[flat];
                }
                acc.push(prod);
            }
        });
        Ok(acc.total())
    }

    /// `G` with `value = Σ G · F_slot` when the other slots are fixed.
    pub fn slot_kernel(&self, fs: &[Vec<f64>], slot: usize) -> Result<Vec<f64>> {
        self.check(fs)?;
        if slot > self.n {
            return Err(Error::InvalidParameter(format!("slot {slot} out of 0..={}", self.n)));
        }
        let mut g = vec![0.0; self.slot_len()];
        self.for_each(|flats, k| {
            if k != 0.0 {
                let mut prod = k;
                for (i, (f, &flat)) in fs.iter().zip(flats).enumerate() {
                    if i != slot {
                        prod *= f[flat];
                    }
                }
                g[flats[slot]] += prod;
            }
        });
        Ok(g)
    }
}
