//! Alternating slot-wise maximization of multilinear forms over products of
//! unit `L^p` balls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::continuous::LatticeForm;
use crate::dyadic::{eval_dyadic_form_dense, optimal_signs, slot_kernel};
use crate::error::{Error, Result};
use crate::numerics::{CellFunction, HoelderExponents, LpExponent};

/// A form that is multilinear in `slots()` sample vectors, possibly after
/// fixing auxiliary state with [`MultilinearForm::refresh`].
pub trait MultilinearForm {
    fn slots(&self) -> usize;
    fn slot_len(&self) -> usize;
    /// Measure of one sample cell, used for the `L^p` norms.
    fn cell_measure(&self) -> f64;
    fn value(&self, fs: &[Vec<f64>]) -> Result<f64>;
    /// `G` with `value = Σ G · fs[slot]` while the other slots are fixed.
    fn slot_kernel(&self, fs: &[Vec<f64>], slot: usize) -> Result<Vec<f64>>;
    /// Re-optimizes any auxiliary state for the current functions. The value
    /// must not decrease.
    fn refresh(&mut self, _fs: &[Vec<f64>]) -> Result<()> {
        Ok(())
    }
}

/// The dyadic form with coefficients chosen as the optimal signs of the
/// current functions, so its value after [`refresh`](MultilinearForm::refresh)
/// is the supremum over coefficients.
#[derive(Debug, Clone)]
pub struct DyadicSupForm {
    n: usize,
    side_exponent: u32,
    max_scale: u32,
    eps: Vec<Vec<f64>>,
}

impl DyadicSupForm {
    pub fn new(n: usize, side_exponent: u32, max_scale: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if max_scale == 0 || max_scale > side_exponent {
            return Err(Error::InvalidParameter(format!(
                "scale count m={max_scale} must lie in 1..=L={side_exponent}"
            )));
        }
        let eps = (1..=max_scale)
            .map(|l| vec![1.0; crate::dyadic::tuple_count(l, side_exponent, n)])
            .collect();
        Ok(Self {
            n,
            side_exponent,
            max_scale,
            eps,
        })
    }

    pub fn cells(&self, fs: &[Vec<f64>]) -> Result<Vec<CellFunction>> {
        fs.iter()
            .map(|v| CellFunction::from_values(self.n, self.side_exponent, v.clone()))
            .collect()
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.eps
    }
}

impl MultilinearForm for DyadicSupForm {
    fn slots(&self) -> usize {
        self.n + 1
    }

    fn slot_len(&self) -> usize {
        1 << (self.side_exponent as usize * self.n)
    }

    /// Cells are unit cubes.
    fn cell_measure(&self) -> f64 {
        1.0
    }

    fn value(&self, fs: &[Vec<f64>]) -> Result<f64> {
        eval_dyadic_form_dense(&self.cells(fs)?, &self.eps)
    }

    fn slot_kernel(&self, fs: &[Vec<f64>], slot: usize) -> Result<Vec<f64>> {
        slot_kernel(&self.cells(fs)?, &self.eps, slot)
    }

    fn refresh(&mut self, fs: &[Vec<f64>]) -> Result<()> {
        self.eps = optimal_signs(&self.cells(fs)?, self.max_scale)?;
        Ok(())
    }
}

impl MultilinearForm for LatticeForm {
    fn slots(&self) -> usize {
        self.n() + 1
    }

    fn slot_len(&self) -> usize {
        LatticeForm::slot_len(self)
    }

    fn cell_measure(&self) -> f64 {
        LatticeForm::cell_measure(self)
    }

    fn value(&self, fs: &[Vec<f64>]) -> Result<f64> {
        LatticeForm::value(self, fs)
    }

    fn slot_kernel(&self, fs: &[Vec<f64>], slot: usize) -> Result<Vec<f64>> {
        LatticeForm::slot_kernel(self, fs, slot)
    }
}

/// Stopping rule for [`alternating_maximize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximizeSettings {
    /// Maximum number of full cycles over the slots.
    pub max_iter: usize,
    /// Stop once a cycle changes the value by less than `tol` relatively.
    pub tol: f64,
}

impl Default for MaximizeSettings {
    fn default() -> Self {
        Self {
            max_iter: 50,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Maximizer {
    pub functions: Vec<Vec<f64>>,
    pub value: f64,
    /// Value after initialization, then after every slot update.
    pub trace: Vec<f64>,
    /// Completed cycles.
    pub cycles: usize,
    /// Set when some slot kernel vanished and the slot was left unchanged.
    pub stagnated: bool,
    /// Number of random initial functions that were zero and redrawn.
    pub reseeds: usize,
}

/// The unit-norm maximizer of `Σ G · F` over `‖F‖_p = 1`:
/// `sign(G) |G|^{1/(p-1)}` normalized, or `sign(G)` for `p = ∞`.
pub fn hoelder_extremal(g: &[f64], p: LpExponent, mu: f64) -> Option<Vec<f64>> {
    let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || !peak.is_finite() {
        return None;
    }
    let raw: Vec<f64> = match p {
        LpExponent::Infinity => g.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect(),
        LpExponent::Finite(p) => g
            .iter()
            .map(|&v| v.signum() * (v.abs() / peak).powf(1.0 / (p - 1.0)))
            .collect(),
    };
    let norm = p.norm_of(&raw, mu);
    Some(raw.into_iter().map(|v| v / norm).collect())
}

fn random_unit(len: usize, p: LpExponent, mu: f64, rng: &mut ChaCha8Rng, reseeds: &mut usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| StandardNormal.sample(rng)).collect();
        let norm = p.norm_of(&v, mu);
        if norm > 0.0 && norm.is_finite() {
            return v.into_iter().map(|x| x / norm).collect();
        }
        *reseeds += 1;
    }
}

/// Starts from seeded random unit-norm functions. See [`alternating_maximize_from`].
pub fn alternating_maximize<F: MultilinearForm + ?Sized>(
    form: &mut F,
    exps: &HoelderExponents,
    settings: &MaximizeSettings,
    seed: u64,
) -> Result<Maximizer> {
    check_exps(form, exps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reseeds = 0;
    let mu = form.cell_measure();
    let init: Vec<Vec<f64>> = (0..form.slots())
        .map(|i| random_unit(form.slot_len(), exps.get(i), mu, &mut rng, &mut reseeds))
        .collect();
    let mut out = alternating_maximize_from(form, exps, settings, init, seed)?;
    out.reseeds += reseeds;
    Ok(out)
}

fn check_exps<F: MultilinearForm + ?Sized>(form: &F, exps: &HoelderExponents) -> Result<()> {
    if exps.len() != form.slots() {
        return Err(Error::Shape(format!(
            "{} exponents for a form with {} slots",
            exps.len(),
            form.slots()
        )));
    }
    Ok(())
}

/// Cyclic Hölder-extremal slot updates from `init`, which is rescaled to
/// unit norm. Zero initial functions are redrawn from `seed`. Each update is
/// the exact maximizer in its slot, so the trace is nondecreasing.
pub fn alternating_maximize_from<F: MultilinearForm + ?Sized>(
    form: &mut F,
    exps: &HoelderExponents,
    settings: &MaximizeSettings,
    init: Vec<Vec<f64>>,
    seed: u64,
) -> Result<Maximizer> {
    check_exps(form, exps)?;
    if settings.max_iter == 0 || !(settings.tol >= 0.0) {
        return Err(Error::InvalidParameter("need max_iter >= 1 and tol >= 0".into()));
    }
    if init.len() != form.slots() || init.iter().any(|f| f.len() != form.slot_len()) {
        return Err(Error::Shape(format!(
            "initial tuple must have {} slots of {} samples",
            form.slots(),
            form.slot_len()
        )));
    }
    let mu = form.cell_measure();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut reseeds = 0;
    let mut fs = Vec::with_capacity(init.len());
    for (i, f) in init.into_iter().enumerate() {
        let norm = exps.get(i).norm_of(&f, mu);
        if norm > 0.0 && norm.is_finite() {
            fs.push(f.into_iter().map(|x| x / norm).collect());
        } else {
            reseeds += 1;
            fs.push(random_unit(form.slot_len(), exps.get(i), mu, &mut rng, &mut reseeds));
        }
    }

    form.refresh(&fs)?;
    let mut value = form.value(&fs)?;
    let mut trace = vec![value];
    let mut stagnated = false;
    let mut cycles = 0;
    for _ in 0..settings.max_iter {
        let start = value;
        for slot in 0..form.slots() {
            let g = form.slot_kernel(&fs, slot)?;
            match hoelder_extremal(&g, exps.get(slot), mu) {
                Some(f) => fs[slot] = f,
                None => stagnated = true,
            }
            form.refresh(&fs)?;
            value = form.value(&fs)?;
            trace.push(value);
        }
        cycles += 1;
        if (value - start).abs() <= settings.tol * value.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(Maximizer {
        functions: fs,
        value,
        trace,
        cycles,
        stagnated,
        reseeds,
    })
}
