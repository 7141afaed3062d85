//! Analytic test-function descriptors and their grid samples.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{GridSampledFunction, LpExponent};

/// `a · Π_j exp(-π ((x_j - c_j) / w_j)²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub width: Vec<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl GaussianBump {
    pub fn new(center: Vec<f64>, width: Vec<f64>, amplitude: f64) -> Result<Self> {
        let b = Self {
            center,
            width,
            amplitude,
        };
        b.validate()?;
        Ok(b)
    }

    /// Isotropic standard bump `e^{-π|x|²}` in `dimension` variables.
    pub fn standard(dimension: usize) -> Self {
        Self {
            center: vec![0.0; dimension],
            width: vec![1.0; dimension],
            amplitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.center.is_empty() || self.center.len() != self.width.len() {
            return Err(Error::Shape(format!(
                "bump has {} centre coordinates and {} widths",
                self.center.len(),
                self.width.len()
            )));
        }
        if self.width.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter("bump widths must be positive".into()));
        }
        if self.center.iter().any(|c| !c.is_finite()) || !self.amplitude.is_finite() {
            return Err(Error::InvalidParameter("bump parameters must be finite".into()));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut e = 0.0;
        for ((x, c), w) in x.iter().zip(&self.center).zip(&self.width) {
            let u = (x - c) / w;
            e += u * u;
        }
        self.amplitude * (-PI * e).exp()
    }

    /// Closed-form `L^p(R^n)` norm: `|a| Π_j (w_j / √p)^{1/p}`.
    pub fn lp_norm(&self, p: LpExponent) -> f64 {
        match p {
            LpExponent::Infinity => self.amplitude.abs(),
            LpExponent::Finite(p) => {
                self.amplitude.abs() * self.width.iter().map(|w| (w / p.sqrt()).powf(1.0 / p)).product::<f64>()
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            amplitude: self.amplitude * factor,
            ..self.clone()
        }
    }

    /// Centres uniform in `[-1, 1]`, widths uniform in `[0.6, 1.4]`, unit amplitude.
    pub fn random(dimension: usize, rng: &mut impl Rng) -> Self {
        Self {
            center: (0..dimension).map(|_| rng.random_range(-1.0..=1.0)).collect(),
            width: (0..dimension).map(|_| rng.random_range(0.6..=1.4)).collect(),
            amplitude: 1.0,
        }
    }
}

/// A function given either analytically or by samples. JSON forms:
/// `{"center":[..],"width":[..],"amplitude":..}`, `{"components":[bump, ..]}`,
/// or a sampled grid `{"dimension":..,"extent":..,"spacing":..,"values":[..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Bump(GaussianBump),
    Mixture { components: Vec<GaussianBump> },
    Sampled(GridSampledFunction),
}

impl FunctionSpec {
    pub fn dimension(&self) -> usize {
        match self {
            FunctionSpec::Bump(b) => b.dimension(),
            FunctionSpec::Mixture { components } => components.first().map_or(0, GaussianBump::dimension),
            FunctionSpec::Sampled(g) => g.dimension(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            FunctionSpec::Bump(b) => b.eval(x),
            FunctionSpec::Mixture { components } => components.iter().map(|b| b.eval(x)).sum(),
            FunctionSpec::Sampled(g) => g.eval(x),
        }
    }

    /// Samples on the grid `(A, δ)`; sampled specs must already live there.
    pub fn to_grid(&self, extent: f64, spacing: f64) -> Result<GridSampledFunction> {
        match self {
            FunctionSpec::Sampled(g) => {
                let target = GridSampledFunction::sample(g.dimension(), extent, spacing, |_| 0.0)?;
                if !g.same_grid(&target) {
                    return Err(Error::Shape(format!(
                        "sampled function lives on A={}, δ={}, expected A={extent}, δ={spacing}",
                        g.extent(),
                        g.spacing()
                    )));
                }
                Ok(g.clone())
            }
            FunctionSpec::Bump(b) => {
                b.validate()?;
                GridSampledFunction::sample(b.dimension(), extent, spacing, |x| b.eval(x))
            }
            FunctionSpec::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::Shape("mixture without components".into()));
                }
                let d = components[0].dimension();
                for c in components {
                    c.validate()?;
                    if c.dimension() != d {
                        return Err(Error::Shape("mixture components differ in dimension".into()));
                    }
                }
                GridSampledFunction::sample(d, extent, spacing, |x| self.eval(x))
            }
        }
    }
}
