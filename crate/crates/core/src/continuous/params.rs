use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dilation parameters `t`, `α` and `α_k..α_n` of the single-scale forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationParams {
    pub t: f64,
    pub alpha: f64,
    pub alphas: Vec<f64>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl DilationParams {
    pub fn new(t: f64, alpha: f64, alphas: Vec<f64>) -> Result<Self> {
        positive("t", t)?;
        positive("alpha", alpha)?;
        for &a in &alphas {
            positive("alpha_j", a)?;
        }
        Ok(Self { t, alpha, alphas })
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        Self::new(t, self.alpha, self.alphas.clone())
    }

    /// Smallest admissible `α`, `α_j` at step `k`: `2^{-(n-k+1)/2}`.
    pub fn min_dilation(n: usize, k: usize) -> f64 {
        2f64.powf(-((n - k + 1) as f64) / 2.0)
    }

    /// Checks `α, α_j >= 2^{-(n-k+1)/2}`.
    pub fn check_dilation_range(&self, n: usize, k: usize) -> Result<()> {
        if k > n {
            return Err(Error::InvalidParameter(format!("k={k} exceeds n={n}")));
        }
        let floor = Self::min_dilation(n, k) * (1.0 - 1e-12);
        if self.alpha < floor || self.alphas.iter().any(|&a| a < floor) {
            return Err(Error::InvalidParameter(format!(
                "dilations must be at least 2^(-{}/2) = {}",
                n - k + 1,
                Self::min_dilation(n, k)
            )));
        }
        Ok(())
    }
}

/// Discretization settings for the continuous forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-extent `A` of the sampling box `[-A, A]^n`.
    pub extent: f64,
    /// Grid spacing `δ`.
    pub spacing: f64,
    /// Log-uniform `t` nodes per octave for the smooth form.
    pub t_nodes_per_octave: usize,
    /// Gauss-Legendre panels per octave of `log |x|` for the truncated form.
    pub log_panels_per_octave: usize,
    pub gauss_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            extent: 6.0,
            spacing: 0.09375,
            t_nodes_per_octave: 32,
            log_panels_per_octave: 4,
            gauss_order: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        positive("extent", self.extent)?;
        positive("spacing", self.spacing)?;
        crate::numerics::grid::points_per_axis(self.extent, self.spacing)?;
        if self.t_nodes_per_octave == 0 || self.log_panels_per_octave == 0 || self.gauss_order == 0 {
            return Err(Error::InvalidParameter("node counts must be at least 1".into()));
        }
        Ok(())
    }
}
