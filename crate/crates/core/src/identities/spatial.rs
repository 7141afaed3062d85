//! Spatial-side checks: pointwise domination of `h` by an average of Gaussian
//! dilates, the convolution identity for `h`, and the Fourier pair of `g`, `h`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::continuous::{dilate, gaussian, gaussian_deriv};
use crate::error::Result;
use crate::numerics::quad::adaptive_simpson_pieces;
use crate::numerics::sum::pairwise_sum;

/// `∫_1^∞ g_β(x) β^{-4} dβ = ∫_0^1 s³ e^{-πx²s²} ds`, by adaptive quadrature
/// after the further substitution `v = s √(πx²)`.
pub fn domination_denominator(x: f64) -> Result<f64> {
    let a = PI * x * x;
    if a == 0.0 {
        return Ok(0.25);
    }
    let b = a.sqrt();
    // ∫_0^b v³ e^{-v²} dv, at most 1/2; the integrand is below 1e-300 past v = 27
    let top = b.min(27.0);
    let mut breaks = vec![0.0];
    breaks.extend([0.5, 1.0, 2.0, 4.0, 8.0].into_iter().filter(|&p| p < top));
    breaks.push(top);
    let scale = (0.25 * top.powi(4)).min(0.5);
    let inner = adaptive_simpson_pieces(|v| v * v * v * (-v * v).exp(), &breaks, 1e-13 * scale)?.value;
    Ok(inner / (a * a))
}

/// `|h(x)| / ∫_1^∞ g_β(x) β^{-4} dβ`, formed in log space so the ratio stays
/// monotone where `h` is subnormal.
pub fn check_domination(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_h = (2.0 * PI * x.abs()).ln() - PI * x * x;
    Ok((log_h - domination_denominator(x)?.ln()).exp())
}

/// `|h(x) - √2 (h_s ∗ g_s)(x)|` with `s = 2^{-1/2}`; the convolution is a
/// trapezoid sum on `[-20, 20]` with step `1e-3`.
pub fn check_convolution(x: f64) -> Result<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let step = 1e-3;
    let count = 40_000usize;
    let mut terms = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let y = -20.0 + k as f64 * step;
        let w = if k == 0 || k == count { 0.5 } else { 1.0 };
        terms.push(w * dilate(gaussian_deriv, s, y)? * dilate(gaussian, s, x - y)?);
    }
    let conv = pairwise_sum(&terms) * step;
    Ok((gaussian_deriv(x) - SQRT_2 * conv).abs())
}

/// Transforms of `g` and `h` at `ξ` by adaptive quadrature on `[-8, 8]`.
pub fn transforms(xi: f64) -> Result<(Complex64, Complex64)> {
    let tol = 1e-13;
    let w = 2.0 * PI * xi;
    let breaks: Vec<f64> = (0..=32).map(|i| -8.0 + 0.5 * i as f64).collect();
    let q = |f: &dyn Fn(f64) -> f64| adaptive_simpson_pieces(f, &breaks, tol).map(|r| r.value);
    let g_re = q(&|x| gaussian(x) * (w * x).cos())?;
    let g_im = q(&|x| -gaussian(x) * (w * x).sin())?;
    let h_re = q(&|x| gaussian_deriv(x) * (w * x).cos())?;
    let h_im = q(&|x| -gaussian_deriv(x) * (w * x).sin())?;
    Ok((Complex64::new(g_re, g_im), Complex64::new(h_re, h_im)))
}

/// `(|ĝ(ξ) - e^{-πξ²}|, |ĥ(ξ) - 2πiξ e^{-πξ²}|)` with the transforms computed
/// by quadrature.
pub fn check_fourier_pair(xi: f64) -> Result<(f64, f64)> {
    let (g, h) = transforms(xi)?;
    let closed = (-PI * xi * xi).exp();
    Ok((
        (g - Complex64::new(closed, 0.0)).norm(),
        (h - Complex64::new(0.0, 2.0 * PI * xi * closed)).norm(),
    ))
}
