//! The Gaussian `g(x) = e^{-πx²}`, its derivative `h`, L¹-normalized dilates,
//! and the truncated and residual kernels.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::quad::adaptive_simpson;
use crate::numerics::TruncationRange;

#[inline]
pub fn gaussian(x: f64) -> f64 {
    (-PI * x * x).exp()
}

/// `h = g' = -2πx e^{-πx²}`.
#[inline]
pub fn gaussian_deriv(x: f64) -> f64 {
    -2.0 * PI * x * (-PI * x * x).exp()
}

/// `f_t(x) = t^{-1} f(x / t)`.
pub fn dilate(f: impl Fn(f64) -> f64, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("dilation parameter must be positive, got {t}")));
    }
    Ok(f(x / t) / t)
}

/// `g(x/R) - g(x/r)` without cancellation for small `x`.
#[inline]
pub fn gaussian_difference(x: f64, range: &TruncationRange) -> f64 {
    let (r, big_r) = (range.inner(), range.outer());
    let spread = PI * x * x * (1.0 / (r * r) - 1.0 / (big_r * big_r));
    if spread > 1.0 {
        return gaussian(x / big_r) - gaussian(x / r);
    }
    gaussian(x / r) * spread.exp_m1()
}

/// `1_{r < |x| <= R} / x`.
#[inline]
pub fn truncated_kernel(x: f64, range: &TruncationRange) -> f64 {
    let a = x.abs();
    if a > range.inner() && a <= range.outer() {
        1.0 / x
    } else {
        0.0
    }
}

/// The Gaussian-truncated kernel `(g(x/R) - g(x/r)) / x`, 0 at the origin.
#[inline]
pub fn smooth_kernel(x: f64, range: &TruncationRange) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        gaussian_difference(x, range) / x
    }
}

/// `φ(x) = [1_{r<|x|<=R} - (g(x/R) - g(x/r))] / x`, with `φ(0) = 0`.
pub fn residual_kernel_phi(x: f64, range: &TruncationRange) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    truncated_kernel(x, range) - smooth_kernel(x, range)
}

/// Mean of the truncated kernel over `[s - δ/2, s + δ/2]`.
pub fn truncated_cell_average(s: f64, spacing: f64, range: &TruncationRange) -> f64 {
    let positive = |lo: f64, hi: f64| {
        let a = lo.max(range.inner());
        let b = hi.min(range.outer());
        if b > a {
            (b / a).ln()
        } else {
            0.0
        }
    };
    let (lo, hi) = (s - 0.5 * spacing, s + 0.5 * spacing);
    (positive(lo, hi) - positive(-hi, -lo)) / spacing
}

/// `‖φ‖₁`. With `ρ = R/r` and `ψ = 1_{[-1,1]} - g`, `φ(x) = (ψ(x/R) - ψ(x/r))/x`
/// and `‖φ‖₁ = 2 ∫_0^∞ |ψ(u/ρ) - ψ(u)| du/u`, which has no sign change on
/// `(0,1)`, `(1,ρ)`, `(ρ,∞)`.
pub fn phi_l1(range: &TruncationRange, tol: f64) -> Result<f64> {
    let rho = range.outer() / range.inner();
    if rho == 1.0 {
        return Ok(0.0);
    }
    let unit = TruncationRange::new(1.0, rho)?;
    // On (0,1) the integrand is g(u/ρ) - g(u) > 0.
    let near = adaptive_simpson(|u| smooth_kernel(u, &unit), 0.0, 1.0, tol / 3.0)?.value;
    let middle = adaptive_simpson(
        |s: f64| {
            let u = s.exp();
            1.0 + gaussian(u) - gaussian(u / rho)
        },
        0.0,
        rho.ln(),
        tol / 3.0,
    )?
    .value;
    // g(u/ρ) is below 1e-130 past u = 10ρ.
    let far = adaptive_simpson(
        |s: f64| {
            let u = rho * s.exp();
            gaussian(u / rho) - gaussian(u)
        },
        0.0,
        10f64.ln(),
        tol / 3.0,
    )?
    .value;
    Ok(2.0 * (near + middle + far))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::{adaptive_simpson, adaptive_simpson_pieces};

    fn range(r: f64, big_r: f64) -> TruncationRange {
        TruncationRange::new(r, big_r).unwrap()
    }

    #[test]
    fn basic_values() {
        assert_eq!(gaussian(0.0), 1.0);
        assert_eq!(gaussian_deriv(0.0), 0.0);
        assert_eq!(dilate(gaussian, 2.0, 0.0).unwrap(), 0.5);
        assert!(dilate(gaussian, 0.0, 1.0).is_err());
        assert!(dilate(gaussian, -1.0, 1.0).is_err());
        let mass = adaptive_simpson(gaussian, -10.0, 10.0, 1e-13).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-10);
        let mean = adaptive_simpson(gaussian_deriv, -10.0, 10.0, 1e-13).unwrap().value;
        assert!(mean.abs() < 1e-10);
    }

    #[test]
    fn h_is_the_derivative_of_g() {
        for &x in &[-2.0, -0.3, 0.1, 0.7, 1.9] {
            let fd = (gaussian(x + 1e-6) - gaussian(x - 1e-6)) / 2e-6;
            assert!((fd - gaussian_deriv(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn phi_is_odd_and_vanishes_on_degenerate_range() {
        let rg = range(0.5, 3.0);
        for i in 0..200 {
            let x = -5.0 + 0.05 * i as f64 + 0.0123;
            assert_eq!(residual_kernel_phi(-x, &rg), -residual_kernel_phi(x, &rg));
        }
        let same = range(1.3, 1.3);
        for &x in &[0.2, 1.0, 1.3, 2.0] {
            assert_eq!(residual_kernel_phi(x, &same), 0.0);
        }
        assert_eq!(residual_kernel_phi(0.0, &rg), 0.0);
        // removable singularity: small |x| gives small φ
        assert!(residual_kernel_phi(1e-9, &rg).abs() < 1e-6);
    }

    #[test]
    fn phi_l1_pinned_values() {
        // 50-digit quadrature of the three-piece integral
        let v = phi_l1(&range(1.0, 4.0), 1e-12).unwrap();
        assert!((v - 3.113_282_714_021_429_3).abs() < 1e-9, "{v}");
        let v = phi_l1(&range(1.0, 2.0), 1e-12).unwrap();
        assert!((v - 2.178_344_318_392_096).abs() < 1e-9, "{v}");
        assert_eq!(phi_l1(&range(2.0, 2.0), 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn phi_l1_is_scale_invariant_and_bounded() {
        let a = phi_l1(&range(1.0, 2.0), 1e-12).unwrap();
        let b = phi_l1(&range(10.0, 20.0), 1e-12).unwrap();
        assert!((a - b).abs() < 1e-8);
        let mut prev = 0.0;
        for j in 1..=20 {
            let v = phi_l1(&range(1.0, 2f64.powi(j)), 1e-12).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        assert!((prev - 3.487_516_305_093_247).abs() < 1e-8, "{prev}");
    }

    #[test]
    fn phi_l1_matches_direct_integration() {
        let rg = range(0.5, 3.0);
        let direct = adaptive_simpson_pieces(
            |x: f64| residual_kernel_phi(x, &rg).abs(),
            &[0.0, 0.5, 3.0, 40.0],
            1e-12,
        )
        .unwrap()
        .value;
        let v = phi_l1(&rg, 1e-12).unwrap();
        assert!((2.0 * direct - v).abs() < 1e-8, "{direct} {v}");
    }

    #[test]
    fn cell_average_of_truncated_kernel() {
        let rg = range(0.5, 4.0);
        let avg = truncated_cell_average(1.0, 0.25, &rg);
        assert!((avg - (1.125f64 / 0.875).ln() / 0.25).abs() < 1e-15);
        assert_eq!(truncated_cell_average(0.0, 0.25, &rg), 0.0);
        assert_eq!(truncated_cell_average(-2.0, 0.5, &rg), -truncated_cell_average(2.0, 0.5, &rg));
        assert_eq!(truncated_cell_average(10.0, 0.5, &rg), 0.0);
    }
}
