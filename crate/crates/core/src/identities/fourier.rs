//! Fourier-side checks: the product `G_t`, the pointwise polynomial identity
//! behind the integration-by-parts identity in `t`, and that identity itself.
//!
//! Conventions: `f̂(ξ) = ∫ f(x) e^{-2πixξ} dx`, so `ĝ(ξ) = e^{-πξ²}`,
//! `ĥ(ξ) = 2πiξ ĝ(ξ)` and `(f_s)^(ξ) = f̂(sξ)` for L¹-normalized dilates.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::continuous::DilationParams;
use crate::error::{Error, Result};
use crate::numerics::quad::{adaptive_simpson, composite_simpson};
use crate::numerics::TruncationRange;

/// A frequency point `(η, ξ_k, …, ξ_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub eta: f64,
    pub xis: Vec<f64>,
}

impl FrequencyPoint {
    pub fn new(eta: f64, xis: Vec<f64>) -> Result<Self> {
        if !eta.is_finite() || xis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("frequencies must be finite".into()));
        }
        Ok(Self { eta, xis })
    }
}

#[inline]
pub fn g_hat(xi: f64) -> f64 {
    (-PI * xi * xi).exp()
}

#[inline]
pub fn h_hat(xi: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * xi) * g_hat(xi)
}

fn check_shapes(fp: &FrequencyPoint, dp: &DilationParams) -> Result<()> {
    if fp.xis.len() != dp.alphas.len() || fp.xis.is_empty() {
        return Err(Error::Shape(format!(
            "{} frequencies ξ_j for {} dilations α_j",
            fp.xis.len(),
            dp.alphas.len()
        )));
    }
    Ok(())
}

/// Squared arguments of the Gaussian factors of `G_t`: `(tαη)²`, then
/// `(tα_jξ_j)²` and `(tα_j(ξ_j+η))²` for each `j`.
fn gt_squares(t: f64, fp: &FrequencyPoint, dp: &DilationParams) -> (f64, Vec<(f64, f64)>) {
    let lead = (t * dp.alpha * fp.eta).powi(2);
    let pairs = fp
        .xis
        .iter()
        .zip(&dp.alphas)
        .map(|(&xi, &a)| ((t * a * xi).powi(2), (t * a * (xi + fp.eta)).powi(2)))
        .collect();
    (lead, pairs)
}

/// `G_t = ĝ(tαη) Π_j ĝ(tα_jξ_j) ĝ(tα_j(ξ_j+η))`; uses `dp.t`.
pub fn gt_product(fp: &FrequencyPoint, dp: &DilationParams) -> Result<f64> {
    check_shapes(fp, dp)?;
    Ok(gt_at(dp.t, fp, dp))
}

fn gt_at(t: f64, fp: &FrequencyPoint, dp: &DilationParams) -> f64 {
    let mut v = g_hat(t * dp.alpha * fp.eta);
    for (&xi, &a) in fp.xis.iter().zip(&dp.alphas) {
        v *= g_hat(t * a * xi) * g_hat(t * a * (xi + fp.eta));
    }
    v
}

/// Both sides of the pointwise identity at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyCheck {
    /// The combined integrand built from `ĥ` factors.
    pub lhs: f64,
    /// `-π t ∂_t G_t = 2π² t² Q G_t`.
    pub rhs: f64,
    pub absolute: f64,
    /// `|lhs - rhs| / |rhs|`, computed with the common factor `e^{-πt²Q}`
    /// removed so it stays meaningful where `G_t` underflows.
    pub relative: f64,
}

/// Evaluates
/// `(1 + α^{-2} Σ α_j²) ĥ(tα2^{-1/2}η) ĥ(-tα2^{-1/2}η) Π_i ĝ(tα_iξ_i) ĝ(tα_i(ξ_i+η))
///  + Σ_j ĝ(tαη) ĥ(tα_jξ_j) ĥ(-tα_j(ξ_j+η)) Π_{i≠j} ĝ(tα_iξ_i) ĝ(tα_i(ξ_i+η))`
/// against `2π² t² (α²η² + Σ α_j²(ξ_j² + (ξ_j+η)²)) G_t`.
///
/// Each `ĥ(x)` is split as `2πix · e^{-πx²}`; exponents are accumulated
/// separately and the shared exponent of `G_t` is factored out.
pub fn check_poly_identity(fp: &FrequencyPoint, dp: &DilationParams) -> Result<PolyCheck> {
    check_shapes(fp, dp)?;
    let t = dp.t;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let (lead_sq, pair_sq) = gt_squares(t, fp, dp);
    let pair_exponent: f64 = pair_sq.iter().map(|&(a, b)| -PI * a - PI * b).sum();
    let reference = pair_exponent + -PI * lead_sq;

    // First term: ĥ(a)ĥ(-a) with a² = (tαη)²/2, so ĝ(a)ĝ(-a) carries -π(tαη)².
    let weight = 1.0 + dp.alphas.iter().map(|a| a * a).sum::<f64>() / (dp.alpha * dp.alpha);
    let a = t * dp.alpha * std::f64::consts::FRAC_1_SQRT_2 * fp.eta;
    let half = 0.5 * lead_sq;
    let exponent = pair_exponent + (-PI * half - PI * half);
    let mut lhs = (two_pi_i * a) * (two_pi_i * -a) * weight * (exponent - reference).exp();

    for (j, (&xi, &aj)) in fp.xis.iter().zip(&dp.alphas).enumerate() {
        let b = t * aj * xi;
        let c = t * aj * (xi + fp.eta);
        // ĥ(b) ĥ(-c) carries the same Gaussian exponents as the j-th pair of G_t.
        let mut exponent = 0.0;
        for (i, &(s0, s1)) in pair_sq.iter().enumerate() {
            exponent += if i == j { -PI * (b * b) - PI * (c * c) } else { -PI * s0 - PI * s1 };
        }
        exponent += -PI * lead_sq;
        lhs += (two_pi_i * b) * (two_pi_i * -c) * (exponent - reference).exp();
    }

    let q = (dp.alpha * fp.eta).powi(2)
        + fp.xis
            .iter()
            .zip(&dp.alphas)
            .map(|(&xi, &a)| a * a * (xi * xi + (xi + fp.eta).powi(2)))
            .sum::<f64>();
    let rhs_scaled = 2.0 * PI * PI * t * t * q;
    let diff = (lhs - Complex64::new(rhs_scaled, 0.0)).norm();
    let scale = reference.exp();
    Ok(PolyCheck {
        lhs: lhs.re * scale,
        rhs: rhs_scaled * scale,
        absolute: diff * scale,
        relative: if rhs_scaled == 0.0 { diff } else { diff / rhs_scaled },
    })
}

/// Integrand of the left side of the `t`-identity at `t` (without `dt/t`).
fn ftc_integrand(t: f64, fp: &FrequencyPoint, dp: &DilationParams) -> f64 {
    let weight = 1.0 + dp.alphas.iter().map(|a| a * a).sum::<f64>() / (dp.alpha * dp.alpha);
    let a = t * dp.alpha * std::f64::consts::FRAC_1_SQRT_2 * fp.eta;
    let pair = |xi: f64, al: f64| g_hat(t * al * xi) * g_hat(t * al * (xi + fp.eta));
    let all_pairs: f64 = fp.xis.iter().zip(&dp.alphas).map(|(&x, &al)| pair(x, al)).product();
    let mut total = h_hat(a) * h_hat(-a) * weight * all_pairs;
    for (j, (&xi, &aj)) in fp.xis.iter().zip(&dp.alphas).enumerate() {
        let others: f64 = fp
            .xis
            .iter()
            .zip(&dp.alphas)
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, (&x, &al))| pair(x, al))
            .product();
        total += g_hat(t * dp.alpha * fp.eta) * h_hat(t * aj * xi) * h_hat(-t * aj * (xi + fp.eta)) * others;
    }
    total.re
}

/// How the `t` integral is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TRule {
    /// Adaptive Simpson in `log t` to the given absolute tolerance.
    Adaptive(f64),
    /// Composite Simpson in `log t` with a fixed number of panels.
    Composite(usize),
}

/// Result of [`check_ftc`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FtcCheck {
    pub integral: f64,
    /// `π (G_r - G_R)`.
    pub boundary: f64,
    pub discrepancy: f64,
}

/// Integrates the left side over `t ∈ [r, R]` against `dt/t` and compares
/// with `π (G_r - G_R)`. The `t` in `dp` is ignored.
pub fn check_ftc(fp: &FrequencyPoint, dp: &DilationParams, range: &TruncationRange, rule: TRule) -> Result<FtcCheck> {
    check_shapes(fp, dp)?;
    let (lo, hi) = (range.inner().ln(), range.outer().ln());
    let f = |s: f64| ftc_integrand(s.exp(), fp, dp);
    let integral = match rule {
        TRule::Adaptive(tol) => adaptive_simpson(f, lo, hi, tol)?.value,
        TRule::Composite(panels) => {
            if panels == 0 {
                return Err(Error::InvalidParameter("need at least one panel".into()));
            }
            if lo == hi {
                0.0
            } else {
                composite_simpson(f, lo, hi, panels)
            }
        }
    };
    let boundary = PI * (gt_at(range.inner(), fp, dp) - gt_at(range.outer(), fp, dp));
    Ok(FtcCheck {
        integral,
        boundary,
        discrepancy: (integral - boundary).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn point(eta: f64, xis: &[f64]) -> FrequencyPoint {
        FrequencyPoint::new(eta, xis.to_vec()).unwrap()
    }

    fn dil(t: f64, alpha: f64, alphas: &[f64]) -> DilationParams {
        DilationParams::new(t, alpha, alphas.to_vec()).unwrap()
    }

    #[test]
    fn gt_examples_and_symmetry() {
        let dp = dil(1.0, 1.0, &[1.0]);
        assert_eq!(gt_product(&point(0.0, &[0.0]), &dp).unwrap(), 1.0);
        let v = gt_product(&point(1.0, &[0.0]), &dp).unwrap();
        assert!((v - (-2.0 * PI).exp()).abs() < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            // multiples of 1/64 so that -ξ_j - η is exact
            let mut q = || rng.random_range(-192..=192) as f64 / 64.0;
            let eta = q();
            let xis = [q(), q()];
            let dp = dil(rng.random_range(0.1..3.0), 1.3, &[0.8, 2.0]);
            let g = gt_product(&point(eta, &xis), &dp).unwrap();
            for j in 0..2 {
                let mut flipped = xis;
                flipped[j] = -xis[j] - eta;
                let h = gt_product(&point(eta, &flipped), &dp).unwrap();
                assert!((g - h).abs() <= 1e-15 * g);
            }
        }
        assert!(gt_product(&point(0.0, &[0.0, 1.0]), &dp).is_err());
    }

    #[test]
    fn fourier_derivative_rule() {
        // ĥ = 2πiξ ĝ matches the transform of h computed by quadrature
        let xi = 0.7;
        let im = crate::numerics::quad::adaptive_simpson_pieces(
            |x| -crate::continuous::gaussian_deriv(x) * (2.0 * PI * x * xi).sin(),
            &[-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0],
            1e-13,
        )
        .unwrap()
        .value;
        assert!((im - h_hat(xi).im).abs() < 1e-10);
    }

    #[test]
    fn polynomial_identity_edge_cases() {
        let dp = dil(0.7, 1.5, &[0.9, 2.0]);
        let c = check_poly_identity(&point(0.0, &[0.0, 0.0]), &dp).unwrap();
        assert_eq!(c.absolute, 0.0);
        assert_eq!(c.relative, 0.0);
        // η = 0: both sides equal Σ 4π² t² α_j² ξ_j² G_t
        let fp = point(0.0, &[0.4, -1.1]);
        let c = check_poly_identity(&fp, &dp).unwrap();
        let g = gt_product(&fp, &dp).unwrap();
        let expect: f64 = [0.4f64, -1.1]
            .iter()
            .zip([0.9f64, 2.0])
            .map(|(x, a)| 4.0 * PI * PI * 0.49 * a * a * x * x)
            .sum::<f64>()
            * g;
        assert!((c.rhs - expect).abs() < 1e-13 * expect);
        assert!(c.relative < 1e-14);
    }

    #[test]
    fn polynomial_identity_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst = 0.0f64;
        for _ in 0..2000 {
            let m = rng.random_range(1..=3);
            let fp = point(rng.random_range(-10.0..10.0), &(0..m).map(|_| rng.random_range(-10.0..10.0)).collect::<Vec<_>>());
            let dp = dil(
                rng.random_range(0.1..10.0),
                rng.random_range(0.5..10.0),
                &(0..m).map(|_| rng.random_range(0.5..10.0)).collect::<Vec<_>>(),
            );
            worst = worst.max(check_poly_identity(&fp, &dp).unwrap().relative);
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn ftc_holds_and_refines() {
        let rg = TruncationRange::new(0.5, 8.0).unwrap();
        let dp = dil(1.0, 1.2, &[0.9, 1.7]);
        let fp = point(0.3, &[-0.2, 0.45]);
        let c = check_ftc(&fp, &dp, &rg, TRule::Adaptive(1e-10)).unwrap();
        assert!(c.discrepancy <= 1e-8, "{c:?}");
        let mut prev = f64::INFINITY;
        for panels in [2, 4, 8, 16, 32] {
            let d = check_ftc(&fp, &dp, &rg, TRule::Composite(panels)).unwrap().discrepancy;
            assert!(d <= prev / 2.0 || d < 1e-13, "{panels}: {d} vs {prev}");
            prev = d;
        }
        // degenerate cases
        let same = TruncationRange::new(1.0, 1.0).unwrap();
        assert_eq!(check_ftc(&fp, &dp, &same, TRule::Adaptive(1e-10)).unwrap().discrepancy, 0.0);
        let zero = check_ftc(&point(0.0, &[0.0, 0.0]), &dp, &rg, TRule::Adaptive(1e-10)).unwrap();
        assert_eq!(zero.integral, 0.0);
        assert_eq!(zero.boundary, 0.0);
    }
}
