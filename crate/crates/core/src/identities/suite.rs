//! The analytic suite: every identity check run on fixed sample sets, with a
//! JSON-serializable report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fourier::{check_ftc, check_poly_identity, gt_product, FrequencyPoint, TRule};
use super::single_scale::check_single_scale;
use super::spatial::{check_convolution, check_domination, check_fourier_pair};
use crate::continuous::{DilationParams, FunctionSpec, GaussianBump};
use crate::error::Result;
use crate::numerics::{LpExponent, TruncationRange};

/// One line of the analytic report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub check: String,
    pub samples: usize,
    pub max_discrepancy: f64,
    pub pass: bool,
}

/// Sample sizes for [`run_analytic_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub poly_samples: usize,
    pub ftc_samples: usize,
    pub single_scale_samples: usize,
    pub domination_step: f64,
    pub convolution_step: f64,
    pub fourier_step: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            poly_samples: 10_000,
            ftc_samples: 100,
            single_scale_samples: 20,
            domination_step: 0.01,
            convolution_step: 0.05,
            fourier_step: 0.05,
        }
    }
}

fn entry(check: &str, samples: usize, max: f64, pass: bool) -> SuiteEntry {
    SuiteEntry {
        check: check.into(),
        samples,
        max_discrepancy: max,
        pass,
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / step).round() as i64;
    (0..=n).map(move |i| lo + i as f64 * step)
}

fn random_point(rng: &mut ChaCha8Rng, m: usize, span: f64) -> FrequencyPoint {
    FrequencyPoint {
        eta: rng.random_range(-span..span),
        xis: (0..m).map(|_| rng.random_range(-span..span)).collect(),
    }
}

/// Relative discrepancy of the pointwise polynomial identity over random
/// `(η, ξ, α, t)` with frequencies in `[-10, 10]`, dilations in `[0.5, 10]`,
/// `t ∈ [0.1, 10]`.
pub fn poly_identity_sweep(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let m = rng.random_range(1..=3);
        let fp = random_point(&mut rng, m, 10.0);
        let dp = DilationParams::new(
            rng.random_range(0.1..10.0),
            rng.random_range(0.5..10.0),
            (0..m).map(|_| rng.random_range(0.5..10.0)).collect(),
        )?;
        worst = worst.max(check_poly_identity(&fp, &dp)?.relative);
    }
    Ok(worst)
}

/// Absolute discrepancy of the `t`-identity on `[0.5, 8]` over random points
/// with frequencies in `[-3, 3]` and dilations in `[2^{-1/2}, 4]`.
pub fn ftc_sweep(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = TruncationRange::new(0.5, 8.0)?;
    let lo = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let m = rng.random_range(1..=3);
        let fp = random_point(&mut rng, m, 3.0);
        let dp = DilationParams::new(
            1.0,
            rng.random_range(lo..4.0),
            (0..m).map(|_| rng.random_range(lo..4.0)).collect(),
        )?;
        worst = worst.max(check_ftc(&fp, &dp, &range, TRule::Adaptive(1e-10))?.discrepancy);
    }
    Ok(worst)
}

/// Largest `value - bound` over random `L^p`-normalized bumps, `n ≤ 2`,
/// `t ∈ {0.1, 1, 10}`.
pub fn single_scale_sweep(samples: usize, seed: u64) -> Result<(usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for n in 1..=2usize {
        for k in 1..=n {
            for _ in 0..samples {
                let fs: Vec<FunctionSpec> = (0..k)
                    .map(|i| {
                        let b = GaussianBump::random(n, &mut rng);
                        let p = if i == 0 { 1 << n } else { 1 << (n - i + 1) };
                        let norm = b.lp_norm(LpExponent::Finite(p as f64));
                        FunctionSpec::Bump(b.scaled(1.0 / norm))
                    })
                    .collect();
                let floor = DilationParams::min_dilation(n, k);
                let alpha = rng.random_range(floor..2.0);
                let alphas = (0..=n - k).map(|_| rng.random_range(floor..2.0)).collect::<Vec<_>>();
                for t in [0.1, 1.0, 10.0] {
                    let c = check_single_scale(&fs, &DilationParams::new(t, alpha, alphas.clone())?)?;
                    worst = worst.max(c.value - c.bound);
                    count += 1;
                }
            }
        }
    }
    Ok((count, worst))
}

/// Runs every analytic check and returns one entry per check.
pub fn run_analytic_suite(cfg: &SuiteConfig) -> Result<Vec<SuiteEntry>> {
    let mut out = Vec::new();

    let poly = poly_identity_sweep(cfg.poly_samples, cfg.seed)?;
    out.push(entry("poly_identity", cfg.poly_samples, poly, poly <= 1e-12));

    let ftc = ftc_sweep(cfg.ftc_samples, cfg.seed.wrapping_add(1))?;
    out.push(entry("ftc_identity", cfg.ftc_samples, ftc, ftc <= 1e-8));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let mut sym = 0.0f64;
    let sym_samples = 1000;
    for _ in 0..sym_samples {
        let m = rng.random_range(1..=3);
        // multiples of 1/64 so that -ξ_j - η is exact
        let mut q = || rng.random_range(-192..=192) as f64 / 64.0;
        let fp = FrequencyPoint {
            eta: q(),
            xis: (0..m).map(|_| q()).collect(),
        };
        let dp = DilationParams::new(
            rng.random_range(0.1..3.0),
            rng.random_range(0.5..3.0),
            (0..m).map(|_| rng.random_range(0.5..3.0)).collect(),
        )?;
        let g = gt_product(&fp, &dp)?;
        for j in 0..m {
            let mut flipped = fp.clone();
            flipped.xis[j] = -fp.xis[j] - fp.eta;
            let h = gt_product(&flipped, &dp)?;
            if g > 0.0 {
                sym = sym.max((g - h).abs() / g);
            }
        }
    }
    out.push(entry("gt_symmetry", sym_samples, sym, sym <= 1e-15));

    let mut ratio = 0.0f64;
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    let mut count = 0;
    for x in grid(-100.0, 100.0, cfg.domination_step) {
        let r = check_domination(x)?;
        ratio = ratio.max(r);
        if x >= 10.0 {
            monotone &= r <= prev;
            prev = r;
        }
        count += 1;
    }
    // reported value is the largest ratio, not a discrepancy
    out.push(entry("domination_ratio", count, ratio, ratio.is_finite() && monotone));

    let mut conv = 0.0f64;
    let mut count = 0;
    for x in grid(-10.0, 10.0, cfg.convolution_step) {
        conv = conv.max(check_convolution(x)?);
        count += 1;
    }
    out.push(entry("convolution", count, conv, conv <= 1e-8));

    let mut four = 0.0f64;
    let mut count = 0;
    for xi in grid(-3.0, 3.0, cfg.fourier_step) {
        let (a, b) = check_fourier_pair(xi)?;
        four = four.max(a).max(b);
        count += 1;
    }
    out.push(entry("fourier_pair", count, four, four <= 1e-6));

    let (count, excess) = single_scale_sweep(cfg.single_scale_samples, cfg.seed.wrapping_add(3))?;
    out.push(entry("single_scale_bound", count, excess, excess <= 1e-6));

    Ok(out)
}
