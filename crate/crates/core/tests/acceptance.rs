//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints one status line; exits nonzero if any fails.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplexht::continuous::{
    eval_simplex_truncated, eval_smooth_form, phi_l1, DilationParams, FunctionSpec, GaussianBump, QuadratureSpec,
};
use simplexht::dyadic::{
    enumerate_tuples, eval_dyadic_aux, eval_dyadic_form, eval_dyadic_sup, optimal_coefficients, verify_dyadic_telescoping,
    verify_parity_rule, CoefficientMap,
};
use simplexht::experiment::{fit_exponent, growth_sweep_detailed, SweepSpec};
use simplexht::identities::{check_convolution, check_ftc, check_poly_identity, check_single_scale, transforms, FrequencyPoint, TRule};
use simplexht::numerics::{normalize_tuple, CellFunction, HoelderExponents, IntervalTuple, LpExponent, TruncationRange};

type Outcome = simplexht::Result<(bool, String)>;

fn telescoping() -> Outcome {
    let start = Instant::now();
    let (mut worst, mut cases) = (0i64, 0);
    for side in 2..=4 {
        for n in 1..=3 {
            for k in 1..=n {
                for l in 2..=side {
                    let r = verify_dyadic_telescoping(n, k, l, side)?;
                    worst = worst.max(r.max_discrepancy.abs());
                    cases += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    Ok((worst == 0 && t < Duration::from_secs(120), format!("{cases} cases, max discrepancy {worst}, {t:.2?}")))
}

fn parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let side = 5;
    let (mut checked, mut failures) = (0, 0);
    for trial in 0..200 {
        let n = 1 + trial % 3;
        let l = rng.random_range(1..=side);
        let free: Vec<u64> = (0..n).map(|_| rng.random_range(0..1u64 << (side - l))).collect();
        let tuple = IntervalTuple::balanced_from_free(l, &free);
        for pattern in 0u32..1 << (n + 1) {
            let sides: Vec<u8> = (0..=n).map(|i| ((pattern >> i) & 1) as u8).collect();
            let even = pattern.count_ones() % 2 == 0;
            if verify_parity_rule(&tuple, &sides)? != even {
                failures += 1;
            }
            checked += 1;
        }
    }
    Ok((failures == 0, format!("{checked} child patterns over 200 tuples, {failures} failures")))
}

fn poly_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let n = 1 + i % 3;
        let fp = FrequencyPoint::new(rng.random_range(-10.0..10.0), (0..n).map(|_| rng.random_range(-10.0..10.0)).collect())?;
        let dp = DilationParams::new(
            rng.random_range(0.1..10.0),
            rng.random_range(0.5..10.0),
            (0..n).map(|_| rng.random_range(0.5..10.0)).collect(),
        )?;
        worst = worst.max(check_poly_identity(&fp, &dp)?.relative);
    }
    let t = start.elapsed();
    Ok((worst <= 1e-12 && t < Duration::from_secs(5), format!("max relative {worst:.2e}, {t:.2?}")))
}

fn ftc() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let range = TruncationRange::new(0.5, 8.0)?;
    let (mut worst, mut largest) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 1 + i % 3;
        let fp = FrequencyPoint::new(rng.random_range(-3.0..3.0), (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())?;
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let dp = DilationParams::new(1.0, rng.random_range(a..4.0), (0..n).map(|_| rng.random_range(a..4.0)).collect())?;
        let c = check_ftc(&fp, &dp, &range, TRule::Adaptive(1e-10))?;
        worst = worst.max(c.discrepancy);
        largest = largest.max(c.boundary.abs());
    }
    let t = start.elapsed();
    Ok((
        worst <= 1e-8 && t < Duration::from_secs(60),
        format!("max discrepancy {worst:.2e}, largest boundary term {largest:.3}, {t:.2?}"),
    ))
}

fn fourier_and_convolution() -> Outcome {
    let mut g_err = 0.0f64;
    for j in -60..=60 {
        let xi = j as f64 * 0.05;
        g_err = g_err.max((transforms(xi)?.0 - (-PI * xi * xi).exp()).norm());
    }
    let at_one = (transforms(1.0)?.0 - (-PI).exp()).norm();
    let mut conv = 0.0f64;
    for j in -200..=200 {
        conv = conv.max(check_convolution(j as f64 * 0.05)?);
    }
    Ok((
        g_err <= 1e-6 && at_one <= 1e-6 && conv <= 1e-8,
        format!("transform {g_err:.2e}, at 1 {at_one:.2e}, convolution {conv:.2e}"),
    ))
}

struct ContinuousRun {
    trivial_excess: f64,
    reduction_excess: f64,
}

/// Criteria 6 and 7 share the bump tuples.
fn continuous_runs() -> simplexht::Result<(ContinuousRun, Duration)> {
    let start = Instant::now();
    let quad = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = LpExponent::Finite(3.0);
    let ranges = [TruncationRange::new(0.5, 4.0)?, TruncationRange::new(0.25, 16.0)?];
    let phis = [phi_l1(&ranges[0], 1e-10)?, phi_l1(&ranges[1], 1e-10)?];
    let mut run = ContinuousRun {
        trivial_excess: f64::NEG_INFINITY,
        reduction_excess: f64::NEG_INFINITY,
    };
    for _ in 0..20 {
        let bumps: Vec<GaussianBump> = (0..3)
            .map(|_| {
                let b = GaussianBump::random(2, &mut rng);
                b.scaled(1.0 / b.lp_norm(p))
            })
            .collect();
        let norms: f64 = bumps.iter().map(|b| b.lp_norm(p)).product();
        let grids = bumps
            .iter()
            .map(|b| FunctionSpec::Bump(b.clone()).to_grid(quad.extent, quad.spacing))
            .collect::<simplexht::Result<Vec<_>>>()?;
        for (range, phi) in ranges.iter().zip(phis) {
            let sharp = eval_simplex_truncated(&grids, range, &quad)?;
            let smooth = eval_smooth_form(&grids, range, &quad)?;
            run.trivial_excess = run.trivial_excess.max(sharp.abs() - (2.0 * range.log_ratio() + 0.05));
            // the h-form carries the opposite sign of the Gaussian-truncated kernel
            run.reduction_excess = run.reduction_excess.max((sharp + smooth).abs() - (phi * norms + 0.02));
        }
    }
    Ok((run, start.elapsed()))
}

fn single_scale() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p4 = LpExponent::Finite(4.0);
    let (mut worst, mut checks) = (f64::NEG_INFINITY, 0);
    for _ in 0..50 {
        let bumps: Vec<FunctionSpec> = (0..2)
            .map(|_| {
                let b = GaussianBump::random(2, &mut rng);
                FunctionSpec::Bump(b.scaled(1.0 / b.lp_norm(p4)))
            })
            .collect();
        for k in 1..=2 {
            let floor = DilationParams::min_dilation(2, k);
            let alpha = rng.random_range(floor..2.0);
            let alphas: Vec<f64> = (0..=2 - k).map(|_| rng.random_range(floor..2.0)).collect();
            for t in [0.1, 1.0, 10.0] {
                let c = check_single_scale(&bumps[..k], &DilationParams::new(t, alpha, alphas.clone())?)?;
                worst = worst.max(c.value - c.bound);
                checks += 1;
            }
        }
    }
    Ok((worst <= 1e-6, format!("{checks} checks, max value - bound {worst:.3e}")))
}

fn sup_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 1 + i % 2;
        let side = rng.random_range(2..=5);
        let m = rng.random_range(1..=side);
        let raw = (0..=n)
            .map(|_| CellFunction::random_uniform(n, side, &mut rng))
            .collect::<simplexht::Result<Vec<_>>>()?;
        let fs = normalize_tuple(&raw, &HoelderExponents::power_type(n))?;
        let sup = eval_dyadic_sup(&fs, m)?;
        let aux = eval_dyadic_aux(&fs, n, m)?;
        let at_signs = eval_dyadic_form(&fs, &optimal_coefficients(&fs, m)?, m)?;
        let scale = sup.abs().max(1.0);
        worst = worst.max((aux - sup).abs() / scale).max((at_signs - sup).abs() / scale);
    }
    Ok((worst <= 1e-12, format!("100 tuples, max discrepancy {worst:.2e}")))
}

fn growth() -> Outcome {
    let start = Instant::now();
    let exps = HoelderExponents::from_finite(&[3.0, 3.0, 3.0])?;
    let spec = SweepSpec::dyadic(2, 6, (2..=6).collect(), exps, (0..5).collect());
    let points = growth_sweep_detailed(&spec)?;
    let (mut worst_step, mut worst_norm) = (0.0f64, 0.0f64);
    for run in points.iter().flat_map(|p| &p.runs) {
        for w in run.trace.windows(2) {
            worst_step = worst_step.min(w[1] - w[0]);
        }
        for f in &run.functions {
            worst_norm = worst_norm.max((LpExponent::Finite(3.0).norm_of(f, 1.0) - 1.0).abs());
        }
    }
    let records: Vec<_> = points.iter().map(|p| p.record.clone()).collect();
    let fit = fit_exponent(&records)?;
    let t = start.elapsed();
    let s: Vec<String> = records.iter().map(|r| format!("{:.4}", r.s)).collect();
    Ok((
        worst_step >= -1e-12 && worst_norm <= 1e-10 && fit.slope < 1.0 && t < Duration::from_secs(600),
        format!(
            "S = [{}], slope {:.4} (reference {:.2}), worst step {worst_step:.1e}, norm error {worst_norm:.1e}, {t:.2?}",
            s.join(", "),
            fit.slope,
            fit.reference_exponent
        ),
    ))
}

/// Straight sum over every cell of `[0, 2^L)^{n+1}` and every scale.
fn nested_loop_form(fs: &[CellFunction], eps: &HashMap<(u32, Vec<u64>), f64>, side: u32, m: u32) -> f64 {
    let n = fs.len() - 1;
    let cells = 1u64 << side;
    let mut x = vec![0u64; n + 1];
    let mut total = 0.0;
    for code in 0..cells.pow(n as u32 + 1) {
        let mut c = code;
        for xi in x.iter_mut().rev() {
            *xi = c % cells;
            c /= cells;
        }
        let mut fprod = 1.0;
        for (i, f) in fs.iter().enumerate() {
            let rest: Vec<u64> = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            fprod *= f.at(&rest);
        }
        for l in 1..=m {
            let idx: Vec<u64> = x.iter().map(|&v| v >> l).collect();
            if idx.iter().fold(0, |a, &b| a ^ b) != 0 {
                continue;
            }
            let sign: f64 = x.iter().map(|&v| if (v >> (l - 1)) & 1 == 0 { 1.0 } else { -1.0 }).product();
            total += eps[&(l, idx)] * fprod * sign / (1u64 << l) as f64;
        }
    }
    total
}

fn brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = 1 + i % 2;
        let side = rng.random_range(2..=3);
        let m = rng.random_range(1..=2);
        let fs = (0..=n)
            .map(|_| CellFunction::random_uniform(n, side, &mut rng))
            .collect::<simplexht::Result<Vec<_>>>()?;
        let mut map = CoefficientMap::new();
        let mut plain = HashMap::new();
        for l in 1..=m {
            for t in enumerate_tuples(l, side, n) {
                let e = rng.random_range(-1.0..=1.0);
                plain.insert((l, t.indices().to_vec()), e);
                map.insert(t, e)?;
            }
        }
        let fast = eval_dyadic_form(&fs, &map, m)?;
        worst = worst.max((fast - nested_loop_form(&fs, &plain, side, m)).abs());
    }
    Ok((worst <= 1e-12, format!("50 instances, max discrepancy {worst:.2e}")))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome| {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        println!("[{}] {id:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    };
    report(1, "dyadic telescoping exactness", telescoping());
    report(2, "parity rule", parity());
    report(3, "polynomial identity", poly_identity());
    report(4, "identity in t", ftc());
    report(5, "Fourier pair and convolution", fourier_and_convolution());
    match continuous_runs() {
        Ok((run, t)) => {
            let budget = t < Duration::from_secs(300);
            report(
                6,
                "trivial estimate",
                Ok((run.trivial_excess <= 0.0 && budget, format!("max excess over bound {:.3e}, {t:.2?}", run.trivial_excess))),
            );
            report(
                7,
                "mollification reduction",
                Ok((run.reduction_excess <= 0.0, format!("max excess over bound {:.3e}", run.reduction_excess))),
            );
        }
        Err(e) => {
            report(6, "trivial estimate", Err(e));
            report(7, "mollification reduction", Ok((false, "not run".into())));
        }
    }
    report(8, "single-scale uniformity", single_scale());
    report(9, "dyadic sup consistency", sup_consistency());
    report(10, "growth measurement", growth());
    report(11, "brute-force oracle", brute_force());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
