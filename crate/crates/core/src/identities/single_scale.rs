//! The single-scale form at step `k` for `n ≤ 2` and separable Gaussian
//! inputs, evaluated by factored one-dimensional quadrature, against its
//! product-of-norms bound.

use std::f64::consts::PI;

use serde::Serialize;

use crate::continuous::{DilationParams, FunctionSpec, GaussianBump};
use crate::error::{Error, Result};
use crate::numerics::LpExponent;

/// Result of [`check_single_scale`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleScaleCheck {
    pub value: f64,
    pub bound: f64,
}

impl SingleScaleCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.value <= self.bound + tol
    }
}

/// A one-dimensional product of Gaussian factors `Π exp(-π ((x - c)/w)²)`.
#[derive(Debug, Clone)]
struct Profile {
    factors: Vec<(f64, f64)>,
}

impl Profile {
    fn eval(&self, x: f64) -> f64 {
        let e: f64 = self.factors.iter().map(|&(c, w)| ((x - c) / w).powi(2)).sum();
        (-PI * e).exp()
    }

    fn narrowest(&self) -> f64 {
        let m = self.factors.len() as f64;
        self.factors.iter().map(|f| f.1).fold(f64::INFINITY, f64::min) / m.sqrt()
    }

    /// An interval outside of which the profile is below `e^{-64π}`.
    fn window(&self) -> (f64, f64) {
        let lo = self.factors.iter().map(|&(c, w)| c - 8.0 * w).fold(f64::INFINITY, f64::min);
        let hi = self.factors.iter().map(|&(c, w)| c + 8.0 * w).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, max_step: f64) -> f64 {
    let n = (((hi - lo) / max_step).ceil() as usize).max(2);
    let h = (hi - lo) / n as f64;
    let mut s = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        s += f(lo + i as f64 * h);
    }
    s * h
}

fn g_dilate(s: f64, x: f64) -> f64 {
    (-PI * (x / s).powi(2)).exp() / s
}

/// `∫ (u ∗ g_s)(p)² dp`.
fn smoothed_energy(u: &Profile, s: f64) -> f64 {
    let (lo, hi) = u.window();
    let wu = u.narrowest();
    let dx = wu.min(s) / 10.0;
    let v = |p: f64| trapezoid(|x| u.eval(x) * g_dilate(s, x - p), lo, hi, dx);
    let dp = wu.hypot(s) / 10.0;
    trapezoid(|p| v(p).powi(2), lo - 8.0 * s, hi + 8.0 * s, dp)
}

/// `∫ (u ∗ g_s)(p)² B(p) dp` with `B(p) = ∫∫ w0(x0) w1(x1) g_a(x0 + x1 + p)`.
fn coupled_energy(u: &Profile, s: f64, w0: &Profile, w1: &Profile, a: f64) -> f64 {
    let (lo0, hi0) = w0.window();
    let (lo1, hi1) = w1.window();
    let dx = w0.narrowest().min(w1.narrowest()) / 10.0;
    let conv = |y: f64| trapezoid(|x| w0.eval(x) * w1.eval(y - x), lo0, hi0, dx);
    let (ylo, yhi) = (lo0 + lo1, hi0 + hi1);
    let wy = w0.narrowest().hypot(w1.narrowest());
    let dy = wy.min(a) / 10.0;
    let ny = (((yhi - ylo) / dy).ceil() as usize).max(2);
    let hy = (yhi - ylo) / ny as f64;
    let w_samples: Vec<f64> = (0..=ny).map(|i| conv(ylo + i as f64 * hy)).collect();
    let b = |p: f64| {
        let mut acc = 0.0;
        for (i, &w) in w_samples.iter().enumerate() {
            let weight = if i == 0 || i == ny { 0.5 } else { 1.0 };
            acc += weight * w * g_dilate(a, ylo + i as f64 * hy + p);
        }
        acc * hy
    };

    let (lo, hi) = u.window();
    let wu = u.narrowest();
    let dxu = wu.min(s) / 10.0;
    let v = |p: f64| trapezoid(|x| u.eval(x) * g_dilate(s, x - p), lo, hi, dxu);
    let dp = wu.hypot(s).min(wy.hypot(a)) / 10.0;
    trapezoid(|p| v(p).powi(2) * b(p), lo - 8.0 * s, hi + 8.0 * s, dp)
}

fn bump(f: &FunctionSpec, index: usize) -> Result<&GaussianBump> {
    match f {
        FunctionSpec::Bump(b) => {
            b.validate()?;
            Ok(b)
        }
        _ => Err(Error::Unsupported(format!(
            "function {index} is not a single separable Gaussian bump"
        ))),
    }
}

fn power(b: &GaussianBump, axis: usize, times: usize) -> Vec<(f64, f64)> {
    vec![(b.center[axis], b.width[axis]); times]
}

/// `‖F_0‖_{2^n}^{2^{n-k+1}} Π_{i=1}^{k-1} ‖F_i‖_{2^{n-i+1}}^{2^{n-k+1}}`.
pub fn single_scale_bound(fs: &[GaussianBump], n: usize, k: usize) -> f64 {
    let e = 2f64.powi((n - k + 1) as i32);
    let mut bound = fs[0].lp_norm(LpExponent::Finite(2f64.powi(n as i32))).powf(e);
    for (i, f) in fs.iter().enumerate().skip(1) {
        bound *= f.lp_norm(LpExponent::Finite(2f64.powi((n - i + 1) as i32))).powf(e);
    }
    bound
}

/// Evaluates the single-scale form built from `F_0, …, F_{k-1}` (each a
/// function of `n` variables) with dilations `g_{tα}` on the plain sum and
/// `g_{tα_j}`, `j = k..n`, on the split variables, and the bound above.
///
/// Only `n ≤ 2` and single Gaussian bumps are supported.
pub fn check_single_scale(fs: &[FunctionSpec], dp: &DilationParams) -> Result<SingleScaleCheck> {
    let k = fs.len();
    if k == 0 {
        return Err(Error::InvalidParameter("need at least F_0".into()));
    }
    let n = fs[0].dimension();
    if fs.iter().any(|f| f.dimension() != n) {
        return Err(Error::Shape("all functions must have the same dimension".into()));
    }
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("single-scale evaluation needs n <= 2, got n={n}")));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k={k} exceeds n={n}")));
    }
    if dp.alphas.len() != n - k + 1 {
        return Err(Error::Shape(format!(
            "expected {} split dilations, got {}",
            n - k + 1,
            dp.alphas.len()
        )));
    }
    let bumps: Vec<&GaussianBump> = fs.iter().enumerate().map(|(i, f)| bump(f, i)).collect::<Result<_>>()?;
    let t = dp.t;

    let value = match (n, k) {
        (_, 1) => {
            let f = bumps[0];
            let reps = 1 << (n - 1);
            let mut v = f.amplitude.powi(1 << n);
            for j in 0..n {
                let u = Profile {
                    factors: power(f, j, reps),
                };
                v *= smoothed_energy(&u, t * dp.alphas[j]);
            }
            v
        }
        _ => {
            // n = k = 2: F_0(x_1, x_2), F_1(x_0, x_2)
            let (f0, f1) = (bumps[0], bumps[1]);
            let u = Profile {
                factors: vec![(f0.center[1], f0.width[1]), (f1.center[1], f1.width[1])],
            };
            let w0 = Profile {
                factors: power(f1, 0, 2),
            };
            let w1 = Profile {
                factors: power(f0, 0, 2),
            };
            (f0.amplitude * f1.amplitude).powi(2) * coupled_energy(&u, t * dp.alphas[0], &w0, &w1, t * dp.alpha)
        }
    };
    let owned: Vec<GaussianBump> = bumps.into_iter().cloned().collect();
    Ok(SingleScaleCheck {
        value,
        bound: single_scale_bound(&owned, n, k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `m · exp(-π ((x - c)/w)²)` with closed-form products and smoothing.
    #[derive(Clone, Copy)]
    struct G {
        m: f64,
        c: f64,
        w: f64,
    }

    impl G {
        fn mul(self, o: G) -> G {
            let p = 1.0 / (self.w * self.w) + 1.0 / (o.w * o.w);
            let c = (self.c / (self.w * self.w) + o.c / (o.w * o.w)) / p;
            let k = (-PI * (self.c - o.c).powi(2) / (self.w * self.w + o.w * o.w)).exp();
            G {
                m: self.m * o.m * k,
                c,
                w: p.powf(-0.5),
            }
        }
        fn smooth(self, s: f64) -> G {
            let w = self.w.hypot(s);
            G {
                m: self.m * self.w / w,
                c: self.c,
                w,
            }
        }
        fn integral(self) -> f64 {
            self.m * self.w
        }
    }

    fn spec(c: &[f64], w: &[f64], a: f64) -> FunctionSpec {
        FunctionSpec::Bump(GaussianBump::new(c.to_vec(), w.to_vec(), a).unwrap())
    }

    fn oracle(fs: &[FunctionSpec], dp: &DilationParams) -> f64 {
        let b: Vec<&GaussianBump> = fs.iter().map(|f| bump(f, 0).unwrap()).collect();
        let g = |f: &GaussianBump, j: usize| G {
            m: 1.0,
            c: f.center[j],
            w: f.width[j],
        };
        let n = b[0].dimension();
        if fs.len() == 1 {
            let mut v = b[0].amplitude.powi(1 << n);
            for j in 0..n {
                let mut u = g(b[0], j);
                if n == 2 {
                    u = u.mul(u);
                }
                let vj = u.smooth(dp.t * dp.alphas[j]);
                v *= vj.mul(vj).integral();
            }
            v
        } else {
            let u = g(b[0], 1).mul(g(b[1], 1)).smooth(dp.t * dp.alphas[0]);
            let w0 = g(b[1], 0).mul(g(b[1], 0));
            let w1 = g(b[0], 0).mul(g(b[0], 0));
            // B(p) = ((w0 ∗ w1) ∗ g_a)(-p), a Gaussian centred at -(c0 + c1)
            let conv = G {
                m: w0.m * w1.m * w0.w * w1.w / w0.w.hypot(w1.w),
                c: w0.c + w1.c,
                w: w0.w.hypot(w1.w),
            }
            .smooth(dp.t * dp.alpha);
            let b_fn = G { c: -conv.c, ..conv };
            (b[0].amplitude * b[1].amplitude).powi(2) * u.mul(u).mul(b_fn).integral()
        }
    }

    #[test]
    fn matches_closed_form_gaussian_algebra() {
        let dp = DilationParams::new(0.8, 1.3, vec![1.1]).unwrap();
        let f = [spec(&[0.3], &[0.9], 1.7)];
        let c = check_single_scale(&f, &dp).unwrap();
        assert!((c.value - oracle(&f, &dp)).abs() < 1e-12 * c.value);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let t = [0.1, 1.0, 10.0][rng.random_range(0..3)];
            let f0 = GaussianBump::random(2, &mut rng);
            let f1 = GaussianBump::random(2, &mut rng);
            let dp = DilationParams::new(t, rng.random_range(0.8..2.0), vec![rng.random_range(0.8..2.0); 2]).unwrap();
            let one = [FunctionSpec::Bump(f0.clone())];
            let c = check_single_scale(&one, &dp).unwrap();
            assert!((c.value - oracle(&one, &dp)).abs() < 1e-10 * c.value, "k=1 t={t}");
            let dp2 = DilationParams::new(t, dp.alpha, vec![dp.alphas[0]]).unwrap();
            let two = [FunctionSpec::Bump(f0), FunctionSpec::Bump(f1)];
            let c = check_single_scale(&two, &dp2).unwrap();
            assert!((c.value - oracle(&two, &dp2)).abs() < 1e-10 * c.value, "k=2 t={t}");
        }
    }

    #[test]
    fn bound_holds_for_normalized_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=2usize {
            for k in 1..=n {
                for _ in 0..10 {
                    let fs: Vec<GaussianBump> = (0..k)
                        .map(|i| {
                            let b = GaussianBump::random(n, &mut rng);
                            let p = if i == 0 { 1 << n } else { 1 << (n - i + 1) };
                            let norm = b.lp_norm(LpExponent::Finite(p as f64));
                            b.scaled(1.0 / norm)
                        })
                        .collect();
                    let specs: Vec<FunctionSpec> = fs.iter().cloned().map(FunctionSpec::Bump).collect();
                    for t in [0.1, 1.0, 10.0] {
                        let dp = DilationParams::new(t, 1.0, vec![1.2; n - k + 1]).unwrap();
                        let c = check_single_scale(&specs, &dp).unwrap();
                        assert!((c.bound - 1.0).abs() < 1e-12);
                        assert!(c.holds(1e-6), "n={n} k={k} t={t}: {c:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneity() {
        let dp = DilationParams::new(1.0, 1.0, vec![0.9]).unwrap();
        let base = [spec(&[0.1, -0.2], &[1.0, 0.8], 1.0), spec(&[0.4, 0.0], &[1.2, 1.1], 1.0)];
        let c = check_single_scale(&base, &dp).unwrap();
        let scaled = [base[0].clone(), spec(&[0.4, 0.0], &[1.2, 1.1], 5.0)];
        let s = check_single_scale(&scaled, &dp).unwrap();
        // degree 2^{n-k+1} = 2 in each function
        assert!((s.value / c.value - 25.0).abs() < 1e-9);
        assert!((s.bound / c.bound - 25.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_unsupported_inputs() {
        let dp = DilationParams::new(1.0, 1.0, vec![1.0, 1.0]).unwrap();
        let mixture = FunctionSpec::Mixture {
            components: vec![GaussianBump::standard(2), GaussianBump::standard(2)],
        };
        assert!(matches!(check_single_scale(&[mixture], &dp), Err(Error::Unsupported(_))));
        let three = spec(&[0.0; 3], &[1.0; 3], 1.0);
        assert!(matches!(check_single_scale(&[three], &dp), Err(Error::Unsupported(_))));
        assert!(check_single_scale(&[], &dp).is_err());
        assert!(check_single_scale(&[spec(&[0.0, 0.0], &[1.0, 1.0], 1.0)], &DilationParams::new(1.0, 1.0, vec![1.0]).unwrap()).is_err());
    }
}
