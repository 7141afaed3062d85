//! One-dimensional quadrature: adaptive Simpson with Richardson correction,
//! composite Simpson, and Gauss-Legendre rules.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the local `|S2 - S1| / 15` estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
///
/// Each interval is bisected until `|S(left) + S(right) - S(whole)| <= 15 tol_local`;
/// the accepted value carries the Richardson term `(S2 - S1) / 15`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut state = State {
        evaluations: 3,
        error: 0.0,
        exhausted: false,
    };
    let value = recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut state);
    if state.exhausted {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson hit depth {MAX_DEPTH} on [{a}, {b}] at tol {tol:e}"
        )));
    }
    Ok(Integral {
        value,
        error_estimate: state.error,
        evaluations: state.evaluations,
    })
}

struct State {
    evaluations: usize,
    error: f64,
    exhausted: bool,
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    state: &mut State,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    state.evaluations += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Interval too small to split further in floating point, or the
    // refinement is already at rounding level.
    let degenerate = !(lm > a && m > lm && rm > m && b > rm);
    let rounding = delta.abs() <= 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * tol || degenerate || rounding {
        state.error += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        state.exhausted = true;
        state.error += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state)
}

/// Adaptive Simpson over consecutive breakpoints, splitting the tolerance
/// evenly. Use this where the integrand has kinks or jumps.
pub fn adaptive_simpson_pieces(f: impl Fn(f64) -> f64, breaks: &[f64], tol: f64) -> Result<Integral> {
    let pieces = breaks.len().saturating_sub(1).max(1);
    let mut total = Integral {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in breaks.windows(2) {
        let part = adaptive_simpson(&f, w[0], w[1], tol / pieces as f64)?;
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.evaluations += part.evaluations;
    }
    Ok(total)
}

/// Composite Simpson rule with `panels` panels (each panel uses 3 nodes).
pub fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 1);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        let x1 = x0 + 0.5 * h;
        let x2 = if i + 1 == panels { b } else { x0 + h };
        acc += h / 6.0 * (f(x0) + 4.0 * f(x1) + f(x2));
    }
    acc
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Composite Gauss-Legendre rule: `panels` equal panels, `order` nodes each.
pub struct CompositeGauss {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeGauss {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (xs, ws) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (x, w) in xs.iter().zip(&ws) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        crate::numerics::sum::pairwise_sum(&terms)
    }
}
