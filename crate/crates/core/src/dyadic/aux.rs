//! Auxiliary forms
//! `Λ^{d,k} = Σ_l Σ_T Σ_{x_j^0, x_j^1 ∈ I_j, j > k}
//!   | Σ_{x_0..x_k} F^k · (2^{-l})^{n-k+1} · Π_{i<=k} h_{I_i}(x_i) |`.

use rayon::prelude::*;

use super::form::check_tuple;
use super::pattern::{ProductPattern, Var};
use super::tuples::{free_indices_into, tuple_count};
use crate::error::{Error, Result};
use crate::numerics::sum::{pairwise_sum, PairwiseAccumulator};
use crate::numerics::CellFunction;

/// A factor compiled to `(function, [(variable slot, stride)])`.
struct CompiledFactor {
    function: usize,
    terms: Vec<(usize, usize)>,
}

/// Variable slots: plain `x_j` at `j`, split `x_j^r` at `k + 1 + 2(j - k - 1) + r`.
fn var_slot(k: usize, v: Var) -> usize {
    match v {
        Var::Plain(j) => j,
        Var::Split(j, r) => k + 1 + 2 * (j - k - 1) + r as usize,
    }
}

fn compile(pattern: &ProductPattern, side: u32) -> Vec<CompiledFactor> {
    let n = pattern.n();
    pattern
        .factors()
        .iter()
        .map(|f| CompiledFactor {
            function: f.function,
            terms: f
                .args
                .iter()
                .enumerate()
                .map(|(pos, &v)| (var_slot(pattern.k(), v), 1usize << (side as usize * (n - 1 - pos))))
                .collect(),
        })
        .collect()
}

/// Advances `vals[range]` through the boxes `[lo, lo + len)`; false at the end.
#[inline]
fn advance(vals: &mut [u64], lo: &[u64], len: u64) -> bool {
    for q in (0..vals.len()).rev() {
        vals[q] += 1;
        if vals[q] < lo[q] + len {
            return true;
        }
        vals[q] = lo[q];
    }
    false
}

fn tuple_term(
    fs: &[CellFunction],
    factors: &[CompiledFactor],
    n: usize,
    k: usize,
    scale: u32,
    idx: &[u64],
) -> f64 {
    let len = 1u64 << scale;
    let plain_lo: Vec<u64> = idx[..=k].iter().map(|&i| i << scale).collect();
    let split_lo: Vec<u64> = (k + 1..=n).flat_map(|j| [idx[j] << scale, idx[j] << scale]).collect();
    let mut vals = vec![0u64; 2 * n - k + 1];
    let mut split = split_lo.clone();
    let weight = (len as f64).powi(-((n - k + 1) as i32));
    let mut outer_acc = PairwiseAccumulator::new();
    loop {
        vals[k + 1..].copy_from_slice(&split);
        let mut plain = plain_lo.clone();
        let mut inner = 0.0;
        loop {
            vals[..=k].copy_from_slice(&plain);
            let mut h = 1.0;
            for &c in &plain {
                if (c >> (scale - 1)) & 1 == 1 {
                    h = -h;
                }
            }
            let mut prod = h;
            for f in factors {
                let flat: usize = f.terms.iter().map(|&(s, stride)| vals[s] as usize * stride).sum();
                prod *= fs[f.function].values()[flat];
                if prod == 0.0 {
                    break;
                }
            }
            inner += prod;
            if !advance(&mut plain, &plain_lo, len) {
                break;
            }
        }
        outer_acc.push((inner * weight).abs());
        if !advance(&mut split, &split_lo, len) {
            break;
        }
    }
    outer_acc.total()
}

/// `Λ^{d,k}` over scales `l = 1..=m`, `1 <= k <= n`. For `k = n` this is the
/// sup of `Λ^d` over `|ε| <= 1`.
pub fn eval_dyadic_aux(fs: &[CellFunction], k: usize, max_scale: u32) -> Result<f64> {
    let (n, side) = check_tuple(fs)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("auxiliary form needs 1 <= k <= n={n}, got {k}")));
    }
    if max_scale == 0 || max_scale > side {
        return Err(Error::InvalidParameter(format!(
            "number of scales m={max_scale} must satisfy 1 <= m <= L={side}"
        )));
    }
    let pattern = ProductPattern::new(n, k)?;
    let factors = compile(&pattern, side);
    let mut per_scale = Vec::new();
    for l in 1..=max_scale {
        let bits = side - l;
        let terms: Vec<f64> = (0..tuple_count(l, side, n))
            .into_par_iter()
            .map_init(
                || (vec![0u64; n], vec![0u64; n + 1]),
                |(free, idx), pos| {
                    free_indices_into(pos, bits, free);
                    idx[0] = free.iter().fold(0, |a, &b| a ^ b);
                    idx[1..].copy_from_slice(free);
                    tuple_term(fs, &factors, n, k, l, idx)
                },
            )
            .collect();
        per_scale.push(pairwise_sum(&terms));
    }
    Ok(pairwise_sum(&per_scale))
}
