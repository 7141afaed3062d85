//! The dyadic simplex form
//! `Λ^d = Σ_l Σ_{T ∈ I_l} ε_T 2^{-l} ∫ Π_i F_i(x_{-i}) Π_i h_{I_i}(x_i) dx`
//! for cell functions on `[0, 2^L)^n`.

use rayon::prelude::*;

use super::coefficients::{sign_or_plus, CoefficientMap};
use super::tuples::{enumerate_tuples, free_indices_into, tuple_count};
use crate::error::{Error, Result};
use crate::numerics::sum::{pairwise_sum, PairwiseAccumulator};
use crate::numerics::{CellFunction, IntervalTuple};

/// Checks that `fs` is an (n+1)-tuple of n-variate functions on one grid and
/// returns `(n, L)`.
pub fn check_tuple(fs: &[CellFunction]) -> Result<(usize, u32)> {
    if fs.len() < 2 {
        return Err(Error::Shape(format!("need at least 2 functions, got {}", fs.len())));
    }
    let n = fs.len() - 1;
    let side = fs[0].side_exponent();
    for (i, f) in fs.iter().enumerate() {
        if f.dimension() != n {
            return Err(Error::Shape(format!(
                "F_{i} has dimension {}, expected {n} for {} functions",
                f.dimension(),
                fs.len()
            )));
        }
        if f.side_exponent() != side {
            return Err(Error::Shape(format!(
                "F_{i} lives on [0, 2^{}), F_0 on [0, 2^{side})",
                f.side_exponent()
            )));
        }
    }
    Ok((n, side))
}

fn check_scales(max_scale: u32, side: u32) -> Result<()> {
    if max_scale == 0 || max_scale > side {
        return Err(Error::InvalidParameter(format!(
            "number of scales m={max_scale} must satisfy 1 <= m <= L={side}"
        )));
    }
    Ok(())
}

/// Flat-index strides. `F_j` for `j < n` takes `(c_0..ĉ_j..c_{n-1}, c_n)`;
/// `F_n` takes `(c_0..c_{n-1})`. Row-major, last argument fastest.
struct Strides {
    n: usize,
    side: u32,
}

impl Strides {
    #[inline]
    fn of_pos(&self, pos: usize) -> usize {
        1usize << (self.side as usize * (self.n - 1 - pos))
    }

    /// Base index of `F_j` (`j < n`) for the outer coordinates `c_0..c_{n-1}`,
    /// to which `c_n` is added.
    #[inline]
    fn base(&self, j: usize, outer: &[u64]) -> usize {
        let mut b = 0usize;
        for (q, &c) in outer.iter().enumerate() {
            if q == j {
                continue;
            }
            let pos = if q < j { q } else { q - 1 };
            b += c as usize * self.of_pos(pos);
        }
        b
    }

    /// Index of `F_n` at `(c_0..c_{n-1})`.
    #[inline]
    fn last(&self, outer: &[u64]) -> usize {
        outer
            .iter()
            .enumerate()
            .map(|(q, &c)| c as usize * self.of_pos(q))
            .sum()
    }
}

#[inline]
fn haar_sign(scale: u32, cell: u64) -> f64 {
    if (cell >> (scale - 1)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Advances `outer` through the box `Π_q [lo_q, lo_q + 2^l)`; false at the end.
#[inline]
fn next_in_box(outer: &mut [u64], lo: &[u64], len: u64) -> bool {
    for q in (0..outer.len()).rev() {
        outer[q] += 1;
        if outer[q] < lo[q] + len {
            return true;
        }
        outer[q] = lo[q];
    }
    false
}

/// `2^{-l} Σ_{x ∈ I_0×…×I_n} Π_i F_i(x_{-i}) Π_i h_{I_i}(x_i)` for a tuple
/// given by its indices.
pub(crate) fn pairing_at(fs: &[CellFunction], side: u32, scale: u32, indices: &[u64]) -> f64 {
    let n = fs.len() - 1;
    let strides = Strides { n, side };
    let len = 1u64 << scale;
    let half = (len / 2) as usize;
    let lo: Vec<u64> = indices[..n].iter().map(|&i| i << scale).collect();
    let inner_start = (indices[n] << scale) as usize;
    let mut outer = lo.clone();
    let mut product = vec![0.0; len as usize];
    let mut acc = PairwiseAccumulator::new();
    loop {
        let sigma: f64 = outer.iter().map(|&c| haar_sign(scale, c)).product();
        let last = fs[n].values()[strides.last(&outer)];
        if last != 0.0 {
            let b0 = strides.base(0, &outer) + inner_start;
            product.copy_from_slice(&fs[0].values()[b0..b0 + len as usize]);
            for (j, f) in fs.iter().enumerate().take(n).skip(1) {
                let b = strides.base(j, &outer) + inner_start;
                for (p, v) in product.iter_mut().zip(&f.values()[b..b + len as usize]) {
                    *p *= v;
                }
            }
            let left: f64 = product[..half].iter().sum();
            let right: f64 = product[half..].iter().sum();
            acc.push(sigma * last * (left - right));
        }
        if !next_in_box(&mut outer, &lo, len) {
            break;
        }
    }
    acc.total() / len as f64
}

/// Haar pairing of `fs` against one member of `I_l`.
pub fn haar_pairing(fs: &[CellFunction], tuple: &IntervalTuple) -> Result<f64> {
    let (n, side) = check_tuple(fs)?;
    if tuple.arity() != n + 1 {
        return Err(Error::Shape(format!(
            "tuple of {} intervals for {} functions",
            tuple.arity(),
            n + 1
        )));
    }
    if tuple.scale() == 0 || tuple.scale() > side {
        return Err(Error::InvalidParameter(format!(
            "pairing scale {} outside 1..={side}",
            tuple.scale()
        )));
    }
    let bound = 1u64 << (side - tuple.scale());
    if tuple.indices().iter().any(|&i| i >= bound) {
        return Err(Error::InvalidParameter(format!(
            "tuple {:?} leaves [0, 2^{side})",
            tuple.indices()
        )));
    }
    Ok(pairing_at(fs, side, tuple.scale(), tuple.indices()))
}

/// Pairings for every member of `I_l`, in enumeration order.
pub fn scale_pairings(fs: &[CellFunction], scale: u32) -> Result<Vec<f64>> {
    let (n, side) = check_tuple(fs)?;
    check_scales(scale, side)?;
    Ok(scale_pairings_unchecked(fs, n, side, scale))
}

pub(crate) fn scale_pairings_unchecked(fs: &[CellFunction], n: usize, side: u32, scale: u32) -> Vec<f64> {
    let bits = side - scale;
    (0..tuple_count(scale, side, n))
        .into_par_iter()
        .map_init(
            || (vec![0u64; n], vec![0u64; n + 1]),
            |(free, idx), pos| {
                free_indices_into(pos, bits, free);
                idx[0] = free.iter().fold(0, |a, &b| a ^ b);
                idx[1..].copy_from_slice(free);
                pairing_at(fs, side, scale, idx)
            },
        )
        .collect()
}

/// `Λ^d` with coefficients from `eps` and scales `l = 1..=m`.
pub fn eval_dyadic_form(fs: &[CellFunction], eps: &CoefficientMap, max_scale: u32) -> Result<f64> {
    let (n, side) = check_tuple(fs)?;
    check_scales(max_scale, side)?;
    let mut per_scale = Vec::with_capacity(max_scale as usize);
    for l in 1..=max_scale {
        let pairings = scale_pairings_unchecked(fs, n, side, l);
        let coeffs = eps.dense_for(&enumerate_tuples(l, side, n));
        let terms: Vec<f64> = pairings.iter().zip(&coeffs).map(|(p, e)| p * e).collect();
        per_scale.push(pairwise_sum(&terms));
    }
    Ok(pairwise_sum(&per_scale))
}

/// `Λ^d` with dense coefficients: `eps[l-1][pos]` for the tuple at
/// enumeration position `pos` of scale `l`.
pub fn eval_dyadic_form_dense(fs: &[CellFunction], eps: &[Vec<f64>]) -> Result<f64> {
    let (n, side) = check_tuple(fs)?;
    check_scales(eps.len() as u32, side)?;
    let mut per_scale = Vec::with_capacity(eps.len());
    for (l, coeffs) in (1..).zip(eps) {
        if coeffs.len() != tuple_count(l, side, n) {
            return Err(Error::Shape(format!(
                "scale {l} has {} tuples, got {} coefficients",
                tuple_count(l, side, n),
                coeffs.len()
            )));
        }
        let pairings = scale_pairings_unchecked(fs, n, side, l);
        let terms: Vec<f64> = pairings.iter().zip(coeffs).map(|(p, e)| p * e).collect();
        per_scale.push(pairwise_sum(&terms));
    }
    Ok(pairwise_sum(&per_scale))
}

/// `sup_{|ε| <= 1} Λ^d = Σ_l Σ_T |pairing_T|`.
pub fn eval_dyadic_sup(fs: &[CellFunction], max_scale: u32) -> Result<f64> {
    Ok(pairwise_sum(&scale_sups(fs, max_scale)?))
}

/// `Σ_{T ∈ I_l} |pairing_T|` for each `l = 1..=m`.
pub fn scale_sups(fs: &[CellFunction], max_scale: u32) -> Result<Vec<f64>> {
    let (n, side) = check_tuple(fs)?;
    check_scales(max_scale, side)?;
    Ok((1..=max_scale)
        .map(|l| {
            let p = scale_pairings_unchecked(fs, n, side, l);
            crate::numerics::sum::pairwise_sum_map(&p, f64::abs)
        })
        .collect())
}

/// Sign-optimal coefficients `ε_T = sign(pairing_T)`, `sign(0) = +1`, dense
/// per scale in enumeration order.
pub fn optimal_signs(fs: &[CellFunction], max_scale: u32) -> Result<Vec<Vec<f64>>> {
    let (n, side) = check_tuple(fs)?;
    check_scales(max_scale, side)?;
    Ok((1..=max_scale)
        .map(|l| {
            scale_pairings_unchecked(fs, n, side, l)
                .into_iter()
                .map(sign_or_plus)
                .collect()
        })
        .collect())
}

/// Sign-optimal coefficients as a [`CoefficientMap`].
pub fn optimal_coefficients(fs: &[CellFunction], max_scale: u32) -> Result<CoefficientMap> {
    let (n, side) = check_tuple(fs)?;
    let signs = optimal_signs(fs, max_scale)?;
    let mut map = CoefficientMap::new();
    for (l, s) in (1..).zip(signs) {
        for (t, e) in enumerate_tuples(l, side, n).into_iter().zip(s) {
            map.insert(t, e)?;
        }
    }
    Ok(map)
}

/// The kernel `G` with `Λ^d = Σ_cells G · F_slot` when every other function
/// is held fixed. Coefficients are dense as in [`eval_dyadic_form_dense`].
pub fn slot_kernel(fs: &[CellFunction], eps: &[Vec<f64>], slot: usize) -> Result<Vec<f64>> {
    let (n, side) = check_tuple(fs)?;
    check_scales(eps.len() as u32, side)?;
    if slot > n {
        return Err(Error::InvalidParameter(format!("slot {slot} out of 0..={n}")));
    }
    let strides = Strides { n, side };
    let mut kernel = vec![0.0; fs[slot].values().len()];
    let mut idx = vec![0u64; n + 1];
    let mut free = vec![0u64; n];
    for (l, coeffs) in (1u32..).zip(eps) {
        if coeffs.len() != tuple_count(l, side, n) {
            return Err(Error::Shape(format!("scale {l}: wrong number of coefficients")));
        }
        let len = 1u64 << l;
        let half = (len / 2) as usize;
        let weight_scale = 1.0 / len as f64;
        let mut product = vec![0.0; len as usize];
        for (pos, &e) in coeffs.iter().enumerate() {
            if e == 0.0 {
                continue;
            }
            free_indices_into(pos, side - l, &mut free);
            idx[0] = free.iter().fold(0, |a, &b| a ^ b);
            idx[1..].copy_from_slice(&free);
            let lo: Vec<u64> = idx[..n].iter().map(|&i| i << l).collect();
            let inner_start = (idx[n] << l) as usize;
            let mut outer = lo.clone();
            loop {
                let sigma: f64 = outer.iter().map(|&c| haar_sign(l, c)).product();
                let w = e * weight_scale * sigma;
                if slot == n {
                    product.fill(1.0);
                    for (j, f) in fs.iter().enumerate().take(n) {
                        let b = strides.base(j, &outer) + inner_start;
                        for (p, v) in product.iter_mut().zip(&f.values()[b..b + len as usize]) {
                            *p *= v;
                        }
                    }
                    let left: f64 = product[..half].iter().sum();
                    let right: f64 = product[half..].iter().sum();
                    kernel[strides.last(&outer)] += w * (left - right);
                } else {
                    let last = fs[n].values()[strides.last(&outer)];
                    if last != 0.0 {
                        product[..half].fill(w * last);
                        product[half..].fill(-w * last);
                        for (j, f) in fs.iter().enumerate().take(n) {
                            if j == slot {
                                continue;
                            }
                            let b = strides.base(j, &outer) + inner_start;
                            for (p, v) in product.iter_mut().zip(&f.values()[b..b + len as usize]) {
                                *p *= v;
                            }
                        }
                        let b = strides.base(slot, &outer) + inner_start;
                        for (g, p) in kernel[b..b + len as usize].iter_mut().zip(&product) {
                            *g += p;
                        }
                    }
                }
                if !next_in_box(&mut outer, &lo, len) {
                    break;
                }
            }
        }
    }
    Ok(kernel)
}
