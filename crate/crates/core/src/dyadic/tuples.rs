//! Enumeration of the interval family `I_l`: (n+1)-tuples of scale-`l`
//! dyadic intervals inside `[0, 2^L)` whose indices Walsh-sum to zero.

use crate::numerics::IntervalTuple;

/// Number of members of `I_l` inside `[0, 2^L)`: `2^{(L-l) n}`, or 0 when `l > L`.
pub fn tuple_count(scale: u32, side_exponent: u32, n: usize) -> usize {
    if scale > side_exponent {
        return 0;
    }
    1usize << ((side_exponent - scale) as usize * n)
}

/// All members of `I_l` inside `[0, 2^L)` in lexicographic order of the free
/// indices `(I_1, ..., I_n)`; `I_0` is their Walsh sum. Empty when `l > L`.
pub fn enumerate_tuples(scale: u32, side_exponent: u32, n: usize) -> Vec<IntervalTuple> {
    let count = tuple_count(scale, side_exponent, n);
    let bits = side_exponent.saturating_sub(scale);
    let mut free = vec![0u64; n];
    (0..count)
        .map(|pos| {
            free_indices_into(pos, bits, &mut free);
            IntervalTuple::balanced_from_free(scale, &free)
        })
        .collect()
}

/// Decodes the enumeration position into the free indices `(I_1..I_n)`.
#[inline]
pub(crate) fn free_indices_into(mut pos: usize, bits: u32, free: &mut [u64]) {
    let mask = (1usize << bits) - 1;
    for f in free.iter_mut().rev() {
        *f = (pos & mask) as u64;
        pos >>= bits;
    }
}

/// Enumeration position of the member of `I_l` with free indices `free`.
#[cfg(test)]
fn position_of_free(free: &[u64], bits: u32) -> usize {
    free.iter().fold(0usize, |acc, &f| (acc << bits) | f as usize)
}
