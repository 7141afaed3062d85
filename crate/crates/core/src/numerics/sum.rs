//! Deterministic pairwise (tree) summation.
//!
//! The tree shape depends only on the input length, so results are
//! reproducible regardless of how the inputs were produced.

const LEAF: usize = 8;

pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_map(values, |v| v)
}

pub fn pairwise_sum_map(values: &[f64], f: impl Fn(f64) -> f64 + Copy) -> f64 {
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, &v| acc + f(v));
    }
    let mid = values.len() / 2;
    pairwise_sum_map(&values[..mid], f) + pairwise_sum_map(&values[mid..], f)
}

/// Streaming pairwise accumulator. Pushing values `v_0, v_1, ...` and calling
/// [`PairwiseAccumulator::total`] gives the same tree as a binary-counter
/// merge over blocks of [`LEAF`] values.
#[derive(Debug, Default, Clone)]
pub struct PairwiseAccumulator {
    block: f64,
    block_len: usize,
    // levels[i] holds a partial sum of LEAF * 2^i values, if present
    levels: Vec<Option<f64>>,
}

impl PairwiseAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, v: f64) {
        self.block += v;
        self.block_len += 1;
        if self.block_len == LEAF {
            let mut carry = self.block;
            self.block = 0.0;
            self.block_len = 0;
            for level in self.levels.iter_mut() {
                match level.take() {
                    Some(s) => carry += s,
                    None => {
                        *level = Some(carry);
                        return;
                    }
                }
            }
            self.levels.push(Some(carry));
        }
    }

    pub fn total(&self) -> f64 {
        let mut acc = self.block;
        for s in self.levels.iter().flatten() {
            acc += s;
        }
        acc
    }
}
