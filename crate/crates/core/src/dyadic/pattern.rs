//! The product pattern `F^k`: for `i <= k` and every `r ∈ {0,1}^{n-k}`, the
//! factor `F_i(x_0, …, x̂_i, …, x_k, x_{k+1}^{r_{k+1}}, …, x_n^{r_n})`.

use crate::error::{Error, Result};

/// A variable of the pattern: a plain `x_j` (`j <= k`) or a split copy `x_j^r`
/// (`j > k`, `r ∈ {0, 1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Plain(usize),
    Split(usize, u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    /// Which `F_i` this factor evaluates.
    pub function: usize,
    /// Its `n` arguments in order.
    pub args: Vec<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPattern {
    n: usize,
    k: usize,
    factors: Vec<Factor>,
}

impl ProductPattern {
    /// Pattern for `0 <= k <= n`, `n >= 1`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "product pattern needs 0 <= k <= n and n >= 1, got n={n}, k={k}"
            )));
        }
        let splits = n - k;
        let mut factors = Vec::with_capacity((k + 1) << splits);
        for i in 0..=k {
            for r in 0..(1usize << splits) {
                let mut args = Vec::with_capacity(n);
                args.extend((0..=k).filter(|&j| j != i).map(Var::Plain));
                for (pos, j) in (k + 1..=n).enumerate() {
                    let bit = (r >> (splits - 1 - pos)) & 1;
                    args.push(Var::Split(j, bit as u8));
                }
                factors.push(Factor { function: i, args });
            }
        }
        Ok(Self { n, k, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Every variable that occurs in some factor.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = (0..=self.k).map(Var::Plain).collect();
        for j in self.k + 1..=self.n {
            vars.push(Var::Split(j, 0));
            vars.push(Var::Split(j, 1));
        }
        vars
    }
}
