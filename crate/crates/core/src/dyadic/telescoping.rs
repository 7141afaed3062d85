//! Exact integer checks of the dyadic telescoping identity and the parity
//! rule for children of balanced tuples.
//!
//! For pair variables `(a, b) = (x_i^0, x_i^1)`, `i >= k`, and plain variables
//! `x_i`, `i < k`, the identity reads
//!
//! ```text
//! Σ_{I ∈ I_l} [ Π_{i<k} h_{I_i}(x_i) Π_{i>=k} (1_{I_i}(a) h_{I_i}(b) + h_{I_i}(a) 1_{I_i}(b))
//!             + Π_{i<k} 1_{I_i}(x_i) Π_{i>=k} (1_{I_i}(a) 1_{I_i}(b) + h_{I_i}(a) h_{I_i}(b)) ]
//!   = 2^{n-k+2} Σ_{J ∈ I_{l-1}} Π_{i<k} 1_{J_i}(x_i) Π_{i>=k} 1_{J_i}(a) 1_{J_i}(b)
//! ```
//!
//! at every point of `[0, 2^L)^{2n-k+2}` (points are unit cells).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::IntervalTuple;

/// Largest number of evaluation points accepted by the exhaustive check.
pub const MAX_TELESCOPING_POINTS: u64 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TelescopingReport {
    pub n: usize,
    pub k: usize,
    pub scale: u32,
    pub side_exponent: u32,
    pub points: u64,
    /// `max |LHS - RHS|` over all points; the identity holds iff this is 0.
    pub max_discrepancy: i64,
    /// Points where the two sides are nonzero.
    pub support: u64,
}

impl TelescopingReport {
    pub fn holds(&self) -> bool {
        self.max_discrepancy == 0
    }
}

#[derive(Clone, Copy)]
struct Plain {
    parent: u64,
    child: u64,
    h: i64,
}

#[derive(Clone, Copy)]
struct Pair {
    parent: u64,
    child: u64,
    /// `1(a) h(b) + h(a) 1(b)` for the interval containing `a`.
    u: i64,
    /// `1(a) 1(b) + h(a) h(b)`.
    v: i64,
    /// `1_J(a) 1_J(b)` for the child containing `a`.
    same_child: i64,
}

fn sign(scale: u32, cell: u64) -> i64 {
    if (cell >> (scale - 1)) & 1 == 0 {
        1
    } else {
        -1
    }
}

struct Walk<'a> {
    plains: &'a [Plain],
    pairs: &'a [Pair],
    plain_slots: usize,
    pair_slots: usize,
    rhs_factor: i64,
    max_discrepancy: i64,
    support: u64,
}

impl Walk<'_> {
    /// `h` is the running product for the first LHS term, `w` for the second,
    /// `c` for the RHS indicators; `xp`/`xc` accumulate parent/child XORs.
    fn plain(&mut self, depth: usize, xp: u64, xc: u64, h: i64) {
        if depth == self.plain_slots {
            self.pair(0, xp, xc, h, 1, 1);
            return;
        }
        for o in self.plains {
            self.plain(depth + 1, xp ^ o.parent, xc ^ o.child, h * o.h);
        }
    }

    fn pair(&mut self, depth: usize, xp: u64, xc: u64, h: i64, w: i64, c: i64) {
        if depth + 1 == self.pair_slots {
            let mut worst = self.max_discrepancy;
            let mut support = 0u64;
            for o in self.pairs {
                let lhs = if xp == o.parent { h * o.u + w * o.v } else { 0 };
                let rhs = if xc == o.child { self.rhs_factor * c * o.same_child } else { 0 };
                worst = worst.max((lhs - rhs).abs());
                support += u64::from(lhs != 0 || rhs != 0);
            }
            self.max_discrepancy = worst;
            self.support += support;
            return;
        }
        for o in self.pairs {
            if o.u == 0 && o.v == 0 && o.same_child == 0 {
                // Every completion of this branch has LHS = RHS = 0.
                continue;
            }
            self.pair(depth + 1, xp ^ o.parent, xc ^ o.child, h * o.u, w * o.v, c * o.same_child);
        }
    }
}

/// Checks the telescoping identity at every point of `[0, 2^L)^{2n-k+2}` in
/// exact integer arithmetic. Needs `1 <= k <= n` and `2 <= l <= L`.
pub fn verify_dyadic_telescoping(n: usize, k: usize, scale: u32, side_exponent: u32) -> Result<TelescopingReport> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("telescoping needs 1 <= k <= n, got n={n}, k={k}")));
    }
    if scale < 2 || scale > side_exponent {
        return Err(Error::InvalidParameter(format!(
            "telescoping needs 2 <= l <= L, got l={scale}, L={side_exponent}"
        )));
    }
    let dims = (2 * n - k + 2) as u64;
    let bits = dims * u64::from(side_exponent);
    if bits > 34 {
        return Err(Error::Unsupported(format!(
            "2^{bits} evaluation points exceed the supported {MAX_TELESCOPING_POINTS}"
        )));
    }
    let cells = 1u64 << side_exponent;
    let plains: Vec<Plain> = (0..cells)
        .map(|x| Plain {
            parent: x >> scale,
            child: x >> (scale - 1),
            h: sign(scale, x),
        })
        .collect();
    let mut pairs = Vec::with_capacity((cells * cells) as usize);
    for a in 0..cells {
        for b in 0..cells {
            let same_parent = a >> scale == b >> scale;
            let (u, v) = if same_parent {
                let (ha, hb) = (sign(scale, a), sign(scale, b));
                (ha + hb, 1 + ha * hb)
            } else {
                (0, 0)
            };
            pairs.push(Pair {
                parent: a >> scale,
                child: a >> (scale - 1),
                u,
                v,
                same_child: i64::from(a >> (scale - 1) == b >> (scale - 1)),
            });
        }
    }
    let mut walk = Walk {
        plains: &plains,
        pairs: &pairs,
        plain_slots: k,
        pair_slots: n - k + 1,
        rhs_factor: 1 << (n - k + 2),
        max_discrepancy: 0,
        support: 0,
    };
    walk.plain(0, 0, 0, 1);
    Ok(TelescopingReport {
        n,
        k,
        scale,
        side_exponent,
        points: 1u64 << bits,
        max_discrepancy: walk.max_discrepancy,
        support: walk.support,
    })
}

/// Whether the children tuple `(I_0^{s_0}, …, I_n^{s_n})` of `tuple` is
/// Walsh-balanced. For balanced `tuple` this is the case exactly when the
/// number of right children `s_i = 1` is even.
pub fn verify_parity_rule(tuple: &IntervalTuple, sides: &[u8]) -> Result<bool> {
    Ok(tuple.children(sides)?.is_walsh_balanced())
}
