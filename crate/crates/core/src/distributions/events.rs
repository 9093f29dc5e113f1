//! Exact laws of the values a verifier reads from given tables.
//!
//! Once every block's branch is fixed, `(x, x')` and `(y, y')` are
//! independent, and each pair is a uniform point together with a partner
//! obtained by flipping some coordinates and redrawing others. Each such
//! pair law is counted once and cached.

use std::collections::HashMap;

use super::{BlockFactoredDistribution, DistributionKind};
use crate::boolean_fourier::BooleanTable;
use crate::error::{Error, Result};
use crate::projection::{submasks, Mask};
use crate::scalar::Scalar;

/// Law of `(T(x), T(x'), T'(y), T'(y'))`. Bit `q` of the index is set when
/// the `q`-th read is not `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadValueLaw<S> {
    pub probs: [S; 16],
}

/// Law of `(A(x), B(y), B(y'))`, indexed as in [`QuadValueLaw`].
#[derive(Clone, Debug, PartialEq)]
pub struct TripleValueLaw<S> {
    pub probs: [S; 8],
}

impl<S: Scalar> QuadValueLaw<S> {
    /// All four reads are `1`.
    pub fn all_ones(&self) -> S {
        self.probs[0].clone()
    }

    /// All four reads equal (both colours).
    pub fn all_equal(&self) -> S {
        self.probs[0].clone() + self.probs[15].clone()
    }

    /// `E[T(x)T(x')T'(y)T'(y')]` for `±1` tables.
    pub fn product_mean(&self) -> S {
        self.probs.iter().enumerate().fold(S::zero(), |acc, (idx, p)| {
            if (idx as u32).count_ones() % 2 == 0 {
                acc + p.clone()
            } else {
                acc - p.clone()
            }
        })
    }

    /// `Pr[T(x) = 1, T(x') = 1]`.
    pub fn x_pair_ones(&self) -> S {
        (0..16)
            .filter(|idx| idx & 0b11 == 0)
            .fold(S::zero(), |acc, idx| acc + self.probs[idx].clone())
    }
}

impl<S: Scalar> TripleValueLaw<S> {
    pub fn all_ones(&self) -> S {
        self.probs[0].clone()
    }

    /// Probability the E3SAT test accepts.
    pub fn acceptance(&self) -> S {
        S::one() - self.all_ones()
    }

    /// `E[A(x)B(y)B(y')]` for `±1` tables.
    pub fn product_mean(&self) -> S {
        self.probs.iter().enumerate().fold(S::zero(), |acc, (idx, p)| {
            if (idx as u32).count_ones() % 2 == 0 {
                acc + p.clone()
            } else {
                acc - p.clone()
            }
        })
    }
}

fn read_bit(t: &BooleanTable, z: u64) -> usize {
    (t.get(z) != 1) as usize
}

/// Counts of `(T(z), T(z'))` over `z` and the redrawn bits, where
/// `z' = ((z ^ anti) & !free) | s` for `s ⊆ free`.
fn pair_histogram(t: &BooleanTable, anti: Mask, free: Mask) -> [u64; 4] {
    let mut h = [0u64; 4];
    for z in 0..t.len() as u64 {
        let base = (z ^ anti) & !free;
        let first = read_bit(t, z);
        for s in submasks(free) {
            h[first | read_bit(t, base | s) << 1] += 1;
        }
    }
    h
}

struct PairCache<'a> {
    table: &'a BooleanTable,
    seen: HashMap<(Mask, Mask), [u64; 4]>,
}

impl<'a> PairCache<'a> {
    fn new(table: &'a BooleanTable) -> Self {
        PairCache { table, seen: HashMap::new() }
    }

    fn probs<S: Scalar>(&mut self, anti: Mask, free: Mask) -> [S; 4] {
        let table = self.table;
        let h = *self.seen.entry((anti, free)).or_insert_with(|| pair_histogram(table, anti, free));
        let scale = S::inv_pow2(table.dim() as u32 + free.count_ones());
        h.map(|c| S::from_u64_lossy(c) * scale.clone())
    }
}

fn check_dim(t: &BooleanTable, want: usize, what: &str) -> Result<()> {
    if t.dim() != want {
        return Err(Error::Input(format!("{what} table has dimension {}, expected {want}", t.dim())));
    }
    Ok(())
}

impl<S: Scalar> BlockFactoredDistribution<S> {
    /// Exact law of the four reads, `ta` on `(x, x')` and `tb` on `(y, y')`.
    pub fn quad_value_law(&self, ta: &BooleanTable, tb: &BooleanTable, cap: u128) -> Result<QuadValueLaw<S>> {
        if self.kind() == DistributionKind::E3sat {
            return Err(Error::Mode("the E3SAT law reads three values".into()));
        }
        check_dim(ta, self.x_dim(), "x-side")?;
        check_dim(tb, self.y_dim(), "y-side")?;
        let mut ca = PairCache::new(ta);
        let mut cb = PairCache::new(tb);
        let mut probs: [S; 16] = std::array::from_fn(|_| S::zero());
        for bv in self.branch_vectors(cap)? {
            let pa: [S; 4] = ca.probs(bv.a_anti, bv.a_free);
            let pb: [S; 4] = cb.probs(bv.b_anti, bv.b_free);
            for (ia, a) in pa.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (ib, b) in pb.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                    let slot = &mut probs[ia | ib << 2];
                    *slot = slot.clone() + bv.weight.clone() * a.clone() * b.clone();
                }
            }
        }
        Ok(QuadValueLaw { probs })
    }

    /// Exact law of `(A(x), B(y), B(y'))` under the E3SAT law.
    pub fn triple_value_law(&self, a: &BooleanTable, b: &BooleanTable, cap: u128) -> Result<TripleValueLaw<S>> {
        if self.kind() != DistributionKind::E3sat {
            return Err(Error::Mode("only the E3SAT law reads three values".into()));
        }
        check_dim(a, self.x_dim(), "left")?;
        check_dim(b, self.y_dim(), "right")?;
        let mut cb = PairCache::new(b);
        let mut probs: [S; 8] = std::array::from_fn(|_| S::zero());
        for bv in self.branch_vectors(cap)? {
            let ia = read_bit(a, bv.pinned_x);
            let pb: [S; 4] = cb.probs(bv.b_anti, bv.b_free);
            for (ib, p) in pb.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                let slot = &mut probs[ia | ib << 1];
                *slot = slot.clone() + bv.weight.clone() * p.clone();
            }
        }
        Ok(TripleValueLaw { probs })
    }
}
