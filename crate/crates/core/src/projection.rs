//! Projections `[m] -> [k]` and subset masks.
//!
//! A subset of `[d]` is a `u64` bitmask, bit `j` standing for label `j + 1`.
//! Mask-valued methods require `k, m <= 64`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mask = u64;

/// Largest label set for which mask operations are available.
pub const MAX_MASK_BITS: usize = 64;

pub fn popcount(mask: Mask) -> u32 {
    mask.count_ones()
}

/// Mask with the low `bits` bits set.
pub fn full_mask(bits: usize) -> Mask {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Iterates the set bits of `mask`, lowest first.
pub fn bits(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(j)
        }
    })
}

/// Iterates every submask of `mask`, starting from the empty set.
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
        Some(cur)
    })
}

pub fn mask_from_labels(labels: &[usize]) -> Mask {
    labels.iter().fold(0, |acc, &j| acc | (1u64 << j))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Projection {
    k: usize,
    map: Vec<usize>,
}

impl Projection {
    pub fn new(k: usize, map: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("projection codomain must be nonempty".into()));
        }
        if map.is_empty() {
            return Err(Error::Input("projection domain must be nonempty".into()));
        }
        if let Some((j, &i)) = map.iter().enumerate().find(|(_, &i)| i >= k) {
            return Err(Error::Input(format!(
                "projection value {} at position {} outside [1, {}]",
                i + 1,
                j + 1,
                k
            )));
        }
        Ok(Projection { k, map })
    }

    pub fn constant(k: usize, m: usize, value: usize) -> Result<Self> {
        Self::new(k, vec![value; m])
    }

    pub fn identity(m: usize) -> Self {
        Projection {
            k: m,
            map: (0..m).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(k: usize, m: usize, rng: &mut R) -> Self {
        Projection {
            k,
            map: (0..m).map(|_| rng.gen_range(0..k)).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.map[j]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_onto(&self) -> bool {
        let mut seen = vec![false; self.k];
        self.map.iter().for_each(|&i| seen[i] = true);
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.k == self.m() && self.is_onto()
    }

    /// `π^{-1}(i)` as a mask over `[m]`.
    pub fn preimage(&self, i: usize) -> Mask {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == i)
            .fold(0, |acc, (j, _)| acc | (1u64 << j))
    }

    /// All preimage blocks, indexed by `i in [k]`.
    pub fn blocks(&self) -> Vec<Mask> {
        let mut out = vec![0u64; self.k];
        for (j, &i) in self.map.iter().enumerate() {
            out[i] |= 1u64 << j;
        }
        out
    }

    /// `π(α)` as a mask over `[k]`.
    pub fn image(&self, alpha: Mask) -> Mask {
        bits(alpha).fold(0, |acc, j| acc | (1u64 << self.map[j]))
    }

    /// `{i in π(α) : |π^{-1}(i) ∩ α| odd}`.
    pub fn odd_image(&self, alpha: Mask) -> Mask {
        bits(alpha).fold(0, |acc, j| acc ^ (1u64 << self.map[j]))
    }

    /// Image of a set given as explicit labels (no mask width limit).
    pub fn image_size_of(&self, labels: &[usize]) -> usize {
        let mut img: Vec<usize> = labels.iter().map(|&j| self.map[j]).collect();
        img.sort_unstable();
        img.dedup();
        img.len()
    }
}
