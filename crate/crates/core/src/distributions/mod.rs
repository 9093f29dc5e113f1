//! Joint query distributions of the three verifiers, for one fixed choice
//! of Label Cover vertices, plus ρ-correlated product spaces.
//!
//! Every verifier picks, independently for each left label `i`, one of a
//! few branches that couple the query coordinates in `π^{-1}(i)`. Because
//! the choices are independent across `i` the joint law is a product over
//! blocks, and that product is the canonical representation here.

mod events;
mod rho;

pub use events::{QuadValueLaw, TripleValueLaw};
pub use rho::{ProductSpace, RhoCorrelated};

use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_within, Error, Result};
use crate::projection::{full_mask, submasks, Mask, Projection, MAX_MASK_BITS};
use crate::rng::{stream, unit_f64};
use crate::scalar::Scalar;

/// How a pair of query points `(z, z')` is related on one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coupling {
    /// `z' = -z`.
    Antipodal,
    /// `z' = z`.
    Equal,
    /// `z'` drawn independently.
    Independent,
}

impl Coupling {
    /// `E[χ_J(z) χ_{J'}(z')]` for masks inside one block, `z` uniform.
    pub fn char_value(self, j: Mask, j2: Mask) -> i8 {
        match self {
            Coupling::Independent => (j == 0 && j2 == 0) as i8,
            Coupling::Equal => (j == j2) as i8,
            Coupling::Antipodal if j == j2 => {
                if j2.count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            Coupling::Antipodal => 0,
        }
    }

    /// `(anti, free)` contribution of a coordinate set under this coupling.
    fn masks(self, coords: Mask) -> (Mask, Mask) {
        match self {
            Coupling::Antipodal => (coords, 0),
            Coupling::Equal => (0, 0),
            Coupling::Independent => (0, coords),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Hypergraph,
    E3sat,
    Fourss,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistributionKind::Hypergraph => "hypergraph",
            DistributionKind::E3sat => "e3sat",
            DistributionKind::Fourss => "fourss",
        })
    }
}

/// One per-block mixture component.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<S> {
    pub weight: S,
    /// E3SAT only: the value of `x_i` on this branch. There is no `x'`.
    pub pin: Option<i8>,
    /// Coupling of `(x, x')`; `None` when `x` is pinned.
    pub a: Option<Coupling>,
    /// Coupling of `(y, y')`.
    pub b: Coupling,
}

/// Quadruple `(x, x', y, y')` of point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadQuery {
    pub x: u64,
    pub x2: u64,
    pub y: u64,
    pub y2: u64,
}

/// Triple `(x, y, y')`; `x` lives on `{-1,1}^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleQuery {
    pub x: u64,
    pub y: u64,
    pub y2: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Query {
    Quad(QuadQuery),
    Triple(TripleQuery),
}

impl Query {
    /// `[x, x', y, y']` with `x' = 0` for triples.
    pub fn as_array(&self) -> [u64; 4] {
        match *self {
            Query::Quad(q) => [q.x, q.x2, q.y, q.y2],
            Query::Triple(t) => [t.x, 0, t.y, t.y2],
        }
    }
}

/// A verifier's query law as a product over label blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockFactoredDistribution<S> {
    kind: DistributionKind,
    k: usize,
    x_dim: usize,
    y_dim: usize,
    /// Coordinates of `x` owned by block `i` (for E3SAT just `{i}`).
    a_blocks: Vec<Mask>,
    /// Coordinates of `y` owned by block `i`.
    b_blocks: Vec<Mask>,
    branches: Vec<Branch<S>>,
    eps: Option<S>,
}

fn check_mask_dims(pi: &Projection) -> Result<()> {
    if pi.m() > MAX_MASK_BITS || pi.k() > MAX_MASK_BITS {
        return Err(Error::size(
            "projection dimension for mask arithmetic",
            pi.m().max(pi.k()) as u128,
            MAX_MASK_BITS as u128,
        ));
    }
    Ok(())
}

fn check_eps<S: Scalar>(eps: &S) -> Result<()> {
    if *eps <= S::zero() || *eps >= S::one() {
        return Err(Error::Input(format!("ε = {eps} must lie strictly between 0 and 1")));
    }
    Ok(())
}

fn check_shared_codomain(pi_vu: &Projection, pi_wu: &Projection) -> Result<()> {
    if pi_vu.k() != pi_wu.k() {
        return Err(Error::Input(format!(
            "projections map into [{}] and [{}]; they must share a codomain",
            pi_vu.k(),
            pi_wu.k()
        )));
    }
    Ok(())
}

/// Hypergraph test: per block, `x' = -x` with `y, y'` independent, or the
/// same with the roles of the two pairs swapped.
pub fn hypergraph_joint<S: Scalar>(pi_vu: &Projection, pi_wu: &Projection) -> Result<BlockFactoredDistribution<S>> {
    check_shared_codomain(pi_vu, pi_wu)?;
    check_mask_dims(pi_vu)?;
    check_mask_dims(pi_wu)?;
    let half = S::ratio(1, 2);
    let branches = vec![
        Branch { weight: half.clone(), pin: None, a: Some(Coupling::Antipodal), b: Coupling::Independent },
        Branch { weight: half, pin: None, a: Some(Coupling::Independent), b: Coupling::Antipodal },
    ];
    Ok(BlockFactoredDistribution {
        kind: DistributionKind::Hypergraph,
        k: pi_vu.k(),
        x_dim: pi_vu.m(),
        y_dim: pi_wu.m(),
        a_blocks: pi_vu.blocks(),
        b_blocks: pi_wu.blocks(),
        branches,
        eps: None,
    })
}

/// E3SAT test: `x` uniform on `{-1,1}^k`; `y' = -y` where `x_i = 1`, and
/// where `x_i = -1`, `y' = y` with probability `1 - ε` else independent.
pub fn e3sat_joint<S: Scalar>(pi_vu: &Projection, eps: S) -> Result<BlockFactoredDistribution<S>> {
    check_eps(&eps)?;
    check_mask_dims(pi_vu)?;
    let half = S::ratio(1, 2);
    let branches = vec![
        Branch { weight: half.clone(), pin: Some(1), a: None, b: Coupling::Antipodal },
        Branch {
            weight: half.clone() * (S::one() - eps.clone()),
            pin: Some(-1),
            a: None,
            b: Coupling::Equal,
        },
        Branch { weight: half * eps.clone(), pin: Some(-1), a: None, b: Coupling::Independent },
    ];
    Ok(BlockFactoredDistribution {
        kind: DistributionKind::E3sat,
        k: pi_vu.k(),
        x_dim: pi_vu.k(),
        y_dim: pi_vu.m(),
        a_blocks: (0..pi_vu.k()).map(|i| 1u64 << i).collect(),
        b_blocks: pi_vu.blocks(),
        branches,
        eps: Some(eps),
    })
}

/// Set-splitting test: per block, `x' = -x` and `y' = y` w.p. `1 - ε`
/// (else `y'` fresh), or the same with the pairs swapped.
pub fn fourss_joint<S: Scalar>(pi_vu: &Projection, pi_wu: &Projection, eps: S) -> Result<BlockFactoredDistribution<S>> {
    check_shared_codomain(pi_vu, pi_wu)?;
    check_eps(&eps)?;
    check_mask_dims(pi_vu)?;
    check_mask_dims(pi_wu)?;
    let keep = S::ratio(1, 2) * (S::one() - eps.clone());
    let fresh = S::ratio(1, 2) * eps.clone();
    let branches = vec![
        Branch { weight: keep.clone(), pin: None, a: Some(Coupling::Antipodal), b: Coupling::Equal },
        Branch { weight: fresh.clone(), pin: None, a: Some(Coupling::Antipodal), b: Coupling::Independent },
        Branch { weight: keep, pin: None, a: Some(Coupling::Equal), b: Coupling::Antipodal },
        Branch { weight: fresh, pin: None, a: Some(Coupling::Independent), b: Coupling::Antipodal },
    ];
    Ok(BlockFactoredDistribution {
        kind: DistributionKind::Fourss,
        k: pi_vu.k(),
        x_dim: pi_vu.m(),
        y_dim: pi_wu.m(),
        a_blocks: pi_vu.blocks(),
        b_blocks: pi_wu.blocks(),
        branches,
        eps: Some(eps),
    })
}

/// A fully specified branch choice for every block.
#[derive(Clone, Debug)]
pub(crate) struct BranchVector<S> {
    pub weight: S,
    /// `x` for E3SAT (determined by the pins).
    pub pinned_x: u64,
    pub a_anti: Mask,
    pub a_free: Mask,
    pub b_anti: Mask,
    pub b_free: Mask,
}

impl<S: Scalar> BlockFactoredDistribution<S> {
    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    pub fn eps(&self) -> Option<&S> {
        self.eps.as_ref()
    }

    pub fn branches(&self) -> &[Branch<S>] {
        &self.branches
    }

    pub fn a_block(&self, i: usize) -> Mask {
        self.a_blocks[i]
    }

    pub fn b_block(&self, i: usize) -> Mask {
        self.b_blocks[i]
    }

    /// Sum of the per-block branch weights (exactly 1 when well formed).
    pub fn branch_weight_total(&self) -> S {
        self.branches
            .iter()
            .fold(S::zero(), |acc, b| acc + b.weight.clone())
    }

    /// Blocks partition the coordinates of both query cubes.
    pub fn blocks_partition(&self) -> bool {
        let disjoint_cover = |blocks: &[Mask], dim: usize| {
            let mut seen = 0u64;
            for &b in blocks {
                if seen & b != 0 {
                    return false;
                }
                seen |= b;
            }
            seen == full_mask(dim)
        };
        disjoint_cover(&self.a_blocks, self.x_dim) && disjoint_cover(&self.b_blocks, self.y_dim)
    }

    fn check_masks(&self, a: Mask, a2: Mask, b: Mask, b2: Mask) -> Result<()> {
        let xm = full_mask(self.x_dim);
        let ym = full_mask(self.y_dim);
        if a & !xm != 0 || a2 & !xm != 0 || b & !ym != 0 || b2 & !ym != 0 {
            return Err(Error::Input("character mask outside the query cube".into()));
        }
        if self.kind == DistributionKind::E3sat && a2 != 0 {
            return Err(Error::Input("the E3SAT law has no x' query".into()));
        }
        Ok(())
    }

    /// Contribution of block `i` to `E[χ_α(x)χ_{α'}(x')χ_β(y)χ_{β'}(y')]`.
    pub fn block_char_value(&self, i: usize, a: Mask, a2: Mask, b: Mask, b2: Mask) -> S {
        let (ab, bb) = (self.a_blocks[i], self.b_blocks[i]);
        let (ja, ja2, jb, jb2) = (a & ab, a2 & ab, b & bb, b2 & bb);
        let mut total = S::zero();
        for br in &self.branches {
            let fa = match (br.pin, br.a) {
                (Some(s), _) => {
                    if ja != 0 {
                        s
                    } else {
                        1
                    }
                }
                (None, Some(c)) => c.char_value(ja, ja2),
                (None, None) => 1,
            };
            let f = fa * br.b.char_value(jb, jb2);
            if f != 0 {
                total = total + br.weight.clone() * S::from_i64_lossy(f as i64);
            }
        }
        total
    }

    fn char_expectation_raw(&self, a: Mask, a2: Mask, b: Mask, b2: Mask) -> S {
        let mut acc = S::one();
        for i in 0..self.k {
            let v = self.block_char_value(i, a, a2, b, b2);
            if v.is_zero() {
                return v;
            }
            acc = acc * v;
        }
        acc
    }

    fn expect_kind(&self, want: DistributionKind) -> Result<()> {
        if self.kind != want {
            return Err(Error::Mode(format!("expected a {want} distribution, got {}", self.kind)));
        }
        Ok(())
    }

    /// Bias `E[z_j]` of every single query coordinate, in the order
    /// `x_1.., x'_1.., y_1.., y'_1..` (no `x'` for E3SAT).
    pub fn single_coordinate_biases(&self) -> Vec<S> {
        let mut out = Vec::new();
        for j in 0..self.x_dim {
            out.push(self.char_expectation_raw(1 << j, 0, 0, 0));
        }
        if self.kind != DistributionKind::E3sat {
            for j in 0..self.x_dim {
                out.push(self.char_expectation_raw(0, 1 << j, 0, 0));
            }
        }
        for j in 0..self.y_dim {
            out.push(self.char_expectation_raw(0, 0, 1 << j, 0));
        }
        for j in 0..self.y_dim {
            out.push(self.char_expectation_raw(0, 0, 0, 1 << j));
        }
        out
    }

    /// Every individual query point is uniform on its cube: all characters
    /// of a single query have zero mean.
    pub fn has_uniform_marginals(&self) -> bool {
        let queries: &[usize] = if self.kind == DistributionKind::E3sat { &[0, 2, 3] } else { &[0, 1, 2, 3] };
        queries.iter().all(|&q| {
            let dim = if q < 2 { self.x_dim } else { self.y_dim };
            submasks(full_mask(dim)).skip(1).all(|s| {
                let mut m = [0u64; 4];
                m[q] = s;
                self.char_expectation_raw(m[0], m[1], m[2], m[3]).is_zero()
            })
        })
    }

    /// `Pr[(x_j, x'_j, y_{j'}, y'_{j'}) = pattern]` for quad kinds.
    pub fn coordinate_pattern_probability(&self, j: usize, j2: usize, pattern: [i8; 4]) -> Result<S> {
        if self.kind == DistributionKind::E3sat {
            return Err(Error::Mode("coordinate patterns are defined for quad queries".into()));
        }
        if j >= self.x_dim || j2 >= self.y_dim {
            return Err(Error::Input("coordinate outside the query cube".into()));
        }
        let pair_prob = |c: Coupling, s: i8, s2: i8| -> S {
            match c {
                Coupling::Antipodal => {
                    if s == -s2 {
                        S::ratio(1, 2)
                    } else {
                        S::zero()
                    }
                }
                Coupling::Equal => {
                    if s == s2 {
                        S::ratio(1, 2)
                    } else {
                        S::zero()
                    }
                }
                Coupling::Independent => S::ratio(1, 4),
            }
        };
        let block_of = |blocks: &[Mask], c: usize| blocks.iter().position(|&b| b >> c & 1 == 1).expect("blocks partition");
        let (ia, ib) = (block_of(&self.a_blocks, j), block_of(&self.b_blocks, j2));
        let a_coupling = |br: &Branch<S>| br.a.expect("quad kinds couple x");
        if ia == ib {
            Ok(self.branches.iter().fold(S::zero(), |acc, br| {
                acc + br.weight.clone()
                    * pair_prob(a_coupling(br), pattern[0], pattern[1])
                    * pair_prob(br.b, pattern[2], pattern[3])
            }))
        } else {
            let pa = self
                .branches
                .iter()
                .fold(S::zero(), |acc, br| acc + br.weight.clone() * pair_prob(a_coupling(br), pattern[0], pattern[1]));
            let pb = self
                .branches
                .iter()
                .fold(S::zero(), |acc, br| acc + br.weight.clone() * pair_prob(br.b, pattern[2], pattern[3]));
            Ok(pa * pb)
        }
    }

    /// Every `(branch_1, .., branch_k)` with its weight and the induced
    /// coupling masks, in lexicographic branch order.
    pub(crate) fn branch_vectors(&self, cap: u128) -> Result<Vec<BranchVector<S>>> {
        let nb = self.branches.len();
        let count = (nb as u128).checked_pow(self.k as u32).unwrap_or(u128::MAX);
        ensure_within("branch vectors", count, cap)?;
        let mut out = Vec::with_capacity(count as usize);
        let mut choice = vec![0usize; self.k];
        loop {
            let mut bv = BranchVector {
                weight: S::one(),
                pinned_x: 0,
                a_anti: 0,
                a_free: 0,
                b_anti: 0,
                b_free: 0,
            };
            for (i, &c) in choice.iter().enumerate() {
                let br = &self.branches[c];
                bv.weight = bv.weight * br.weight.clone();
                if br.pin == Some(-1) {
                    bv.pinned_x |= 1 << i;
                }
                if let Some(a) = br.a {
                    let (anti, free) = a.masks(self.a_blocks[i]);
                    bv.a_anti |= anti;
                    bv.a_free |= free;
                }
                let (anti, free) = br.b.masks(self.b_blocks[i]);
                bv.b_anti |= anti;
                bv.b_free |= free;
            }
            out.push(bv);
            let mut pos = self.k;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < nb {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }

    /// Upper bound on the support size of the exact law.
    pub fn support_bound(&self) -> u128 {
        let mut total: u128 = 1;
        for i in 0..self.k {
            let ca = self.a_blocks[i].count_ones();
            let cb = self.b_blocks[i].count_ones();
            let local: u128 = self
                .branches
                .iter()
                .map(|br| {
                    let a = match br.a {
                        None => 1u128,
                        Some(Coupling::Independent) => 1u128 << (2 * ca),
                        Some(_) => 1u128 << ca,
                    };
                    let b = if br.b == Coupling::Independent { 1u128 << (2 * cb) } else { 1u128 << cb };
                    a * b
                })
                .sum();
            total = total.saturating_mul(local);
        }
        total
    }

    /// Full probability mass function, keyed by `[x, x', y, y']` (`x' = 0`
    /// for E3SAT), built as a product of per-block laws.
    pub fn exact_pmf(&self, cap: u128) -> Result<BTreeMap<[u64; 4], S>> {
        ensure_within("query support", self.support_bound(), cap)?;
        let mut joint: BTreeMap<[u64; 4], S> = BTreeMap::new();
        joint.insert([0; 4], S::one());
        for i in 0..self.k {
            let local = self.block_pmf(i);
            let mut next: BTreeMap<[u64; 4], S> = BTreeMap::new();
            for (key, p) in &joint {
                for (lk, lp) in &local {
                    let merged = [key[0] | lk[0], key[1] | lk[1], key[2] | lk[2], key[3] | lk[3]];
                    let entry = next.entry(merged).or_insert_with(S::zero);
                    *entry = entry.clone() + p.clone() * lp.clone();
                }
            }
            joint = next;
        }
        joint.retain(|_, p| !p.is_zero());
        Ok(joint)
    }

    fn block_pmf(&self, i: usize) -> BTreeMap<[u64; 4], S> {
        fn pair_outcomes<S: Scalar>(c: Coupling, coords: Mask) -> Vec<(u64, u64, S)> {
            let n = coords.count_ones();
            match c {
                Coupling::Antipodal => submasks(coords).map(|s| (s, s ^ coords, S::inv_pow2(n))).collect(),
                Coupling::Equal => submasks(coords).map(|s| (s, s, S::inv_pow2(n))).collect(),
                Coupling::Independent => submasks(coords)
                    .flat_map(|s| submasks(coords).map(move |t| (s, t, S::inv_pow2(2 * n))))
                    .collect(),
            }
        }
        let mut out: BTreeMap<[u64; 4], S> = BTreeMap::new();
        for br in &self.branches {
            let a_side = match (br.pin, br.a) {
                (Some(s), _) => vec![(if s == -1 { self.a_blocks[i] } else { 0 }, 0, S::one())],
                (None, Some(c)) => pair_outcomes(c, self.a_blocks[i]),
                (None, None) => vec![(0, 0, S::one())],
            };
            let b_side = pair_outcomes::<S>(br.b, self.b_blocks[i]);
            for (x, x2, pa) in &a_side {
                for (y, y2, pb) in &b_side {
                    let entry = out.entry([*x, *x2, *y, *y2]).or_insert_with(S::zero);
                    *entry = entry.clone() + br.weight.clone() * pa.clone() * pb.clone();
                }
            }
        }
        out
    }

    /// One query drawn from stream `index` of `seed`. Each block consumes
    /// one generator output, followed by four for the point bits.
    pub fn sample(&self, seed: u64, index: u64) -> Query {
        let domain = format!("{}-query", self.kind);
        let mut rng = stream(seed, &domain, index);
        let cumulative: Vec<f64> = self
            .branches
            .iter()
            .scan(0.0, |acc, b| {
                *acc += b.weight.to_f64().unwrap_or(0.0);
                Some(*acc)
            })
            .collect();
        let mut choice = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            let u = unit_f64(&mut rng);
            choice.push(cumulative.iter().position(|&c| u < c).unwrap_or(self.branches.len() - 1));
        }
        let (rx, rx2, ry, ry2) = (rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64());
        let (mut x, mut x2, mut y, mut y2) = (0u64, 0u64, 0u64, 0u64);
        let couple = |c: Coupling, coords: Mask, z: u64, fresh: u64| -> (u64, u64) {
            let z = z & coords;
            let z2 = match c {
                Coupling::Antipodal => z ^ coords,
                Coupling::Equal => z,
                Coupling::Independent => fresh & coords,
            };
            (z, z2)
        };
        for (i, &c) in choice.iter().enumerate() {
            let br = &self.branches[c];
            match (br.pin, br.a) {
                (Some(s), _) => {
                    if s == -1 {
                        x |= self.a_blocks[i];
                    }
                }
                (None, Some(cp)) => {
                    let (p, q) = couple(cp, self.a_blocks[i], rx, rx2);
                    x |= p;
                    x2 |= q;
                }
                (None, None) => {}
            }
            let (p, q) = couple(br.b, self.b_blocks[i], ry, ry2);
            y |= p;
            y2 |= q;
        }
        if self.kind == DistributionKind::E3sat {
            Query::Triple(TripleQuery { x, y, y2 })
        } else {
            Query::Quad(QuadQuery { x, x2, y, y2 })
        }
    }

    /// Samples `0..n` of `seed`, in index order.
    pub fn sample_many(&self, seed: u64, n: u64) -> Vec<Query> {
        (0..n).into_par_iter().map(|i| self.sample(seed, i)).collect()
    }
}

fn ensure_quad_kind<S: Scalar>(dist: &BlockFactoredDistribution<S>, want: DistributionKind) -> Result<()> {
    dist.expect_kind(want)
}

/// `E[χ_α(x)χ_{α'}(x')χ_β(y)χ_{β'}(y')]` under the hypergraph law.
pub fn char_expectation_hypergraph<S: Scalar>(
    dist: &BlockFactoredDistribution<S>,
    alpha: Mask,
    alpha2: Mask,
    beta: Mask,
    beta2: Mask,
) -> Result<S> {
    ensure_quad_kind(dist, DistributionKind::Hypergraph)?;
    dist.check_masks(alpha, alpha2, beta, beta2)?;
    Ok(dist.char_expectation_raw(alpha, alpha2, beta, beta2))
}

/// `E[χ_α(x)χ_β(y)χ_{β'}(y')]` under the E3SAT law (`α ⊆ [k]`).
pub fn char_expectation_e3sat<S: Scalar>(
    dist: &BlockFactoredDistribution<S>,
    alpha: Mask,
    beta: Mask,
    beta2: Mask,
) -> Result<S> {
    dist.expect_kind(DistributionKind::E3sat)?;
    dist.check_masks(alpha, 0, beta, beta2)?;
    Ok(dist.char_expectation_raw(alpha, 0, beta, beta2))
}

/// `E[χ_α(x)χ_{α'}(x')χ_β(y)χ_{β'}(y')]` under the set-splitting law.
pub fn char_expectation_4ss<S: Scalar>(
    dist: &BlockFactoredDistribution<S>,
    alpha: Mask,
    alpha2: Mask,
    beta: Mask,
    beta2: Mask,
) -> Result<S> {
    ensure_quad_kind(dist, DistributionKind::Fourss)?;
    dist.check_masks(alpha, alpha2, beta, beta2)?;
    Ok(dist.char_expectation_raw(alpha, alpha2, beta, beta2))
}

/// Total variation distance between an empirical sample and an exact law.
pub fn total_variation<S: Scalar>(exact: &BTreeMap<[u64; 4], S>, samples: &[Query]) -> f64 {
    let mut counts: BTreeMap<[u64; 4], u64> = BTreeMap::new();
    for q in samples {
        *counts.entry(q.as_array()).or_insert(0) += 1;
    }
    let n = samples.len() as f64;
    let mut tv = 0.0;
    for (key, p) in exact {
        let emp = counts.get(key).copied().unwrap_or(0) as f64 / n;
        tv += (p.to_f64().unwrap_or(0.0) - emp).abs();
    }
    for (key, c) in &counts {
        if !exact.contains_key(key) {
            tv += *c as f64 / n;
        }
    }
    tv / 2.0
}
