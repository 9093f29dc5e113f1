//! Brute-force oracles for the integration tests and the acceptance run.
//!
//! Every verifier law is re-derived here from its sampling procedure: each
//! block picks one option, and inside a block every coordinate pair is
//! antipodal, equal or independent. Probabilities are integer numerators
//! over a common power-of-two-times-`q^k` denominator, so sums stay exact
//! and fast. Nothing in this module calls the library's transforms or laws.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcpforge::boolean_fourier::{BooleanTable, TableMode};
use pcpforge::label_cover::{generate_planted, LabelCoverInstance, Labeling};
use pcpforge::projection::Projection;
use pcpforge::Exact;

pub fn q(n: i64, d: i64) -> Exact {
    Exact::new(BigInt::from(n), BigInt::from(d))
}

pub fn q128(n: i128, d: i128) -> Exact {
    Exact::new(BigInt::from(n), BigInt::from(d))
}

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn chi(mask: u64, x: u64) -> i128 {
    if (mask & x).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Noise rate `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Eps {
    pub p: i64,
    pub q: i64,
}

impl Eps {
    pub const QUARTER: Eps = Eps { p: 1, q: 4 };
    pub const SIXTEENTH: Eps = Eps { p: 1, q: 16 };

    pub fn exact(self) -> Exact {
        q(self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    Anti,
    Equal,
    Free,
}

/// Weight over 4 of the bit pair `(a, b)`.
fn pair_weight(law: Pair, a: u64, b: u64) -> i128 {
    match law {
        Pair::Anti => 2 * i128::from(a != b),
        Pair::Equal => 2 * i128::from(a == b),
        Pair::Free => 1,
    }
}

/// Weight over 4 of the product bit `a ^ b`, summed over both pairs.
fn product_weight(law: Pair, z: u64) -> i128 {
    match law {
        Pair::Anti => 4 * i128::from(z == 1),
        Pair::Equal => 4 * i128::from(z == 0),
        Pair::Free => 2,
    }
}

#[derive(Clone, Copy, Debug)]
struct Opt {
    w: i128,
    /// E3SAT: the bit of `x_i` on this option.
    pin: Option<u64>,
    x: Pair,
    y: Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Hypergraph,
    E3sat,
    Fourss,
}

/// A verifier law written as its per-block sampling options.
#[derive(Clone, Debug)]
pub struct Law {
    pub kind: Kind,
    pub k: usize,
    pub m: usize,
    den: i128,
    opts: Vec<Opt>,
    xblocks: Vec<u64>,
    yblocks: Vec<u64>,
}

fn preimages(pi: &Projection) -> Vec<u64> {
    let mut out = vec![0u64; pi.k()];
    for (j, &i) in pi.map().iter().enumerate() {
        out[i] |= 1 << j;
    }
    out
}

impl Law {
    pub fn hypergraph(pi_vu: &Projection, pi_wu: &Projection) -> Law {
        let opt = |x, y| Opt { w: 1, pin: None, x, y };
        Law {
            kind: Kind::Hypergraph,
            k: pi_vu.k(),
            m: pi_vu.m(),
            den: 2,
            opts: vec![opt(Pair::Anti, Pair::Free), opt(Pair::Free, Pair::Anti)],
            xblocks: preimages(pi_vu),
            yblocks: preimages(pi_wu),
        }
    }

    pub fn e3sat(pi: &Projection, eps: Eps) -> Law {
        let (p, qq) = (eps.p as i128, eps.q as i128);
        let opt = |w, pin, y| Opt { w, pin: Some(pin), x: Pair::Free, y };
        Law {
            kind: Kind::E3sat,
            k: pi.k(),
            m: pi.m(),
            den: 2 * qq,
            opts: vec![opt(qq, 0, Pair::Anti), opt(qq - p, 1, Pair::Equal), opt(p, 1, Pair::Free)],
            xblocks: vec![0; pi.k()],
            yblocks: preimages(pi),
        }
    }

    pub fn fourss(pi_vu: &Projection, pi_wu: &Projection, eps: Eps) -> Law {
        let (p, qq) = (eps.p as i128, eps.q as i128);
        let opt = |w, x, y| Opt { w, pin: None, x, y };
        Law {
            kind: Kind::Fourss,
            k: pi_vu.k(),
            m: pi_vu.m(),
            den: 2 * qq,
            opts: vec![
                opt(qq - p, Pair::Anti, Pair::Equal),
                opt(p, Pair::Anti, Pair::Free),
                opt(qq - p, Pair::Equal, Pair::Anti),
                opt(p, Pair::Free, Pair::Anti),
            ],
            xblocks: preimages(pi_vu),
            yblocks: preimages(pi_wu),
        }
    }

    fn x_coords(&self) -> u32 {
        if self.kind == Kind::E3sat {
            0
        } else {
            self.m as u32
        }
    }

    /// Denominator of [`Law::weight`].
    pub fn denominator(&self) -> i128 {
        self.den.pow(self.k as u32) * 4i128.pow(self.x_coords() + self.m as u32)
    }

    /// Numerator of `Pr[x, x', y, y']` (`x'` ignored for E3SAT, where `x`
    /// has `k` bits).
    pub fn weight(&self, t: [u64; 4]) -> i128 {
        let [x, x2, y, y2] = t;
        let mut acc = 1i128;
        for i in 0..self.k {
            let mut block = 0i128;
            for o in &self.opts {
                if let Some(pin) = o.pin {
                    if x >> i & 1 != pin {
                        continue;
                    }
                }
                let mut w = o.w;
                for j in ones(self.xblocks[i]) {
                    w *= pair_weight(o.x, x >> j & 1, x2 >> j & 1);
                }
                for j in ones(self.yblocks[i]) {
                    w *= pair_weight(o.y, y >> j & 1, y2 >> j & 1);
                }
                block += w;
            }
            if block == 0 {
                return 0;
            }
            acc *= block;
        }
        acc
    }

    /// Numerator of `Pr[xx' = z, yy' = w]` over [`Law::denominator`]; the
    /// E3SAT `x` is summed out and `z` ignored.
    pub fn product_weight(&self, z: u64, w: u64) -> i128 {
        let mut acc = 1i128;
        for i in 0..self.k {
            let mut block = 0i128;
            for o in &self.opts {
                let mut v = o.w;
                for j in ones(self.xblocks[i]) {
                    v *= product_weight(o.x, z >> j & 1);
                }
                for j in ones(self.yblocks[i]) {
                    v *= product_weight(o.y, w >> j & 1);
                }
                block += v;
            }
            acc *= block;
        }
        acc
    }

    /// Numerator of `Pr[y, y']` with `x` summed out, over
    /// `den^k · 4^m`.
    pub fn y_pair_weight(&self, y: u64, y2: u64) -> i128 {
        let mut acc = 1i128;
        for i in 0..self.k {
            let mut block = 0i128;
            for o in &self.opts {
                let mut w = o.w;
                for j in ones(self.yblocks[i]) {
                    w *= pair_weight(o.y, y >> j & 1, y2 >> j & 1);
                }
                block += w;
            }
            acc *= block;
        }
        acc
    }

    pub fn y_pair_denominator(&self) -> i128 {
        self.den.pow(self.k as u32) * 4i128.pow(self.m as u32)
    }

    /// Every tuple with nonzero weight, keyed `[x, x', y, y']` (`x' = 0`
    /// for E3SAT).
    pub fn support(&self) -> Vec<([u64; 4], i128)> {
        let mut out = Vec::new();
        let xs = if self.kind == Kind::E3sat { 1u64 << self.k } else { 1 << self.m };
        let x2s = if self.kind == Kind::E3sat { 1 } else { 1u64 << self.m };
        let ys = 1u64 << self.m;
        for x in 0..xs {
            for x2 in 0..x2s {
                for y in 0..ys {
                    for y2 in 0..ys {
                        let w = self.weight([x, x2, y, y2]);
                        if w != 0 {
                            out.push(([x, x2, y, y2], w));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pmf(&self) -> BTreeMap<[u64; 4], Exact> {
        let d = self.denominator();
        self.support().into_iter().map(|(t, w)| (t, q128(w, d))).collect()
    }

    /// `E[f(x, x', y, y')]` by full enumeration.
    pub fn expect(&self, f: impl Fn([u64; 4]) -> i128) -> Exact {
        let total: i128 = self.support().into_iter().map(|(t, w)| w * f(t)).sum();
        q128(total, self.denominator())
    }
}

fn ones(mut mask: u64) -> impl Iterator<Item = usize> {
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

/// `E[χ_a(x)χ_a2(x')χ_b(y)χ_b2(y')]` over a precomputed support.
pub fn char_sum(support: &[([u64; 4], i128)], masks: [u64; 4]) -> i128 {
    support
        .iter()
        .map(|(t, w)| w * chi(masks[0], t[0]) * chi(masks[1], t[1]) * chi(masks[2], t[2]) * chi(masks[3], t[3]))
        .sum()
}

/// `f̂(α) = 2^{-d} Σ_x f(x) χ_α(x)` straight from the definition.
pub fn naive_wht(values: &[i8]) -> Vec<Exact> {
    let n = values.len() as u64;
    (0..n)
        .map(|a| {
            let s: i128 = (0..n).map(|x| i128::from(values[x as usize]) * chi(a, x)).sum();
            q128(s, n as i128)
        })
        .collect()
}

pub fn random_projection(k: usize, m: usize, r: &mut impl Rng) -> Projection {
    Projection::new(k, (0..m).map(|_| r.gen_range(0..k)).collect()).expect("labels in range")
}

/// Random odd `±1` table: `f(x ^ 1…1) = -f(x)`.
pub fn random_folded(dim: usize, r: &mut impl Rng) -> BooleanTable {
    let n = 1usize << dim;
    let full = n - 1;
    let mut vals = vec![0i8; n];
    for x in 0..n {
        if x & 1 == 0 {
            let v = if r.gen::<bool>() { 1 } else { -1 };
            vals[x] = v;
            vals[x ^ full] = -v;
        }
    }
    BooleanTable::new(dim, TableMode::Pm1, vals).expect("valid table")
}

pub fn random_pm1(dim: usize, r: &mut impl Rng) -> BooleanTable {
    let vals = (0..1usize << dim).map(|_| if r.gen::<bool>() { 1 } else { -1 }).collect();
    BooleanTable::new(dim, TableMode::Pm1, vals).expect("valid table")
}

pub fn random_indicator(dim: usize, r: &mut impl Rng) -> BooleanTable {
    let vals = (0..1usize << dim).map(|_| i8::from(r.gen::<bool>())).collect();
    BooleanTable::new(dim, TableMode::Indicator, vals).expect("valid table")
}

/// Dictator `x ↦ x_j` written out directly.
pub fn dictator(j: usize, dim: usize) -> Vec<i8> {
    (0..1u64 << dim).map(|x| if x >> j & 1 == 0 { 1 } else { -1 }).collect()
}

/// `(e1, e2, numerator, denominator)` for a uniform `u` and two
/// independent uniform incident edges.
pub fn edge_pairs(lc: &LabelCoverInstance) -> Vec<(usize, usize, i128, i128)> {
    let mut out = Vec::new();
    for u in 0..lc.u_count() {
        let adj: Vec<usize> = (0..lc.edges().len()).filter(|&e| lc.edges()[e].u == u).collect();
        let d = (lc.u_count() * adj.len() * adj.len()) as i128;
        for &a in &adj {
            for &b in &adj {
                out.push((a, b, 1, d));
            }
        }
    }
    out
}

/// `(e, numerator, denominator)` for a uniform `u` and one uniform edge.
pub fn single_edges(lc: &LabelCoverInstance) -> Vec<(usize, i128, i128)> {
    let mut out = Vec::new();
    for u in 0..lc.u_count() {
        let adj: Vec<usize> = (0..lc.edges().len()).filter(|&e| lc.edges()[e].u == u).collect();
        let d = (lc.u_count() * adj.len()) as i128;
        out.extend(adj.into_iter().map(|e| (e, 1, d)));
    }
    out
}

/// E3SAT acceptance by enumerating every query of every edge.
pub fn e3sat_acceptance(lc: &LabelCoverInstance, left: &[BooleanTable], right: &[BooleanTable], eps: Eps) -> Exact {
    let mut total = Exact::zero();
    for (e, n, d) in single_edges(lc) {
        let edge = &lc.edges()[e];
        let (a, b) = (&left[edge.u], &right[edge.v]);
        let law = Law::e3sat(&edge.pi, eps);
        let p = law.expect(|t| i128::from(!(a.get(t[0]) == 1 && b.get(t[2]) == 1 && b.get(t[3]) == 1)));
        total += p * q128(n, d);
    }
    total
}

/// Probability that all four queried entries satisfy `hit`, summed over
/// every neighbour pair, for a two-table law.
pub fn quad_event(
    lc: &LabelCoverInstance,
    tables: &[BooleanTable],
    law_of: impl Fn(&Projection, &Projection) -> Law,
    hit: impl Fn([i8; 4]) -> bool,
) -> Exact {
    let mut total = Exact::zero();
    for (e1, e2, n, d) in edge_pairs(lc) {
        let (a, b) = (&lc.edges()[e1], &lc.edges()[e2]);
        let (ta, tb) = (&tables[a.v], &tables[b.v]);
        let law = law_of(&a.pi, &b.pi);
        let p = law.expect(|t| i128::from(hit([ta.get(t[0]), ta.get(t[1]), tb.get(t[2]), tb.get(t[3])])));
        total += p * q128(n, d);
    }
    total
}

/// `Pr[X ∈ A, Y ∈ B]` for a ρ-correlated pair with `ρ = r/4`, summing the
/// joint density over `A × B`. Coordinate `c` has atom weights
/// `weights[c]` (normalized by their sum); points are indexed with the
/// first coordinate most significant.
pub fn rho_prob_in(weights: &[Vec<i64>], r: i64, a: &[bool], b: &[bool]) -> Exact {
    let sizes: Vec<usize> = weights.iter().map(Vec::len).collect();
    let sums: Vec<i128> = weights.iter().map(|w| w.iter().map(|&x| i128::from(x)).sum()).collect();
    let n: usize = sizes.iter().product();
    let decode = |mut idx: usize| {
        let mut pt = vec![0; sizes.len()];
        for c in (0..sizes.len()).rev() {
            pt[c] = idx % sizes[c];
            idx /= sizes[c];
        }
        pt
    };
    let points: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let r = i128::from(r);
    let mut total = 0i128;
    for x in (0..n).filter(|&i| a[i]) {
        for y in (0..n).filter(|&i| b[i]) {
            let mut p = 1i128;
            for c in 0..sizes.len() {
                let (xc, yc) = (points[x][c], points[y][c]);
                let stay = if xc == yc { r * sums[c] } else { 0 };
                p *= i128::from(weights[c][xc]) * (stay + (4 - r) * i128::from(weights[c][yc]));
            }
            total += p;
        }
    }
    let den = sums.iter().fold(1i128, |acc, s| acc * s * s * 4);
    q128(total, den)
}

/// Shape of one planted instance in the shared corpus.
#[derive(Clone, Copy, Debug)]
pub struct PlantedShape {
    pub u: usize,
    pub v: usize,
    pub degree: usize,
    pub k: usize,
    pub m: usize,
    pub seed: u64,
}

/// 25 planted instances with `k <= 3`, `m <= 6`, `|U|, |V| <= 8`.
pub fn planted_corpus() -> Vec<(PlantedShape, LabelCoverInstance, Labeling)> {
    let mut r = rng(0x5eed_c0de);
    let mut out = Vec::new();
    while out.len() < 25 {
        let k = r.gen_range(1..=3);
        let m = r.gen_range(k.max(2)..=6);
        let u = r.gen_range(1..=8);
        let v = r.gen_range(1..=8);
        let degree = r.gen_range(1..=v.min(3));
        let seed = r.gen();
        if degree * u < v {
            continue;
        }
        let shape = PlantedShape { u, v, degree, k, m, seed };
        let (lc, lab) = generate_planted(u, v, degree, k, m, seed).expect("valid planted shape");
        out.push((shape, lc, lab));
    }
    out
}

pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
