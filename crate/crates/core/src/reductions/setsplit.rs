use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{best_bitvector, draw_neighbour_pair, estimate, neighbour_pairs, weighted_sum, EvalMode, MaxSolution, Probability, ProofAssignment};
use crate::distributions::{fourss_joint, BlockFactoredDistribution, Query};
use crate::error::{ensure_within, Error, Result};
use crate::label_cover::LabelCoverInstance;
use crate::rng::stream;
use crate::Exact;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedSet {
    pub weight: Exact,
    /// Element ids, sorted; repeats are kept.
    pub elems: [u64; 4],
}

/// Weighted 4-set system over `[elements]` with weights summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SetSplitInstance {
    elements: u64,
    sets: Vec<WeightedSet>,
}

impl SetSplitInstance {
    pub fn new(elements: u64, sets: Vec<WeightedSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Input("set system is empty".into()));
        }
        let mut total = Exact::zero();
        for (s, set) in sets.iter().enumerate() {
            if !set.weight.is_positive() {
                return Err(Error::Input(format!("set {} has non-positive weight", s + 1)));
            }
            if set.elems.iter().any(|&e| e >= elements) {
                return Err(Error::Input(format!("set {} names an element outside [1, {elements}]", s + 1)));
            }
            total += &set.weight;
        }
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.weight = &s.weight / &total;
                s.elems.sort_unstable();
                s
            })
            .collect();
        Ok(SetSplitInstance { elements, sets })
    }

    pub fn elements(&self) -> u64 {
        self.elements
    }

    pub fn sets(&self) -> &[WeightedSet] {
        &self.sets
    }

    /// Weight of sets meeting both sides of the partition.
    pub fn split_weight(&self, side: impl Fn(u64) -> bool) -> Exact {
        self.sets
            .iter()
            .filter(|s| {
                let first = side(s.elems[0]);
                s.elems[1..].iter().any(|&e| side(e) != first)
            })
            .fold(Exact::zero(), |a, s| a + &s.weight)
    }

    /// Weight of sets lying entirely inside `member`.
    pub fn contained_weight(&self, member: impl Fn(u64) -> bool) -> Exact {
        self.sets
            .iter()
            .filter(|s| s.elems.iter().all(|&e| member(e)))
            .fold(Exact::zero(), |a, s| a + &s.weight)
    }

    /// `p setsplit <elements> <sets>`, then `num den e1 e2 e3 e4` (1-based).
    pub fn to_text(&self) -> String {
        let mut out = format!("p setsplit {} {}\n", self.elements, self.sets.len());
        for s in &self.sets {
            let e = s.elems;
            let _ = writeln!(out, "{} {} {} {} {} {}", s.weight.numer(), s.weight.denom(), e[0] + 1, e[1] + 1, e[2] + 1, e[3] + 1);
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c'));
        let header: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
        let elements = match header.as_slice() {
            ["p", "setsplit", n, _] => n.parse::<u64>().map_err(|_| Error::Input("bad element count".into()))?,
            _ => return Err(Error::Input("expected header `p setsplit <elements> <sets>`".into())),
        };
        let mut sets = Vec::new();
        for (n, line) in lines.enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Input(format!("set line {} is malformed", n + 1));
            if f.len() != 6 {
                return Err(bad());
            }
            let num: BigInt = f[0].parse().map_err(|_| bad())?;
            let den: BigInt = f[1].parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            let mut elems = [0u64; 4];
            for (slot, s) in elems.iter_mut().zip(&f[2..]) {
                let e: u64 = s.parse().map_err(|_| bad())?;
                *slot = e.checked_sub(1).ok_or_else(bad)?;
            }
            sets.push(WeightedSet { weight: Exact::new(num, den), elems });
        }
        Self::new(elements, sets)
    }
}

impl MaxSolution for SetSplitInstance {
    type Witness = Vec<bool>;

    fn max_solution_bruteforce(&self, cap: u128) -> Result<(Exact, Vec<bool>)> {
        if self.elements > 63 {
            return Err(Error::size("set-splitting partitions", self.elements as u128, 63));
        }
        let (best, bits) = best_bitvector(self.elements as usize, cap, "partitions", |p| {
            self.split_weight(|e| p >> e & 1 == 1)
        })?;
        Ok((best, (0..self.elements).map(|e| bits >> e & 1 == 1).collect()))
    }
}

impl ProofAssignment {
    /// Element `v·2^m + z` is on the `true` side when `B^v(z) = 1`.
    pub fn partition(&self, lc: &LabelCoverInstance) -> Result<Vec<bool>> {
        self.check_against(lc, false)?;
        Ok(self
            .right
            .iter()
            .flat_map(|t| t.values().iter().map(|&b| b == 1))
            .collect())
    }
}

fn pair_joint(lc: &LabelCoverInstance, e1: usize, e2: usize, eps: &Exact) -> Result<BlockFactoredDistribution<Exact>> {
    fourss_joint(&lc.edges()[e1].pi, &lc.edges()[e2].pi, eps.clone())
}

/// The set-splitting test as a weighted 4-set system over all Long Code
/// positions. Each test becomes the set of its four queried positions.
pub fn export_4ss_instance(lc: &LabelCoverInstance, eps: &Exact, cap: u128) -> Result<SetSplitInstance> {
    if lc.m() > 40 {
        return Err(Error::size("hypercube dimension m", lc.m() as u128, 40));
    }
    let pairs = neighbour_pairs(lc);
    let mut support = 0u128;
    for (e1, e2, _) in &pairs {
        support = support.saturating_add(pair_joint(lc, *e1, *e2, eps)?.support_bound());
    }
    ensure_within("set-splitting verifier support", support, cap)?;
    let m = lc.m();
    let mut merged: BTreeMap<[u64; 4], Exact> = BTreeMap::new();
    for (e1, e2, w) in pairs {
        let (v, ww) = (lc.edges()[e1].v as u64, lc.edges()[e2].v as u64);
        for (q, p) in pair_joint(lc, e1, e2, eps)?.exact_pmf(cap)? {
            let mut elems = [(v << m) | q[0], (v << m) | q[1], (ww << m) | q[2], (ww << m) | q[3]];
            elems.sort_unstable();
            *merged.entry(elems).or_insert_with(Exact::zero) += &w * p;
        }
    }
    let sets = merged
        .into_iter()
        .map(|(elems, weight)| WeightedSet { weight, elems })
        .collect();
    SetSplitInstance::new((lc.v_count() as u64) << m, sets)
}

/// Probability that the set-splitting test reads `1` at all four queries.
pub fn fourss_rejection(lc: &LabelCoverInstance, proofs: &ProofAssignment, eps: &Exact, mode: EvalMode) -> Result<Probability> {
    proofs.check_against(lc, false)?;
    let tables = &proofs.right;
    match mode {
        EvalMode::Exact { cap } => {
            ensure_within("set-splitting exact state bits 2^(4m)", 1u128 << (4 * lc.m()).min(127), cap)?;
            let pairs = neighbour_pairs(lc);
            let value = weighted_sum(&pairs, |(e1, e2, w)| {
                let (v, ww) = (lc.edges()[*e1].v, lc.edges()[*e2].v);
                let law = pair_joint(lc, *e1, *e2, eps)?.quad_value_law(&tables[v], &tables[ww], cap)?;
                Ok(law.all_ones() * w)
            })?;
            Ok(Probability::Exact(value))
        }
        EvalMode::Sample { samples, seed } => {
            let joints = (0..lc.edges().len())
                .map(|e1| {
                    (0..lc.edges().len())
                        .map(|e2| pair_joint(lc, e1, e2, eps))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(estimate(samples, |i| {
                let mut rng = stream(seed, "fourss-outer", i);
                let (e1, e2) = draw_neighbour_pair(lc, &mut rng);
                let (v, ww) = (lc.edges()[e1].v, lc.edges()[e2].v);
                match joints[e1][e2].sample(seed, i) {
                    Query::Quad(q) => {
                        tables[v].get(q.x) == 1
                            && tables[v].get(q.x2) == 1
                            && tables[ww].get(q.y) == 1
                            && tables[ww].get(q.y2) == 1
                    }
                    Query::Triple(_) => unreachable!("set-splitting law yields quadruples"),
                }
            }))
        }
    }
}
