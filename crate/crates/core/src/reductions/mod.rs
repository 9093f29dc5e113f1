//! The three reductions from Label Cover: an implicit 4-uniform
//! hypergraph, a weighted E3-CNF and a weighted 4-set-splitting instance.
//! Verifier probabilities are computed exactly from the block-factored
//! laws or estimated by seeded sampling.

mod e3sat;
mod hypergraph;
mod proof;
mod setsplit;

pub use e3sat::{e3sat_acceptance, export_e3sat_cnf, CnfInstance, WeightedClause};
pub use hypergraph::{
    build_hypergraph, independent_set_violations, monochromatic_fraction, yes_two_coloring, EnumeratedHypergraph,
    HypergraphInstance, TwoColoring,
};
pub use proof::{ProofAssignment, ProofDocument};
pub use setsplit::{export_4ss_instance, fourss_rejection, SetSplitInstance, WeightedSet};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{ensure_within, Result};
use crate::label_cover::LabelCoverInstance;
use crate::rng::StreamRng;
use crate::Exact;

/// How a verifier probability is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Exact rational, refusing work beyond `cap` states.
    Exact { cap: u128 },
    /// Monte Carlo over sample indices `0..samples` of `seed`.
    Sample { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_hits(hits: u64, samples: u64) -> Self {
        let n = samples.max(1) as f64;
        let mean = hits as f64 / n;
        Estimate {
            mean,
            std_err: (mean * (1.0 - mean) / n).sqrt(),
            samples,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Probability {
    Exact(Exact),
    Estimate(Estimate),
}

impl Probability {
    pub fn as_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            Probability::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Probability::Estimate(e) => e.mean,
        }
    }

    pub fn exact(&self) -> Option<&Exact> {
        match self {
            Probability::Exact(q) => Some(q),
            Probability::Estimate(_) => None,
        }
    }
}

fn ratio(num: usize, den: usize) -> Exact {
    Exact::new(BigInt::from(num), BigInt::from(den))
}

/// `(e1, e2, weight)`: a uniform left vertex and two independent uniform
/// incident edges.
pub(crate) fn neighbour_pairs(inst: &LabelCoverInstance) -> Vec<(usize, usize, Exact)> {
    let mut out = Vec::new();
    for u in 0..inst.u_count() {
        let adj = inst.edges_of_left(u);
        let w = ratio(1, inst.u_count() * adj.len() * adj.len());
        for &e1 in adj {
            for &e2 in adj {
                out.push((e1, e2, w.clone()));
            }
        }
    }
    out
}

/// `(e, weight)`: a uniform left vertex and one uniform incident edge.
pub(crate) fn single_neighbours(inst: &LabelCoverInstance) -> Vec<(usize, Exact)> {
    let mut out = Vec::new();
    for u in 0..inst.u_count() {
        let adj = inst.edges_of_left(u);
        let w = ratio(1, inst.u_count() * adj.len());
        out.extend(adj.iter().map(|&e| (e, w.clone())));
    }
    out
}

pub(crate) fn draw_neighbour_pair(inst: &LabelCoverInstance, rng: &mut StreamRng) -> (usize, usize) {
    let u = rng.gen_range(0..inst.u_count());
    let adj = inst.edges_of_left(u);
    (adj[rng.gen_range(0..adj.len())], adj[rng.gen_range(0..adj.len())])
}

pub(crate) fn draw_neighbour(inst: &LabelCoverInstance, rng: &mut StreamRng) -> usize {
    let u = rng.gen_range(0..inst.u_count());
    let adj = inst.edges_of_left(u);
    adj[rng.gen_range(0..adj.len())]
}

/// Exact weighted sum over work items, in item order.
pub(crate) fn weighted_sum<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Exact> + Sync + Send) -> Result<Exact> {
    let parts = items.par_iter().map(f).collect::<Result<Vec<Exact>>>()?;
    Ok(parts.into_iter().fold(Exact::zero(), |a, b| a + b))
}

/// Monte Carlo estimate of a per-index event.
pub(crate) fn estimate(samples: u64, hit: impl Fn(u64) -> bool + Sync + Send) -> Probability {
    let hits = (0..samples).into_par_iter().filter(|&i| hit(i)).count() as u64;
    Probability::Estimate(Estimate::from_hits(hits, samples))
}

/// Fraction of `+1` entries over all right tables, each `v` weighted
/// equally.
pub fn ones_fraction(proofs: &ProofAssignment) -> Exact {
    let total: usize = proofs.right.iter().map(|t| t.len()).sum();
    let ones: u64 = proofs.right.iter().map(|t| t.ones()).sum();
    if total == 0 {
        return Exact::zero();
    }
    Exact::new(BigInt::from(ones), BigInt::from(total))
}

/// Exhaustive optimum of an exported instance.
pub trait MaxSolution {
    type Witness;

    /// Best objective value and the first solution attaining it.
    fn max_solution_bruteforce(&self, cap: u128) -> Result<(Exact, Self::Witness)>;
}

pub fn max_solution_bruteforce<I: MaxSolution>(instance: &I, cap: u128) -> Result<(Exact, I::Witness)> {
    instance.max_solution_bruteforce(cap)
}

/// Scans all `2^bits` bit vectors and returns the best `score` with the
/// smallest index among ties.
pub(crate) fn best_bitvector(
    bits: usize,
    cap: u128,
    what: &str,
    score: impl Fn(u64) -> Exact + Sync + Send,
) -> Result<(Exact, u64)> {
    let count = if bits >= 127 { u128::MAX } else { 1u128 << bits };
    ensure_within(what, count, cap)?;
    let count = count as u64;
    const CHUNK: u64 = 1 << 12;
    let best = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut best: Option<(Exact, u64)> = None;
            for idx in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let s = score(idx);
                if best.as_ref().map_or(true, |(b, _)| s > *b) {
                    best = Some((s, idx));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
            },
        );
    Ok(best.expect("at least one candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_fourier::TableMode;
    use crate::label_cover::generate_planted;
    use crate::scalar::Scalar;

    #[test]
    fn outer_weights_sum_to_one() {
        let (inst, _) = generate_planted(3, 4, 2, 2, 3, 2).unwrap();
        let pairs = neighbour_pairs(&inst);
        let total = pairs.iter().fold(Exact::zero(), |a, (_, _, w)| a + w);
        assert_eq!(total, Exact::ratio(1, 1));
        let singles = single_neighbours(&inst);
        assert_eq!(singles.iter().fold(Exact::zero(), |a, (_, w)| a + w), Exact::ratio(1, 1));
    }

    #[test]
    fn ones_fraction_examples() {
        let (inst, lab) = generate_planted(2, 3, 2, 2, 3, 2).unwrap();
        let ones = ProofAssignment::constant(&inst, TableMode::Pm1, 1).unwrap();
        assert_eq!(ones_fraction(&ones), Exact::ratio(1, 1));
        let lc = ProofAssignment::long_codes(&inst, &lab, false).unwrap();
        assert_eq!(ones_fraction(&lc), Exact::ratio(1, 2));
    }

    #[test]
    fn estimate_standard_error() {
        let e = Estimate::from_hits(25, 100);
        assert_eq!(e.mean, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn best_bitvector_prefers_smallest_index() {
        let (v, idx) = best_bitvector(3, 8, "test", |x| Exact::ratio((x.count_ones() >= 2) as i64, 1)).unwrap();
        assert_eq!((v, idx), (Exact::ratio(1, 1), 3));
        assert!(best_bitvector(4, 8, "test", |_| Exact::zero()).is_err());
    }
}
