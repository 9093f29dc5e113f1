use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use super::{LabelCoverInstance, Labeling};
use crate::error::{ensure_within, Error, Result};
use crate::rng::stream;
use crate::Exact;

const CHUNK: u64 = 1 << 14;

/// Exact optimum by enumerating every right labeling; each left label is
/// the majority of its incident projected labels (smallest label on ties).
/// Among optimal right labelings the lexicographically smallest wins.
pub fn optimum_bruteforce(inst: &LabelCoverInstance, cap: u128) -> Result<(Exact, Labeling)> {
    let states = (inst.m() as u128)
        .checked_pow(inst.v_count() as u32)
        .unwrap_or(u128::MAX);
    ensure_within("right labelings m^|V|", states, cap)?;
    let states = states as u64;

    let chunks = states.div_ceil(CHUNK);
    let (best, best_idx) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut right = vec![0usize; inst.v_count()];
            let mut counts = vec![0u32; inst.u_count() * inst.k()];
            let start = c * CHUNK;
            let end = (start + CHUNK).min(states);
            decode_index(start, inst.m(), &mut right);
            let mut best = (0usize, start);
            for idx in start..end {
                let score = score_right_labeling(inst, &right, &mut counts, None);
                if score > best.0 {
                    best = (score, idx);
                }
                increment(&mut right, inst.m());
            }
            best
        })
        .reduce(|| (0, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });

    let mut right = vec![0usize; inst.v_count()];
    decode_index(best_idx.min(states - 1), inst.m(), &mut right);
    let mut left = vec![0usize; inst.u_count()];
    let mut counts = vec![0u32; inst.u_count() * inst.k()];
    score_right_labeling(inst, &right, &mut counts, Some(&mut left));
    let value = BigRational::new(BigInt::from(best), BigInt::from(inst.edges().len()));
    Ok((value, Labeling::new(left, right)))
}

/// Digits of `idx` in base `m`, first vertex most significant.
fn decode_index(mut idx: u64, m: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % m as u64) as usize;
        idx /= m as u64;
    }
}

fn increment(digits: &mut [usize], m: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < m {
            return;
        }
        *d = 0;
    }
}

fn score_right_labeling(
    inst: &LabelCoverInstance,
    right: &[usize],
    counts: &mut [u32],
    mut left_out: Option<&mut [usize]>,
) -> usize {
    let k = inst.k();
    counts.iter_mut().for_each(|c| *c = 0);
    for e in inst.edges() {
        counts[e.u * k + e.pi.apply(right[e.v])] += 1;
    }
    let mut total = 0usize;
    for u in 0..inst.u_count() {
        let row = &counts[u * k..(u + 1) * k];
        let (best_label, best) = row
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (l, &c)| if c > acc.1 { (l, c) } else { acc });
        total += best as usize;
        if let Some(left) = left_out.as_deref_mut() {
            left[u] = best_label;
        }
    }
    total
}

/// Empirical `E[|π_vu(S)|^{-1}]` over random `v`, random `S` of a fixed size
/// and a random neighbour `u` of `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub set_size: usize,
    pub trials: u64,
    pub mean: Exact,
    /// Largest `c0` with `mean <= |S|^{-2 c0}`; zero when `|S| = 1`.
    pub fitted_c0: f64,
}

pub fn projection_expansion_stats(
    inst: &LabelCoverInstance,
    set_size: usize,
    trials: u64,
    seed: u64,
) -> Result<ExpansionReport> {
    if set_size == 0 || set_size > inst.m() {
        return Err(Error::Input(format!("set size {set_size} outside [1, {}]", inst.m())));
    }
    if trials == 0 {
        return Err(Error::Input("need at least one trial".into()));
    }
    let mut total = Exact::zero();
    for t in 0..trials {
        let mut rng = stream(seed, "expansion", t);
        let v = rng.gen_range(0..inst.v_count());
        let subset = sample(&mut rng, inst.m(), set_size).into_vec();
        let nbrs = inst.edges_of_right(v);
        let edge = &inst.edges()[nbrs[rng.gen_range(0..nbrs.len())]];
        let image = edge.pi.image_size_of(&subset);
        total += BigRational::new(BigInt::from(1), BigInt::from(image));
    }
    let mean = total / BigRational::from_integer(BigInt::from(trials));
    let fitted_c0 = if set_size == 1 {
        0.0
    } else {
        let mf = mean.to_f64().unwrap_or(1.0);
        (-mf.ln() / (2.0 * (set_size as f64).ln())).max(0.0)
    };
    Ok(ExpansionReport {
        set_size,
        trials,
        mean,
        fitted_c0,
    })
}
