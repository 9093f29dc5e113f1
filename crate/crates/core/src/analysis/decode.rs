use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::boolean_fourier::{wht, BooleanTable, FourierSpectrum};
use crate::distributions::DistributionKind;
use crate::error::{Error, Result};
use crate::label_cover::{LabelCoverInstance, Labeling};
use crate::projection::{bits, popcount};
use crate::reductions::ProofAssignment;
use crate::rng::{stream, unit_f64, StreamRng};
use crate::scalar::Scalar;
use crate::Exact;

#[derive(Clone, Debug, PartialEq)]
pub struct DecodingOutcome {
    /// Abstaining vertices carry label 0; see the masks.
    pub labeling: Labeling,
    pub abstain_left: Vec<bool>,
    pub abstain_right: Vec<bool>,
    /// Fraction of edges with both ends labeled and satisfied.
    pub satisfied_fraction: Exact,
    /// Expectation of `satisfied_fraction` over the decoding randomness.
    pub expected_value: Exact,
}

/// `q(j) = Σ_{β ∋ j} B̂_β² / |β|`: the probability that decoding the table
/// yields label `j`. The remaining mass is the abstain probability.
pub fn label_distribution<S: Scalar>(spec: &FourierSpectrum<S>) -> Vec<S> {
    let mut q = vec![S::zero(); spec.dim()];
    for (beta, c) in spec.nonzero() {
        if beta == 0 {
            continue;
        }
        let share = c.clone() * c.clone() / S::from_u64_lossy(popcount(beta) as u64);
        for j in bits(beta) {
            q[j] = q[j].clone() + share.clone();
        }
    }
    q
}

/// Draws `α` with probability `Â_α²` and a uniform label in it. `None` on
/// the residual mass or on `α = ∅`.
fn draw_label(spec: &FourierSpectrum<Exact>, rng: &mut StreamRng) -> Option<usize> {
    let mut u = unit_f64(rng);
    for (alpha, c) in spec.nonzero() {
        let w = (c * c).to_f64().unwrap_or(0.0);
        if u < w {
            if alpha == 0 {
                return None;
            }
            let pick = rng.gen_range(0..popcount(alpha) as usize);
            return bits(alpha).nth(pick);
        }
        u -= w;
    }
    None
}

fn spectra(tables: &[BooleanTable]) -> Result<Vec<FourierSpectrum<Exact>>> {
    tables.iter().map(wht::<Exact>).collect()
}

/// Decodes a proof bundle into a labeling. Right vertex `v` uses stream
/// `(seed, "decode", v)`, left vertex `u` stream `(seed, "decode", |V| + u)`.
pub fn decode_labeling(
    lc: &LabelCoverInstance,
    proofs: &ProofAssignment,
    seed: u64,
    variant: DistributionKind,
) -> Result<DecodingOutcome> {
    let need_left = variant == DistributionKind::E3sat;
    if need_left && proofs.left.is_none() {
        return Err(Error::Input("E3SAT decoding needs a table for every left vertex".into()));
    }
    check_shapes(lc, proofs, need_left)?;
    let right_specs = spectra(&proofs.right)?;
    let left_specs = match (&proofs.left, need_left) {
        (Some(left), true) => Some(spectra(left)?),
        _ => None,
    };
    let vc = lc.v_count() as u64;

    let right: Vec<Option<usize>> = right_specs
        .iter()
        .enumerate()
        .map(|(v, s)| draw_label(s, &mut stream(seed, "decode", v as u64)))
        .collect();
    let left: Vec<Option<usize>> = (0..lc.u_count())
        .map(|u| {
            let mut rng = stream(seed, "decode", vc + u as u64);
            match &left_specs {
                Some(specs) => draw_label(&specs[u], &mut rng),
                None => {
                    let adj = lc.edges_of_left(u);
                    if adj.is_empty() {
                        return None;
                    }
                    let e = &lc.edges()[adj[rng.gen_range(0..adj.len())]];
                    right[e.v].map(|l| e.pi.apply(l))
                }
            }
        })
        .collect();

    let satisfied = lc
        .edges()
        .iter()
        .filter(|e| matches!((left[e.u], right[e.v]), (Some(a), Some(b)) if e.satisfied_by(a, b)))
        .count();
    let satisfied_fraction = Exact::ratio(satisfied as i64, lc.edges().len() as i64);
    let expected_value = expected_satisfied(lc, &right_specs, left_specs.as_deref())?;
    Ok(DecodingOutcome {
        labeling: Labeling::new(
            left.iter().map(|l| l.unwrap_or(0)).collect(),
            right.iter().map(|l| l.unwrap_or(0)).collect(),
        ),
        abstain_left: left.iter().map(Option::is_none).collect(),
        abstain_right: right.iter().map(Option::is_none).collect(),
        satisfied_fraction,
        expected_value,
    })
}

fn check_shapes(lc: &LabelCoverInstance, proofs: &ProofAssignment, need_left: bool) -> Result<()> {
    let folded = ProofAssignment { folded: false, ..proofs.clone() };
    folded.check_against(lc, need_left)
}

/// Exact expected fraction of satisfied edges. With left labels decoded
/// from their own tables the two ends are independent. Otherwise `u`
/// copies the projected label of a random neighbour `v'`, which is the
/// same draw as `v` when `v' = v`.
fn expected_satisfied(
    lc: &LabelCoverInstance,
    right_specs: &[FourierSpectrum<Exact>],
    left_specs: Option<&[FourierSpectrum<Exact>]>,
) -> Result<Exact> {
    let q: Vec<Vec<Exact>> = right_specs.iter().map(label_distribution).collect();
    let mut total = Exact::zero();
    match left_specs {
        Some(specs) => {
            let p: Vec<Vec<Exact>> = specs.iter().map(label_distribution).collect();
            for e in lc.edges() {
                for (j, qj) in q[e.v].iter().enumerate() {
                    if !qj.is_zero() {
                        total += qj * &p[e.u][e.pi.apply(j)];
                    }
                }
            }
        }
        None => {
            for e in lc.edges() {
                let adj = lc.edges_of_left(e.u);
                let mut acc = Exact::zero();
                for &f in adj {
                    let e2 = &lc.edges()[f];
                    if e2.v == e.v {
                        for (j, qj) in q[e.v].iter().enumerate() {
                            if e.pi.apply(j) == e2.pi.apply(j) {
                                acc += qj;
                            }
                        }
                    } else {
                        let mut image = vec![Exact::zero(); lc.k()];
                        for (j, qj) in q[e2.v].iter().enumerate() {
                            image[e2.pi.apply(j)] += qj;
                        }
                        for (j, qj) in q[e.v].iter().enumerate() {
                            acc += qj * &image[e.pi.apply(j)];
                        }
                    }
                }
                total += acc / Exact::ratio(adj.len() as i64, 1);
            }
        }
    }
    Ok(total / Exact::ratio(lc.edges().len() as i64, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_fourier::TableMode;
    use crate::label_cover::generate_planted;

    #[test]
    fn long_codes_decode_to_the_planted_labeling() {
        let (lc, lab) = generate_planted(3, 4, 3, 3, 5, 11).unwrap();
        let proofs = ProofAssignment::long_codes(&lc, &lab, true).unwrap();
        for variant in [DistributionKind::Hypergraph, DistributionKind::E3sat, DistributionKind::Fourss] {
            let out = decode_labeling(&lc, &proofs, 5, variant).unwrap();
            assert_eq!(out.labeling, lab);
            assert!(out.abstain_left.iter().chain(&out.abstain_right).all(|a| !a));
            assert_eq!(out.satisfied_fraction, Exact::ratio(1, 1));
            assert_eq!(out.expected_value, Exact::ratio(1, 1));
        }
    }

    #[test]
    fn constant_tables_abstain_everywhere() {
        let (lc, _) = generate_planted(2, 3, 2, 2, 3, 4).unwrap();
        let proofs = ProofAssignment::constant(&lc, TableMode::Indicator, 1).unwrap();
        let out = decode_labeling(&lc, &proofs, 0, DistributionKind::Hypergraph).unwrap();
        assert!(out.abstain_right.iter().all(|&a| a));
        assert!(out.abstain_left.iter().all(|&a| a));
        assert_eq!(out.satisfied_fraction, Exact::zero());
        assert_eq!(out.expected_value, Exact::zero());
    }

    #[test]
    fn e3sat_needs_left_tables() {
        let (lc, lab) = generate_planted(2, 3, 2, 2, 3, 4).unwrap();
        let proofs = ProofAssignment::long_codes(&lc, &lab, false).unwrap();
        assert!(matches!(decode_labeling(&lc, &proofs, 0, DistributionKind::E3sat), Err(Error::Input(_))));
    }
}
