//! Closed-form Fourier quantities of the three tests, inequality checks
//! for each of the bounds used in their soundness analysis, decoding of
//! proofs into labelings and the numeric parameter schedules.

mod decode;
mod lemmas;
mod schedule;

pub use decode::{decode_labeling, label_distribution, DecodingOutcome};
pub use lemmas::{
    c1, fourss_albeta_check, fourss_block_table_check, lemma_bb1_check, lemma_rt_bound, mixing_bound_check,
    AlbetaReport, Bb1Report, BlockTableReport, MixingReport, RtReport,
};
pub use schedule::{default_c_prime, parameter_schedule, Schedule};

use crate::boolean_fourier::{wht, BooleanTable, FourierSpectrum, TableMode};
use crate::distributions::{fourss_joint, hypergraph_joint, BlockFactoredDistribution, DistributionKind};
use crate::error::{Error, Result};
use crate::label_cover::LabelCoverInstance;
use crate::projection::{full_mask, popcount, Mask, Projection};
use crate::scalar::Scalar;
use crate::Exact;

fn check_alpha(pi: &Projection, alpha: Mask) -> Result<()> {
    if alpha & !full_mask(pi.m()) != 0 {
        return Err(Error::Input(format!("mask {alpha:#x} is not a subset of [{}]", pi.m())));
    }
    Ok(())
}

/// Coordinates `i` whose preimage meets `α` in an odd number of labels.
pub fn pi_odd(pi: &Projection, alpha: Mask) -> Mask {
    pi.odd_image(alpha)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaReport {
    pub alpha: Mask,
    pub pi_image: Mask,
    pub pi_odd: Mask,
    pub closed_form: Exact,
    pub brute_force: Exact,
}

impl GammaReport {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.brute_force
    }
}

/// `E[χ_α(x)χ_α(x')]` under the hypergraph law: the closed form
/// `(-1)^{|π^odd(α)|} / 2^{|π(α)|}` next to the blockwise product.
pub fn gamma(pi: &Projection, alpha: Mask) -> Result<GammaReport> {
    check_alpha(pi, alpha)?;
    let pi_image = pi.image(alpha);
    let odd = pi_odd(pi, alpha);
    let sign = if popcount(odd) % 2 == 0 { 1 } else { -1 };
    let closed_form = Exact::ratio(sign, 1) * Exact::inv_pow2(popcount(pi_image));
    let partner = Projection::constant(pi.k(), 1, 0)?;
    let dist = hypergraph_joint::<Exact>(pi, &partner)?;
    let brute_force = crate::distributions::char_expectation_hypergraph(&dist, alpha, alpha, 0, 0)?;
    Ok(GammaReport { alpha, pi_image, pi_odd: odd, closed_form, brute_force })
}

/// A quad law built on `π` for both sides. `eps` is required for the
/// set-splitting law.
fn pair_law<S: Scalar>(pi: &Projection, kind: DistributionKind, eps: Option<&S>) -> Result<BlockFactoredDistribution<S>> {
    match (kind, eps) {
        (DistributionKind::Hypergraph, _) => hypergraph_joint::<S>(pi, pi),
        (DistributionKind::Fourss, Some(e)) => fourss_joint(pi, pi, e.clone()),
        (DistributionKind::Fourss, None) => Err(Error::Config("the set-splitting law needs ε".into())),
        (DistributionKind::E3sat, _) => Err(Error::Mode("the E3SAT law has no (x, x') pair".into())),
    }
}

/// `E[χ_α(x)χ_α(x')]` for every `α`.
fn pair_correlation<S: Scalar>(pi: &Projection, kind: DistributionKind, eps: Option<&S>) -> Result<Vec<S>> {
    let dist = pair_law(pi, kind, eps)?;
    (0..1u64 << pi.m())
        .map(|a| {
            Ok((0..pi.k()).fold(S::one(), |acc, i| acc * dist.block_char_value(i, a, a, 0, 0)))
        })
        .collect()
}

/// `Σ_α Â_α² E[χ_α(xx')]`, the correlation of a table with itself across
/// the pair `(x, x')`.
pub fn self_correlation<S: Scalar>(
    table: &BooleanTable,
    pi: &Projection,
    kind: DistributionKind,
    eps: Option<&S>,
) -> Result<S> {
    check_dim(table, pi.m())?;
    let spec = wht::<S>(table)?;
    let gammas = pair_correlation(pi, kind, eps)?;
    Ok(spec
        .nonzero()
        .fold(S::zero(), |acc, (a, c)| acc + c.clone() * c.clone() * gammas[a as usize].clone()))
}

/// `E[A(x)A(x')]` read off the exact value law of the verifier.
pub fn self_correlation_direct<S: Scalar>(
    table: &BooleanTable,
    pi: &Projection,
    kind: DistributionKind,
    eps: Option<&S>,
    cap: u128,
) -> Result<S> {
    check_dim(table, pi.m())?;
    let dist = pair_law(pi, kind, eps)?;
    let one = BooleanTable::constant(pi.m(), TableMode::Pm1, 1)?;
    let law = dist.quad_value_law(table, &one, cap)?;
    Ok(match table.mode() {
        TableMode::Indicator => law.x_pair_ones(),
        TableMode::Pm1 => law.probs.iter().enumerate().fold(S::zero(), |acc, (idx, p)| {
            if (idx & 1) ^ (idx >> 1 & 1) == 0 {
                acc + p.clone()
            } else {
                acc - p.clone()
            }
        }),
    })
}

fn check_dim(table: &BooleanTable, m: usize) -> Result<()> {
    if table.dim() != m {
        return Err(Error::Input(format!("table has dimension {}, projection domain is [{m}]", table.dim())));
    }
    Ok(())
}

/// `Σ Â_α² B̂_β²` over `|α|, |β| < R` with `π_vu(α) ∩ π_wu(β) ≠ ∅`.
pub fn cross_weight<S: Scalar>(
    spec_a: &FourierSpectrum<S>,
    spec_b: &FourierSpectrum<S>,
    pi_vu: &Projection,
    pi_wu: &Projection,
    r: u32,
) -> Result<S> {
    if spec_a.dim() != pi_vu.m() || spec_b.dim() != pi_wu.m() {
        return Err(Error::Input("spectrum dimension does not match its projection".into()));
    }
    if pi_vu.k() != pi_wu.k() {
        return Err(Error::Input("projections have different label ranges".into()));
    }
    let low = |s: &FourierSpectrum<S>, pi: &Projection| -> Vec<(Mask, S)> {
        s.nonzero()
            .filter(|(a, _)| popcount(*a) < r)
            .map(|(a, c)| (pi.image(a), c.clone() * c.clone()))
            .collect()
    };
    let (la, lb) = (low(spec_a, pi_vu), low(spec_b, pi_wu));
    let mut total = S::zero();
    for (ia, wa) in &la {
        for (ib, wb) in &lb {
            if ia & ib != 0 {
                total = total + wa.clone() * wb.clone();
            }
        }
    }
    Ok(total)
}

fn check_eps<S: Scalar>(eps: &S) -> Result<()> {
    if !(eps.is_positive() && *eps < S::one()) {
        return Err(Error::Config(format!("ε = {eps} outside (0, 1)")));
    }
    Ok(())
}

/// `(ε/2)^{r'}(1-ε/2)^{r-r'}` with `r = |π(β)|`, `r' = |α Δ π^odd(β)|`.
pub fn p_measure<S: Scalar>(pi: &Projection, beta: Mask, alpha: Mask, eps: &S) -> Result<S> {
    let (image, odd) = p_measure_args(pi, beta, alpha, eps)?;
    let r = popcount(image);
    let r2 = popcount(alpha ^ odd);
    let half = eps.clone() / S::from_i64_lossy(2);
    Ok(half.powi(r2) * (S::one() - half).powi(r - r2))
}

fn p_measure_args<S: Scalar>(pi: &Projection, beta: Mask, alpha: Mask, eps: &S) -> Result<(Mask, Mask)> {
    check_eps(eps)?;
    check_alpha(pi, beta)?;
    if beta == 0 {
        return Err(Error::Precondition("the measure p_β is defined for nonempty β only".into()));
    }
    let image = pi.image(beta);
    if alpha & !image != 0 {
        return Err(Error::Input("α must be a subset of π(β)".into()));
    }
    Ok((image, pi_odd(pi, beta)))
}

/// The same quantity as a product over the blocks of `π(β)` of
/// `|E[x_i^{[i ∈ α]} χ_{β_i}(yy')]|` under the E3SAT law.
pub fn p_measure_blockwise<S: Scalar>(pi: &Projection, beta: Mask, alpha: Mask, eps: &S) -> Result<S> {
    let (image, _) = p_measure_args(pi, beta, alpha, eps)?;
    let dist = crate::distributions::e3sat_joint(pi, eps.clone())?;
    let mut acc = S::one();
    for i in crate::projection::bits(image) {
        acc = acc * dist.block_char_value(i, alpha, 0, beta, beta).abs();
    }
    Ok(acc)
}

/// Fraction of right vertices `v` whose subset table covers at least
/// `(δ/2)·2^m` points.
pub fn good_vertex_fraction(lc: &LabelCoverInstance, subset: &[BooleanTable], delta: &Exact) -> Result<Exact> {
    if subset.len() != lc.v_count() {
        return Err(Error::Input(format!("{} subset tables for {} right vertices", subset.len(), lc.v_count())));
    }
    let threshold = delta / Exact::ratio(2, 1) * Exact::ratio(1i64 << lc.m().min(62), 1);
    let good = subset
        .iter()
        .filter(|t| t.mode() == TableMode::Indicator && Exact::ratio(t.ones() as i64, 1) >= threshold)
        .count();
    Ok(Exact::ratio(good as i64, lc.v_count().max(1) as i64))
}

/// All `α ⊆ π(β)` with their measure, for sums over the whole support.
pub fn p_measure_support<S: Scalar>(pi: &Projection, beta: Mask, eps: &S) -> Result<Vec<(Mask, S)>> {
    if beta == 0 {
        return Err(Error::Precondition("the measure p_β is defined for nonempty β only".into()));
    }
    crate::projection::submasks(pi.image(beta))
        .map(|a| Ok((a, p_measure(pi, beta, a, eps)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean_fourier::long_code;
    use num_traits::Zero;

    fn pi(k: usize, map: &[usize]) -> Projection {
        Projection::new(k, map.to_vec()).unwrap()
    }

    #[test]
    fn pi_odd_examples() {
        let p = pi(2, &[0, 0, 1]);
        assert_eq!(pi_odd(&p, 0), 0);
        assert_eq!(pi_odd(&p, 0b011), 0);
        assert_eq!(pi_odd(&p, 0b111), 0b10);
    }

    #[test]
    fn gamma_examples() {
        let p = pi(2, &[0, 0, 1]);
        let g = gamma(&p, 0).unwrap();
        assert_eq!(g.closed_form, Exact::ratio(1, 1));
        assert!(g.agrees());
        let g = gamma(&p, 0b001).unwrap();
        assert_eq!(g.closed_form, Exact::ratio(-1, 2));
        assert!(g.agrees());
        let g = gamma(&p, 0b101).unwrap();
        assert_eq!(g.closed_form, Exact::ratio(1, 4));
        let g = gamma(&p, 0b111).unwrap();
        assert_eq!(g.closed_form, Exact::ratio(-1, 4));
        assert!(g.agrees());
    }

    #[test]
    fn self_correlation_of_dictator_indicator() {
        let p = pi(3, &[0, 1, 2]);
        let ind = long_code(1, 3).unwrap().with_mode(TableMode::Indicator);
        let via_spectrum = self_correlation::<Exact>(&ind, &p, DistributionKind::Hypergraph, None).unwrap();
        assert_eq!(via_spectrum, Exact::ratio(1, 8));
        let direct = self_correlation_direct::<Exact>(&ind, &p, DistributionKind::Hypergraph, None, 1 << 20).unwrap();
        assert_eq!(direct, via_spectrum);
        let full = BooleanTable::constant(3, TableMode::Indicator, 1).unwrap();
        assert_eq!(self_correlation::<Exact>(&full, &p, DistributionKind::Hypergraph, None).unwrap(), Exact::ratio(1, 1));
    }

    #[test]
    fn p_measure_examples() {
        let p = pi(2, &[0, 0, 1]);
        let eps = Exact::ratio(1, 4);
        assert_eq!(p_measure(&p, 0b001, 0b01, &eps).unwrap(), Exact::ratio(7, 8));
        assert_eq!(p_measure(&p, 0b001, 0, &eps).unwrap(), Exact::ratio(1, 8));
        assert!(matches!(p_measure(&p, 0, 0, &eps), Err(Error::Precondition(_))));
        let total = p_measure_support(&p, 0b111, &eps)
            .unwrap()
            .into_iter()
            .fold(Exact::zero(), |a, (_, w)| a + w);
        assert_eq!(total, Exact::ratio(1, 1));
        for a in crate::projection::submasks(0b11) {
            assert_eq!(p_measure(&p, 0b111, a, &eps).unwrap(), p_measure_blockwise(&p, 0b111, a, &eps).unwrap());
        }
    }

    #[test]
    fn cross_weight_of_dictators() {
        let (pv, pw) = (pi(2, &[0, 1]), pi(2, &[1, 0]));
        let a = wht::<Exact>(&long_code(0, 2).unwrap()).unwrap();
        let b = wht::<Exact>(&long_code(1, 2).unwrap()).unwrap();
        assert_eq!(cross_weight(&a, &b, &pv, &pw, 2).unwrap(), Exact::ratio(1, 1));
        let b = wht::<Exact>(&long_code(0, 2).unwrap()).unwrap();
        assert_eq!(cross_weight(&a, &b, &pv, &pw, 2).unwrap(), Exact::zero());
    }
}
