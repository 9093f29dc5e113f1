//! Checkers for the inequalities behind soundness. Each returns both sides
//! of the inequality so a report can show how much room there is.

use num_traits::{One, Signed, Zero};

use crate::boolean_fourier::{wht, BooleanTable, TableMode};
use crate::distributions::{char_expectation_4ss, char_expectation_e3sat, e3sat_joint, fourss_joint, RhoCorrelated};
use crate::error::{Error, Result};
use crate::precise::Precise;
use crate::projection::{full_mask, popcount, submasks, Mask, Projection};
use crate::scalar::Scalar;
use crate::Exact;

/// `(2√2 - 1)/(√2 - 1)`, which equals `3 + √2`.
pub fn c1() -> Precise {
    let r2 = Precise::from_i64(2).sqrt();
    let one = Precise::one();
    r2.add(&r2).sub(&one).div(&r2.sub(&one))
}

#[derive(Clone, Debug)]
pub struct MixingReport {
    pub lhs: Exact,
    pub mu_a: Exact,
    pub mu_b: Exact,
    pub delta: Exact,
    pub exponent: Precise,
    pub rhs: Precise,
    pub pass: bool,
}

/// `Pr[X ∈ A, Y ∈ B] ≥ δ^{(2-√ρ)/(1-√ρ)}` for a ρ-correlated pair, with
/// `δ = min(μ(A), μ(B))`.
pub fn mixing_bound_check(rc: &RhoCorrelated<Exact>, a: &[bool], b: &[bool]) -> Result<MixingReport> {
    let space = rc.space();
    if a.len() != space.size() || b.len() != space.size() {
        return Err(Error::Input(format!("sets must have {} membership flags", space.size())));
    }
    if !a.iter().any(|&f| f) || !b.iter().any(|&f| f) {
        return Err(Error::Precondition("both sets must be nonempty".into()));
    }
    if rc.rho() >= &Exact::one() {
        return Err(Error::Precondition("the bound needs ρ < 1".into()));
    }
    let lhs = rc.prob_in(a, b)?;
    let mu_a = space.measure_of(a);
    let mu_b = space.measure_of(b);
    let delta = if mu_a < mu_b { mu_a.clone() } else { mu_b.clone() };
    let sr = Precise::from_rational(rc.rho()).sqrt();
    let exponent = Precise::from_i64(2).sub(&sr).div(&Precise::one().sub(&sr));
    let rhs = Precise::from_rational(&delta).pow(&exponent);
    let pass = Precise::from_rational(&lhs).ge_with_slack(&rhs);
    Ok(MixingReport { lhs, mu_a, mu_b, delta, exponent, rhs, pass })
}

fn require_folded(t: &BooleanTable, dim: usize, what: &str) -> Result<()> {
    if t.dim() != dim {
        return Err(Error::Input(format!("{what} has dimension {}, expected {dim}", t.dim())));
    }
    if t.mode() != TableMode::Pm1 || !t.is_folded() {
        return Err(Error::Precondition(format!("{what} must be a folded ±1 table")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bb1Report<S> {
    /// `Σ_{|β| odd} B̂_β² E[χ_β(y)χ_β(y')]`.
    pub value: S,
    /// `E[B(y)B(y')]` from the exact value law.
    pub direct: S,
    pub bound: S,
    pub pass: bool,
}

/// `|E[B(y)B(y')]| ≤ ε/2` for a folded `B` under the E3SAT law.
pub fn lemma_bb1_check<S: Scalar>(b: &BooleanTable, pi: &Projection, eps: &S, cap: u128) -> Result<Bb1Report<S>> {
    require_folded(b, pi.m(), "B")?;
    let dist = e3sat_joint(pi, eps.clone())?;
    let spec = wht::<S>(b)?;
    let mut value = S::zero();
    for (beta, c) in spec.nonzero() {
        if popcount(beta) % 2 == 1 {
            value = value + c.clone() * c.clone() * char_expectation_e3sat(&dist, 0, beta, beta)?;
        }
    }
    let one = BooleanTable::constant(pi.k(), TableMode::Pm1, 1)?;
    let law = dist.triple_value_law(&one, b, cap)?;
    let direct = law.probs.iter().enumerate().fold(S::zero(), |acc, (idx, p)| {
        if (idx >> 1 & 1) ^ (idx >> 2 & 1) == 0 {
            acc + p.clone()
        } else {
            acc - p.clone()
        }
    });
    let bound = eps.clone() / S::from_i64_lossy(2);
    let pass = value.abs() <= bound;
    Ok(Bb1Report { value, direct, bound, pass })
}

#[derive(Clone, Debug)]
pub struct RtReport<S> {
    pub lhs: S,
    /// `Σ Â_α²B̂_β²` over odd `α ⊆ π(β)`, odd `|β| < R`; the bound uses its
    /// square root.
    pub low_weight: S,
    pub high_weight: S,
    pub tail: Precise,
    pub rhs: Precise,
    pub pass: bool,
}

/// `|E[A(x)B(y)B(y')]|` against the three-term bound for folded `A`, `B`.
pub fn lemma_rt_bound<S: Scalar>(
    a: &BooleanTable,
    b: &BooleanTable,
    pi: &Projection,
    eps: &S,
    r: u32,
    t: u32,
) -> Result<RtReport<S>> {
    if t == 0 || t > r {
        return Err(Error::Precondition(format!("need R ≥ T ≥ 1, got R = {r}, T = {t}")));
    }
    require_folded(a, pi.k(), "A")?;
    require_folded(b, pi.m(), "B")?;
    let dist = e3sat_joint(pi, eps.clone())?;
    let sa = wht::<S>(a)?;
    let sb = wht::<S>(b)?;
    let nb: Vec<(Mask, S)> = sb.nonzero().map(|(m, c)| (m, c.clone())).collect();
    let mut sum = S::zero();
    for (alpha, ca) in sa.nonzero() {
        for (beta, cb) in &nb {
            for (beta2, cb2) in &nb {
                let e = char_expectation_e3sat(&dist, alpha, *beta, *beta2)?;
                if !e.is_zero() {
                    sum = sum + ca.clone() * cb.clone() * cb2.clone() * e;
                }
            }
        }
    }
    let lhs = sum.abs();

    let mut low_weight = S::zero();
    let mut high_weight = S::zero();
    for (beta, cb) in &nb {
        let wb = cb.clone() * cb.clone();
        let size = popcount(*beta);
        if size < r {
            if size % 2 == 1 {
                let image = pi.image(*beta);
                for (alpha, ca) in sa.nonzero() {
                    if popcount(alpha) % 2 == 1 && alpha & !image == 0 {
                        low_weight = low_weight + ca.clone() * ca.clone() * wb.clone();
                    }
                }
            }
        } else if popcount(pi.image(*beta)) < t {
            high_weight = high_weight + wb;
        }
    }
    let base = (S::one() - eps.clone() / S::from_i64_lossy(2)).powi(t);
    let tail = base.to_precise().sqrt();
    let rhs = low_weight.to_precise().sqrt().add(&high_weight.to_precise()).add(&tail);
    let pass = lhs.to_precise().le_with_slack(&rhs);
    Ok(RtReport { lhs, low_weight, high_weight, tail, rhs, pass })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlbetaReport {
    pub value: Exact,
    /// `(1-ε/2)^{|π(α) Δ π(β)|}(1-ε)^{|π(α) ∩ π(β)|}`.
    pub fine_bound: Exact,
    /// `(1-ε/2)^{max(|π(α)|, |π(β)|)}`.
    pub bound: Exact,
    pub pass: bool,
}

/// `|E[χ_α(xx')χ_β(yy')]|` under the set-splitting law against its two
/// product bounds.
pub fn fourss_albeta_check(pi_vu: &Projection, pi_wu: &Projection, alpha: Mask, beta: Mask, eps: &Exact) -> Result<AlbetaReport> {
    let dist = fourss_joint(pi_vu, pi_wu, eps.clone())?;
    let value = char_expectation_4ss(&dist, alpha, alpha, beta, beta)?.abs();
    let (ia, ib) = (pi_vu.image(alpha), pi_wu.image(beta));
    let half = Exact::one() - eps / Exact::ratio(2, 1);
    let full = Exact::one() - eps;
    let fine_bound = half.powi(popcount(ia ^ ib)) * full.powi(popcount(ia & ib));
    let bound = half.powi(popcount(ia).max(popcount(ib)));
    let pass = value <= fine_bound && fine_bound <= bound;
    Ok(AlbetaReport { value, fine_bound, bound, pass })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTableReport {
    pub cases: u64,
    pub failures: u64,
}

/// Every single-block value `E[χ_J(xx')]`, `E[χ_K(yy')]` and
/// `E[χ_J(xx')χ_K(yy')]` of the set-splitting law for blocks of size up to
/// `max_block`, against the closed-form table.
pub fn fourss_block_table_check(eps: &Exact, max_block: usize) -> Result<BlockTableReport> {
    let half = eps / Exact::ratio(2, 1);
    let single = |size: u32| if size % 2 == 0 { Exact::one() - &half } else { -half.clone() };
    let joint = |sj: u32, sk: u32| match (sj % 2, sk % 2) {
        (0, 0) => Exact::one() - eps,
        (1, 1) => eps - Exact::one(),
        _ => Exact::zero(),
    };
    let mut report = BlockTableReport { cases: 0, failures: 0 };
    let mut tally = |ok: bool| {
        report.cases += 1;
        report.failures += u64::from(!ok);
    };
    for s in 1..=max_block {
        for t in 1..=max_block {
            let dist = fourss_joint(&Projection::constant(1, s, 0)?, &Projection::constant(1, t, 0)?, eps.clone())?;
            for j in submasks(full_mask(s)).filter(|&j| j != 0) {
                if t == 1 {
                    tally(dist.block_char_value(0, j, j, 0, 0) == single(popcount(j)));
                }
                for k in submasks(full_mask(t)).filter(|&k| k != 0) {
                    if s == 1 && j == 1 {
                        tally(dist.block_char_value(0, 0, 0, k, k) == single(popcount(k)));
                    }
                    tally(dist.block_char_value(0, j, j, k, k) == joint(popcount(j), popcount(k)));
                }
            }
        }
    }
    Ok(report)
}
