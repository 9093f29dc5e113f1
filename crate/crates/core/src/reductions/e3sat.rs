use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{best_bitvector, draw_neighbour, estimate, single_neighbours, weighted_sum, EvalMode, MaxSolution, Probability, ProofAssignment};
use crate::distributions::{e3sat_joint, BlockFactoredDistribution, Query};
use crate::error::{ensure_within, Error, Result};
use crate::label_cover::LabelCoverInstance;
use crate::projection::full_mask;
use crate::rng::stream;
use crate::Exact;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedClause {
    pub weight: Exact,
    /// DIMACS literals, sorted.
    pub lits: [i64; 3],
}

/// Weighted 3-CNF with weights summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<WeightedClause>,
}

impl CnfInstance {
    /// Validates literals and rescales positive weights to sum to 1.
    pub fn new(num_vars: usize, clauses: Vec<WeightedClause>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::Input("CNF has no clauses".into()));
        }
        let mut total = Exact::zero();
        for (c, cl) in clauses.iter().enumerate() {
            if !cl.weight.is_positive() {
                return Err(Error::Input(format!("clause {} has non-positive weight", c + 1)));
            }
            if cl.lits.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::Input(format!("clause {} has a literal outside ±[1, {num_vars}]", c + 1)));
            }
            total += &cl.weight;
        }
        let clauses = clauses
            .into_iter()
            .map(|mut cl| {
                cl.weight = &cl.weight / &total;
                cl.lits.sort_unstable();
                cl
            })
            .collect();
        Ok(CnfInstance { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[WeightedClause] {
        &self.clauses
    }

    /// Satisfied weight; `assignment[i]` is variable `i + 1`.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<Exact> {
        if assignment.len() != self.num_vars {
            return Err(Error::Input(format!(
                "assignment has {} values, CNF has {} variables",
                assignment.len(),
                self.num_vars
            )));
        }
        Ok(self.satisfied_weight(|var| assignment[var - 1]))
    }

    fn satisfied_weight(&self, value: impl Fn(usize) -> bool) -> Exact {
        self.clauses
            .iter()
            .filter(|cl| cl.lits.iter().any(|&l| value(l.unsigned_abs() as usize) == (l > 0)))
            .fold(Exact::zero(), |a, cl| a + &cl.weight)
    }

    /// `p wcnf <vars> <clauses>`, then `num den l l l 0` per clause.
    pub fn to_text(&self) -> String {
        let mut out = format!("p wcnf {} {}\n", self.num_vars, self.clauses.len());
        for cl in &self.clauses {
            let _ = writeln!(
                out,
                "{} {} {} {} {} 0",
                cl.weight.numer(),
                cl.weight.denom(),
                cl.lits[0],
                cl.lits[1],
                cl.lits[2]
            );
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c'));
        let header: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
        let num_vars = match header.as_slice() {
            ["p", "wcnf", vars, _] => vars.parse::<usize>().map_err(|_| Error::Input("bad variable count".into()))?,
            _ => return Err(Error::Input("expected header `p wcnf <vars> <clauses>`".into())),
        };
        let mut clauses = Vec::new();
        for (n, line) in lines.enumerate() {
            let nums: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Input(format!("clause line {} is malformed", n + 1));
            if nums.len() != 6 || nums[5] != "0" {
                return Err(bad());
            }
            let num: BigInt = nums[0].parse().map_err(|_| bad())?;
            let den: BigInt = nums[1].parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            let mut lits = [0i64; 3];
            for (slot, s) in lits.iter_mut().zip(&nums[2..5]) {
                *slot = s.parse().map_err(|_| bad())?;
            }
            clauses.push(WeightedClause { weight: Exact::new(num, den), lits });
        }
        Self::new(num_vars, clauses)
    }
}

impl MaxSolution for CnfInstance {
    type Witness = Vec<bool>;

    fn max_solution_bruteforce(&self, cap: u128) -> Result<(Exact, Vec<bool>)> {
        let (best, bits) = best_bitvector(self.num_vars, cap, "CNF assignments", |a| {
            self.satisfied_weight(|var| a >> (var - 1) & 1 == 1)
        })?;
        Ok((best, (0..self.num_vars).map(|i| bits >> i & 1 == 1).collect()))
    }
}

/// One variable per antipodal pair of every folded Long Code position.
/// The representative of a pair is its point with first coordinate `+1`;
/// the variable is true when the table reads `-1` there.
struct FoldedVariables {
    k: usize,
    m: usize,
    u_count: usize,
    v_count: usize,
}

impl FoldedVariables {
    fn new(lc: &LabelCoverInstance) -> Self {
        FoldedVariables {
            k: lc.k(),
            m: lc.m(),
            u_count: lc.u_count(),
            v_count: lc.v_count(),
        }
    }

    fn count(&self) -> usize {
        (self.u_count << (self.k - 1)) + (self.v_count << (self.m - 1))
    }

    fn literal(base: usize, dim: usize, z: u64) -> i64 {
        let rep = if z & 1 == 0 { z } else { z ^ full_mask(dim) };
        let var = (base + (rep >> 1) as usize + 1) as i64;
        if z & 1 == 0 {
            var
        } else {
            -var
        }
    }

    /// Literal that is true exactly when `A^u(x) = -1`.
    fn left(&self, u: usize, x: u64) -> i64 {
        Self::literal(u << (self.k - 1), self.k, x)
    }

    /// Literal that is true exactly when `B^v(y) = -1`.
    fn right(&self, v: usize, y: u64) -> i64 {
        Self::literal((self.u_count << (self.k - 1)) + (v << (self.m - 1)), self.m, y)
    }
}

fn edge_joints(lc: &LabelCoverInstance, eps: &Exact) -> Result<Vec<BlockFactoredDistribution<Exact>>> {
    lc.edges().iter().map(|e| e3sat_joint(&e.pi, eps.clone())).collect()
}

/// The E3SAT test as a weighted CNF. Each clause is the acceptance
/// predicate `A(x) = -1 ∨ B(y) = -1 ∨ B(y') = -1` on the pair variables.
pub fn export_e3sat_cnf(lc: &LabelCoverInstance, eps: &Exact, cap: u128) -> Result<CnfInstance> {
    let joints = edge_joints(lc, eps)?;
    let support = joints.iter().map(|d| d.support_bound()).fold(0u128, |a, b| a.saturating_add(b));
    ensure_within("E3SAT verifier support", support, cap)?;
    let vars = FoldedVariables::new(lc);
    let mut merged: BTreeMap<[i64; 3], Exact> = BTreeMap::new();
    for (e, w) in single_neighbours(lc) {
        let edge = &lc.edges()[e];
        for (q, p) in joints[e].exact_pmf(cap)? {
            let mut lits = [vars.left(edge.u, q[0]), vars.right(edge.v, q[2]), vars.right(edge.v, q[3])];
            lits.sort_unstable();
            *merged.entry(lits).or_insert_with(Exact::zero) += &w * p;
        }
    }
    let clauses = merged
        .into_iter()
        .map(|(lits, weight)| WeightedClause { weight, lits })
        .collect();
    CnfInstance::new(vars.count(), clauses)
}

impl ProofAssignment {
    /// Truth values of the pair variables of [`export_e3sat_cnf`].
    pub fn cnf_assignment(&self, lc: &LabelCoverInstance) -> Result<Vec<bool>> {
        self.check_against(lc, true)?;
        if !self.folded {
            return Err(Error::Precondition("pair variables need folded tables".into()));
        }
        let vars = FoldedVariables::new(lc);
        let mut out = vec![false; vars.count()];
        let left = self.left.as_ref().expect("checked above");
        let mut set = |lit: i64, t: &crate::boolean_fourier::BooleanTable, z: u64| {
            out[lit.unsigned_abs() as usize - 1] = t.get(z) == -1;
        };
        for (u, t) in left.iter().enumerate() {
            for x in (0..1u64 << lc.k()).step_by(2) {
                set(vars.left(u, x), t, x);
            }
        }
        for (v, t) in self.right.iter().enumerate() {
            for y in (0..1u64 << lc.m()).step_by(2) {
                set(vars.right(v, y), t, y);
            }
        }
        Ok(out)
    }
}

/// Probability that the E3SAT test accepts folded proofs.
pub fn e3sat_acceptance(lc: &LabelCoverInstance, proofs: &ProofAssignment, eps: &Exact, mode: EvalMode) -> Result<Probability> {
    proofs.check_against(lc, true)?;
    if !proofs.folded {
        return Err(Error::Precondition("E3SAT proofs must be folded".into()));
    }
    let left = proofs.left.as_ref().expect("checked above");
    let joints = edge_joints(lc, eps)?;
    match mode {
        EvalMode::Exact { cap } => {
            ensure_within("E3SAT exact state bits 2^(k+2m)", 1u128 << (lc.k() + 2 * lc.m()).min(127), cap)?;
            let items = single_neighbours(lc);
            let value = weighted_sum(&items, |(e, w)| {
                let edge = &lc.edges()[*e];
                let law = joints[*e].triple_value_law(&left[edge.u], &proofs.right[edge.v], cap)?;
                Ok(law.acceptance() * w)
            })?;
            Ok(Probability::Exact(value))
        }
        EvalMode::Sample { samples, seed } => Ok(estimate(samples, |i| {
            let mut rng = stream(seed, "e3sat-outer", i);
            let e = draw_neighbour(lc, &mut rng);
            let edge = &lc.edges()[e];
            match joints[e].sample(seed, i) {
                Query::Triple(t) => {
                    !(left[edge.u].get(t.x) == 1 && proofs.right[edge.v].get(t.y) == 1 && proofs.right[edge.v].get(t.y2) == 1)
                }
                Query::Quad(_) => unreachable!("E3SAT law yields triples"),
            }
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label_cover::generate_planted;
    use crate::scalar::Scalar;

    #[test]
    fn folded_literals() {
        let lc = generate_planted(1, 1, 1, 2, 2, 0).unwrap().0;
        let vars = FoldedVariables::new(&lc);
        assert_eq!(vars.count(), 2 + 2);
        // x = 00 is a representative, 11 is its antipode
        assert_eq!(vars.left(0, 0b00), 1);
        assert_eq!(vars.left(0, 0b11), -1);
        assert_eq!(vars.left(0, 0b01), -2);
        assert_eq!(vars.right(0, 0b10), 4);
    }

    #[test]
    fn long_codes_always_accept() {
        let (lc, lab) = generate_planted(3, 3, 2, 2, 3, 6).unwrap();
        let p = ProofAssignment::long_codes(&lc, &lab, true).unwrap();
        let eps = Exact::ratio(1, 4);
        let acc = e3sat_acceptance(&lc, &p, &eps, EvalMode::Exact { cap: 1 << 24 }).unwrap();
        assert_eq!(acc, Probability::Exact(Exact::ratio(1, 1)));
        let cnf = export_e3sat_cnf(&lc, &eps, 1 << 24).unwrap();
        assert_eq!(cnf.evaluate(&p.cnf_assignment(&lc).unwrap()).unwrap(), Exact::ratio(1, 1));
        let total = cnf.clauses().iter().fold(Exact::zero(), |a, c| a + &c.weight);
        assert_eq!(total, Exact::ratio(1, 1));
    }

    #[test]
    fn cnf_value_equals_acceptance_for_random_proofs() {
        let (lc, _) = generate_planted(2, 2, 2, 2, 3, 1).unwrap();
        let eps = Exact::ratio(1, 16);
        let cnf = export_e3sat_cnf(&lc, &eps, 1 << 24).unwrap();
        for i in 0..5 {
            let p = ProofAssignment::random(&lc, 4, i, true, true).unwrap();
            let acc = e3sat_acceptance(&lc, &p, &eps, EvalMode::Exact { cap: 1 << 24 }).unwrap();
            assert_eq!(acc.exact().unwrap(), &cnf.evaluate(&p.cnf_assignment(&lc).unwrap()).unwrap());
        }
    }

    #[test]
    fn unfolded_proofs_rejected() {
        let (lc, lab) = generate_planted(2, 2, 2, 2, 3, 1).unwrap();
        let mut p = ProofAssignment::long_codes(&lc, &lab, true).unwrap();
        p.folded = false;
        let r = e3sat_acceptance(&lc, &p, &Exact::ratio(1, 4), EvalMode::Exact { cap: 1 << 24 });
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn text_round_trip_and_normalization() {
        let (lc, _) = generate_planted(1, 1, 1, 1, 2, 0).unwrap();
        let cnf = export_e3sat_cnf(&lc, &Exact::ratio(1, 4), 1 << 20).unwrap();
        let back = CnfInstance::parse_text(&cnf.to_text()).unwrap();
        assert_eq!(back, cnf);
        let doubled = CnfInstance::new(
            cnf.num_vars(),
            cnf.clauses()
                .iter()
                .map(|c| WeightedClause { weight: &c.weight * Exact::ratio(3, 1), lits: c.lits })
                .collect(),
        )
        .unwrap();
        assert_eq!(doubled, cnf);
    }
}
