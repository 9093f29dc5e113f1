use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{best_bitvector, draw_neighbour_pair, estimate, neighbour_pairs, weighted_sum, EvalMode, MaxSolution, Probability};
use crate::boolean_fourier::{long_code, BooleanTable, TableMode};
use crate::distributions::{hypergraph_joint, BlockFactoredDistribution, Query};
use crate::error::{ensure_within, Error, Result};
use crate::label_cover::{LabelCoverInstance, Labeling};
use crate::projection::full_mask;
use crate::rng::stream;
use crate::scalar::format_rational;
use crate::Exact;

/// Largest `m` for which vertex ids `v·2^m + z` are formed.
const MAX_POINT_BITS: usize = 40;

/// The hypergraph on `∪_v {-1,1}^m`, with hyperedges given implicitly by
/// the query law of every `(u, v, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergraphInstance {
    lc: LabelCoverInstance,
}

pub fn build_hypergraph(lc: &LabelCoverInstance) -> Result<HypergraphInstance> {
    if lc.m() > MAX_POINT_BITS {
        return Err(Error::size("hypercube dimension m", lc.m() as u128, MAX_POINT_BITS as u128));
    }
    Ok(HypergraphInstance { lc: lc.clone() })
}

impl HypergraphInstance {
    pub fn label_cover(&self) -> &LabelCoverInstance {
        &self.lc
    }

    pub fn vertex_count(&self) -> u64 {
        (self.lc.v_count() as u64) << self.lc.m()
    }

    pub fn vertex_id(&self, v: usize, point: u64) -> u64 {
        ((v as u64) << self.lc.m()) | point
    }

    /// `(v, point)` of a vertex id.
    pub fn split_vertex(&self, id: u64) -> (usize, u64) {
        ((id >> self.lc.m()) as usize, id & full_mask(self.lc.m()))
    }

    fn joint(&self, e1: usize, e2: usize) -> BlockFactoredDistribution<Exact> {
        let edges = self.lc.edges();
        hypergraph_joint(&edges[e1].pi, &edges[e2].pi).expect("edges of one instance share [k]")
    }

    fn ids(&self, e1: usize, e2: usize, q: [u64; 4]) -> [u64; 4] {
        let (v, w) = (self.lc.edges()[e1].v, self.lc.edges()[e2].v);
        [self.vertex_id(v, q[0]), self.vertex_id(v, q[1]), self.vertex_id(w, q[2]), self.vertex_id(w, q[3])]
    }

    /// Hyperedges listed with their probability under the test, counting
    /// every `(u, v, w, x, x', y, y')`.
    pub fn enumeration_size(&self) -> u128 {
        neighbour_pairs(&self.lc)
            .iter()
            .map(|(e1, e2, _)| self.joint(*e1, *e2).support_bound())
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    /// All hyperedges with their total probability; 4-tuples are merged
    /// as sorted multisets.
    pub fn enumerate_edges(&self, cap: u128) -> Result<EnumeratedHypergraph> {
        ensure_within("hyperedge enumeration", self.enumeration_size(), cap)?;
        let mut edges: BTreeMap<[u64; 4], Exact> = BTreeMap::new();
        for (e1, e2, w) in neighbour_pairs(&self.lc) {
            for (q, p) in self.joint(e1, e2).exact_pmf(cap)? {
                let mut ids = self.ids(e1, e2, q);
                ids.sort_unstable();
                *edges.entry(ids).or_insert_with(Exact::zero) += &w * p;
            }
        }
        Ok(EnumeratedHypergraph {
            vertex_count: self.vertex_count(),
            edges: edges.into_iter().collect(),
        })
    }

    /// Vertex ids `[x, x', y, y']` of hyperedge sample `index`.
    pub fn sample_edge(&self, seed: u64, index: u64) -> [u64; 4] {
        let mut rng = stream(seed, "hypergraph-outer", index);
        let (e1, e2) = draw_neighbour_pair(&self.lc, &mut rng);
        let q = match self.joint(e1, e2).sample(seed, index) {
            Query::Quad(q) => [q.x, q.x2, q.y, q.y2],
            Query::Triple(_) => unreachable!("hypergraph law yields quadruples"),
        };
        self.ids(e1, e2, q)
    }

    /// Indicator tables (one per `v`) of a set of vertex ids.
    pub fn subset_tables(&self, ids: &[u64]) -> Result<Vec<BooleanTable>> {
        let m = self.lc.m();
        let mut values = vec![vec![0i8; 1 << m]; self.lc.v_count()];
        for &id in ids {
            if id >= self.vertex_count() {
                return Err(Error::Input(format!("vertex id {} outside [1, {}]", id + 1, self.vertex_count())));
            }
            let (v, z) = self.split_vertex(id);
            values[v][z as usize] = 1;
        }
        values
            .into_iter()
            .map(|vals| BooleanTable::new(m, TableMode::Indicator, vals))
            .collect()
    }

    fn exact_work(&self) -> u128 {
        let pairs = neighbour_pairs(&self.lc).len() as u128;
        pairs
            .saturating_mul(1u128 << self.lc.k().min(100))
            .saturating_mul(1u128 << (2 * self.lc.m()))
    }
}

/// Hyperedges with their probabilities, merged as sorted vertex multisets.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedHypergraph {
    pub vertex_count: u64,
    pub edges: Vec<([u64; 4], Exact)>,
}

impl EnumeratedHypergraph {
    pub fn total_weight(&self) -> Exact {
        self.edges.iter().fold(Exact::zero(), |a, (_, w)| a + w)
    }

    /// Weight of hyperedges lying entirely inside `member`.
    pub fn weight_inside(&self, member: impl Fn(u64) -> bool) -> Exact {
        self.edges
            .iter()
            .filter(|(e, _)| e.iter().all(|&id| member(id)))
            .fold(Exact::zero(), |a, (_, w)| a + w)
    }

    /// `p hyper <vertices> <edges>` followed by one line of four 1-based
    /// vertex ids per hyperedge.
    pub fn to_text(&self) -> String {
        let mut out = format!("p hyper {} {}\n", self.vertex_count, self.edges.len());
        for (e, _) in &self.edges {
            let _ = writeln!(out, "{} {} {} {}", e[0] + 1, e[1] + 1, e[2] + 1, e[3] + 1);
        }
        out
    }

    /// Same as [`to_text`](Self::to_text) with each line prefixed by its
    /// weight as `num den`.
    pub fn to_weighted_text(&self) -> String {
        let mut out = format!("p hyper {} {}\n", self.vertex_count, self.edges.len());
        for (e, w) in &self.edges {
            let _ = writeln!(out, "{} {} {} {} {} {}", w.numer(), w.denom(), e[0] + 1, e[1] + 1, e[2] + 1, e[3] + 1);
        }
        out
    }
}

impl MaxSolution for EnumeratedHypergraph {
    type Witness = Vec<u64>;

    /// Largest independent set, as a fraction of all vertices.
    fn max_solution_bruteforce(&self, cap: u128) -> Result<(Exact, Vec<u64>)> {
        if self.vertex_count > 63 {
            return Err(Error::size("independent-set search vertices", self.vertex_count as u128, 63));
        }
        let masks: Vec<u64> = self.edges.iter().map(|(e, _)| e.iter().fold(0u64, |a, &id| a | 1 << id)).collect();
        let n = self.vertex_count;
        let (best, set) = best_bitvector(n as usize, cap, "vertex subsets", |s| {
            if masks.iter().any(|&e| e & s == e) {
                -Exact::one()
            } else {
                Exact::new(BigInt::from(s.count_ones()), BigInt::from(n))
            }
        })?;
        let witness = (0..n).filter(|&id| set >> id & 1 == 1).collect();
        Ok((best, witness))
    }
}

/// Colouring of every copy by the coordinate of its planted label:
/// vertex `(v, z)` gets colour `z_{σ(v)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColoring {
    sigma: Vec<usize>,
    m: usize,
}

impl TwoColoring {
    pub fn color(&self, id: u64) -> i8 {
        let v = (id >> self.m) as usize;
        if (id >> self.sigma[v]) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// `±1` tables `z ↦ z_{σ(v)}`.
    pub fn tables(&self) -> Vec<BooleanTable> {
        self.sigma
            .iter()
            .map(|&l| long_code(l, self.m).expect("labels validated"))
            .collect()
    }

    /// Indicator tables of colour class `c`.
    pub fn class(&self, c: i8) -> Vec<BooleanTable> {
        self.tables()
            .into_iter()
            .map(|t| {
                BooleanTable::from_fn(self.m, TableMode::Indicator, |z| (t.get(z) == c) as i8).expect("same dimension")
            })
            .collect()
    }

    /// Vertex ids of colour class `c`.
    pub fn class_ids(&self, c: i8) -> Vec<u64> {
        let total = (self.sigma.len() as u64) << self.m;
        (0..total).filter(|&id| self.color(id) == c).collect()
    }
}

/// The completeness colouring; needs a labeling satisfying every edge.
pub fn yes_two_coloring(lc: &LabelCoverInstance, labeling: &Labeling) -> Result<TwoColoring> {
    let value = lc.value(labeling)?;
    if !value.is_one() {
        return Err(Error::Precondition(format!(
            "labeling satisfies {} of the edges, not all",
            format_rational(&value)
        )));
    }
    Ok(TwoColoring {
        sigma: labeling.right.clone(),
        m: lc.m(),
    })
}

/// Probability that a hyperedge lies entirely inside the subset given by
/// per-copy indicator tables.
pub fn independent_set_violations(h: &HypergraphInstance, subset: &[BooleanTable], mode: EvalMode) -> Result<Probability> {
    let lc = &h.lc;
    if subset.len() != lc.v_count() || subset.iter().any(|t| t.dim() != lc.m() || t.mode() != TableMode::Indicator) {
        return Err(Error::Input(format!(
            "subset needs {} indicator tables of dimension {}",
            lc.v_count(),
            lc.m()
        )));
    }
    match mode {
        EvalMode::Exact { cap } => {
            ensure_within("exact hypergraph evaluation", h.exact_work(), cap)?;
            let pairs = neighbour_pairs(lc);
            let value = weighted_sum(&pairs, |(e1, e2, w)| {
                let (v, ww) = (lc.edges()[*e1].v, lc.edges()[*e2].v);
                let law = h.joint(*e1, *e2).quad_value_law(&subset[v], &subset[ww], cap)?;
                Ok(law.all_ones() * w)
            })?;
            Ok(Probability::Exact(value))
        }
        EvalMode::Sample { samples, seed } => Ok(estimate(samples, |i| {
            h.sample_edge(seed, i).iter().all(|&id| {
                let (v, z) = h.split_vertex(id);
                subset[v].get(z) == 1
            })
        })),
    }
}

/// Probability that a hyperedge is monochromatic under `coloring`.
pub fn monochromatic_fraction(h: &HypergraphInstance, coloring: &TwoColoring, mode: EvalMode) -> Result<Probability> {
    let lc = &h.lc;
    if coloring.sigma.len() != lc.v_count() || coloring.m != lc.m() {
        return Err(Error::Input("colouring does not match the hypergraph".into()));
    }
    match mode {
        EvalMode::Exact { cap } => {
            ensure_within("exact hypergraph evaluation", h.exact_work(), cap)?;
            let tables = coloring.tables();
            let pairs = neighbour_pairs(lc);
            let value = weighted_sum(&pairs, |(e1, e2, w)| {
                let (v, ww) = (lc.edges()[*e1].v, lc.edges()[*e2].v);
                let law = h.joint(*e1, *e2).quad_value_law(&tables[v], &tables[ww], cap)?;
                Ok(law.all_equal() * w)
            })?;
            Ok(Probability::Exact(value))
        }
        EvalMode::Sample { samples, seed } => Ok(estimate(samples, |i| {
            let e = h.sample_edge(seed, i);
            let c = coloring.color(e[0]);
            e.iter().all(|&id| coloring.color(id) == c)
        })),
    }
}
