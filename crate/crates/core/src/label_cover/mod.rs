//! Label Cover projection games: construction, evaluation, exhaustive
//! optimisation and the `labelcover.v1` / `labeling.v1` formats.
//!
//! Vertices and labels are 0-based in memory and 1-based on disk.

mod generate;
mod io;
mod solve;

pub use generate::{from_3sat_base_game, generate_planted, lift_labeling, parallel_repetition};
pub use io::{InstanceDocument, LabelingDocument};
pub use solve::{optimum_bruteforce, projection_expansion_stats, ExpansionReport};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::projection::Projection;
use crate::Exact;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub pi: Projection,
}

impl Edge {
    pub fn satisfied_by(&self, left_label: usize, right_label: usize) -> bool {
        self.pi.apply(right_label) == left_label
    }
}

/// Bipartite projection game `(U, V, E, [k], [m], {π_vu})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCoverInstance {
    k: usize,
    m: usize,
    u_count: usize,
    v_count: usize,
    edges: Vec<Edge>,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl LabelCoverInstance {
    pub fn new(k: usize, m: usize, u_count: usize, v_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(Error::Input("label sets must be nonempty".into()));
        }
        if k > m {
            return Err(Error::Input(format!("need k <= m, got k = {k}, m = {m}")));
        }
        if u_count == 0 || v_count == 0 {
            return Err(Error::Input("both sides need at least one vertex".into()));
        }
        let mut left_adj = vec![Vec::new(); u_count];
        let mut right_adj = vec![Vec::new(); v_count];
        for (idx, e) in edges.iter().enumerate() {
            if e.u >= u_count || e.v >= v_count {
                return Err(Error::Input(format!(
                    "edge {} joins ({}, {}) outside |U| = {u_count}, |V| = {v_count}",
                    idx + 1,
                    e.u + 1,
                    e.v + 1
                )));
            }
            if e.pi.k() != k || e.pi.m() != m {
                return Err(Error::Input(format!(
                    "edge {} projection is [{}] -> [{}], expected [{m}] -> [{k}]",
                    idx + 1,
                    e.pi.m(),
                    e.pi.k()
                )));
            }
            left_adj[e.u].push(idx);
            right_adj[e.v].push(idx);
        }
        if let Some(u) = left_adj.iter().position(Vec::is_empty) {
            return Err(Error::Input(format!("left vertex {} has no edge", u + 1)));
        }
        if let Some(v) = right_adj.iter().position(Vec::is_empty) {
            return Err(Error::Input(format!("right vertex {} has no edge", v + 1)));
        }
        Ok(LabelCoverInstance {
            k,
            m,
            u_count,
            v_count,
            edges,
            left_adj,
            right_adj,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn u_count(&self) -> usize {
        self.u_count
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Indices of the edges at left vertex `u`.
    pub fn edges_of_left(&self, u: usize) -> &[usize] {
        &self.left_adj[u]
    }

    /// Indices of the edges at right vertex `v`.
    pub fn edges_of_right(&self, v: usize) -> &[usize] {
        &self.right_adj[v]
    }

    /// Every projection is onto `[k]`.
    pub fn is_onto(&self) -> bool {
        self.edges.iter().all(|e| e.pi.is_onto())
    }

    /// All left degrees equal and all right degrees equal.
    pub fn is_biregular(&self) -> bool {
        let same = |adj: &[Vec<usize>]| adj.windows(2).all(|w| w[0].len() == w[1].len());
        same(&self.left_adj) && same(&self.right_adj)
    }

    /// Fraction of edges satisfied by `labeling`, exactly.
    pub fn value(&self, labeling: &Labeling) -> Result<Exact> {
        labeling.check_against(self)?;
        let satisfied = self
            .edges
            .iter()
            .filter(|e| e.satisfied_by(labeling.left[e.u], labeling.right[e.v]))
            .count();
        Ok(BigRational::new(
            BigInt::from(satisfied),
            BigInt::from(self.edges.len()),
        ))
    }
}

/// Labels for both sides (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Labeling {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Self {
        Labeling { left, right }
    }

    pub fn check_against(&self, inst: &LabelCoverInstance) -> Result<()> {
        if self.left.len() != inst.u_count || self.right.len() != inst.v_count {
            return Err(Error::Input(format!(
                "labeling has {}+{} entries, instance needs {}+{}",
                self.left.len(),
                self.right.len(),
                inst.u_count,
                inst.v_count
            )));
        }
        if let Some(u) = self.left.iter().position(|&l| l >= inst.k) {
            return Err(Error::Input(format!("left label of vertex {} outside [1, {}]", u + 1, inst.k)));
        }
        if let Some(v) = self.right.iter().position(|&l| l >= inst.m) {
            return Err(Error::Input(format!("right label of vertex {} outside [1, {}]", v + 1, inst.m)));
        }
        Ok(())
    }
}
