use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::boolean_fourier::{fold, long_code, BooleanTable, TableMode};
use crate::error::{Error, Result};
use crate::label_cover::{LabelCoverInstance, Labeling};
use crate::rng::stream;

/// One table per Long Code copy: `right[v]` on `{-1,1}^m` and, for E3SAT,
/// `left[u]` on `{-1,1}^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofAssignment {
    pub left: Option<Vec<BooleanTable>>,
    pub right: Vec<BooleanTable>,
    pub folded: bool,
}

/// `proofs.v1`: vertex id (1-based) to table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDocument {
    pub folded: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<BTreeMap<usize, BooleanTable>>,
    pub right: BTreeMap<usize, BooleanTable>,
}

impl ProofAssignment {
    /// Dictators of a labeling. Long Codes are odd, so the bundle is
    /// marked folded.
    pub fn long_codes(inst: &LabelCoverInstance, labeling: &Labeling, with_left: bool) -> Result<Self> {
        labeling.check_against(inst)?;
        let right = labeling
            .right
            .iter()
            .map(|&l| long_code(l, inst.m()))
            .collect::<Result<Vec<_>>>()?;
        let left = if with_left {
            Some(labeling.left.iter().map(|&l| long_code(l, inst.k())).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        Ok(ProofAssignment { left, right, folded: true })
    }

    /// Uniformly random tables, folded when asked. Table `t` of the bundle
    /// reads stream `(seed, "proof", index * 2^20 + t)`.
    pub fn random(inst: &LabelCoverInstance, seed: u64, index: u64, with_left: bool, folded: bool) -> Result<Self> {
        let make = |dim: usize, t: u64| -> Result<BooleanTable> {
            let mut rng = stream(seed, "proof", (index << 20) | t);
            let table = BooleanTable::from_fn(dim, TableMode::Pm1, |_| if rng.next_u32() & 1 == 0 { 1 } else { -1 })?;
            if folded {
                fold(&table)
            } else {
                Ok(table)
            }
        };
        let right = (0..inst.v_count())
            .map(|v| make(inst.m(), v as u64))
            .collect::<Result<Vec<_>>>()?;
        let left = if with_left {
            let base = inst.v_count() as u64;
            Some((0..inst.u_count()).map(|u| make(inst.k(), base + u as u64)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        Ok(ProofAssignment { left, right, folded })
    }

    /// Unfolded right-side tables with each entry `+1` independently with
    /// probability `p_one`.
    pub fn random_biased(inst: &LabelCoverInstance, p_one: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_one) {
            return Err(Error::Input(format!("probability {p_one} outside [0, 1]")));
        }
        let right = (0..inst.v_count())
            .map(|v| {
                let mut rng = stream(seed, "biased-proof", v as u64);
                BooleanTable::from_fn(inst.m(), TableMode::Pm1, |_| if rng.gen_bool(p_one) { 1 } else { -1 })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProofAssignment { left: None, right, folded: false })
    }

    /// The same table for every right vertex.
    pub fn constant(inst: &LabelCoverInstance, mode: TableMode, value: i8) -> Result<Self> {
        let t = BooleanTable::constant(inst.m(), mode, value)?;
        Ok(ProofAssignment {
            left: None,
            right: vec![t; inst.v_count()],
            folded: false,
        })
    }

    /// Dimensions match `inst`; when `folded` is set every table is odd.
    pub fn check_against(&self, inst: &LabelCoverInstance, need_left: bool) -> Result<()> {
        if self.right.len() != inst.v_count() {
            return Err(Error::Input(format!(
                "proof has {} right tables, instance has {} right vertices",
                self.right.len(),
                inst.v_count()
            )));
        }
        if let Some(v) = self.right.iter().position(|t| t.dim() != inst.m()) {
            return Err(Error::Input(format!("right table {} has dimension {}", v + 1, self.right[v].dim())));
        }
        match (&self.left, need_left) {
            (None, true) => return Err(Error::Input("proof lacks left tables".into())),
            (Some(left), _) => {
                if left.len() != inst.u_count() {
                    return Err(Error::Input(format!("proof has {} left tables, need {}", left.len(), inst.u_count())));
                }
                if let Some(u) = left.iter().position(|t| t.dim() != inst.k()) {
                    return Err(Error::Input(format!("left table {} has dimension {}", u + 1, left[u].dim())));
                }
            }
            (None, false) => {}
        }
        if self.folded {
            let all = self.right.iter().chain(self.left.iter().flatten());
            if let Some(t) = all.into_iter().find(|t| !t.is_folded()) {
                return Err(Error::Precondition(format!(
                    "bundle is marked folded but a table of dimension {} is not",
                    t.dim()
                )));
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> ProofDocument {
        let index = |ts: &[BooleanTable]| ts.iter().enumerate().map(|(i, t)| (i + 1, t.clone())).collect();
        ProofDocument {
            folded: self.folded,
            left: self.left.as_deref().map(index),
            right: index(&self.right),
        }
    }

    pub fn from_document(doc: ProofDocument) -> Result<Self> {
        let unpack = |map: BTreeMap<usize, BooleanTable>, side: &str| -> Result<Vec<BooleanTable>> {
            let n = map.len();
            map.into_iter()
                .enumerate()
                .map(|(pos, (id, t))| {
                    if id == pos + 1 {
                        Ok(t)
                    } else {
                        Err(Error::Input(format!("{side} tables must be keyed 1..{n}; found key {id}")))
                    }
                })
                .collect()
        };
        Ok(ProofAssignment {
            folded: doc.folded,
            left: doc.left.map(|m| unpack(m, "left")).transpose()?,
            right: unpack(doc.right, "right")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label_cover::generate_planted;

    #[test]
    fn long_codes_are_folded_and_round_trip() {
        let (inst, lab) = generate_planted(2, 3, 2, 2, 3, 1).unwrap();
        let p = ProofAssignment::long_codes(&inst, &lab, true).unwrap();
        p.check_against(&inst, true).unwrap();
        let text = serde_json::to_string(&p.to_document()).unwrap();
        let back = ProofAssignment::from_document(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn random_bundles() {
        let (inst, _) = generate_planted(2, 3, 2, 2, 3, 1).unwrap();
        let a = ProofAssignment::random(&inst, 9, 0, true, true).unwrap();
        a.check_against(&inst, true).unwrap();
        assert_eq!(a, ProofAssignment::random(&inst, 9, 0, true, true).unwrap());
        assert_ne!(a, ProofAssignment::random(&inst, 9, 1, true, true).unwrap());
    }

    #[test]
    fn folded_flag_is_checked() {
        let (inst, _) = generate_planted(2, 3, 2, 2, 3, 1).unwrap();
        let mut p = ProofAssignment::constant(&inst, TableMode::Pm1, 1).unwrap();
        assert!(p.check_against(&inst, true).is_err());
        p.folded = true;
        assert!(matches!(p.check_against(&inst, false), Err(Error::Precondition(_))));
    }
}
