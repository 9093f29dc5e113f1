use serde::{Deserialize, Serialize};

use super::{Edge, LabelCoverInstance, Labeling};
use crate::error::{Error, Result};
use crate::projection::Projection;

/// On-disk `labelcover.v1` instance. Everything is 1-based.
///
/// `planted` is an optional extension carrying a known labeling, so that
/// later stages can build honest proofs from a generated file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub k: usize,
    pub m: usize,
    pub u_count: usize,
    pub v_count: usize,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<LabelingDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub u: usize,
    pub v: usize,
    pub pi: Vec<usize>,
}

/// On-disk `labeling.v1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDocument {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

fn to_zero_based(values: &[usize], what: &str) -> Result<Vec<usize>> {
    values
        .iter()
        .map(|&x| {
            x.checked_sub(1)
                .ok_or_else(|| Error::Input(format!("{what} uses index 0; indices are 1-based")))
        })
        .collect()
}

impl InstanceDocument {
    pub fn from_instance(inst: &LabelCoverInstance, planted: Option<&Labeling>) -> Self {
        InstanceDocument {
            k: inst.k(),
            m: inst.m(),
            u_count: inst.u_count(),
            v_count: inst.v_count(),
            edges: inst
                .edges()
                .iter()
                .map(|e| EdgeDocument {
                    u: e.u + 1,
                    v: e.v + 1,
                    pi: e.pi.map().iter().map(|&i| i + 1).collect(),
                })
                .collect(),
            planted: planted.map(LabelingDocument::from_labeling),
        }
    }

    pub fn to_instance(&self) -> Result<(LabelCoverInstance, Option<Labeling>)> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (idx, e) in self.edges.iter().enumerate() {
            let what = format!("edge {}", idx + 1);
            if e.pi.len() != self.m {
                return Err(Error::Input(format!(
                    "{what} projection has {} entries, expected m = {}",
                    e.pi.len(),
                    self.m
                )));
            }
            let u = to_zero_based(&[e.u], &what)?[0];
            let v = to_zero_based(&[e.v], &what)?[0];
            edges.push(Edge { u, v, pi: Projection::new(self.k, to_zero_based(&e.pi, &what)?)? });
        }
        let inst = LabelCoverInstance::new(self.k, self.m, self.u_count, self.v_count, edges)?;
        let planted = match &self.planted {
            Some(doc) => {
                let lab = doc.to_labeling()?;
                lab.check_against(&inst)?;
                Some(lab)
            }
            None => None,
        };
        Ok((inst, planted))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance documents always serialize")
    }
}

impl LabelingDocument {
    pub fn from_labeling(lab: &Labeling) -> Self {
        LabelingDocument {
            left: lab.left.iter().map(|&l| l + 1).collect(),
            right: lab.right.iter().map(|&l| l + 1).collect(),
        }
    }

    pub fn to_labeling(&self) -> Result<Labeling> {
        Ok(Labeling::new(
            to_zero_based(&self.left, "left labeling")?,
            to_zero_based(&self.right, "right labeling")?,
        ))
    }
}
