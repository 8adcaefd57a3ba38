//! The `itdendro-bundle/1` JSON document: everything needed to re-cut and
//! redraw a dendrogram without recomputing dissimilarities.
//!
//! Reals are written as shortest round-trip decimals and read back exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::dendro::{merge_table_fast, Merge, MergeTable};
use crate::dissim::Metric;
use crate::error::{Error, Result};
use crate::intree::{ITStructure, Potentials};

pub const SCHEMA: &str = "itdendro-bundle/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub name: String,
    pub sigma: f64,
    pub metric: String,
    pub kernel: String,
    pub n: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleTree {
    pub parent: Vec<usize>,
    pub weight: Vec<f64>,
    pub potential: Vec<f64>,
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DendroBundle {
    pub schema: String,
    /// Human-readable notes on indexing; ignored when reading.
    #[serde(default)]
    pub conventions: BTreeMap<String, String>,
    pub meta: BundleMeta,
    pub coords2d: Option<Vec<[f64; 2]>>,
    pub labels: Option<Vec<String>>,
    pub it: BundleTree,
    pub merges: Vec<Merge>,
}

fn conventions() -> BTreeMap<String, String> {
    [
        ("indexing", "all node and cluster indices are zero-based"),
        ("it", "parent[root] = root and weight[root] = 0; every other node i has the edge (i, parent[i], weight[i])"),
        ("merges", "rows of [left, right, height] with left < right; leaves are 0..n-1 and row k creates cluster n+k; add 1 to every id for one-based linkage tools"),
        ("heights", "the height column equals the non-root weights sorted ascending"),
        ("cut", "cutting at tau removes every edge with weight > tau"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

impl DendroBundle {
    pub fn new(data: &Dataset, metric: Metric, pot: &Potentials, it: &ITStructure, merges: &MergeTable) -> Self {
        DendroBundle {
            schema: SCHEMA.to_string(),
            conventions: conventions(),
            meta: BundleMeta {
                name: data.name().to_string(),
                sigma: pot.sigma,
                metric: metric.as_str().to_string(),
                kernel: pot.kernel.as_str().to_string(),
                n: data.len(),
                d: data.dim(),
            },
            coords2d: data.coords2d(),
            labels: data.labels().map(<[String]>::to_vec),
            it: BundleTree {
                parent: it.parent().to_vec(),
                weight: it.weight().to_vec(),
                potential: it.potential().to_vec(),
                root: it.root(),
            },
            merges: merges.rows().to_vec(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parses and validates a bundle document.
    pub fn from_json(text: &str) -> Result<Self> {
        let b: DendroBundle = serde_json::from_str(text)?;
        b.validate()?;
        Ok(b)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::file(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        DendroBundle::from_json(&fs::read_to_string(path).map_err(|e| Error::file(path, e))?)
    }

    pub fn it_structure(&self) -> Result<ITStructure> {
        let it = ITStructure::from_parts(self.it.parent.clone(), self.it.weight.clone(), self.it.potential.clone())?;
        if it.root() != self.it.root {
            return Err(Error::integrity(format!(
                "declared root {} but the self-parented node is {}",
                self.it.root,
                it.root()
            )));
        }
        Ok(it)
    }

    pub fn merge_table(&self) -> Result<MergeTable> {
        MergeTable::from_rows(self.meta.n, self.merges.clone())
    }

    /// Checks every bundle invariant, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::integrity(format!("schema is {:?}, expected {SCHEMA:?}", self.schema)));
        }
        let n = self.meta.n;
        if self.it.parent.len() != n {
            return Err(Error::integrity(format!("meta.n is {n} but the in-tree has {} nodes", self.it.parent.len())));
        }
        if let Some(l) = &self.labels {
            if l.len() != n {
                return Err(Error::integrity(format!("{} labels for {n} nodes", l.len())));
            }
        }
        if let Some(c) = &self.coords2d {
            if c.len() != n {
                return Err(Error::integrity(format!("{} coordinates for {n} nodes", c.len())));
            }
        }
        if self.meta.sigma.is_nan() || self.meta.sigma <= 0.0 {
            return Err(Error::integrity("meta.sigma must be positive"));
        }
        let it = self.it_structure()?;
        let z = self.merge_table()?;
        let mut w: Vec<f64> = it.edge_starts().map(|i| it.weight()[i]).collect();
        w.sort_by(f64::total_cmp);
        let identity = w.iter().zip(z.rows()).all(|(a, m)| a.to_bits() == m.height.to_bits());
        if !identity {
            return Err(Error::integrity("merge heights differ from the sorted in-tree edge weights"));
        }
        if merge_table_fast(&it) != z {
            return Err(Error::integrity("merge rows do not match the in-tree edges"));
        }
        Ok(())
    }
}
