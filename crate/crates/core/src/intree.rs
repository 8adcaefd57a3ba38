//! Potential field and the in-tree built by nearest-neighbor descent.
//!
//! Each node descends to its nearest neighbor among the nodes with strictly
//! lower potential. Potentials are compared lexicographically as
//! `(potential, index)`, which makes the order strict even when values tie
//! exactly, so there is always a single root: the node with the smallest pair.

use std::cmp::Ordering;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dendro::{Edge, SparseEdgeSet};
use crate::dissim::Dissimilarity;
use crate::error::{Error, Result};

/// Kernel turning a dissimilarity into a contribution to a node's potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Kernel {
    /// `exp(-(d/σ)²)`
    #[default]
    Gaussian,
    /// `exp(-d/σ)`
    Exponential,
}

impl Kernel {
    #[inline]
    pub fn eval(self, d: f64, sigma: f64) -> f64 {
        match self {
            Kernel::Gaussian => {
                let r = d / sigma;
                (-(r * r)).exp()
            }
            Kernel::Exponential => (-(d / sigma)).exp(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kernel::Gaussian => "gaussian",
            Kernel::Exponential => "exponential",
        }
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Kernel::Gaussian),
            "exponential" => Ok(Kernel::Exponential),
            other => Err(Error::usage(format!("unknown kernel {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Potentials {
    pub values: Vec<f64>,
    pub sigma: f64,
    pub kernel: Kernel,
}

/// `P_i = -Σ_{j≠i} exp(-(d_ij/σ)²)`, summed in ascending `j`.
pub fn compute_potentials<D>(view: &D, sigma: f64) -> Result<Potentials>
where
    D: Dissimilarity + ?Sized,
{
    compute_potentials_with(view, sigma, Kernel::Gaussian)
}

pub fn compute_potentials_with<D>(view: &D, sigma: f64, kernel: Kernel) -> Result<Potentials>
where
    D: Dissimilarity + ?Sized,
{
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::usage(format!("sigma must be positive and finite, got {sigma}")));
    }
    let n = view.len();
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut sum = 0.0;
            for j in 0..n {
                if j != i {
                    sum += kernel.eval(view.lookup(i, j), sigma);
                }
            }
            // 0.0 - sum keeps the empty sum at +0.0
            0.0 - sum
        })
        .collect();
    Ok(Potentials { values, sigma, kernel })
}

/// Strict total order on nodes: does `a` come before `b` in `(potential, index)` order?
#[inline]
pub fn precedes(potential: &[f64], a: usize, b: usize) -> bool {
    match potential[a].total_cmp(&potential[b]) {
        Ordering::Less => true,
        Ordering::Equal => a < b,
        Ordering::Greater => false,
    }
}

/// The in-tree: `parent[i]` is the node `i` descends to, `weight[i]` the
/// dissimilarity between them. The root points to itself with weight 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ITStructure {
    parent: Vec<usize>,
    weight: Vec<f64>,
    potential: Vec<f64>,
    root: usize,
}

impl ITStructure {
    /// Rebuilds an in-tree from raw vectors, checking every structural invariant.
    ///
    /// Weights cannot be checked against dissimilarities here; see
    /// [`ITStructure::check_weights`].
    pub fn from_parts(parent: Vec<usize>, weight: Vec<f64>, potential: Vec<f64>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::integrity("in-tree has no nodes"));
        }
        if weight.len() != n || potential.len() != n {
            return Err(Error::integrity(format!(
                "in-tree vectors disagree in length: parent {n}, weight {}, potential {}",
                weight.len(),
                potential.len()
            )));
        }
        if let Some(i) = potential.iter().position(|p| !p.is_finite()) {
            return Err(Error::integrity(format!("potential[{i}] is not finite")));
        }
        let mut root = None;
        for i in 0..n {
            let p = parent[i];
            if p >= n {
                return Err(Error::integrity(format!("parent[{i}] = {p} is out of range")));
            }
            if !(weight[i] >= 0.0 && weight[i].is_finite()) {
                return Err(Error::integrity(format!("weight[{i}] is not a finite non-negative value")));
            }
            if p == i {
                if let Some(r) = root {
                    return Err(Error::integrity(format!("more than one root: {r} and {i}")));
                }
                if weight[i] != 0.0 {
                    return Err(Error::integrity(format!("root {i} has non-zero weight")));
                }
                root = Some(i);
            } else if !precedes(&potential, p, i) {
                return Err(Error::integrity(format!(
                    "node {i} does not descend: parent {p} has no lower (potential, index)"
                )));
            }
        }
        // Strict descent along every parent pointer rules out cycles, so a
        // missing root can only mean n == 0, which is handled above.
        let root = root.ok_or_else(|| Error::integrity("in-tree has no root"))?;
        Ok(ITStructure { parent, weight, potential, root })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self) -> &[usize] {
        &self.parent
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Non-root nodes, i.e. the start node of every edge.
    pub fn edge_starts(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| i != self.root)
    }

    /// Verifies `weight[i] == lookup(i, parent[i])` exactly for every non-root node.
    pub fn check_weights<D: Dissimilarity + ?Sized>(&self, view: &D) -> Result<()> {
        if view.len() != self.len() {
            return Err(Error::integrity("view and in-tree sizes differ"));
        }
        for i in self.edge_starts() {
            let d = view.lookup(i, self.parent[i]);
            if d.to_bits() != self.weight[i].to_bits() {
                return Err(Error::integrity(format!(
                    "weight[{i}] = {} but dissimilarity to parent is {d}",
                    self.weight[i]
                )));
            }
        }
        Ok(())
    }
}

/// Nearest-neighbor descent: every node except the root links to the closest
/// node that precedes it, ties on distance going to the smaller index.
pub fn build_it<D>(view: &D, pot: &Potentials) -> Result<ITStructure>
where
    D: Dissimilarity + ?Sized,
{
    let n = view.len();
    let p = &pot.values;
    if p.len() != n {
        return Err(Error::usage(format!("{} potentials for a view over {n} items", p.len())));
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let root = (1..n).fold(0, |best, i| if precedes(p, i, best) { i } else { best });
    let links: Vec<(usize, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            if i == root {
                return (i, 0.0);
            }
            let mut best = (root, view.lookup(i, root));
            for j in 0..n {
                if j != i && precedes(p, j, i) {
                    let d = view.lookup(i, j);
                    if d < best.1 || (d == best.1 && j < best.0) {
                        best = (j, d);
                    }
                }
            }
            best
        })
        .collect();
    let (parent, weight) = links.into_iter().unzip();
    Ok(ITStructure { parent, weight, potential: p.clone(), root })
}

/// The in-tree with directions dropped: one edge `(i, parent[i], weight[i])` per non-root node.
pub fn it_to_sparse_edges(it: &ITStructure) -> SparseEdgeSet {
    let edges = it.edge_starts().map(|i| Edge { a: i, b: it.parent[i], w: it.weight[i] }).collect();
    SparseEdgeSet::new_unchecked(it.len(), edges)
}
