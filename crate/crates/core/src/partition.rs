//! Cutting the in-tree and labeling nodes by the root they reach.

use std::collections::HashMap;

use serde::Serialize;

use crate::dendro::MergeTable;
use crate::error::{Error, Result};
use crate::intree::ITStructure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CutRule {
    /// Edges with weight strictly above the threshold were removed.
    Threshold(f64),
    /// The `k` heaviest edges were removed.
    TopK(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemovedEdge {
    pub node: usize,
    pub parent: usize,
    pub weight: f64,
}

/// Cluster id per node, numbered by ascending root index.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub cluster_of: Vec<usize>,
    /// `roots[c]` is the node every member of cluster `c` descends to.
    pub roots: Vec<usize>,
    pub rule: CutRule,
    /// In ascending node order.
    pub removed_edges: Vec<RemovedEdge>,
}

impl Assignment {
    pub fn cluster_count(&self) -> usize {
        self.roots.len()
    }

    pub fn root_of(&self, node: usize) -> usize {
        self.roots[self.cluster_of[node]]
    }

    pub fn evaluate<S: AsRef<str>>(&self, labels: &[S]) -> Result<Evaluation> {
        evaluate(&self.cluster_of, labels)
    }
}

/// Removes every edge with weight `> tau` and assigns clusters by root-finding.
pub fn cut_threshold(it: &ITStructure, tau: f64) -> Result<Assignment> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::usage(format!("threshold must be non-negative, got {tau}")));
    }
    let w = it.weight();
    let cut: Vec<bool> = (0..it.len()).map(|i| i != it.root() && w[i] > tau).collect();
    Ok(assign(it, cut, CutRule::Threshold(tau)))
}

/// Removes exactly the `k` heaviest edges; among equal weights the larger start index goes first.
pub fn cut_top_k(it: &ITStructure, k: usize) -> Result<Assignment> {
    let n_edges = it.len() - 1;
    if k > n_edges {
        return Err(Error::usage(format!("cannot remove {k} of {n_edges} edges")));
    }
    let w = it.weight();
    let mut starts: Vec<usize> = it.edge_starts().collect();
    starts.sort_by(|&i, &j| w[j].total_cmp(&w[i]).then(j.cmp(&i)));
    let mut cut = vec![false; it.len()];
    for &i in &starts[..k] {
        cut[i] = true;
    }
    Ok(assign(it, cut, CutRule::TopK(k)))
}

fn assign(it: &ITStructure, cut: Vec<bool>, rule: CutRule) -> Assignment {
    const UNKNOWN: usize = usize::MAX;
    let n = it.len();
    let parent = it.parent();
    let mut root_of = vec![UNKNOWN; n];
    for i in 0..n {
        if i == it.root() || cut[i] {
            root_of[i] = i;
        }
    }
    let mut path = Vec::new();
    for start in 0..n {
        let mut x = start;
        while root_of[x] == UNKNOWN {
            path.push(x);
            x = parent[x];
        }
        let r = root_of[x];
        for y in path.drain(..) {
            root_of[y] = r;
        }
    }
    let roots: Vec<usize> = (0..n).filter(|&i| root_of[i] == i).collect();
    let mut cluster_id = vec![UNKNOWN; n];
    for (c, &r) in roots.iter().enumerate() {
        cluster_id[r] = c;
    }
    let removed_edges = (0..n)
        .filter(|&i| cut[i])
        .map(|i| RemovedEdge { node: i, parent: parent[i], weight: it.weight()[i] })
        .collect();
    Assignment { cluster_of: root_of.iter().map(|&r| cluster_id[r]).collect(), roots, rule, removed_edges }
}

/// A candidate threshold in the middle of a gap between consecutive merge heights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Suggestion {
    pub tau: f64,
    pub gap: f64,
}

/// Midpoints of the widest gaps between sorted merge heights, widest first.
/// Equal gaps are ordered by ascending threshold.
pub fn suggest_thresholds(z: &MergeTable, max_candidates: usize) -> Vec<Suggestion> {
    let h = z.heights();
    let mut out: Vec<Suggestion> = h
        .windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| Suggestion { tau: p[0] + (p[1] - p[0]) / 2.0, gap: p[1] - p[0] })
        .collect();
    out.sort_by(|a, b| b.gap.total_cmp(&a.gap).then(a.tau.total_cmp(&b.tau)));
    out.truncate(max_candidates);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub cluster_count: usize,
    /// Members that disagree with their cluster's majority label.
    pub error_count: usize,
    pub purity: f64,
}

/// Majority-label impurity of a clustering against annotations.
pub fn evaluate<S: AsRef<str>>(cluster_of: &[usize], labels: &[S]) -> Result<Evaluation> {
    if cluster_of.len() != labels.len() {
        return Err(Error::usage(format!("{} labels for {} nodes", labels.len(), cluster_of.len())));
    }
    let mut counts: HashMap<usize, HashMap<&str, usize>> = HashMap::new();
    for (&c, l) in cluster_of.iter().zip(labels) {
        *counts.entry(c).or_default().entry(l.as_ref()).or_default() += 1;
    }
    let n = cluster_of.len();
    let majority: usize = counts.values().map(|m| m.values().copied().max().unwrap_or(0)).sum();
    let error_count = n - majority;
    Ok(Evaluation {
        cluster_count: counts.len(),
        error_count,
        purity: if n == 0 { 1.0 } else { 1.0 - error_count as f64 / n as f64 },
    })
}
