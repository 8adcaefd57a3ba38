//! Single-link merge tables.
//!
//! The merge table of an in-tree is obtained without any clustering search:
//! its heights are the in-tree edge weights in ascending order, and each row
//! joins the clusters currently holding the two endpoints of that edge. The
//! naive agglomerative [`slhc`] and the dense-graph [`mst`] are kept alongside
//! as independent reference routes.
//!
//! Cluster ids are zero-based: leaves are `0..n`, and row `k` creates `n + k`.
//! Add one to every id to get the one-based convention of MATLAB `linkage`.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dissim::Dissimilarity;
use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::intree::ITStructure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub w: f64,
}

/// Undirected weighted edges over `n` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseEdgeSet {
    n: usize,
    edges: Vec<Edge>,
}

impl SparseEdgeSet {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.a >= n || e.b >= n {
                return Err(Error::Structure(format!("edge ({}, {}) out of range", e.a, e.b)));
            }
            if e.a == e.b {
                return Err(Error::Structure(format!("self-loop at {}", e.a)));
            }
            if e.w.is_nan() || e.w < 0.0 {
                return Err(Error::Structure(format!("edge ({}, {}) has weight {}", e.a, e.b, e.w)));
            }
            if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
                return Err(Error::Structure(format!("duplicate edge ({}, {})", e.a, e.b)));
            }
        }
        Ok(SparseEdgeSet { n, edges })
    }

    pub(crate) fn new_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        SparseEdgeSet { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges as `(min, max, w)`, sorted, for order-insensitive comparison.
    pub fn normalized(&self) -> Vec<(usize, usize, f64)> {
        let mut v: Vec<_> = self.edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b), e.w)).collect();
        v.sort_by_key(|x| (x.0, x.1));
        v
    }

    /// Dissimilarity where only listed edges are finite.
    pub fn restricted_view(&self) -> RestrictedView {
        let weights = self.edges.iter().map(|e| ((e.a.min(e.b), e.a.max(e.b)), e.w)).collect();
        RestrictedView { n: self.n, weights }
    }
}

/// Graph-restricted dissimilarity: absent pairs are `+∞`.
#[derive(Clone, Debug)]
pub struct RestrictedView {
    n: usize,
    weights: HashMap<(usize, usize), f64>,
}

impl Dissimilarity for RestrictedView {
    fn len(&self) -> usize {
        self.n
    }

    fn lookup(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.weights.get(&(i.min(j), i.max(j))).copied().unwrap_or(f64::INFINITY)
    }
}

/// One agglomeration step: clusters `left < right` joined at `height`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

impl From<(usize, usize, f64)> for Merge {
    fn from((left, right, height): (usize, usize, f64)) -> Self {
        Merge { left, right, height }
    }
}

impl From<Merge> for (usize, usize, f64) {
    fn from(m: Merge) -> Self {
        (m.left, m.right, m.height)
    }
}

/// A stepwise single-link dendrogram with `n_leaves - 1` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeTable {
    n_leaves: usize,
    rows: Vec<Merge>,
}

impl MergeTable {
    /// Builds a table from raw rows, rejecting anything that is not a valid dendrogram.
    pub fn from_rows(n_leaves: usize, rows: Vec<Merge>) -> Result<Self> {
        let z = MergeTable { n_leaves, rows };
        z.validate()?;
        Ok(z)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_leaves;
        if n == 0 {
            return Err(Error::integrity("merge table has no leaves"));
        }
        if self.rows.len() != n - 1 {
            return Err(Error::integrity(format!("merge table has {} rows for {n} leaves", self.rows.len())));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut prev = 0.0;
        for (k, m) in self.rows.iter().enumerate() {
            if !(m.height >= 0.0 && m.height.is_finite()) {
                return Err(Error::integrity(format!("row {k}: invalid height {}", m.height)));
            }
            if m.height < prev {
                return Err(Error::integrity(format!("row {k}: heights decrease")));
            }
            prev = m.height;
            if m.left >= m.right {
                return Err(Error::integrity(format!("row {k}: left id must be below right id")));
            }
            if m.right >= n + k {
                return Err(Error::integrity(format!("row {k}: references id {} not yet created", m.right)));
            }
            for id in [m.left, m.right] {
                if std::mem::replace(&mut used[id], true) {
                    return Err(Error::integrity(format!("row {k}: cluster {id} merged twice")));
                }
            }
        }
        Ok(())
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn rows(&self) -> &[Merge] {
        &self.rows
    }

    pub fn heights(&self) -> Vec<f64> {
        self.rows.iter().map(|m| m.height).collect()
    }

    /// Leaf labels after applying the first `k` rows. Clusters are numbered
    /// in order of their smallest leaf, so equal partitions give equal vectors.
    pub fn partition_after(&self, k: usize) -> Vec<usize> {
        let n = self.n_leaves;
        let mut dsu = DisjointSet::new(2 * n - 1);
        for (step, m) in self.rows.iter().take(k).enumerate() {
            dsu.union(m.left, n + step);
            dsu.union(m.right, n + step);
        }
        let roots: Vec<usize> = (0..n).map(|i| dsu.find(i)).collect();
        canonical_labels(&roots)
    }

    /// Leaf labels after applying every row with `height <= tau`.
    pub fn partition_at(&self, tau: f64) -> Vec<usize> {
        self.partition_after(self.rows.partition_point(|m| m.height <= tau))
    }

    /// Leaf labels with exactly `k` clusters (`1 <= k <= n`).
    pub fn partition_into(&self, k: usize) -> Vec<usize> {
        let k = k.clamp(1, self.n_leaves);
        self.partition_after(self.n_leaves - k)
    }

    /// Leaves in drawing order: left subtree before right, from the last merge down.
    pub fn leaf_order(&self) -> Vec<usize> {
        let n = self.n_leaves;
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![2 * n - 2];
        while let Some(id) = stack.pop() {
            if id < n {
                order.push(id);
            } else {
                let m = self.rows[id - n];
                stack.push(m.right);
                stack.push(m.left);
            }
        }
        order
    }
}

/// Relabels arbitrary cluster keys as 0, 1, ... in order of first appearance.
pub fn canonical_labels<T: Copy + Eq + std::hash::Hash>(keys: &[T]) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(*k).or_insert(next)
        })
        .collect()
}

/// Kruskal-style agglomeration over edges already in merge order.
fn agglomerate(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<MergeTable> {
    let mut dsu = DisjointSet::new(n);
    let mut cluster_of_root: Vec<usize> = (0..n).collect();
    let mut rows = Vec::with_capacity(n.saturating_sub(1));
    for e in edges {
        let (ra, rb) = (dsu.find(e.a), dsu.find(e.b));
        if ra == rb {
            return Err(Error::Structure(format!("edge ({}, {}) closes a cycle", e.a, e.b)));
        }
        let (ca, cb) = (cluster_of_root[ra], cluster_of_root[rb]);
        let id = n + rows.len();
        rows.push(Merge { left: ca.min(cb), right: ca.max(cb), height: e.w });
        let r = dsu.union(ra, rb).expect("distinct roots");
        cluster_of_root[r] = id;
    }
    if rows.len() + 1 != n {
        return Err(Error::Disconnected(format!("{} edges cannot span {n} nodes", rows.len())));
    }
    Ok(MergeTable { n_leaves: n, rows })
}

fn by_weight_then_start(x: &Edge, y: &Edge) -> Ordering {
    x.w.total_cmp(&y.w).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b))
}

/// Merge table of an in-tree: edges in ascending `(weight, start node)` order,
/// each joining the clusters of its two endpoints.
pub fn merge_table_fast(it: &ITStructure) -> MergeTable {
    let mut starts: Vec<usize> = it.edge_starts().collect();
    let w = it.weight();
    starts.sort_by(|&i, &j| w[i].total_cmp(&w[j]).then(i.cmp(&j)));
    let parent = it.parent();
    agglomerate(it.len(), starts.into_iter().map(|i| Edge { a: i, b: parent[i], w: w[i] }))
        .expect("an in-tree is a spanning tree")
}

/// Same contract as [`merge_table_fast`], for any spanning tree given as edges.
pub fn merge_table_from_edges(edges: &SparseEdgeSet) -> Result<MergeTable> {
    if edges.n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut sorted = edges.edges.clone();
    sorted.sort_by(by_weight_then_start);
    agglomerate(edges.n, sorted)
}

/// Naive agglomerative single-link clustering.
///
/// Repeatedly merges the pair of clusters with the smallest minimum pairwise
/// dissimilarity, breaking ties by the smaller `(left id, right id)`. Cubic in
/// `n`; this is the reference route, not the production one. Infinite
/// dissimilarities mark absent pairs, and running out of finite pairs before
/// everything is merged is a connectivity error.
pub fn slhc<D: Dissimilarity + ?Sized>(view: &D) -> Result<MergeTable> {
    let n = view.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    // condensed upper triangle over slots
    let idx = |i: usize, j: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * n - i * (i + 1) / 2 + (j - i - 1)
    };
    let mut dist = vec![0.0f64; n * n.saturating_sub(1) / 2];
    for i in 0..n {
        for j in (i + 1)..n {
            dist[idx(i, j)] = view.lookup(i, j);
        }
    }
    let mut id: Vec<usize> = (0..n).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut rows = Vec::with_capacity(n.saturating_sub(1));
    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for (x, &s) in active.iter().enumerate() {
            for &t in &active[x + 1..] {
                let d = dist[idx(s, t)];
                let (lo, hi) = (id[s].min(id[t]), id[s].max(id[t]));
                let better = match best {
                    None => true,
                    Some((bd, blo, bhi, _, _)) => d < bd || (d == bd && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((d, lo, hi, s, t));
                }
            }
        }
        let (d, lo, hi, s, t) = best.expect("at least two active clusters");
        if d.is_infinite() {
            return Err(Error::Disconnected(format!(
                "{} clusters remain with no finite dissimilarity between them",
                active.len()
            )));
        }
        rows.push(Merge { left: lo, right: hi, height: d });
        for &u in &active {
            if u != s && u != t {
                let merged = dist[idx(s, u)].min(dist[idx(t, u)]);
                dist[idx(s, u)] = merged;
            }
        }
        id[s] = n + rows.len() - 1;
        active.retain(|&u| u != t);
    }
    Ok(MergeTable { n_leaves: n, rows })
}

/// Minimum spanning tree by Prim's growth from node 0. Among equal keys the
/// smallest node index joins first; each edge is `(joining node, tree node)`.
///
/// Fails only when infinite dissimilarities leave the graph disconnected.
pub fn mst<D: Dissimilarity + ?Sized>(view: &D) -> Result<SparseEdgeSet> {
    let n = view.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    let mut key: Vec<f64> = (0..n).map(|v| view.lookup(0, v)).collect();
    let mut from = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut next: Option<usize> = None;
        for v in 0..n {
            if !in_tree[v] && next.is_none_or(|u| key[v] < key[u]) {
                next = Some(v);
            }
        }
        let v = next.expect("a node outside the tree");
        if key[v].is_infinite() {
            return Err(Error::Disconnected(format!("node {v} is unreachable")));
        }
        in_tree[v] = true;
        edges.push(Edge { a: v, b: from[v], w: key[v] });
        for u in 0..n {
            if !in_tree[u] {
                let d = view.lookup(v, u);
                if d < key[u] {
                    key[u] = d;
                    from[u] = v;
                }
            }
        }
    }
    Ok(SparseEdgeSet { n, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissim::DenseMatrix;
    use crate::intree::{build_it, compute_potentials};

    fn line(xs: &[f64]) -> DenseMatrix {
        DenseMatrix::from_fn(xs.len(), |i, j| (xs[i] - xs[j]).abs())
    }

    fn rows(z: &MergeTable) -> Vec<(usize, usize, f64)> {
        z.rows().iter().map(|&m| m.into()).collect()
    }

    fn four_point_it() -> ITStructure {
        let v = line(&[0.0, 1.0, 5.0, 6.0]);
        build_it(&v, &compute_potentials(&v, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn fast_table_for_four_points() {
        let z = merge_table_fast(&four_point_it());
        assert_eq!(rows(&z), vec![(0, 1, 1.0), (2, 3, 1.0), (4, 5, 4.0)]);
        z.validate().unwrap();
    }

    #[test]
    fn slhc_on_full_matrix_for_four_points() {
        let z = slhc(&line(&[0.0, 1.0, 5.0, 6.0])).unwrap();
        assert_eq!(rows(&z), vec![(0, 1, 1.0), (2, 3, 1.0), (4, 5, 4.0)]);
    }

    #[test]
    fn degenerate_sizes() {
        let one = line(&[2.0]);
        let it = build_it(&one, &compute_potentials(&one, 1.0).unwrap()).unwrap();
        assert!(merge_table_fast(&it).rows().is_empty());
        assert!(slhc(&one).unwrap().rows().is_empty());
        assert!(mst(&one).unwrap().edges().is_empty());
        assert_eq!(merge_table_fast(&it).leaf_order(), vec![0]);

        let two = line(&[0.0, 2.5]);
        let it = build_it(&two, &compute_potentials(&two, 1.0).unwrap()).unwrap();
        assert_eq!(rows(&merge_table_fast(&it)), vec![(0, 1, 2.5)]);
        assert_eq!(mst(&two).unwrap().normalized(), vec![(0, 1, 2.5)]);
    }

    #[test]
    fn path_graph_from_edges() {
        let e = SparseEdgeSet::new(3, vec![Edge { a: 0, b: 1, w: 3.0 }, Edge { a: 1, b: 2, w: 1.0 }]).unwrap();
        let expected = vec![(1, 2, 1.0), (0, 3, 3.0)];
        assert_eq!(rows(&merge_table_from_edges(&e).unwrap()), expected);
        assert_eq!(rows(&slhc(&e.restricted_view()).unwrap()), expected);
    }

    #[test]
    fn from_edges_matches_fast_path() {
        let it = four_point_it();
        let sparse = crate::intree::it_to_sparse_edges(&it);
        assert_eq!(merge_table_from_edges(&sparse).unwrap(), merge_table_fast(&it));
    }

    #[test]
    fn structure_errors() {
        let cyc = SparseEdgeSet::new(
            3,
            vec![Edge { a: 0, b: 1, w: 1.0 }, Edge { a: 1, b: 2, w: 1.0 }, Edge { a: 2, b: 0, w: 1.0 }],
        )
        .unwrap();
        assert!(matches!(merge_table_from_edges(&cyc), Err(Error::Structure(_))));
        let split = SparseEdgeSet::new(4, vec![Edge { a: 0, b: 1, w: 1.0 }, Edge { a: 2, b: 3, w: 1.0 }]).unwrap();
        assert!(matches!(merge_table_from_edges(&split), Err(Error::Disconnected(_))));
        assert!(matches!(slhc(&split.restricted_view()), Err(Error::Disconnected(_))));
        assert!(matches!(mst(&split.restricted_view()), Err(Error::Disconnected(_))));
        assert!(SparseEdgeSet::new(2, vec![Edge { a: 0, b: 0, w: 1.0 }]).is_err());
        assert!(SparseEdgeSet::new(2, vec![Edge { a: 0, b: 2, w: 1.0 }]).is_err());
        assert!(SparseEdgeSet::new(2, vec![Edge { a: 0, b: 1, w: 1.0 }, Edge { a: 1, b: 0, w: 2.0 }]).is_err());
    }

    #[test]
    fn validate_catches_each_invariant() {
        let ok = vec![Merge::from((0, 1, 1.0)), (2, 3, 1.0).into(), (4, 5, 4.0).into()];
        assert!(MergeTable::from_rows(4, ok.clone()).is_ok());
        let mut bad = ok.clone();
        bad[2].height = 0.5;
        assert!(MergeTable::from_rows(4, bad).is_err());
        let mut bad = ok.clone();
        bad[1] = (3, 2, 1.0).into();
        assert!(MergeTable::from_rows(4, bad).is_err());
        let mut bad = ok.clone();
        bad[1] = (1, 2, 1.0).into();
        assert!(MergeTable::from_rows(4, bad).is_err());
        let mut bad = ok.clone();
        bad[0] = (0, 5, 1.0).into();
        assert!(MergeTable::from_rows(4, bad).is_err());
        assert!(MergeTable::from_rows(4, ok[..2].to_vec()).is_err());
    }

    #[test]
    fn partitions_and_leaf_order() {
        let z = merge_table_fast(&four_point_it());
        assert_eq!(z.partition_after(0), vec![0, 1, 2, 3]);
        assert_eq!(z.partition_at(2.0), vec![0, 0, 1, 1]);
        assert_eq!(z.partition_at(4.0), vec![0, 0, 0, 0]);
        assert_eq!(z.partition_into(2), vec![0, 0, 1, 1]);
        assert_eq!(z.leaf_order(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn serde_row_is_a_triple() {
        let m = Merge { left: 2, right: 7, height: 0.25 };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[2,7,0.25]");
        assert_eq!(serde_json::from_str::<Merge>(&s).unwrap(), m);
    }
}
