//! Worked examples checked against independent brute-force references.

mod common;

use common::*;
use itdendro::dissim::DenseMatrix;
use itdendro::prelude::*;
use rand::Rng;

fn line(xs: &[f64]) -> DenseMatrix {
    DenseMatrix::from_fn(xs.len(), |i, j| (xs[i] - xs[j]).abs())
}

#[test]
#[allow(clippy::excessive_precision)]
fn potentials_match_high_precision_sums() {
    // 40-digit evaluation of -Σ exp(-(x_i - x_j)²) for x = {0, 1, 5, 6}
    let reference =
        [-0.36787944118533049741, -0.36787955372050498472, -0.36787955372050498472, -0.36787944118533049741];
    let p = compute_potentials(&line(&[0.0, 1.0, 5.0, 6.0]), 1.0).unwrap();
    for (got, want) in p.values.iter().zip(reference) {
        assert!((got - want).abs() <= 1e-16, "{got} vs {want}");
    }
}

/// Exhaustive descent rule: among all nodes with a smaller (P, index) pair,
/// the closest one, ties to the smallest index.
fn descent_oracle(view: &impl Dissimilarity, p: &[f64]) -> (usize, Vec<Option<(usize, f64)>>) {
    let n = view.len();
    let lower = |j: usize, i: usize| p[j] < p[i] || (p[j] == p[i] && j < i);
    let root = (0..n).find(|&r| (0..n).all(|j| j == r || lower(r, j))).unwrap();
    let links = (0..n)
        .map(|i| {
            let mut cands: Vec<(f64, usize)> =
                (0..n).filter(|&j| lower(j, i)).map(|j| (view.lookup(i, j), j)).collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            cands.first().map(|&(d, j)| (j, d))
        })
        .collect();
    (root, links)
}

#[test]
fn four_point_in_tree() {
    let v = line(&[0.0, 1.0, 5.0, 6.0]);
    let it = build_it(&v, &compute_potentials(&v, 1.0).unwrap()).unwrap();
    assert_eq!(it.root(), 1);
    let edges = it_to_sparse_edges(&it);
    let got: Vec<_> = edges.edges().iter().map(|e| (e.a, e.b, e.w)).collect();
    assert_eq!(got, vec![(0, 1, 1.0), (2, 1, 4.0), (3, 2, 1.0)]);

    let (root, links) = descent_oracle(&v, it.potential());
    assert_eq!(root, it.root());
    for (i, link) in links.iter().enumerate() {
        match link {
            None => assert_eq!(i, root),
            Some((j, d)) => assert_eq!((it.parent()[i], it.weight()[i]), (*j, *d)),
        }
    }
}

#[test]
fn descent_matches_exhaustive_rule_on_random_data() {
    let mut r = rng(11);
    for _ in 0..40 {
        let (n, d) = (r.random_range(1..40), r.random_range(1..4));
        let ds = with_ties(&mut r, n, d);
        let v = dissimilarity(&ds, Metric::Euclidean, StorageMode::OnDemand).unwrap();
        let it = build_it(&v, &compute_potentials(&v, r.random_range(0.2..3.0)).unwrap()).unwrap();
        let (root, links) = descent_oracle(&v, it.potential());
        assert_eq!(root, it.root());
        for (i, link) in links.into_iter().enumerate() {
            if let Some((j, w)) = link {
                assert_eq!(it.parent()[i], j);
                assert_eq!(it.weight()[i], w);
            }
        }
    }
}

/// Minimum total weight over every spanning tree of the complete graph, by
/// enumerating all (n-1)-edge subsets.
fn brute_force_mst_weights(view: &impl Dissimilarity) -> Vec<f64> {
    let n = view.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut trees = 0;
    for mask in 0u32..(1 << pairs.len()) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..pairs.len()).filter(|b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        if components(n, &chosen).iter().any(|&c| c != 0) {
            continue;
        }
        trees += 1;
        let mut w: Vec<f64> = chosen.iter().map(|&(a, b)| view.lookup(a, b)).collect();
        let total: f64 = w.iter().sum();
        w.sort_by(f64::total_cmp);
        if best.as_ref().is_none_or(|(t, _)| total < *t) {
            best = Some((total, w));
        }
    }
    assert_eq!(trees, n.pow(n as u32 - 2), "Cayley count");
    best.unwrap().1
}

#[test]
fn mst_of_four_points_by_enumeration() {
    let v = line(&[0.0, 1.0, 5.0, 6.0]);
    assert_eq!(brute_force_mst_weights(&v), vec![1.0, 1.0, 4.0]);
    let mut got: Vec<f64> = mst(&v).unwrap().edges().iter().map(|e| e.w).collect();
    got.sort_by(f64::total_cmp);
    assert_eq!(got, vec![1.0, 1.0, 4.0]);
}

#[test]
fn mst_matches_enumeration_on_small_random_sets() {
    let mut r = rng(5);
    for _ in 0..30 {
        let n = r.random_range(2..=6);
        let ds = uniform(&mut r, n, 2);
        let v = dissimilarity(&ds, Metric::Euclidean, StorageMode::Materialized).unwrap();
        let mut got: Vec<f64> = mst(&v).unwrap().edges().iter().map(|e| e.w).collect();
        got.sort_by(f64::total_cmp);
        let want = brute_force_mst_weights(&v);
        let (s1, s2): (f64, f64) = (got.iter().sum(), want.iter().sum());
        assert!((s1 - s2).abs() < 1e-12);
        assert_eq!(got, want);
    }
}

/// Single-link by definition: cluster dissimilarity is recomputed from member
/// pairs at every step. Returns (height, partition) per step.
fn single_link_by_definition(view: &impl Dissimilarity) -> Vec<(f64, Vec<usize>)> {
    let n = view.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let d = clusters[a]
                    .iter()
                    .flat_map(|&i| clusters[b].iter().map(move |&j| (i, j)))
                    .map(|(i, j)| view.lookup(i, j))
                    .fold(f64::INFINITY, f64::min);
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let moved = clusters.remove(best.2);
        clusters[best.1].extend(moved);
        let mut label = vec![0; n];
        for (c, members) in clusters.iter().enumerate() {
            for &i in members {
                label[i] = c;
            }
        }
        out.push((best.0, canon(&label)));
    }
    out
}

#[test]
fn slhc_matches_definition() {
    let v = line(&[0.0, 1.0, 5.0, 6.0]);
    let z = slhc(&v).unwrap();
    let rows: Vec<(usize, usize, f64)> = z.rows().iter().map(|&m| m.into()).collect();
    assert_eq!(rows, vec![(0, 1, 1.0), (2, 3, 1.0), (4, 5, 4.0)]);

    let mut r = rng(3);
    for _ in 0..25 {
        let n = r.random_range(2..9);
        let ds = uniform(&mut r, n, 2);
        let v = dissimilarity(&ds, Metric::Euclidean, StorageMode::Materialized).unwrap();
        let z = slhc(&v).unwrap();
        for (k, (h, part)) in single_link_by_definition(&v).into_iter().enumerate() {
            assert_eq!(z.rows()[k].height, h);
            assert_eq!(canon(&z.partition_after(k + 1)), part);
        }
    }
}

#[test]
fn fast_table_for_four_points_matches_slhc_on_edges() {
    let v = line(&[0.0, 1.0, 5.0, 6.0]);
    let it = build_it(&v, &compute_potentials(&v, 1.0).unwrap()).unwrap();
    let fast = merge_table_fast(&it);
    let naive = slhc(&it_to_sparse_edges(&it).restricted_view()).unwrap();
    assert_eq!(fast, naive);
}

#[test]
fn path_graph_by_definition() {
    let e = SparseEdgeSet::new(3, vec![Edge { a: 0, b: 1, w: 3.0 }, Edge { a: 1, b: 2, w: 1.0 }]).unwrap();
    let steps = single_link_by_definition(&e.restricted_view());
    assert_eq!(steps[0], (1.0, vec![0, 1, 1]));
    assert_eq!(steps[1], (3.0, vec![0, 0, 0]));
    let z = merge_table_from_edges(&e).unwrap();
    let rows: Vec<(usize, usize, f64)> = z.rows().iter().map(|&m| m.into()).collect();
    assert_eq!(rows, vec![(1, 2, 1.0), (0, 3, 3.0)]);
}

#[test]
fn cut_matches_component_oracle_on_four_points() {
    let v = line(&[0.0, 1.0, 5.0, 6.0]);
    let it = build_it(&v, &compute_potentials(&v, 1.0).unwrap()).unwrap();
    let kept: Vec<(usize, usize)> =
        it.edge_starts().filter(|&i| it.weight()[i] <= 2.0).map(|i| (i, it.parent()[i])).collect();
    let want = components(4, &kept);
    assert_eq!(want, vec![0, 0, 1, 1]);
    assert_eq!(canon(&cut_threshold(&it, 2.0).unwrap().cluster_of), want);
    assert_eq!(canon(&cut_top_k(&it, 1).unwrap().cluster_of), want);
}

#[test]
fn gap_scan_oracle() {
    let mut r = rng(9);
    for _ in 0..50 {
        let n = r.random_range(2..30);
        let ds = with_ties(&mut r, n, 2);
        let (_, z) = pipeline(&ds, 1.0);
        let h = z.heights();
        // widest gap between a height and the next strictly larger one
        let mut best: Option<(f64, f64)> = None;
        for &a in &h {
            if let Some(b) = h.iter().copied().filter(|&b| b > a).min_by(f64::total_cmp) {
                let gap = b - a;
                let better = match best {
                    None => true,
                    Some((g, t)) => gap > g || (gap == g && a + gap / 2.0 < t),
                };
                if better {
                    best = Some((gap, a + gap / 2.0));
                }
            }
        }
        let s = suggest_thresholds(&z, 3);
        match best {
            None => assert!(s.is_empty()),
            Some((gap, tau)) => {
                assert_eq!(s[0].gap, gap);
                assert_eq!(s[0].tau, tau);
                assert!(s.windows(2).all(|w| w[0].gap >= w[1].gap));
            }
        }
    }
}
