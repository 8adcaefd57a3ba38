#![allow(dead_code)]

use std::collections::VecDeque;

use itdendro::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in the unit cube.
pub fn uniform(rng: &mut impl Rng, n: usize, d: usize) -> Dataset {
    let rows = (0..n).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
    Dataset::from_real_rows("uniform", rows, None).unwrap()
}

/// Uniform points with a few exact duplicates and coarse grid values mixed in,
/// to exercise ties.
pub fn with_ties(rng: &mut impl Rng, n: usize, d: usize) -> Dataset {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && rng.random_bool(0.1) {
            let j = rng.random_range(0..i);
            rows.push(rows[j].clone());
        } else if rng.random_bool(0.3) {
            rows.push((0..d).map(|_| rng.random_range(0..4) as f64).collect());
        } else {
            rows.push((0..d).map(|_| rng.random::<f64>() * 3.0).collect());
        }
    }
    Dataset::from_real_rows("ties", rows, None).unwrap()
}

/// Isotropic Gaussian clusters; labels are the generating cluster index.
pub fn blobs(rng: &mut impl Rng, centers: &[Vec<f64>], per: usize, sd: f64) -> Dataset {
    let noise = Normal::new(0.0, sd).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per {
            rows.push(center.iter().map(|m| m + noise.sample(rng)).collect());
            labels.push(c.to_string());
        }
    }
    Dataset::from_real_rows("blobs", rows, Some(labels)).unwrap()
}

/// `k` centers in `d` dimensions, pairwise at least `min_dist` apart.
pub fn separated_centers(rng: &mut impl Rng, k: usize, d: usize, side: f64, min_dist: f64) -> Vec<Vec<f64>> {
    let mut centers: Vec<Vec<f64>> = Vec::new();
    while centers.len() < k {
        let c: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * side).collect();
        if centers.iter().all(|o| euclid(o, &c) >= min_dist) {
            centers.push(c);
        }
    }
    centers
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Two interleaving half circles with Gaussian jitter plus a fraction of
/// uniform outliers; outliers carry the label of the nearest clean point.
pub fn two_moons(rng: &mut impl Rng, n: usize, jitter: f64, outlier_frac: f64) -> Dataset {
    let noise = Normal::new(0.0, jitter).unwrap();
    let n_out = (n as f64 * outlier_frac).round() as usize;
    let n_clean = n - n_out;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n_clean {
        let upper = i % 2 == 0;
        // triangular along the arc: densest at the middle of each moon
        let t = std::f64::consts::PI * (rng.random::<f64>() + rng.random::<f64>()) / 2.0;
        let (x, y) = if upper { (t.cos(), t.sin()) } else { (1.0 - t.cos(), 0.5 - t.sin()) };
        rows.push(vec![x + noise.sample(rng), y + noise.sample(rng)]);
        labels.push(if upper { "upper" } else { "lower" }.to_string());
    }
    for _ in 0..n_out {
        let p = vec![rng.random_range(-1.5..2.5), rng.random_range(-1.0..1.5)];
        let nearest = (0..n_clean).min_by(|&a, &b| euclid(&rows[a], &p).total_cmp(&euclid(&rows[b], &p))).unwrap();
        labels.push(labels[nearest].clone());
        rows.push(p);
    }
    Dataset::from_real_rows("moons", rows, Some(labels)).unwrap()
}

/// Two long parallel Gaussian bars.
pub fn elongated_pair(rng: &mut impl Rng, per: usize, length_sd: f64, width_sd: f64, gap: f64) -> Dataset {
    let along = Normal::new(0.0, length_sd).unwrap();
    let across = Normal::new(0.0, width_sd).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, y0) in [0.0, gap].into_iter().enumerate() {
        for _ in 0..per {
            rows.push(vec![along.sample(rng), y0 + across.sample(rng)]);
            labels.push(c.to_string());
        }
    }
    Dataset::from_real_rows("bars", rows, Some(labels)).unwrap()
}

pub fn pipeline(ds: &Dataset, sigma: f64) -> (ITStructure, MergeTable) {
    let view = dissimilarity(ds, Metric::default_for(ds.kind()), StorageMode::Materialized).unwrap();
    let it = build_it(&view, &compute_potentials(&view, sigma).unwrap()).unwrap();
    let z = merge_table_fast(&it);
    (it, z)
}

/// Connected components of a graph given as undirected edges, by breadth-first search.
/// Components are labeled in order of their smallest node.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if label[v] == usize::MAX {
                    label[v] = next;
                    q.push_back(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Relabels so clusters are numbered by their smallest member.
pub fn canon(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let k = map.len();
            *map.entry(*l).or_insert(k)
        })
        .collect()
}

/// Indices after which two tables' partitions must agree: every row boundary
/// that ends a run of equal heights.
pub fn run_ends(heights: &[f64]) -> Vec<usize> {
    (1..=heights.len()).filter(|&k| k == heights.len() || heights[k] != heights[k - 1]).collect()
}

/// Identical heights and identical partitions at the end of every equal-height run.
pub fn same_partition_sequence(a: &MergeTable, b: &MergeTable) -> Result<(), String> {
    let (ha, hb) = (a.heights(), b.heights());
    if ha.len() != hb.len() || ha.iter().zip(&hb).any(|(x, y)| x.to_bits() != y.to_bits()) {
        return Err("height columns differ".into());
    }
    for k in std::iter::once(0).chain(run_ends(&ha)) {
        if canon(&a.partition_after(k)) != canon(&b.partition_after(k)) {
            return Err(format!("partitions differ after {k} merges"));
        }
    }
    Ok(())
}

/// All-distinct pairwise distances with overwhelming probability.
pub fn jittered(rng: &mut impl Rng, n: usize, d: usize) -> Dataset {
    let rows = (0..n)
        .map(|_| (0..d).map(|_| (rng.random_range(0..5) as f64) + rng.random::<f64>() * 1e-3).collect())
        .collect();
    Dataset::from_real_rows("jittered", rows, None).unwrap()
}

pub fn all_distinct(view: &impl Dissimilarity) -> bool {
    let n = view.len();
    let mut v: Vec<f64> = Vec::with_capacity(n * n / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            v.push(view.lookup(i, j));
        }
    }
    v.sort_by(f64::total_cmp);
    v.windows(2).all(|w| w[0] != w[1])
}
