//! Pairwise dissimilarity providers.

use std::str::FromStr;

use crate::data::{Dataset, Features, Kind};
use crate::error::{Error, Result};

/// A symmetric, zero-diagonal, non-negative pairwise dissimilarity over `len()` items.
///
/// Implementations may return `f64::INFINITY` for pairs that are not connected
/// (edge-restricted views); dense views over data are always finite.
pub trait Dissimilarity: Sync {
    fn len(&self) -> usize;

    fn lookup(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    Hamming,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Hamming => "hamming",
        }
    }

    /// Metric that matches the kind of data.
    pub fn default_for(kind: Kind) -> Metric {
        match kind {
            Kind::Real => Metric::Euclidean,
            Kind::Categorical => Metric::Hamming,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "hamming" => Ok(Metric::Hamming),
            other => Err(Error::usage(format!("unknown metric {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StorageMode {
    /// Full n×n table computed up front.
    Materialized,
    /// Every lookup recomputes from the dataset.
    #[default]
    OnDemand,
}

/// Dissimilarities derived from a [`Dataset`] under a [`Metric`].
#[derive(Debug)]
pub struct DissimilarityView<'a> {
    data: &'a Dataset,
    metric: Metric,
    table: Option<Vec<f64>>,
}

pub fn dissimilarity(data: &Dataset, metric: Metric, mode: StorageMode) -> Result<DissimilarityView<'_>> {
    match (metric, data.kind()) {
        (Metric::Euclidean, Kind::Real) | (Metric::Hamming, Kind::Categorical) => {}
        (metric, kind) => {
            return Err(Error::usage(format!("metric {} cannot be used with {} data", metric.as_str(), kind.as_str())))
        }
    }
    let mut view = DissimilarityView { data, metric, table: None };
    if mode == StorageMode::Materialized {
        let n = data.len();
        let mut table = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = view.compute(i, j);
                table[i * n + j] = v;
                table[j * n + i] = v;
            }
        }
        view.table = Some(table);
    }
    Ok(view)
}

impl DissimilarityView<'_> {
    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn mode(&self) -> StorageMode {
        if self.table.is_some() {
            StorageMode::Materialized
        } else {
            StorageMode::OnDemand
        }
    }

    pub fn dataset(&self) -> &Dataset {
        self.data
    }

    fn compute(&self, i: usize, j: usize) -> f64 {
        let d = self.data.dim();
        match self.data.features() {
            Features::Real(v) => {
                let (a, b) = (&v[i * d..(i + 1) * d], &v[j * d..(j + 1) * d]);
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            Features::Categorical { codes, .. } => {
                let (a, b) = (&codes[i * d..(i + 1) * d], &codes[j * d..(j + 1) * d]);
                a.iter().zip(b).filter(|(x, y)| x != y).count() as f64
            }
        }
    }
}

impl Dissimilarity for DissimilarityView<'_> {
    fn len(&self) -> usize {
        self.data.len()
    }

    fn lookup(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.table {
            Some(t) => t[i * self.data.len() + j],
            None => self.compute(i, j),
        }
    }
}

/// An explicit n×n matrix; the caller is responsible for symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        DenseMatrix { n, values }
    }

    pub fn from_view<D: Dissimilarity + ?Sized>(view: &D) -> Self {
        DenseMatrix::from_fn(view.len(), |i, j| view.lookup(i, j))
    }
}

impl Dissimilarity for DenseMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn lookup(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}
