//! In-tree clustering with single-link dendrogram views.
//!
//! The pipeline: a [`Dataset`](data::Dataset) gives a
//! [`DissimilarityView`](dissim::DissimilarityView); a kernel potential field
//! orders the nodes and nearest-neighbor descent links each node to its
//! closest lower-potential neighbor, forming an in-tree
//! ([`ITStructure`](intree::ITStructure)). The in-tree's edges, sorted by
//! weight, are exactly the single-link merge table
//! ([`merge_table_fast`](dendro::merge_table_fast)), so the tree can be drawn
//! as a dendrogram, and cutting the dendrogram at a height is the same as
//! removing the in-tree edges above that height
//! ([`cut_threshold`](partition::cut_threshold)).
//!
//! ```
//! use itdendro::prelude::*;
//!
//! let rows = vec![vec![0.0], vec![1.0], vec![5.0], vec![6.0]];
//! let data = Dataset::from_real_rows("line", rows, None).unwrap();
//! let view = dissimilarity(&data, Metric::Euclidean, StorageMode::OnDemand).unwrap();
//! let pot = compute_potentials(&view, 1.0).unwrap();
//! let it = build_it(&view, &pot).unwrap();
//! let z = merge_table_fast(&it);
//! let tau = suggest_thresholds(&z, 1)[0].tau;
//! assert_eq!(tau, 2.5);
//! assert_eq!(cut_threshold(&it, tau).unwrap().cluster_of, vec![0, 0, 1, 1]);
//! ```

pub mod bundle;
pub mod data;
pub mod dendro;
pub mod dissim;
pub mod dsu;
mod error;
pub mod intree;
pub mod partition;
pub mod svg;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::bundle::DendroBundle;
    pub use crate::data::{load_categorical, load_real_csv, Dataset, Kind, RealCsvOptions};
    pub use crate::dendro::{
        merge_table_fast, merge_table_from_edges, mst, slhc, Edge, Merge, MergeTable, SparseEdgeSet,
    };
    pub use crate::dissim::{dissimilarity, Dissimilarity, DissimilarityView, Metric, StorageMode};
    pub use crate::intree::{
        build_it, compute_potentials, compute_potentials_with, it_to_sparse_edges, ITStructure, Kernel, Potentials,
    };
    pub use crate::partition::{cut_threshold, cut_top_k, evaluate, suggest_thresholds, Assignment, Evaluation};
    pub use crate::{Error, Result};
}
