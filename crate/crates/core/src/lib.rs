//! Walk-based graph kernels and node refinement.
//!
//! The central object is the node-centric walk kernel: for every pair of
//! nodes it tracks how many label-matched walks start there, and compares
//! those counts with a Gaussian on the accumulated walk profiles. Summing over
//! node pairs gives a graph kernel that sits between the random-walk kernel
//! and the Weisfeiler-Leman subtree kernel.
//!
//! ```
//! use ncwalk::generators::{cycle, path};
//! use ncwalk::{ncw_kernel, rw_kernel, Alpha, GraphKernelSpec};
//!
//! let g = path(3);
//! let h = cycle(3);
//! let rw = rw_kernel(&g, &h, &GraphKernelSpec::rw(2)).unwrap();
//! let ncw = ncw_kernel(&g, &h, &GraphKernelSpec::ncw(2, Alpha::Finite(0.0), 1.0)).unwrap();
//! assert_eq!(rw, ncw);
//! ```

pub mod cli;
pub mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod graph_kernel;
pub mod node_kernel;
pub mod product;
pub mod refine;
pub mod tudataset;
pub mod walks;

pub use error::{Error, Result};
pub use eval::{completeness_ratio, dedup_isomorphic, find_isomorphism, normalize_gram, DedupResult, IsomorphismOutcome};
pub use graph::{disjoint_union, GraphCollection, LabelId, LabeledGraph};
pub use graph_kernel::{
    graph_kernel, gram_matrix, label_histogram_kernel, ncw_kernel, ncw_unlabeled_fast, rw_kernel, wl_subtree_kernel,
    GramMatrix, GramOptions, GraphKernelSpec, HistogramMode, KernelKind,
};
pub use node_kernel::{walk_node_kernels, Alpha, NodeKernelParams, NodePairKernels};
pub use product::{count_walks, direct_product, ProductGraph, WalkOperator};
pub use refine::{morgan_ec, walk_partition, wl_refine, Labeling, RefinementSequence};
pub use tudataset::parse_tudataset;
