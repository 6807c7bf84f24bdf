//! Clustering of variable-length discrete sequences under the
//! deletion+substitution edit distance.
//!
//! The library provides:
//!
//! - interned alphabets, sequences and elementary cost models ([`alphabet`],
//!   [`cost`]);
//! - the edit distance between a longer and a shorter sequence, with
//!   reconstruction of an optimal edit sequence ([`editdist`]);
//! - a k-means-style partitioning heuristic whose centroids are built by a
//!   per-coordinate majority vote over gap-expanded cluster members
//!   ([`cluster`]);
//! - a planted-cluster dataset generator with a controllable overlap
//!   fraction ([`datagen`]);
//! - evaluation against ground truth and a batch experiment driver
//!   ([`eval`]);
//! - the dataset / cost-matrix file formats ([`dataset`]).
//!
//! The assignment, objective and experiment loops run on rayon when the
//! default `parallel` feature is enabled and degrade to plain sequential
//! iteration without it; outputs are identical either way.

pub mod alphabet;
pub mod cluster;
pub mod cost;
pub mod datagen;
pub mod dataset;
pub mod editdist;
pub mod error;
pub mod eval;
mod exec;

pub use alphabet::{AlignedSymbol, Alphabet, Seq, Symbol};
pub use cluster::{
    assign, assign_serial, compute_centroid, init_centroids, restart_seed, run, sum_of_squares,
    sum_of_squares_serial, ClusterConfig, Clustering, TiePolicy,
};
pub use cost::CostModel;
pub use datagen::{generate, GenSpec, LabeledDataset};
pub use dataset::{read_cost_matrix, Dataset};
pub use editdist::{
    backtrack, distance, distance_sym, dp_matrix, expanded_target, score_edit_sequence, DpMatrix,
    EditSequence,
};
pub use error::{Error, Result};
pub use eval::{
    batch_experiment, evaluate, mismatch_count, EvalReport, ExperimentRecord, ExperimentTable,
    HistogramBins,
};
