//! Link prediction on undirected graphs from enclosing subgraphs.
//!
//! The pipeline: extract the k-hop subgraph around a candidate pair, label
//! its nodes by their role on paths between the two endpoints, encode those
//! labels with a small graph network, fuse the result with raw node
//! features, and score the pair with a message-passing backbone plus a
//! pairwise structural head. Classical neighborhood heuristics, a training
//! harness with ranking metrics, and a synthetic benchmark generator round
//! out the toolkit.

pub mod checkpoint;
pub mod error;
pub mod eval;
pub mod exec;
pub mod graph;
pub mod heuristics;
pub mod labeling;
pub mod model;
pub mod nn;
pub mod paths;
pub mod synth;
pub mod train;

pub use checkpoint::{checkpoint_from_json, checkpoint_to_json, LoadedCheckpoint};
pub use error::{Error, Result};
pub use eval::{auc, build_report, hits_at_k, mrr, CandidateSet, EvalReport, RankedScore};
pub use graph::{extract_enclosing_subgraph, EnclosingSubgraph, Features, Graph};
pub use heuristics::{heuristic_score, score_pairs, HeuristicKind};
pub use model::{prepare_instance, seg_loss, BackboneKind, Model, ModelKind, PairMlpModel, SegConfig, SegModel, SegOutput, SubgraphInstance};
pub use synth::generate_synthetic_benchmark;
pub use train::{evaluate_split, merge_valid_into_train, sample_negatives, train, EvalSpec, Split, SplitDataset, TrainResult};
pub use labeling::{drnl_label, one_hot_encode, path_label, LabelAssignment, LabelScheme};
pub use paths::{enumerate_simple_paths, enumerate_simple_paths_capped, PathSet};
