//! Fast QTMT inter partitioning toolkit.
//!
//! The crate is `no_std` (with `alloc`) and covers the algorithmic side:
//!
//! * [`partition`]: CU geometry, the six split types, legality and trees.
//! * [`maps`]: the QT depth map / MT split map encoding of a partition.
//! * [`motion`]: full-search motion estimation, residuals and the
//!   multi-scale motion vector field.
//! * [`rdo`]: a toy rate-distortion partition search, exhaustive and
//!   pruned by split predictions.
//! * [`predictor`]: the prediction contract plus oracle and uniform
//!   predictors.
//! * [`metrics`]: SkipMT confusion, candidate accuracy, loss, BD-rate and
//!   time saving.
//! * [`dataset`]: GOP reference structure and training sample generation.
//!
//! File formats, video input and the command line live in `qtmt-tools`.

#![no_std]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod grid;
pub mod maps;
pub mod metrics;
pub mod motion;
pub mod partition;
pub mod predictor;
pub mod rdo;

pub use error::{Error, Result};
pub use grid::Grid;
pub use maps::{maps_from_tree, tree_from_maps, validate_maps, LabelMaps};
pub use motion::{Frame, MotionVector, MsMvField, Rect, RefPair};
pub use partition::{
  apply_split, enumerate_partitions, legal_splits, Constraints, CuGeom, PartitionPath,
  PartitionTree, SplitSet, SplitType,
};
pub use predictor::Prediction;
