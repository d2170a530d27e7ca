//! Loss-parity files: loss inputs paired with the value another
//! implementation computed for them, checked against [`hybrid_loss`].
//!
//! JSON layout:
//!
//! ```text
//! { "version": 1, "ctu_size": 16,
//!   "cases": [ { "name", "a", "lambda": [5], "proportions": [3][5],
//!                "reduction": "sum" | "mean",
//!                "qt_pred": [(n/8)^2], "qt_true": [(n/8)^2],
//!                "mt_pred": [3][(n/4)^2][5], "mt_true": [3][(n/4)^2],
//!                "loss" } ] }
//! ```
//!
//! Maps are flattened in raster order; class order is VTT, VBT, NS, HBT, HTT.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use qtmt_core::maps::{MT_CELL, QT_CELL};
use qtmt_core::metrics::{hybrid_loss, LossReduction, LossWeights};
use qtmt_core::partition::{MT_CLASSES, MT_LEVELS};
use qtmt_core::{Grid, LabelMaps, Prediction, SplitType};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};

pub const VERSION: u32 = 1;
/// Largest accepted |ours - theirs|.
pub const PARITY_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
  Sum,
  Mean,
}

impl From<Reduction> for LossReduction {
  fn from(r: Reduction) -> Self {
    match r {
      Reduction::Sum => LossReduction::Sum,
      Reduction::Mean => LossReduction::Mean,
    }
  }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityCase {
  pub name: String,
  pub a: f64,
  pub lambda: [f64; MT_CLASSES],
  pub proportions: [[f64; MT_CLASSES]; MT_LEVELS],
  pub reduction: Reduction,
  pub qt_pred: Vec<f32>,
  pub qt_true: Vec<u8>,
  pub mt_pred: Vec<Vec<[f32; MT_CLASSES]>>,
  pub mt_true: Vec<Vec<u8>>,
  pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityFile {
  pub version: u32,
  pub ctu_size: u32,
  pub cases: Vec<ParityCase>,
}

fn grid<T>(what: &str, dim: usize, cells: Vec<T>) -> std::result::Result<Grid<T>, String> {
  let n = cells.len();
  Grid::from_cells(dim, cells).ok_or_else(|| format!("{what} has {n} cells, expected {}", dim * dim))
}

impl ParityCase {
  /// Builds the loss inputs, naming the offending field on shape errors.
  pub fn inputs(&self, ctu_size: u32) -> std::result::Result<(Prediction, LabelMaps, LossWeights), String> {
    let q = (ctu_size / QT_CELL) as usize;
    let m = (ctu_size / MT_CELL) as usize;
    if self.mt_pred.len() != MT_LEVELS || self.mt_true.len() != MT_LEVELS {
      return Err(format!(
        "mt_pred/mt_true need {MT_LEVELS} levels, found {}/{}",
        self.mt_pred.len(),
        self.mt_true.len()
      ));
    }
    let mut mt_probs = Vec::with_capacity(MT_LEVELS);
    let mut mt = Vec::with_capacity(MT_LEVELS);
    for level in 0..MT_LEVELS {
      mt_probs.push(grid(&format!("mt_pred[{level}]"), m, self.mt_pred[level].clone())?);
      let labels = self.mt_true[level]
        .iter()
        .map(|l| SplitType::from_mt_label(*l).ok_or_else(|| format!("mt_true[{level}] label {l} outside [0,4]")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
      mt.push(grid(&format!("mt_true[{level}]"), m, labels)?);
    }
    let pred = Prediction {
      qt_depth: grid("qt_pred", q, self.qt_pred.clone())?,
      mt_probs: mt_probs.try_into().expect("three levels"),
    };
    let labels = LabelMaps { qt: grid("qt_true", q, self.qt_true.clone())?, mt: mt.try_into().expect("three levels") };
    let w = LossWeights { a: self.a, lambda: self.lambda, proportions: self.proportions };
    Ok((pred, labels, w))
  }
}

/// One checked case.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityOutcome {
  pub name: String,
  pub expected: f64,
  pub computed: f64,
}

impl ParityOutcome {
  pub fn error(&self) -> f64 {
    (self.computed - self.expected).abs()
  }
}

/// Recomputes every case. Shape and label problems are format errors; value
/// disagreements are reported in the outcomes, not as errors.
pub fn evaluate(file: &ParityFile, name: &str) -> Result<Vec<ParityOutcome>> {
  if file.version != VERSION {
    return Err(ToolError::format(name, format!("unsupported version {}", file.version)));
  }
  qtmt_core::Constraints::for_ctu(file.ctu_size)
    .map_err(|e| ToolError::format(name, format!("bad ctu_size {}: {e}", file.ctu_size)))?;
  file
    .cases
    .iter()
    .enumerate()
    .map(|(i, case)| {
      let ctx = || format!("{name}: case {i} ({})", case.name);
      let (pred, labels, w) = case.inputs(file.ctu_size).map_err(|e| ToolError::format(ctx(), e))?;
      let computed = hybrid_loss(&pred, &labels, &w, case.reduction.into())
        .map_err(|e| ToolError::format(ctx(), e.to_string()))?;
      Ok(ParityOutcome { name: case.name.clone(), expected: case.loss, computed })
    })
    .collect()
}

/// Fails with [`ToolError::Mismatch`] naming every case outside the tolerance.
pub fn check(outcomes: &[ParityOutcome], tol: f64) -> Result<()> {
  let bad: Vec<String> = outcomes
    .iter()
    .filter(|o| !(o.error() <= tol))
    .map(|o| format!("{} (expected {}, computed {}, |err| {:.3e})", o.name, o.expected, o.computed, o.error()))
    .collect();
  if bad.is_empty() {
    Ok(())
  } else {
    Err(ToolError::Mismatch(format!(
      "{} of {} loss cases outside {tol:e}: {}",
      bad.len(),
      outcomes.len(),
      bad.join("; ")
    )))
  }
}

pub fn load_parity(path: &Path) -> Result<ParityFile> {
  let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
  serde_json::from_reader(BufReader::new(f)).map_err(|e| ToolError::format(path.display().to_string(), e.to_string()))
}

pub fn save_parity(path: &Path, file: &ParityFile) -> Result<()> {
  let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
  serde_json::to_writer_pretty(BufWriter::new(f), file).map_err(|e| ToolError::format(path.display().to_string(), e.to_string()))
}
