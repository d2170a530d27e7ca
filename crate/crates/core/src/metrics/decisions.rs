use alloc::vec::Vec;

use super::confusion::ConfusionTable;
use crate::error::{Error, Result};
use crate::partition::{Constraints, PartitionTree, SplitType, MT_LEVELS};
use crate::predictor::Prediction;
use crate::rdo::{CuEvidence, PruneParams};

/// One CU of a ground-truth partition together with what the predictor
/// said about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRecord {
  pub qt_depth: u8,
  pub mt_depth: u8,
  pub gt_split: SplitType,
  pub evidence: CuEvidence,
  /// SkipMT outcome, present for CUs still in the QT stage.
  pub skip_mt: Option<bool>,
  /// MT level of the ground-truth decision, present when that decision is
  /// NS or an MT split at levels 0..=2.
  pub mt_level: Option<usize>,
}

impl DecisionRecord {
  /// The ground truth requires a further QT split.
  pub fn needs_qt(&self) -> bool {
    self.gt_split == SplitType::Qt
  }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecisionLog {
  pub records: Vec<DecisionRecord>,
}

impl DecisionLog {
  /// Walks the ground-truth tree and records, for every CU on it, the
  /// evidence the predictor provides and the resulting decisions.
  pub fn from_tree(gt: &PartitionTree, pred: &Prediction, c: &Constraints) -> Result<Self> {
    let mut records = Vec::new();
    let mut err = None;
    gt.visit(&mut |node| {
      if err.is_some() {
        return;
      }
      match CuEvidence::gather(&node.geom, pred, c) {
        Ok(evidence) => {
          let g = node.geom;
          let skip_mt = (!g.after_mt && g.qt_depth < 4).then(|| evidence.skip_mt());
          let mt_level = (node.split != SplitType::Qt && (g.mt_depth as usize) < MT_LEVELS)
            .then_some(g.mt_depth as usize);
          records.push(DecisionRecord {
            qt_depth: g.qt_depth,
            mt_depth: g.mt_depth,
            gt_split: node.split,
            evidence,
            skip_mt,
            mt_level,
          });
        }
        Err(e) => err = Some(e),
      }
    });
    match err {
      Some(e) => Err(e),
      None => Ok(DecisionLog { records }),
    }
  }

  pub fn extend(&mut self, other: DecisionLog) {
    self.records.extend(other.records);
  }

  pub fn is_empty(&self) -> bool {
    self.records.is_empty()
  }
}

/// Per-QT-depth (0..=3) tallies of the SkipMT decision. The positive class
/// is "the CU needs a further QT split".
pub fn skipmt_confusion(log: &DecisionLog) -> Result<[ConfusionTable; 4]> {
  if log.is_empty() {
    return Err(Error::EmptyLog);
  }
  let mut tables = [ConfusionTable::default(); 4];
  for r in &log.records {
    let Some(skip) = r.skip_mt else { continue };
    if r.qt_depth >= 4 {
      return Err(Error::SkipMtDepth(r.qt_depth));
    }
    let t = &mut tables[r.qt_depth as usize];
    match (r.needs_qt(), skip) {
      (true, true) => t.tp += 1.0,
      (true, false) => t.fn_ += 1.0,
      (false, false) => t.tn += 1.0,
      (false, true) => t.fp += 1.0,
    }
  }
  Ok(tables)
}

/// Candidate-list accuracy per MT level at one threshold, in percent.
/// `None` where the log has no decision at that level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyRow {
  pub thm: f64,
  pub levels: [Option<f64>; MT_LEVELS],
}

/// Fraction of MT-level decisions whose candidate list (as the pruned
/// search would build it at each threshold) contains the ground-truth
/// split.
pub fn candsplit_accuracy(log: &DecisionLog, thm_grid: &[f64], qtskip: bool) -> Vec<AccuracyRow> {
  thm_grid
    .iter()
    .map(|&thm| {
      let params = PruneParams { thm, qtskip };
      let mut hit = [0usize; MT_LEVELS];
      let mut total = [0usize; MT_LEVELS];
      for r in &log.records {
        let Some(level) = r.mt_level else { continue };
        total[level] += 1;
        if r.evidence.candidates(&params).contains(r.gt_split) {
          hit[level] += 1;
        }
      }
      let levels = core::array::from_fn(|b| {
        (total[b] > 0).then(|| hit[b] as f64 / total[b] as f64 * 100.0)
      });
      AccuracyRow { thm, levels }
    })
    .collect()
}
