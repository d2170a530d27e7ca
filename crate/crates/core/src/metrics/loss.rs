use alloc::format;

use crate::error::{Error, Result};
use crate::maps::LabelMaps;
use crate::partition::{SplitType, MT_CLASSES, MT_LEVELS};
use crate::predictor::Prediction;

/// Class proportions `p[b][label]` over MT split map cells, per branch.
pub fn split_distribution(maps: &[LabelMaps]) -> Result<[[f64; MT_CLASSES]; MT_LEVELS]> {
  if maps.is_empty() {
    return Err(Error::InvalidParameter("empty dataset".into()));
  }
  let mut counts = [[0u64; MT_CLASSES]; MT_LEVELS];
  for m in maps {
    for (b, grid) in m.mt.iter().enumerate() {
      for s in grid.cells() {
        counts[b][s.mt_label().expect("MT class") as usize] += 1;
      }
    }
  }
  Ok(counts.map(|row| {
    let total: u64 = row.iter().sum();
    row.map(|n| n as f64 / total as f64)
  }))
}

/// Weights of the hybrid loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
  /// Balance between depth regression (`a`) and classification (`1 - a`).
  pub a: f64,
  /// Per-class multiplier in label order (VTT, VBT, NS, HBT, HTT).
  pub lambda: [f64; MT_CLASSES],
  /// Class proportions per MT branch, label order.
  pub proportions: [[f64; MT_CLASSES]; MT_LEVELS],
}

impl LossWeights {
  /// `a = 0.8`, binary splits weighted 2, ternary splits and NS 1.
  pub fn with_proportions(proportions: [[f64; MT_CLASSES]; MT_LEVELS]) -> Self {
    LossWeights { a: 0.8, lambda: [1.0, 2.0, 1.0, 2.0, 1.0], proportions }
  }
}

/// Class weight `lambda_s * p_{b,NS} / p_{b,s}`.
pub fn class_weight(branch: usize, s: SplitType, w: &LossWeights) -> Result<f64> {
  let label = s
    .mt_label()
    .ok_or_else(|| Error::InvalidParameter(format!("{s} is not an MT class")))? as usize;
  let props = w
    .proportions
    .get(branch)
    .ok_or_else(|| Error::InvalidParameter(format!("MT branch {branch} out of range")))?;
  let p = props[label];
  if !(p > 0.0) {
    return Err(Error::UnseenClass { branch, split: s.name() });
  }
  let p_ns = props[SplitType::Ns.mt_label().unwrap() as usize];
  Ok(w.lambda[label] * p_ns / p)
}

/// How the cross-entropy sum is reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossReduction {
  /// Summed over branches and cells, as the loss is usually written.
  #[default]
  Sum,
  /// Divided by the number of branches times cells per branch.
  Mean,
}

/// Lower clamp applied to predicted probabilities before the logarithm.
pub const PROB_FLOOR: f64 = 1e-12;

/// `a * MSE(depth) - (1 - a) * sum_b sum_i w_{b,y_i} * ln(p_i[y_i])`.
pub fn hybrid_loss(
  pred: &Prediction,
  labels: &LabelMaps,
  w: &LossWeights,
  reduction: LossReduction,
) -> Result<f64> {
  if pred.qt_depth.dim() != labels.qt.dim() {
    return Err(Error::DimensionMismatch {
      what: "loss QT map",
      expected: labels.qt.dim(),
      found: pred.qt_depth.dim(),
    });
  }
  for (p, l) in pred.mt_probs.iter().zip(&labels.mt) {
    if p.dim() != l.dim() {
      return Err(Error::DimensionMismatch { what: "loss MT map", expected: l.dim(), found: p.dim() });
    }
  }
  let n_q = labels.qt.cells().len() as f64;
  let mse: f64 = pred
    .qt_depth
    .cells()
    .iter()
    .zip(labels.qt.cells())
    .map(|(p, t)| {
      let e = *t as f64 - *p as f64;
      e * e
    })
    .sum::<f64>()
    / n_q;
  let mut ce = 0.0;
  let mut cells = 0usize;
  for (b, (p, l)) in pred.mt_probs.iter().zip(&labels.mt).enumerate() {
    let mut weights = [0.0; MT_CLASSES];
    for (label, s) in SplitType::LABEL_ORDER.iter().enumerate() {
      if w.proportions[b][label] > 0.0 {
        weights[label] = class_weight(b, *s, w)?;
      }
    }
    for (row, truth) in p.cells().iter().zip(l.cells()) {
      let label = truth.mt_label().expect("MT class") as usize;
      if weights[label] == 0.0 && w.proportions[b][label] <= 0.0 {
        return Err(Error::UnseenClass { branch: b, split: truth.name() });
      }
      let q = (row[label] as f64).max(PROB_FLOOR);
      ce -= weights[label] * libm::log(q);
    }
    cells += l.cells().len();
  }
  if reduction == LossReduction::Mean {
    ce /= cells as f64;
  }
  Ok(w.a * mse + (1.0 - w.a) * ce)
}
