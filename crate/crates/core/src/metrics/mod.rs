//! Evaluation math: SkipMT confusion, candidate accuracy, class
//! distributions and loss weights, the hybrid training loss, BD-rate and
//! encoder time saving.

mod bdrate;
mod confusion;
mod decisions;
mod loss;

pub use bdrate::{bd_rate, RdPoint};
pub use confusion::{prf1, ConfusionTable, Prf1};
pub use decisions::{
  candsplit_accuracy, skipmt_confusion, AccuracyRow, DecisionLog, DecisionRecord,
};
pub use loss::{class_weight, hybrid_loss, split_distribution, LossReduction, LossWeights};

use crate::error::{Error, Result};

/// Mean relative time reduction over paired encodings, in percent.
/// With the usual four QPs this is `1/4 * sum((Ta - Tt) / Ta) * 100`.
pub fn time_saving(anchor: &[f64], test: &[f64]) -> Result<f64> {
  if anchor.is_empty() || anchor.len() != test.len() {
    return Err(Error::InvalidParameter(alloc::format!(
      "time lists must be non-empty and equal length ({} vs {})",
      anchor.len(),
      test.len()
    )));
  }
  if let Some(t) = anchor.iter().chain(test).find(|t| !(**t > 0.0)) {
    return Err(Error::NonPositiveTime(*t));
  }
  let sum: f64 = anchor.iter().zip(test).map(|(a, t)| (a - t) / a).sum();
  Ok(sum / anchor.len() as f64 * 100.0)
}
