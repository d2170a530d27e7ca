use crate::error::{Error, Result};

/// Confusion counts (or percentages) of a binary decision.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConfusionTable {
  pub tp: f64,
  pub fn_: f64,
  pub tn: f64,
  pub fp: f64,
}

impl ConfusionTable {
  pub fn new(tp: f64, fn_: f64, tn: f64, fp: f64) -> Self {
    ConfusionTable { tp, fn_, tn, fp }
  }

  pub fn total(&self) -> f64 {
    self.tp + self.fn_ + self.tn + self.fp
  }

  /// Same table expressed as percentages of its total.
  pub fn to_percent(&self) -> Self {
    let t = self.total();
    if t == 0.0 {
      return *self;
    }
    ConfusionTable::new(self.tp / t * 100.0, self.fn_ / t * 100.0, self.tn / t * 100.0, self.fp / t * 100.0)
  }
}

/// Precision, recall and F1, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf1 {
  pub precision: f64,
  pub recall: f64,
  pub f1: f64,
}

pub fn prf1(t: &ConfusionTable) -> Result<Prf1> {
  if t.total() <= 0.0 {
    return Err(Error::EmptyConfusion);
  }
  if t.tp + t.fp <= 0.0 {
    return Err(Error::DegenerateConfusion("no predicted positives"));
  }
  if t.tp + t.fn_ <= 0.0 {
    return Err(Error::DegenerateConfusion("no actual positives"));
  }
  let precision = t.tp / (t.tp + t.fp);
  let recall = t.tp / (t.tp + t.fn_);
  let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
  Ok(Prf1 { precision: precision * 100.0, recall: recall * 100.0, f1: f1 * 100.0 })
}
