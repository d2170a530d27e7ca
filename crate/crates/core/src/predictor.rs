//! Soft split predictions and the predictors that produce them.

use alloc::format;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::maps::{LabelMaps, MT_CELL, QT_CELL};
use crate::partition::{Constraints, CuGeom, SplitType, MT_CLASSES, MT_LEVELS};

/// Real-valued QT depth map plus per-cell class probabilities for each MT
/// level, in label order (VTT, VBT, NS, HBT, HTT).
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
  pub qt_depth: Grid<f32>,
  pub mt_probs: [Grid<[f32; MT_CLASSES]>; MT_LEVELS],
}

/// Probability rows must sum to one within this tolerance.
pub const ROW_SUM_TOLERANCE: f64 = 1e-5;

impl Prediction {
  pub fn ctu_size(&self) -> u32 {
    self.qt_depth.dim() as u32 * QT_CELL
  }

  /// Checks map sizes against `c`.
  pub fn check_dims(&self, c: &Constraints) -> Result<()> {
    let qt = (c.ctu_size / QT_CELL) as usize;
    if self.qt_depth.dim() != qt {
      return Err(Error::DimensionMismatch { what: "predicted QT depth map", expected: qt, found: self.qt_depth.dim() });
    }
    let mt = (c.ctu_size / MT_CELL) as usize;
    for g in &self.mt_probs {
      if g.dim() != mt {
        return Err(Error::DimensionMismatch { what: "predicted MT split map", expected: mt, found: g.dim() });
      }
    }
    Ok(())
  }

  /// Checks the value invariants: finite depths, non-negative probability
  /// rows summing to one within `tolerance`.
  pub fn validate(&self, tolerance: f64) -> Result<()> {
    if self.mt_probs.iter().any(|g| g.dim() != 2 * self.qt_depth.dim()) {
      return Err(Error::InvalidPrediction("MT maps must be twice the QT map resolution".into()));
    }
    if let Some(d) = self.qt_depth.cells().iter().find(|d| !d.is_finite()) {
      return Err(Error::InvalidPrediction(format!("non-finite QT depth {d}")));
    }
    for (level, g) in self.mt_probs.iter().enumerate() {
      for (i, row) in g.cells().iter().enumerate() {
        if row.iter().any(|p| !(*p >= 0.0)) {
          return Err(Error::InvalidPrediction(format!("negative probability at MT{level} cell {i}")));
        }
        let sum: f64 = row.iter().map(|p| *p as f64).sum();
        if (sum - 1.0).abs() > tolerance {
          return Err(Error::InvalidPrediction(format!(
            "MT{level} cell {i} probabilities sum to {sum}"
          )));
        }
      }
    }
    Ok(())
  }

  /// Mean predicted QT depth over the cells covered by `geom`.
  pub fn mean_qt_depth(&self, geom: &CuGeom) -> f64 {
    let (sum, n) = self
      .qt_depth
      .cells_in(geom, QT_CELL)
      .fold((0.0f64, 0usize), |(s, n), d| (s + *d as f64, n + 1));
    sum / n as f64
  }

  /// Mean class probabilities (label order) over the level-`level` cells
  /// covered by `geom`.
  pub fn mean_probs(&self, level: usize, geom: &CuGeom) -> [f64; MT_CLASSES] {
    let mut acc = [0.0f64; MT_CLASSES];
    let mut n = 0usize;
    for row in self.mt_probs[level].cells_in(geom, MT_CELL) {
      for (a, p) in acc.iter_mut().zip(row) {
        *a += *p as f64;
      }
      n += 1;
    }
    acc.map(|a| a / n as f64)
  }

  /// Mean probability of `split` at `level` over `geom`.
  pub fn mean_prob(&self, level: usize, geom: &CuGeom, split: SplitType) -> f64 {
    let label = split.mt_label().expect("MT class") as usize;
    self.mean_probs(level, geom)[label]
  }
}

/// Controlled degradation of an oracle prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
  /// Label smoothing: truth gets `1 - eps`, every other class `eps / 4`.
  pub smoothing: f64,
  /// Standard deviation of zero-mean Gaussian noise added to QT depths.
  pub depth_jitter: f64,
  pub seed: u64,
}

impl Default for NoiseParams {
  fn default() -> Self {
    NoiseParams { smoothing: 0.0, depth_jitter: 0.0, seed: 0 }
  }
}

impl NoiseParams {
  pub fn validate(&self) -> Result<()> {
    if !(0.0..1.0).contains(&self.smoothing) {
      return Err(Error::InvalidParameter(format!("smoothing {} not in [0,1)", self.smoothing)));
    }
    if !(self.depth_jitter >= 0.0) || !self.depth_jitter.is_finite() {
      return Err(Error::InvalidParameter(format!("depth jitter {} must be >= 0", self.depth_jitter)));
    }
    Ok(())
  }
}

/// Prediction built from ground-truth maps, optionally degraded.
pub fn oracle_predict(maps: &LabelMaps, noise: &NoiseParams) -> Result<Prediction> {
  noise.validate()?;
  let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
  let mut qt_depth = Grid::filled(maps.qt.dim(), 0f32);
  if noise.depth_jitter > 0.0 {
    let normal = Normal::new(0.0, noise.depth_jitter)
      .map_err(|e| Error::InvalidParameter(format!("{e}")))?;
    for (out, d) in qt_depth.cells_mut().iter_mut().zip(maps.qt.cells()) {
      *out = (*d as f64 + normal.sample(&mut rng)) as f32;
    }
  } else {
    for (out, d) in qt_depth.cells_mut().iter_mut().zip(maps.qt.cells()) {
      *out = *d as f32;
    }
  }
  let eps = noise.smoothing;
  let on = (1.0 - eps) as f32;
  let off = (eps / (MT_CLASSES - 1) as f64) as f32;
  let mt_probs = core::array::from_fn(|level| {
    let src = &maps.mt[level];
    let mut g = Grid::filled(src.dim(), [off; MT_CLASSES]);
    for (row, label) in g.cells_mut().iter_mut().zip(src.cells()) {
      row[label.mt_label().expect("MT map holds MT classes") as usize] = on;
    }
    g
  });
  Ok(Prediction { qt_depth, mt_probs })
}

/// No-information prediction: depth 0 everywhere, all classes equally
/// likely.
pub fn uniform_predict(c: &Constraints) -> Prediction {
  let p = 1.0 / MT_CLASSES as f32;
  Prediction {
    qt_depth: Grid::filled((c.ctu_size / QT_CELL) as usize, 0.0),
    mt_probs: core::array::from_fn(|_| Grid::filled((c.ctu_size / MT_CELL) as usize, [p; MT_CLASSES])),
  }
}

/// Identifies a CTU: picture order count and CTU grid position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CtuKey {
  pub poc: u32,
  pub ctu_x: u16,
  pub ctu_y: u16,
}

/// Source of per-CTU predictions. `truth` carries the ground-truth maps
/// for predictors that are derived from them; others ignore it. `None`
/// means no prediction is available and the CTU falls back to the
/// exhaustive search.
pub trait Predictor: Sync {
  fn predict(&self, key: CtuKey, truth: &LabelMaps) -> Option<Prediction>;
}

/// Oracle predictor with a per-CTU noise seed derived from the base seed.
#[derive(Debug, Clone, Copy)]
pub struct OraclePredictor {
  pub noise: NoiseParams,
}

impl Predictor for OraclePredictor {
  fn predict(&self, key: CtuKey, truth: &LabelMaps) -> Option<Prediction> {
    let mix = ((key.poc as u64) << 32) ^ ((key.ctu_y as u64) << 16) ^ key.ctu_x as u64;
    let noise = NoiseParams { seed: self.noise.seed ^ mix.wrapping_mul(0x9E37_79B9_7F4A_7C15), ..self.noise };
    oracle_predict(truth, &noise).ok()
  }
}

#[derive(Debug, Clone, Copy)]
pub struct UniformPredictor {
  pub constraints: Constraints,
}

impl Predictor for UniformPredictor {
  fn predict(&self, _key: CtuKey, _truth: &LabelMaps) -> Option<Prediction> {
    Some(uniform_predict(&self.constraints))
  }
}
