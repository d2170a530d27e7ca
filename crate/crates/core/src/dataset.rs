//! Reference structure and training-sample generation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::maps::{maps_from_tree, validate_maps, LabelMaps};
use crate::motion::{build_msmvf, residual_ctu, Frame, MsMvField, RefPair};
use crate::partition::Constraints;
use crate::rdo::{exhaustive_search, CostModel, CostParams, CtuContext, EncodeResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GopStructure {
  /// Every frame predicts from its predecessor only.
  LowDelay,
  /// Dyadic hierarchy; references are the nearest lower-layer frames.
  Hierarchical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GopConfig {
  pub structure: GopStructure,
  pub gop_size: u32,
}

impl Default for GopConfig {
  fn default() -> Self {
    GopConfig { structure: GopStructure::Hierarchical, gop_size: 8 }
  }
}

impl GopConfig {
  pub fn new(structure: GopStructure, gop_size: u32) -> Result<Self> {
    if !gop_size.is_power_of_two() || gop_size > 32 {
      return Err(Error::InvalidParameter(format!("GOP size {gop_size} must be a power of two <= 32")));
    }
    Ok(GopConfig { structure, gop_size })
  }

  /// Temporal layer of `poc`: 0 on GOP boundaries, `log2(gop)` on odd
  /// positions.
  pub fn tid(&self, poc: u32) -> u8 {
    let pos = poc % self.gop_size;
    if pos == 0 {
      return 0;
    }
    (self.gop_size.trailing_zeros() - pos.trailing_zeros()) as u8
  }

  /// `(L0, L1)` reference POCs for `poc` in a sequence of `frames`
  /// pictures, or `None` for a picture without references.
  pub fn references(&self, poc: u32, frames: u32) -> Option<(u32, u32)> {
    if poc == 0 || poc >= frames {
      return None;
    }
    match self.structure {
      GopStructure::LowDelay => Some((poc - 1, poc - 1)),
      GopStructure::Hierarchical => {
        let t = self.tid(poc);
        // Past anchors of layer 0 reference each other; future references
        // always come from a strictly lower layer.
        let l0 = (0..poc).rev().find(|q| self.tid(*q) < t || (t == 0 && self.tid(*q) == 0))?;
        let l1 = (poc + 1..frames).find(|q| self.tid(*q) < t).unwrap_or(l0);
        Some((l0, l1))
      }
    }
  }
}

/// One CTU training sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
  pub ctu_size: u32,
  pub luma: Vec<u8>,
  pub residual: Vec<i16>,
  pub msmvf: MsMvField,
  pub qp: u8,
  pub tid: u8,
  pub labels: LabelMaps,
}

impl SampleRecord {
  pub fn validate(&self, c: &Constraints) -> Result<()> {
    let n = (self.ctu_size * self.ctu_size) as usize;
    if c.ctu_size != self.ctu_size {
      return Err(Error::DimensionMismatch { what: "sample CTU", expected: c.ctu_size as usize, found: self.ctu_size as usize });
    }
    if self.luma.len() != n {
      return Err(Error::DimensionMismatch { what: "sample luma", expected: n, found: self.luma.len() });
    }
    if self.residual.len() != n {
      return Err(Error::DimensionMismatch { what: "sample residual", expected: n, found: self.residual.len() });
    }
    if self.qp > 51 {
      return Err(Error::InvalidParameter(format!("qp {} outside [0,51]", self.qp)));
    }
    let verdict = validate_maps(&self.labels, c)?;
    if let Some(d) = verdict.diagnostic {
      return Err(Error::InvalidParameter(d));
    }
    Ok(())
  }
}

/// A generated sample together with where it came from and the search
/// result its labels encode.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSample {
  pub poc: u32,
  pub origin: (usize, usize),
  pub record: SampleRecord,
  pub result: EncodeResult,
}

/// Settings shared by every CTU of a generation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationConfig {
  pub gop: GopConfig,
  pub constraints: Constraints,
  pub cost: CostParams,
}

/// Frames that carry inter samples, with their reference POCs.
pub fn inter_frames(frames: &[Frame], gop: &GopConfig) -> Result<Vec<(u32, u32, u32)>> {
  let n = frames.len() as u32;
  let list: Vec<_> = (0..n)
    .filter_map(|poc| gop.references(poc, n).map(|(l0, l1)| (poc, l0, l1)))
    .collect();
  if list.is_empty() {
    return Err(Error::SequenceTooShort(format!("{n} frame(s) give no inter-coded picture")));
  }
  Ok(list)
}

/// Samples for one CTU of one inter frame, one per QP in `qps` order.
pub fn ctu_samples(
  frames: &[Frame],
  (poc, l0, l1): (u32, u32, u32),
  origin: (usize, usize),
  qps: &[u8],
  cfg: &GenerationConfig,
) -> Result<Vec<GeneratedSample>> {
  let c = &cfg.constraints;
  let size = c.ctu_size as usize;
  let cur = &frames[poc as usize];
  let refs = RefPair::new(&frames[l0 as usize], &frames[l1 as usize]);
  let nearest = if poc - l0 <= l1.abs_diff(poc) || l1 == l0 { refs.l0 } else { refs.l1 };
  let range = cfg.cost.search_range;
  let residual = residual_ctu(cur, nearest, origin, size, range)?.residual;
  let msmvf = build_msmvf(cur, refs, origin, size, range)?;
  let mut luma = Vec::with_capacity(size * size);
  for r in 0..size {
    let start = (origin.1 + r) * cur.width + origin.0;
    luma.extend_from_slice(&cur.luma()[start..start + size]);
  }
  let tid = cfg.gop.tid(poc);
  qps
    .iter()
    .map(|&qp| {
      let ctx = CtuContext::new(cur, refs, origin, c, CostModel::new(qp, cfg.cost)?)?;
      let result = exhaustive_search(&ctx, c)?;
      let record = SampleRecord {
        ctu_size: c.ctu_size,
        luma: luma.clone(),
        residual: residual.clone(),
        msmvf: msmvf.clone(),
        qp,
        tid,
        labels: maps_from_tree(&result.tree),
      };
      Ok(GeneratedSample { poc, origin, record, result })
    })
    .collect()
}

/// Runs the exhaustive search over every full CTU of every inter frame and
/// every QP, in (poc, CTU raster index, qp) order.
pub fn generate_samples(frames: &[Frame], qps: &[u8], cfg: &GenerationConfig) -> Result<Vec<GeneratedSample>> {
  cfg.constraints.validate()?;
  let mut out = Vec::new();
  for job in inter_frames(frames, &cfg.gop)? {
    let cur = &frames[job.0 as usize];
    for origin in cur.full_ctus(cfg.constraints.ctu_size as usize) {
      out.extend(ctu_samples(frames, job, origin, qps, cfg)?);
    }
  }
  Ok(out)
}

#[cfg(test)]
mod tests {
  use super::*;

  #[test]
  fn hierarchical_layers() {
    let gop = GopConfig::default();
    let tids: Vec<u8> = (0..9).map(|p| gop.tid(p)).collect();
    assert_eq!(tids, [0, 3, 2, 3, 1, 3, 2, 3, 0]);
  }

  #[test]
  fn hierarchical_references() {
    let gop = GopConfig::default();
    assert_eq!(gop.references(0, 17), None);
    assert_eq!(gop.references(8, 9), Some((0, 0)));
    assert_eq!(gop.references(8, 17), Some((0, 0)));
    assert_eq!(gop.references(4, 17), Some((0, 8)));
    assert_eq!(gop.references(6, 17), Some((4, 8)));
    assert_eq!(gop.references(5, 17), Some((4, 6)));
    // Future anchor past the end: L1 repeats L0.
    assert_eq!(gop.references(9, 10), Some((8, 8)));
  }

  #[test]
  fn low_delay_references() {
    let gop = GopConfig::new(GopStructure::LowDelay, 4).unwrap();
    assert_eq!(gop.references(3, 5), Some((2, 2)));
  }

  #[test]
  fn gop_validation() {
    assert!(GopConfig::new(GopStructure::Hierarchical, 12).is_err());
    assert!(GopConfig::new(GopStructure::Hierarchical, 64).is_err());
  }

  #[test]
  fn single_frame_is_too_short() {
    let f = Frame::new(64, 64, 0, alloc::vec![0; 64 * 64]).unwrap();
    assert!(matches!(inter_frames(&[f], &GopConfig::default()), Err(Error::SequenceTooShort(_))));
  }
}
