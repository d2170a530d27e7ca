//! Toy rate-distortion partition search.
//!
//! Leaf cost is `D + lambda * R` with `D` the SSE of the better of the L0
//! and L1 motion-compensated predictions and `R` a bit estimate made of a
//! CU header, motion vector bits and a residual-energy proxy. A split
//! costs `lambda * split_bits` plus the sum of its children.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::motion::{block_me, Frame, MotionSearch, MotionVector, Rect, RefPair};
use crate::partition::{legal_splits, split_unchecked, Constraints, CuGeom, PartitionTree, SplitSet, SplitType};
use crate::predictor::Prediction;

/// Lagrange multiplier for `qp`: `0.57 * 2^((qp - 12) / 3)`.
pub fn lambda_for_qp(qp: u8) -> f64 {
  0.57 * libm::pow(2.0, (qp as f64 - 12.0) / 3.0)
}

/// Rate model knobs shared across QPs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
  /// Bits spent on the split flag, indexed by `SplitType as usize`.
  pub split_bits: [f64; 6],
  pub header_bits: f64,
  pub mv_bits_scale: f64,
  pub residual_bits_weight: f64,
  pub search_range: u32,
}

impl Default for CostParams {
  fn default() -> Self {
    CostParams {
      split_bits: [1.0, 1.5, 2.5, 2.5, 3.0, 3.0],
      header_bits: 4.0,
      mv_bits_scale: 1.0,
      residual_bits_weight: 16.0,
      search_range: 32,
    }
  }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
  pub qp: u8,
  pub lambda: f64,
  pub params: CostParams,
}

impl CostModel {
  pub fn new(qp: u8, params: CostParams) -> Result<Self> {
    if qp > 51 {
      return Err(Error::InvalidParameter(format!("qp {qp} outside [0,51]")));
    }
    let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
    if !params.split_bits.iter().all(|b| finite_nonneg(*b))
      || !finite_nonneg(params.header_bits)
      || !finite_nonneg(params.mv_bits_scale)
      || !finite_nonneg(params.residual_bits_weight)
    {
      return Err(Error::InvalidParameter("bit weights must be finite and >= 0".into()));
    }
    Ok(CostModel { qp, lambda: lambda_for_qp(qp), params })
  }

  #[inline]
  pub fn split_cost(&self, s: SplitType) -> f64 {
    self.lambda * self.params.split_bits[s as usize]
  }

  /// Signed exp-Golomb-like length of one vector component.
  #[inline]
  fn component_bits(v: i32) -> f64 {
    1.0 + 2.0 * libm::log2(1.0 + v.unsigned_abs() as f64)
  }

  pub fn mv_bits(&self, mv: &MotionVector) -> f64 {
    self.params.mv_bits_scale * (Self::component_bits(mv.dx) + Self::component_bits(mv.dy))
  }

  /// `D + lambda * R` of one prediction candidate.
  pub fn candidate_cost(&self, sse: u64, area: u32, mv: &MotionVector) -> f64 {
    let d = sse as f64;
    let residual_bits = self.params.residual_bits_weight * libm::log2(1.0 + d / area as f64);
    let rate = self.params.header_bits + self.mv_bits(mv) + residual_bits;
    d + self.lambda * rate
  }
}

/// Sum of squared differences between `rect` of `cur` and its prediction
/// displaced by `mv` in `reference` (clamped at picture edges).
pub fn sse_at(cur: &Frame, reference: &Frame, rect: &Rect, mv: &MotionVector) -> u64 {
  let mut sse = 0u64;
  for r in 0..rect.height {
    for c in 0..rect.width {
      let (x, y) = (rect.x + c, rect.y + r);
      let p = reference.at_clamped(x as isize + mv.dx as isize, y as isize + mv.dy as isize);
      let e = cur.at(x, y) as i64 - p as i64;
      sse += (e * e) as u64;
    }
  }
  sse
}

fn best_of_lists(cur: &Frame, refs: RefPair<'_>, rect: &Rect, mvs: [MotionVector; 2], model: &CostModel) -> f64 {
  let mut best = f64::INFINITY;
  for (reference, mv) in refs.lists().into_iter().zip(mvs) {
    let cost = model.candidate_cost(sse_at(cur, reference, rect, &mv), rect.area() as u32, &mv);
    if cost < best {
      best = cost;
    }
  }
  best
}

/// RD cost of coding `geom` (CTU-local) unsplit, searching each reference
/// list with [`block_me`].
pub fn leaf_cost(
  geom: &CuGeom,
  cur: &Frame,
  refs: RefPair<'_>,
  ctu_origin: (usize, usize),
  model: &CostModel,
) -> Result<f64> {
  let rect = Rect::new(
    ctu_origin.0 + geom.x as usize,
    ctu_origin.1 + geom.y as usize,
    geom.width as usize,
    geom.height as usize,
  );
  let range = model.params.search_range;
  let mvs = [block_me(cur, refs.l0, &rect, range)?, block_me(cur, refs.l1, &rect, range)?];
  Ok(best_of_lists(cur, refs, &rect, mvs, model))
}

/// Per-CTU search state: the current picture, its references and the
/// precomputed motion tables used for every leaf evaluation.
pub struct CtuContext<'a> {
  pub cur: &'a Frame,
  pub refs: RefPair<'a>,
  pub origin: (usize, usize),
  pub model: CostModel,
  searches: [MotionSearch; 2],
}

impl<'a> CtuContext<'a> {
  pub fn new(
    cur: &'a Frame,
    refs: RefPair<'a>,
    origin: (usize, usize),
    c: &Constraints,
    model: CostModel,
  ) -> Result<Self> {
    c.validate()?;
    let size = c.ctu_size as usize;
    let unit = c.min_cu_dim as usize;
    let range = model.params.search_range;
    let searches = [
      MotionSearch::new(cur, refs.l0, origin, size, unit, range)?,
      MotionSearch::new(cur, refs.l1, origin, size, unit, range)?,
    ];
    Ok(CtuContext { cur, refs, origin, model, searches })
  }

  /// Same value as [`leaf_cost`], using the precomputed tables.
  pub fn leaf_cost(&self, geom: &CuGeom) -> f64 {
    let (x, y, w, h) = (geom.x as usize, geom.y as usize, geom.width as usize, geom.height as usize);
    let rect = Rect::new(self.origin.0 + x, self.origin.1 + y, w, h);
    let mvs = [self.searches[0].best(x, y, w, h), self.searches[1].best(x, y, w, h)];
    best_of_lists(self.cur, self.refs, &rect, mvs, &self.model)
  }

  /// Cost of a given tree, accumulated in the same order as the searches.
  pub fn tree_cost(&self, tree: &PartitionTree) -> f64 {
    if tree.split == SplitType::Ns {
      return self.leaf_cost(&tree.geom) + self.model.split_cost(SplitType::Ns);
    }
    let mut cost = self.model.split_cost(tree.split);
    for child in &tree.children {
      cost += self.tree_cost(child);
    }
    cost
  }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SearchStats {
  pub nodes_visited: u64,
  pub leaf_costs_evaluated: u64,
  pub splits_pruned: u64,
  /// Seconds; filled in by callers that own a clock.
  pub wall_time: f64,
}

impl SearchStats {
  pub fn merge(&mut self, other: &SearchStats) {
    self.nodes_visited += other.nodes_visited;
    self.leaf_costs_evaluated += other.leaf_costs_evaluated;
    self.splits_pruned += other.splits_pruned;
    self.wall_time += other.wall_time;
  }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodeResult {
  pub tree: PartitionTree,
  pub cost: f64,
  pub stats: SearchStats,
}

/// Pruning knobs: MT probability threshold and the QT policy bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruneParams {
  pub thm: f64,
  /// When true, QT is left out of the candidate list unless the depth
  /// prediction asks for it.
  pub qtskip: bool,
}

impl PruneParams {
  pub fn validate(&self) -> Result<()> {
    if !(0.0..=1.0).contains(&self.thm) {
      return Err(Error::InvalidParameter(format!("thm {} outside [0,1]", self.thm)));
    }
    Ok(())
  }
}

struct Engine<'c, 'a, F> {
  ctx: &'c CtuContext<'a>,
  c: &'c Constraints,
  candidates: F,
  stats: SearchStats,
}

impl<F> Engine<'_, '_, F>
where
  F: FnMut(&CuGeom, SplitSet) -> Result<SplitSet>,
{
  fn search(&mut self, geom: CuGeom) -> Result<(f64, PartitionTree)> {
    self.stats.nodes_visited += 1;
    let legal = legal_splits(&geom, self.c)?;
    let cand = (self.candidates)(&geom, legal)?;
    debug_assert!(cand.is_subset(legal) && cand.contains(SplitType::Ns));
    self.stats.splits_pruned += (legal.len() - cand.len()) as u64;
    let mut best: Option<(f64, PartitionTree)> = None;
    for s in cand.iter() {
      let (cost, tree) = if s == SplitType::Ns {
        self.stats.leaf_costs_evaluated += 1;
        let cost = self.ctx.leaf_cost(&geom) + self.ctx.model.split_cost(SplitType::Ns);
        (cost, PartitionTree::leaf(geom))
      } else {
        let mut cost = self.ctx.model.split_cost(s);
        let mut children = Vec::with_capacity(s.child_count());
        for child in split_unchecked(&geom, s) {
          let (c, t) = self.search(child)?;
          cost += c;
          children.push(t);
        }
        (cost, PartitionTree::node(geom, s, children))
      };
      if best.as_ref().is_none_or(|(b, _)| cost < *b) {
        best = Some((cost, tree));
      }
    }
    Ok(best.expect("NS is always a candidate"))
  }
}

fn run<F>(ctx: &CtuContext<'_>, c: &Constraints, candidates: F) -> Result<EncodeResult>
where
  F: FnMut(&CuGeom, SplitSet) -> Result<SplitSet>,
{
  let mut engine = Engine { ctx, c, candidates, stats: SearchStats::default() };
  let (cost, tree) = engine.search(CuGeom::root(c.ctu_size))?;
  Ok(EncodeResult { tree, cost, stats: engine.stats })
}

/// Full search over every legal split of every CU. Ties go to NS, then to
/// the earlier split in QT, HBT, VBT, HTT, VTT order.
pub fn exhaustive_search(ctx: &CtuContext<'_>, c: &Constraints) -> Result<EncodeResult> {
  run(ctx, c, |_, legal| Ok(legal))
}

/// Output of the MT early-skipping step for one CU.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandSplit {
  pub skip_mt: bool,
  pub cand: SplitSet,
}

/// Prediction statistics of one CU: everything the candidate decision
/// depends on, so that decisions can be replayed for other thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuEvidence {
  pub legal: SplitSet,
  pub qt_depth: u8,
  /// Mean predicted QT depth over the CU.
  pub qt_mean: f64,
  /// Mean probability of HBT, VBT, HTT, VTT at the CU's MT level.
  pub mt_probs: [f64; 4],
}

impl CuEvidence {
  pub fn gather(geom: &CuGeom, pred: &Prediction, c: &Constraints) -> Result<Self> {
    pred.check_dims(c)?;
    let legal = legal_splits(geom, c)?;
    let qt_mean = pred.mean_qt_depth(geom);
    let level = geom.mt_depth as usize;
    let mut mt_probs = [0.0; 4];
    if level < pred.mt_probs.len() {
      let means = pred.mean_probs(level, geom);
      for (p, s) in mt_probs.iter_mut().zip(SplitType::MT) {
        *p = means[s.mt_label().expect("MT class") as usize];
      }
    }
    Ok(CuEvidence { legal, qt_depth: geom.qt_depth, qt_mean, mt_probs })
  }

  pub fn mt_prob(&self, s: SplitType) -> f64 {
    SplitType::MT.iter().position(|m| *m == s).map_or(0.0, |i| self.mt_probs[i])
  }

  /// Rounded mean depth (half away from zero) exceeds the CU depth and QT
  /// is legal.
  pub fn skip_mt(&self) -> bool {
    libm::round(self.qt_mean) > self.qt_depth as f64 && self.legal.contains(SplitType::Qt)
  }

  /// MT early skipping: `{NS, QT}` when the depth prediction asks for a
  /// QT split, otherwise NS plus each legal MT split whose mean
  /// probability is strictly above `thm`.
  pub fn cand_split(&self, thm: f64) -> CandSplit {
    if self.skip_mt() {
      let cand = [SplitType::Ns, SplitType::Qt].into_iter().collect();
      return CandSplit { skip_mt: true, cand };
    }
    let mut cand = SplitSet::only(SplitType::Ns);
    for s in SplitType::MT {
      if self.legal.contains(s) && self.mt_prob(s) > thm {
        cand.insert(s);
      }
    }
    CandSplit { skip_mt: false, cand }
  }

  /// Final candidate list evaluated by the pruned search.
  pub fn candidates(&self, p: &PruneParams) -> SplitSet {
    let CandSplit { skip_mt, mut cand } = self.cand_split(p.thm);
    if skip_mt {
      return cand;
    }
    if cand == SplitSet::only(SplitType::Ns) {
      let mut best: Option<(SplitType, f64)> = None;
      for s in SplitType::MT.into_iter().filter(|s| self.legal.contains(*s)) {
        let prob = self.mt_prob(s);
        if best.is_none_or(|(_, b)| prob > b) {
          best = Some((s, prob));
        }
      }
      if let Some((s, _)) = best {
        cand.insert(s);
      }
    }
    if self.legal.contains(SplitType::Qt) && !p.qtskip {
      cand.insert(SplitType::Qt);
    }
    cand
  }
}

/// MT early skipping for one CU under prediction `pred`.
pub fn cand_split(geom: &CuGeom, pred: &Prediction, thm: f64, c: &Constraints) -> Result<CandSplit> {
  Ok(CuEvidence::gather(geom, pred, c)?.cand_split(thm))
}

/// Search restricted, CU by CU, to the candidate lists derived from `pred`.
pub fn pruned_search(
  ctx: &CtuContext<'_>,
  pred: &Prediction,
  p: &PruneParams,
  c: &Constraints,
) -> Result<EncodeResult> {
  p.validate()?;
  pred.check_dims(c)?;
  run(ctx, c, |geom, _| Ok(CuEvidence::gather(geom, pred, c)?.candidates(p)))
}
