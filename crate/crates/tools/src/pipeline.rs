//! Experiment drivers: CTU job lists, predictor sources and the per-CTU
//! search, sweep and evaluation loops. Results come back in job order
//! whatever the worker count.

use std::path::Path;
use std::time::Instant;

use qtmt_core::dataset::{inter_frames, GopConfig};
use qtmt_core::metrics::{candsplit_accuracy, time_saving, DecisionLog};
use qtmt_core::predictor::{CtuKey, OraclePredictor, Predictor, UniformPredictor};
use qtmt_core::rdo::{exhaustive_search, pruned_search, CostModel, CostParams, CtuContext, EncodeResult, PruneParams};
use qtmt_core::{maps_from_tree, Constraints, Frame, LabelMaps, Prediction, RefPair};
use rayon::prelude::*;

use crate::error::{Result, ToolError};
use crate::mvfp::{load_predictions, FilePredictor};
use crate::report::{map_strings, SearchRow, TradeoffRow};

/// One full CTU of one inter frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtuJob {
  pub poc: u32,
  pub l0: u32,
  pub l1: u32,
  pub origin: (usize, usize),
  pub key: CtuKey,
}

/// Jobs in (poc, CTU raster) order. Fewer than two frames give no jobs.
pub fn ctu_jobs(frames: &[Frame], gop: &GopConfig, ctu_size: usize) -> Result<Vec<CtuJob>> {
  if frames.len() < 2 {
    return Ok(Vec::new());
  }
  let mut jobs = Vec::new();
  for (poc, l0, l1) in inter_frames(frames, gop)? {
    for origin in frames[poc as usize].full_ctus(ctu_size) {
      let key = CtuKey { poc, ctu_x: (origin.0 / ctu_size) as u16, ctu_y: (origin.1 / ctu_size) as u16 };
      jobs.push(CtuJob { poc, l0, l1, origin, key });
    }
  }
  Ok(jobs)
}

/// Runs `f` over `items` on `jobs` worker threads, keeping input order.
pub fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<R>>
where
  T: Sync,
  R: Send,
  F: Fn(&T) -> Result<R> + Sync + Send,
{
  if jobs == 0 {
    return Err(ToolError::Usage("--jobs must be at least 1".into()));
  }
  let pool = rayon::ThreadPoolBuilder::new()
    .num_threads(jobs)
    .build()
    .map_err(|e| ToolError::Usage(format!("cannot start {jobs} workers: {e}")))?;
  pool.install(|| items.par_iter().map(f).collect())
}

/// Where pruned searches get their predictions.
#[derive(Debug, Clone)]
pub enum PredictorSource {
  Oracle(OraclePredictor),
  Uniform(UniformPredictor),
  File(FilePredictor),
}

impl PredictorSource {
  /// Parses `oracle`, `uniform` or `file:PATH`; files must match the CTU size.
  pub fn parse(choice: &str, oracle: OraclePredictor, c: &Constraints) -> Result<Self> {
    match choice {
      "oracle" => {
        oracle.noise.validate()?;
        Ok(PredictorSource::Oracle(oracle))
      }
      "uniform" => Ok(PredictorSource::Uniform(UniformPredictor { constraints: *c })),
      _ => {
        let path = choice.strip_prefix("file:").ok_or_else(|| {
          ToolError::Usage(format!("unknown predictor \"{choice}\"; expected oracle, uniform or file:PATH"))
        })?;
        let (ctu, preds) = load_predictions(Path::new(path))?;
        if ctu != c.ctu_size {
          return Err(ToolError::Mismatch(format!(
            "{path}: predictions are for {ctu}x{ctu} CTUs, run uses {0}x{0}",
            c.ctu_size
          )));
        }
        Ok(PredictorSource::File(FilePredictor { preds }))
      }
    }
  }

  /// Only the oracle looks at the ground-truth maps.
  pub fn needs_truth(&self) -> bool {
    matches!(self, PredictorSource::Oracle(_))
  }
}

impl Predictor for PredictorSource {
  fn predict(&self, key: CtuKey, truth: &LabelMaps) -> Option<Prediction> {
    match self {
      PredictorSource::Oracle(p) => p.predict(key, truth),
      PredictorSource::Uniform(p) => p.predict(key, truth),
      PredictorSource::File(p) => p.predict(key, truth),
    }
  }
}

/// Settings shared by every CTU of a run.
#[derive(Debug, Clone, Copy)]
pub struct RunSetup<'a> {
  pub frames: &'a [Frame],
  pub constraints: Constraints,
  pub cost: CostParams,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchMode {
  Exhaustive,
  Pruned(PruneParams),
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
  let t = Instant::now();
  let v = f()?;
  Ok((v, t.elapsed().as_secs_f64()))
}

impl RunSetup<'_> {
  fn context(&self, job: &CtuJob, qp: u8) -> Result<CtuContext<'_>> {
    let refs = RefPair::new(&self.frames[job.l0 as usize], &self.frames[job.l1 as usize]);
    let model = CostModel::new(qp, self.cost)?;
    Ok(CtuContext::new(&self.frames[job.poc as usize], refs, job.origin, &self.constraints, model)?)
  }

  /// Exhaustive search; wall time covers motion tables and search.
  pub fn exhaustive(&self, job: &CtuJob, qp: u8) -> Result<EncodeResult> {
    let (mut r, t) = timed(|| Ok(exhaustive_search(&self.context(job, qp)?, &self.constraints)?))?;
    r.stats.wall_time = t;
    Ok(r)
  }

  pub fn pruned(&self, job: &CtuJob, qp: u8, pred: &Prediction, p: &PruneParams) -> Result<EncodeResult> {
    let (mut r, t) = timed(|| Ok(pruned_search(&self.context(job, qp)?, pred, p, &self.constraints)?))?;
    r.stats.wall_time = t;
    Ok(r)
  }

  /// Ground truth handed to the predictor: the exhaustive partition when
  /// the predictor needs it, unsplit maps otherwise.
  fn truth(&self, job: &CtuJob, qp: u8, src: &PredictorSource) -> Result<(LabelMaps, Option<EncodeResult>)> {
    if src.needs_truth() {
      let r = self.exhaustive(job, qp)?;
      Ok((maps_from_tree(&r.tree), Some(r)))
    } else {
      Ok((LabelMaps::unsplit(self.constraints.ctu_size), None))
    }
  }
}

fn row(job: &CtuJob, qp: u8, mode: SearchMode, r: &EncodeResult, fallback: bool) -> SearchRow {
  let [qt_map, mt0, mt1, mt2] = map_strings(&maps_from_tree(&r.tree));
  let (name, thm, qtskip) = match mode {
    SearchMode::Exhaustive => ("exhaustive", None, None),
    SearchMode::Pruned(p) => ("pruned", Some(p.thm), Some(p.qtskip)),
  };
  SearchRow {
    poc: job.poc,
    ctu_x: job.key.ctu_x,
    ctu_y: job.key.ctu_y,
    qp,
    mode: name.into(),
    thm,
    qtskip,
    cost: r.cost,
    nodes_visited: r.stats.nodes_visited,
    leaf_costs: r.stats.leaf_costs_evaluated,
    splits_pruned: r.stats.splits_pruned,
    wall_time: r.stats.wall_time,
    fallback,
    qt_map,
    mt0,
    mt1,
    mt2,
  }
}

fn fallback_note(job: &CtuJob, qp: u8) {
  eprintln!(
    "fallback: no prediction for poc {} ctu ({}, {}) qp {qp}; using exhaustive search",
    job.poc, job.key.ctu_x, job.key.ctu_y
  );
}

/// One search per (CTU, QP), in (job, qp) order.
pub fn run_search(
  setup: &RunSetup<'_>,
  jobs: &[CtuJob],
  qps: &[u8],
  mode: SearchMode,
  src: Option<&PredictorSource>,
  workers: usize,
) -> Result<Vec<SearchRow>> {
  let units: Vec<(CtuJob, u8)> = jobs.iter().flat_map(|j| qps.iter().map(move |q| (*j, *q))).collect();
  par_map(workers, &units, |(job, qp)| {
    let (job, qp) = (job, *qp);
    match (mode, src) {
      (SearchMode::Exhaustive, _) => Ok(row(job, qp, mode, &setup.exhaustive(job, qp)?, false)),
      (SearchMode::Pruned(p), Some(src)) => {
        let (truth, _) = setup.truth(job, qp, src)?;
        match src.predict(job.key, &truth) {
          Some(pred) => Ok(row(job, qp, mode, &setup.pruned(job, qp, &pred, &p)?, false)),
          None => {
            fallback_note(job, qp);
            Ok(row(job, qp, mode, &setup.exhaustive(job, qp)?, true))
          }
        }
      }
      (SearchMode::Pruned(_), None) => Err(ToolError::Usage("pruned search needs --predictor".into())),
    }
  })
}

/// Exhaustive anchor plus one pruned search per setting for one (CTU, QP).
#[derive(Debug, Clone)]
pub struct SweepUnit {
  pub qp: u8,
  pub anchor: SearchRow,
  pub settings: Vec<SearchRow>,
  /// Decision log against the anchor partition; `None` on fallback.
  pub log: Option<DecisionLog>,
}

pub fn run_sweep(
  setup: &RunSetup<'_>,
  jobs: &[CtuJob],
  qps: &[u8],
  grid: &[PruneParams],
  src: &PredictorSource,
  workers: usize,
) -> Result<Vec<SweepUnit>> {
  if grid.is_empty() {
    return Err(ToolError::Usage("sweep grid is empty".into()));
  }
  for p in grid {
    p.validate()?;
  }
  let units: Vec<(CtuJob, u8)> = jobs.iter().flat_map(|j| qps.iter().map(move |q| (*j, *q))).collect();
  par_map(workers, &units, |(job, qp)| {
    let (job, qp) = (job, *qp);
    let anchor = setup.exhaustive(job, qp)?;
    let truth = maps_from_tree(&anchor.tree);
    let pred = src.predict(job.key, &truth);
    if pred.is_none() {
      fallback_note(job, qp);
    }
    let mut settings = Vec::with_capacity(grid.len());
    for p in grid {
      let mode = SearchMode::Pruned(*p);
      settings.push(match &pred {
        Some(pred) => row(job, qp, mode, &setup.pruned(job, qp, pred, p)?, false),
        None => row(job, qp, mode, &setup.exhaustive(job, qp)?, true),
      });
    }
    let log = pred.as_ref().map(|p| DecisionLog::from_tree(&anchor.tree, p, &setup.constraints)).transpose()?;
    Ok(SweepUnit { qp, anchor: row(job, qp, SearchMode::Exhaustive, &anchor, false), settings, log })
  })
}

/// Per-setting totals: cost increase and node savings against the
/// exhaustive anchor, time saving over per-QP wall-time totals, and
/// candidate accuracy on the pooled decision log.
pub fn tradeoff(units: &[SweepUnit], grid: &[PruneParams], qps: &[u8]) -> Result<Vec<TradeoffRow>> {
  if units.is_empty() {
    return Ok(Vec::new());
  }
  let mut log = DecisionLog::default();
  for u in units {
    if let Some(l) = &u.log {
      log.extend(l.clone());
    }
  }
  let per_qp = |f: &dyn Fn(&SweepUnit) -> f64| -> Vec<f64> {
    qps.iter().map(|q| units.iter().filter(|u| u.qp == *q).map(f).sum()).collect()
  };
  let anchor_cost: f64 = units.iter().map(|u| u.anchor.cost).sum();
  let anchor_nodes: u64 = units.iter().map(|u| u.anchor.nodes_visited).sum();
  let anchor_times = per_qp(&|u| u.anchor.wall_time);
  grid
    .iter()
    .enumerate()
    .map(|(i, p)| {
      let cost: f64 = units.iter().map(|u| u.settings[i].cost).sum();
      let nodes: u64 = units.iter().map(|u| u.settings[i].nodes_visited).sum();
      let times = per_qp(&|u| u.settings[i].wall_time);
      let acc = candsplit_accuracy(&log, &[p.thm], p.qtskip)[0].levels;
      Ok(TradeoffRow {
        thm: p.thm,
        qtskip: p.qtskip,
        cost_increase_pct: (cost / anchor_cost - 1.0) * 100.0,
        nodes_saved_pct: (1.0 - nodes as f64 / anchor_nodes as f64) * 100.0,
        ts_pct: time_saving(&anchor_times, &times)?,
        acc_mt0: acc[0],
        acc_mt1: acc[1],
        acc_mt2: acc[2],
      })
    })
    .collect()
}

/// Decision log of `src` against the exhaustive partition of every
/// (CTU, QP); CTUs without a prediction are reported and skipped.
pub fn run_eval(
  setup: &RunSetup<'_>,
  jobs: &[CtuJob],
  qps: &[u8],
  src: &PredictorSource,
  workers: usize,
) -> Result<DecisionLog> {
  let units: Vec<(CtuJob, u8)> = jobs.iter().flat_map(|j| qps.iter().map(move |q| (*j, *q))).collect();
  let logs = par_map(workers, &units, |(job, qp)| {
    let anchor = setup.exhaustive(job, *qp)?;
    match src.predict(job.key, &maps_from_tree(&anchor.tree)) {
      Some(pred) => Ok(Some(DecisionLog::from_tree(&anchor.tree, &pred, &setup.constraints)?)),
      None => {
        eprintln!("skipped: no prediction for poc {} ctu ({}, {}) qp {qp}", job.poc, job.key.ctu_x, job.key.ctu_y);
        Ok(None)
      }
    }
  })?;
  let mut log = DecisionLog::default();
  for l in logs.into_iter().flatten() {
    log.extend(l);
  }
  Ok(log)
}
