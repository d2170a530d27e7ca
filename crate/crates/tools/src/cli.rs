//! The `qtmt` command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtmt_core::dataset::{ctu_samples, GenerationConfig, GopConfig, GopStructure};
use qtmt_core::metrics::{bd_rate, candsplit_accuracy, skipmt_confusion};
use qtmt_core::motion::build_msmvf;
use qtmt_core::predictor::{NoiseParams, OraclePredictor};
use qtmt_core::rdo::{CostParams, PruneParams};
use qtmt_core::{Constraints, Frame, RefPair};
use serde::Serialize;

use crate::error::{Result, ToolError};
use crate::mvfi::{self, Sidecar};
use crate::parity::{self, PARITY_TOLERANCE};
use crate::pipeline::{self, CtuJob, PredictorSource, RunSetup, SearchMode};
use crate::report::{self, AccuracyCsvRow, ConfusionRow, MvfRow};
use crate::video::load_video;

/// QTMT partition search experiments on a toy rate-distortion model.
#[derive(Debug, Parser, Serialize)]
#[command(name = "qtmt", version)]
pub struct Cli {
  #[command(subcommand)]
  pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
  /// Dump the multi-scale motion field of every inter CTU.
  ExtractMvf(ExtractArgs),
  /// Exhaustive or pruned partition search, one row per CTU and QP.
  Search(SearchArgs),
  /// Pruned search over a (qtskip, thm) grid against the exhaustive anchor.
  Sweep(SweepArgs),
  /// Generate an MVFI dataset with a JSON sidecar.
  DatasetGen(DatasetArgs),
  /// SkipMT confusion and candidate accuracy of a predictor.
  Eval(EvalArgs),
  /// BD-rate between two RD-point CSVs (bitrate,psnr columns).
  Bdrate(BdrateArgs),
  /// Check loss values in a parity file against the built-in loss.
  LossCheck(LossCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GopKind {
  Hierarchical,
  LowDelay,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClipArgs {
  /// Input clip: .y4m, or raw 8-bit luma with --width/--height.
  #[arg(long)]
  pub input: PathBuf,
  #[arg(long)]
  pub width: Option<usize>,
  #[arg(long)]
  pub height: Option<usize>,
  #[arg(long, default_value_t = 128)]
  pub ctu_size: u32,
  #[arg(long, default_value_t = 32)]
  pub search_range: u32,
  /// GOP size (power of two, at most 32).
  #[arg(long, default_value_t = 8)]
  pub gop: u32,
  #[arg(long, value_enum, default_value_t = GopKind::Hierarchical)]
  pub gop_structure: GopKind,
  /// Worker threads over CTUs.
  #[arg(long, default_value_t = 1)]
  pub jobs: usize,
  /// Output directory.
  #[arg(long)]
  pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QpArgs {
  #[arg(long, value_delimiter = ',', default_values_t = [22u8, 27, 32, 37])]
  pub qp: Vec<u8>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PredictorArgs {
  /// oracle, uniform or file:PATH (an MVFP prediction file).
  #[arg(long)]
  pub predictor: Option<String>,
  /// Oracle label smoothing.
  #[arg(long, default_value_t = 0.0)]
  pub noise_eps: f64,
  /// Oracle QT depth jitter (standard deviation).
  #[arg(long, default_value_t = 0.0)]
  pub depth_jitter: f64,
  #[arg(long, default_value_t = 0)]
  pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtractArgs {
  #[command(flatten)]
  pub clip: ClipArgs,
  /// Also run the exhaustive search at each --qp and report the
  /// extraction time as a share of it.
  #[arg(long)]
  pub time_share: bool,
  #[command(flatten)]
  pub qp: QpArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
  Exhaustive,
  Pruned,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
  #[command(flatten)]
  pub clip: ClipArgs,
  #[command(flatten)]
  pub qp: QpArgs,
  #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
  pub mode: ModeArg,
  #[arg(long, default_value_t = 0.0)]
  pub thm: f64,
  #[arg(long)]
  pub qtskip: bool,
  #[command(flatten)]
  pub predictor: PredictorArgs,
}

pub const DEFAULT_GRID: &str = "F:0,T:0,T:0.125,T:0.175,T:0.225,T:0.26";
pub const DEFAULT_THM: [f64; 5] = [0.0, 0.125, 0.175, 0.225, 0.26];

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
  #[command(flatten)]
  pub clip: ClipArgs,
  #[command(flatten)]
  pub qp: QpArgs,
  /// Settings as QTSKIP:THM pairs, QTSKIP being T or F.
  #[arg(long, default_value = DEFAULT_GRID)]
  pub grid: String,
  #[command(flatten)]
  pub predictor: PredictorArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DatasetArgs {
  #[command(flatten)]
  pub clip: ClipArgs,
  #[command(flatten)]
  pub qp: QpArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
  #[command(flatten)]
  pub clip: ClipArgs,
  #[command(flatten)]
  pub qp: QpArgs,
  #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_THM)]
  pub thm: Vec<f64>,
  #[arg(long)]
  pub qtskip: bool,
  #[command(flatten)]
  pub predictor: PredictorArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BdrateArgs {
  #[arg(long)]
  pub anchor: PathBuf,
  #[arg(long)]
  pub test: PathBuf,
  #[arg(long)]
  pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LossCheckArgs {
  /// Parity JSON file.
  #[arg(long)]
  pub input: PathBuf,
  #[arg(long, default_value_t = PARITY_TOLERANCE)]
  pub tol: f64,
  #[arg(long)]
  pub out: Option<PathBuf>,
}

/// Parses `T:0.125,F:0`-style grids.
pub fn parse_grid(s: &str) -> Result<Vec<PruneParams>> {
  let grid = s
    .split(',')
    .map(str::trim)
    .filter(|t| !t.is_empty())
    .map(|t| {
      let bad = || ToolError::Usage(format!("bad grid setting \"{t}\"; expected T:THM or F:THM"));
      let (skip, thm) = t.split_once(':').ok_or_else(bad)?;
      let qtskip = match skip {
        "T" | "t" => true,
        "F" | "f" => false,
        _ => return Err(bad()),
      };
      let thm: f64 = thm.parse().map_err(|_| bad())?;
      check_thm(thm)?;
      Ok(PruneParams { thm, qtskip })
    })
    .collect::<Result<Vec<_>>>()?;
  if grid.is_empty() {
    return Err(ToolError::Usage("sweep grid is empty".into()));
  }
  Ok(grid)
}

fn check_thm(thm: f64) -> Result<()> {
  if !(0.0..=1.0).contains(&thm) {
    return Err(ToolError::Usage(format!("thm {thm} outside [0,1]")));
  }
  Ok(())
}

fn check_qps(qps: &[u8]) -> Result<()> {
  if qps.is_empty() {
    return Err(ToolError::Usage("--qp needs at least one value".into()));
  }
  if let Some(q) = qps.iter().find(|q| **q > 51) {
    return Err(ToolError::Usage(format!("QP {q} outside [0,51]")));
  }
  Ok(())
}

/// Everything a clip-driven command needs, validated.
struct Clip {
  frames: Vec<Frame>,
  constraints: Constraints,
  cost: CostParams,
  gop: GopConfig,
}

impl ClipArgs {
  fn settings(&self) -> Result<(Constraints, CostParams, GopConfig)> {
    let constraints = Constraints::for_ctu(self.ctu_size)
      .map_err(|e| ToolError::Usage(format!("--ctu-size {}: {e}", self.ctu_size)))?;
    if self.search_range > 128 {
      return Err(ToolError::Usage(format!("--search-range {} above 128", self.search_range)));
    }
    if self.jobs == 0 {
      return Err(ToolError::Usage("--jobs must be at least 1".into()));
    }
    let structure = match self.gop_structure {
      GopKind::Hierarchical => GopStructure::Hierarchical,
      GopKind::LowDelay => GopStructure::LowDelay,
    };
    let gop = GopConfig::new(structure, self.gop).map_err(|e| ToolError::Usage(format!("--gop: {e}")))?;
    let cost = CostParams { search_range: self.search_range, ..CostParams::default() };
    Ok((constraints, cost, gop))
  }

  fn load(&self) -> Result<Clip> {
    let (constraints, cost, gop) = self.settings()?;
    let raw = match (self.width, self.height) {
      (Some(w), Some(h)) => Some((w, h)),
      (None, None) => None,
      _ => return Err(ToolError::Usage("--width and --height go together".into())),
    };
    let frames = load_video(&self.input, raw)?;
    fs::create_dir_all(&self.out).map_err(|e| ToolError::io(&self.out, e))?;
    Ok(Clip { frames, constraints, cost, gop })
  }
}

impl Clip {
  fn setup(&self) -> RunSetup<'_> {
    RunSetup { frames: &self.frames, constraints: self.constraints, cost: self.cost }
  }

  fn jobs(&self) -> Result<Vec<CtuJob>> {
    pipeline::ctu_jobs(&self.frames, &self.gop, self.constraints.ctu_size as usize)
  }
}

impl PredictorArgs {
  fn source(&self, c: &Constraints) -> Result<PredictorSource> {
    let choice = self.predictor.as_deref().ok_or_else(|| ToolError::Usage("this command needs --predictor".into()))?;
    let noise = NoiseParams { smoothing: self.noise_eps, depth_jitter: self.depth_jitter, seed: self.seed };
    noise.validate().map_err(|e| ToolError::Usage(e.to_string()))?;
    PredictorSource::parse(choice, OraclePredictor { noise }, c)
  }
}

#[derive(Serialize)]
struct Manifest<'a> {
  tool: &'static str,
  version: &'static str,
  argv: Vec<String>,
  config: &'a Cli,
}

/// Writes `manifest.json`: the command line verbatim plus the parsed
/// configuration with defaults filled in.
pub fn write_manifest(dir: &Path, cli: &Cli) -> Result<()> {
  fs::create_dir_all(dir).map_err(|e| ToolError::io(dir, e))?;
  let m = Manifest {
    tool: env!("CARGO_PKG_NAME"),
    version: env!("CARGO_PKG_VERSION"),
    argv: std::env::args().collect(),
    config: cli,
  };
  let path = dir.join("manifest.json");
  let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
  fs::write(&path, text + "\n").map_err(|e| ToolError::io(path, e))
}

pub fn run(cli: &Cli) -> Result<()> {
  match &cli.command {
    Command::ExtractMvf(a) => extract_mvf(cli, a),
    Command::Search(a) => search(cli, a),
    Command::Sweep(a) => sweep(cli, a),
    Command::DatasetGen(a) => dataset_gen(cli, a),
    Command::Eval(a) => eval(cli, a),
    Command::Bdrate(a) => bdrate(cli, a),
    Command::LossCheck(a) => loss_check(cli, a),
  }
}

fn extract_mvf(cli: &Cli, a: &ExtractArgs) -> Result<()> {
  if a.time_share {
    check_qps(&a.qp.qp)?;
  }
  let clip = a.clip.load()?;
  write_manifest(&a.clip.out, cli)?;
  let jobs = clip.jobs()?;
  let size = clip.constraints.ctu_size as usize;
  let range = clip.cost.search_range;
  let fields = pipeline::par_map(a.clip.jobs, &jobs, |j| {
    let t = Instant::now();
    let refs = RefPair::new(&clip.frames[j.l0 as usize], &clip.frames[j.l1 as usize]);
    let f = build_msmvf(&clip.frames[j.poc as usize], refs, j.origin, size, range)?;
    Ok((f, t.elapsed().as_secs_f64()))
  })?;
  let mut rows = Vec::new();
  for (j, (f, _)) in jobs.iter().zip(&fields) {
    for (scale, grid) in f.grids().iter().enumerate() {
      for (cell, v) in grid.iter().enumerate() {
        rows.push(MvfRow {
          poc: j.poc,
          ctu_x: j.key.ctu_x,
          ctu_y: j.key.ctu_y,
          scale,
          cell,
          l0_dx: v[0],
          l0_dy: v[1],
          l0_sad: v[2],
          l1_dx: v[3],
          l1_dy: v[4],
          l1_sad: v[5],
        });
      }
    }
  }
  report::save_csv(&a.clip.out.join("msmvf.csv"), &rows, report::MVF_HEADER)?;
  let extract: f64 = fields.iter().map(|(_, t)| t).sum();
  println!("ctus: {}", jobs.len());
  println!("extraction_s: {extract:.6}");
  if a.time_share && !jobs.is_empty() {
    let setup = clip.setup();
    let rows = pipeline::run_search(&setup, &jobs, &a.qp.qp, SearchMode::Exhaustive, None, a.clip.jobs)?;
    let search: f64 = rows.iter().map(|r| r.wall_time).sum::<f64>() / a.qp.qp.len() as f64;
    println!("search_s_per_qp: {search:.6}");
    println!("extraction_share_pct: {:.3}", extract / (extract + search) * 100.0);
  }
  Ok(())
}

fn search(cli: &Cli, a: &SearchArgs) -> Result<()> {
  check_qps(&a.qp.qp)?;
  check_thm(a.thm)?;
  let (c, _, _) = a.clip.settings()?;
  let mode = match a.mode {
    ModeArg::Exhaustive => SearchMode::Exhaustive,
    ModeArg::Pruned => SearchMode::Pruned(PruneParams { thm: a.thm, qtskip: a.qtskip }),
  };
  let src = match mode {
    SearchMode::Pruned(_) => Some(a.predictor.source(&c)?),
    SearchMode::Exhaustive => None,
  };
  let clip = a.clip.load()?;
  write_manifest(&a.clip.out, cli)?;
  let jobs = clip.jobs()?;
  let rows = pipeline::run_search(&clip.setup(), &jobs, &a.qp.qp, mode, src.as_ref(), a.clip.jobs)?;
  report::save_csv(&a.clip.out.join("search.csv"), &rows, report::SEARCH_HEADER)?;
  let fallbacks = rows.iter().filter(|r| r.fallback).count();
  println!("searches: {}", rows.len());
  println!("total_cost: {:.6}", rows.iter().map(|r| r.cost).sum::<f64>());
  println!("nodes_visited: {}", rows.iter().map(|r| r.nodes_visited).sum::<u64>());
  println!("fallbacks: {fallbacks}");
  Ok(())
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<()> {
  check_qps(&a.qp.qp)?;
  let grid = parse_grid(&a.grid)?;
  let (c, _, _) = a.clip.settings()?;
  let src = a.predictor.source(&c)?;
  let clip = a.clip.load()?;
  write_manifest(&a.clip.out, cli)?;
  let jobs = clip.jobs()?;
  let units = pipeline::run_sweep(&clip.setup(), &jobs, &a.qp.qp, &grid, &src, a.clip.jobs)?;
  let rows = pipeline::tradeoff(&units, &grid, &a.qp.qp)?;
  report::save_csv(&a.clip.out.join("tradeoff.csv"), &rows, report::TRADEOFF_HEADER)?;
  let log: Vec<_> = units.iter().flat_map(|u| std::iter::once(u.anchor.clone()).chain(u.settings.iter().cloned())).collect();
  report::save_csv(&a.clip.out.join("sweep_ctus.csv"), &log, report::SEARCH_HEADER)?;
  for r in &rows {
    println!(
      "{}:{} cost +{:.3}% nodes -{:.2}% ts {:.2}%",
      if r.qtskip { "T" } else { "F" },
      r.thm,
      r.cost_increase_pct,
      r.nodes_saved_pct,
      r.ts_pct
    );
  }
  Ok(())
}

fn dataset_gen(cli: &Cli, a: &DatasetArgs) -> Result<()> {
  check_qps(&a.qp.qp)?;
  let clip = a.clip.load()?;
  write_manifest(&a.clip.out, cli)?;
  if clip.frames.len() < 2 {
    return Err(ToolError::format(
      a.clip.input.display().to_string(),
      format!("{} frame(s): dataset generation needs at least one inter frame", clip.frames.len()),
    ));
  }
  let jobs = clip.jobs()?;
  let cfg = GenerationConfig { gop: clip.gop, constraints: clip.constraints, cost: clip.cost };
  let samples = pipeline::par_map(a.clip.jobs, &jobs, |j| {
    Ok(ctu_samples(&clip.frames, (j.poc, j.l0, j.l1), j.origin, &a.qp.qp, &cfg)?)
  })?;
  let records: Vec<_> = samples.into_iter().flatten().map(|s| s.record).collect();
  let path = a.clip.out.join("dataset.mvfi");
  mvfi::save_samples(&path, &clip.constraints, &records)?;
  let (w, h) = clip.frames.first().map_or((0, 0), |f| (f.width, f.height));
  let sidecar = Sidecar {
    format: "MVFI".into(),
    version: mvfi::VERSION,
    ctu_size: clip.constraints.ctu_size,
    record_count: records.len(),
    record_bytes: mvfi::record_bytes(clip.constraints.ctu_size),
    field_order: mvfi::FIELD_ORDER.iter().map(|s| s.to_string()).collect(),
    mt_label_order: ["VTT", "VBT", "NS", "HBT", "HTT"].iter().map(|s| s.to_string()).collect(),
    input: a.clip.input.display().to_string(),
    frames: clip.frames.len(),
    width: w,
    height: h,
    qps: a.qp.qp.clone(),
    gop_structure: mvfi::gop_name(clip.gop.structure).into(),
    gop_size: clip.gop.gop_size,
    constraints: (&clip.constraints).into(),
    cost: (&clip.cost).into(),
  };
  mvfi::save_sidecar(&a.clip.out.join("dataset.json"), &sidecar)?;
  println!("records: {}", records.len());
  Ok(())
}

fn eval(cli: &Cli, a: &EvalArgs) -> Result<()> {
  check_qps(&a.qp.qp)?;
  if a.thm.is_empty() {
    return Err(ToolError::Usage("--thm needs at least one value".into()));
  }
  for t in &a.thm {
    check_thm(*t)?;
  }
  let (c, _, _) = a.clip.settings()?;
  let src = a.predictor.source(&c)?;
  let clip = a.clip.load()?;
  write_manifest(&a.clip.out, cli)?;
  let jobs = clip.jobs()?;
  let log = pipeline::run_eval(&clip.setup(), &jobs, &a.qp.qp, &src, a.clip.jobs)?;
  let confusion: Vec<ConfusionRow> = if log.is_empty() {
    Vec::new()
  } else {
    skipmt_confusion(&log)?.iter().enumerate().map(|(d, t)| ConfusionRow::new(d as u8, t)).collect()
  };
  report::save_csv(&a.clip.out.join("confusion.csv"), &confusion, report::CONFUSION_HEADER)?;
  let acc: Vec<AccuracyCsvRow> = candsplit_accuracy(&log, &a.thm, a.qtskip).iter().map(Into::into).collect();
  report::save_csv(&a.clip.out.join("accuracy.csv"), &acc, report::ACCURACY_HEADER)?;
  println!("decisions: {}", log.records.len());
  Ok(())
}

fn bdrate(cli: &Cli, a: &BdrateArgs) -> Result<()> {
  let anchor = report::load_rd_points(&a.anchor)?;
  let test = report::load_rd_points(&a.test)?;
  let v = bd_rate(&anchor, &test)?;
  println!("bd_rate_pct: {v:.6}");
  if let Some(out) = &a.out {
    write_manifest(out, cli)?;
    report::save_csv(&out.join("bdrate.csv"), &[(v,)], &["bd_rate_pct"])?;
  }
  Ok(())
}

#[derive(Serialize)]
struct ParityRow<'a> {
  name: &'a str,
  expected: f64,
  computed: f64,
  abs_err: f64,
}

fn loss_check(cli: &Cli, a: &LossCheckArgs) -> Result<()> {
  if !(a.tol >= 0.0) {
    return Err(ToolError::Usage(format!("--tol {} must be non-negative", a.tol)));
  }
  let file = parity::load_parity(&a.input)?;
  let outcomes = parity::evaluate(&file, &a.input.display().to_string())?;
  if let Some(out) = &a.out {
    write_manifest(out, cli)?;
    let rows: Vec<_> = outcomes
      .iter()
      .map(|o| ParityRow { name: &o.name, expected: o.expected, computed: o.computed, abs_err: o.error() })
      .collect();
    report::save_csv(&out.join("loss_check.csv"), &rows, &["name", "expected", "computed", "abs_err"])?;
  }
  let worst = outcomes.iter().map(|o| o.error()).fold(0.0, f64::max);
  println!("cases: {}", outcomes.len());
  println!("max_abs_err: {worst:.3e}");
  parity::check(&outcomes, a.tol)
}
