//! Headered CSV outputs.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use qtmt_core::metrics::{prf1, AccuracyRow, ConfusionTable};
use qtmt_core::LabelMaps;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};

/// One CTU search in a search or sweep log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRow {
  pub poc: u32,
  pub ctu_x: u16,
  pub ctu_y: u16,
  pub qp: u8,
  pub mode: String,
  pub thm: Option<f64>,
  pub qtskip: Option<bool>,
  pub cost: f64,
  pub nodes_visited: u64,
  pub leaf_costs: u64,
  pub splits_pruned: u64,
  pub wall_time: f64,
  /// Pruned search requested but no prediction was available.
  pub fallback: bool,
  pub qt_map: String,
  pub mt0: String,
  pub mt1: String,
  pub mt2: String,
}

/// Maps as digit strings in raster order: QT depths and MT labels.
pub fn map_strings(maps: &LabelMaps) -> [String; 4] {
  let mt = |i: usize| -> String {
    maps.mt[i].cells().iter().map(|s| char::from(b'0' + s.mt_label().expect("MT class"))).collect()
  };
  [maps.qt.cells().iter().map(|d| char::from(b'0' + d)).collect(), mt(0), mt(1), mt(2)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
  pub thm: f64,
  pub qtskip: bool,
  pub cost_increase_pct: f64,
  pub nodes_saved_pct: f64,
  pub ts_pct: f64,
  pub acc_mt0: Option<f64>,
  pub acc_mt1: Option<f64>,
  pub acc_mt2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionRow {
  pub depth: u8,
  pub tp: f64,
  #[serde(rename = "fn")]
  pub fn_: f64,
  pub tn: f64,
  pub fp: f64,
  /// Empty when the ratio is undefined for this depth.
  pub precision: Option<f64>,
  pub recall: Option<f64>,
  pub f1: Option<f64>,
}

impl ConfusionRow {
  pub fn new(depth: u8, t: &ConfusionTable) -> Self {
    let m = prf1(t).ok();
    ConfusionRow {
      depth,
      tp: t.tp,
      fn_: t.fn_,
      tn: t.tn,
      fp: t.fp,
      precision: m.map(|m| m.precision),
      recall: m.map(|m| m.recall),
      f1: m.map(|m| m.f1),
    }
  }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCsvRow {
  pub thm: f64,
  pub acc_mt0: Option<f64>,
  pub acc_mt1: Option<f64>,
  pub acc_mt2: Option<f64>,
}

impl From<&AccuracyRow> for AccuracyCsvRow {
  fn from(r: &AccuracyRow) -> Self {
    AccuracyCsvRow { thm: r.thm, acc_mt0: r.levels[0], acc_mt1: r.levels[1], acc_mt2: r.levels[2] }
  }
}

/// One MSMVF value in an extraction dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MvfRow {
  pub poc: u32,
  pub ctu_x: u16,
  pub ctu_y: u16,
  pub scale: usize,
  pub cell: usize,
  pub l0_dx: f32,
  pub l0_dy: f32,
  pub l0_sad: f32,
  pub l1_dx: f32,
  pub l1_dy: f32,
  pub l1_sad: f32,
}

/// Writes `rows` with a header line; an empty slice still gets the header.
pub fn write_csv<W: Write, T: Serialize>(w: W, rows: &[T], header: &[&str]) -> Result<()> {
  let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
  wr.write_record(header)?;
  for r in rows {
    wr.serialize(r)?;
  }
  wr.flush().map_err(|e| ToolError::io("<csv output>", e))
}

pub fn save_csv<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
  let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
  write_csv(f, rows, header).map_err(|e| match e {
    ToolError::Io { source, .. } => ToolError::io(path, source),
    e => e,
  })
}

pub const SEARCH_HEADER: &[&str] = &[
  "poc", "ctu_x", "ctu_y", "qp", "mode", "thm", "qtskip", "cost", "nodes_visited", "leaf_costs",
  "splits_pruned", "wall_time", "fallback", "qt_map", "mt0", "mt1", "mt2",
];
pub const TRADEOFF_HEADER: &[&str] =
  &["thm", "qtskip", "cost_increase_pct", "nodes_saved_pct", "ts_pct", "acc_mt0", "acc_mt1", "acc_mt2"];
pub const CONFUSION_HEADER: &[&str] = &["depth", "tp", "fn", "tn", "fp", "precision", "recall", "f1"];
pub const ACCURACY_HEADER: &[&str] = &["thm", "acc_mt0", "acc_mt1", "acc_mt2"];
pub const MVF_HEADER: &[&str] =
  &["poc", "ctu_x", "ctu_y", "scale", "cell", "l0_dx", "l0_dy", "l0_sad", "l1_dx", "l1_dy", "l1_sad"];

/// Rate-distortion point as read from a bdrate input CSV
/// (`bitrate,psnr` plus any other columns, e.g. `qp`).
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct RdCsvRow {
  pub bitrate: f64,
  pub psnr: f64,
}

pub fn load_rd_points(path: &Path) -> Result<Vec<qtmt_core::metrics::RdPoint>> {
  let ctx = path.display().to_string();
  let mut rd = csv::Reader::from_path(path).map_err(|e| ToolError::format(&ctx, e.to_string()))?;
  let headers = rd.headers().map_err(|e| ToolError::format(&ctx, e.to_string()))?.clone();
  for col in ["bitrate", "psnr"] {
    if !headers.iter().any(|h| h == col) {
      return Err(ToolError::format(&ctx, format!("missing column \"{col}\"")));
    }
  }
  rd.deserialize::<RdCsvRow>()
    .enumerate()
    .map(|(i, r)| {
      r.map(|r| qtmt_core::metrics::RdPoint::new(r.bitrate, r.psnr))
        .map_err(|e| ToolError::format(&ctx, format!("row {}: {e}", i + 1)))
    })
    .collect()
}
