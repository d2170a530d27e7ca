//! "MVFI" dataset files: fixed-size CTU sample records, little-endian,
//! plus a JSON sidecar describing how they were generated.
//!
//! ```text
//! magic "MVFI" | version u16 | ctu_size u16 | count u32
//! count x { luma u8 x n^2 | residual i16 x n^2 | msmvf f32 x 8184
//!           | qp u8 | tid u8 | qt u8 x (n/8)^2 | mt u8 x 3 x (n/4)^2 }
//! ```
//!
//! The motion field is stored scale by scale (2x2 first), cells in raster
//! order, six channels each: L0 dx, dy, sad, L1 dx, dy, sad.

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use qtmt_core::dataset::{GopStructure, SampleRecord};
use qtmt_core::maps::{MT_CELL, QT_CELL};
use qtmt_core::motion::{MVF_CHANNELS, MVF_SCALES};
use qtmt_core::partition::MT_LEVELS;
use qtmt_core::rdo::CostParams;
use qtmt_core::{Constraints, Grid, LabelMaps, MsMvField, SplitType};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};

pub const MAGIC: &[u8; 4] = b"MVFI";
pub const VERSION: u16 = 1;
pub const FIELD_ORDER: [&str; 7] = ["luma", "residual", "msmvf", "qp", "tid", "qt_map", "mt_maps"];

pub fn record_bytes(ctu_size: u32) -> usize {
  let n = ctu_size as usize;
  let (q, m) = (n / QT_CELL as usize, n / MT_CELL as usize);
  n * n * 3 + MsMvField::value_count() * 4 + 2 + q * q + MT_LEVELS * m * m
}

fn write_record<W: Write>(w: &mut W, r: &SampleRecord) -> std::io::Result<()> {
  w.write_all(&r.luma)?;
  for v in &r.residual {
    w.write_i16::<LE>(*v)?;
  }
  for cell in r.msmvf.grids().iter().flatten() {
    for v in cell {
      w.write_f32::<LE>(*v)?;
    }
  }
  w.write_u8(r.qp)?;
  w.write_u8(r.tid)?;
  w.write_all(r.labels.qt.cells())?;
  for g in &r.labels.mt {
    for s in g.cells() {
      w.write_u8(s.mt_label().expect("MT class"))?;
    }
  }
  Ok(())
}

/// Writes records in the given order after validating each against `c`.
pub fn write_samples<W: Write>(mut w: W, c: &Constraints, records: &[SampleRecord]) -> Result<()> {
  for (i, r) in records.iter().enumerate() {
    r.validate(c).map_err(|e| ToolError::format("dataset output", format!("record {i}: {e}")))?;
  }
  let count = u32::try_from(records.len()).map_err(|_| ToolError::Usage("too many records".into()))?;
  let io = |e| ToolError::io("<dataset output>", e);
  w.write_all(MAGIC).map_err(io)?;
  w.write_u16::<LE>(VERSION).map_err(io)?;
  w.write_u16::<LE>(c.ctu_size as u16).map_err(io)?;
  w.write_u32::<LE>(count).map_err(io)?;
  for r in records {
    write_record(&mut w, r).map_err(io)?;
  }
  w.flush().map_err(io)
}

fn parse_record(buf: &[u8], c: &Constraints) -> std::result::Result<SampleRecord, String> {
  let n = c.ctu_size as usize;
  let (q, m) = (n / QT_CELL as usize, n / MT_CELL as usize);
  let mut b = buf;
  let (luma, rest) = b.split_at(n * n);
  b = rest;
  let residual = (0..n * n).map(|_| b.read_i16::<LE>().unwrap()).collect();
  let grids = std::array::from_fn::<_, MVF_SCALES, _>(|k| {
    let dim = MsMvField::grid_dim(k);
    (0..dim * dim)
      .map(|_| std::array::from_fn::<f32, MVF_CHANNELS, _>(|_| b.read_f32::<LE>().unwrap()))
      .collect::<Vec<_>>()
  });
  let msmvf = MsMvField::from_grids(grids).map_err(|e| e.to_string())?;
  let qp = b.read_u8().unwrap();
  let tid = b.read_u8().unwrap();
  let (qt, rest) = b.split_at(q * q);
  b = rest;
  if let Some(d) = qt.iter().find(|d| **d > 4) {
    return Err(format!("QT depth {d} outside [0,4]"));
  }
  let mut mt = Vec::with_capacity(MT_LEVELS);
  for level in 0..MT_LEVELS {
    let (cells, rest) = b.split_at(m * m);
    b = rest;
    let labels = cells
      .iter()
      .map(|l| SplitType::from_mt_label(*l).ok_or_else(|| format!("MT{level} label {l} outside [0,4]")))
      .collect::<std::result::Result<Vec<_>, _>>()?;
    mt.push(Grid::from_cells(m, labels).expect("cell count matches grid"));
  }
  let labels = LabelMaps {
    qt: Grid::from_cells(q, qt.to_vec()).expect("cell count matches grid"),
    mt: mt.try_into().expect("three levels"),
  };
  let record = SampleRecord { ctu_size: c.ctu_size, luma: luma.to_vec(), residual, msmvf, qp, tid, labels };
  record.validate(c).map_err(|e| e.to_string())?;
  Ok(record)
}

/// Reads every record, checking labels and map consistency.
pub fn read_samples<R: Read>(mut r: R, name: &str) -> Result<(Constraints, Vec<SampleRecord>)> {
  let fmt = |msg: String| ToolError::format(name, msg);
  let mut head = [0u8; 12];
  r.read_exact(&mut head).map_err(|_| fmt("truncated header".into()))?;
  if &head[..4] != MAGIC {
    return Err(fmt(format!("bad magic {:?}, expected \"MVFI\"", String::from_utf8_lossy(&head[..4]))));
  }
  let mut h = &head[4..];
  let version = h.read_u16::<LE>().unwrap();
  if version != VERSION {
    return Err(fmt(format!("unsupported version {version}")));
  }
  let ctu_size = h.read_u16::<LE>().unwrap() as u32;
  let c = Constraints::for_ctu(ctu_size).map_err(|e| fmt(format!("bad ctu_size {ctu_size}: {e}")))?;
  let count = h.read_u32::<LE>().unwrap();
  let mut buf = vec![0u8; record_bytes(ctu_size)];
  let mut out = Vec::new();
  for i in 0..count {
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
      ErrorKind::UnexpectedEof => fmt(format!("truncated record {i} of {count}")),
      _ => fmt(format!("record {i}: {e}")),
    })?;
    out.push(parse_record(&buf, &c).map_err(|e| fmt(format!("record {i}: {e}")))?);
  }
  let mut extra = [0u8; 1];
  if r.read(&mut extra).map_err(|e| fmt(e.to_string()))? != 0 {
    return Err(fmt(format!("trailing bytes after {count} records")));
  }
  Ok((c, out))
}

pub fn save_samples(path: &Path, c: &Constraints, records: &[SampleRecord]) -> Result<()> {
  let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
  write_samples(BufWriter::new(f), c, records)
}

pub fn load_samples(path: &Path) -> Result<(Constraints, Vec<SampleRecord>)> {
  let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
  read_samples(BufReader::new(f), &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintsInfo {
  pub ctu_size: u32,
  pub max_qt_depth: u8,
  pub max_mt_depth: u8,
  pub min_cu_dim: u32,
  pub max_mt_cu_dim: u32,
  pub min_qt_leaf_dim: u32,
}

impl From<&Constraints> for ConstraintsInfo {
  fn from(c: &Constraints) -> Self {
    ConstraintsInfo {
      ctu_size: c.ctu_size,
      max_qt_depth: c.max_qt_depth,
      max_mt_depth: c.max_mt_depth,
      min_cu_dim: c.min_cu_dim,
      max_mt_cu_dim: c.max_mt_cu_dim,
      min_qt_leaf_dim: c.min_qt_leaf_dim,
    }
  }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostInfo {
  /// NS, QT, HBT, VBT, HTT, VTT.
  pub split_bits: [f64; 6],
  pub header_bits: f64,
  pub mv_bits_scale: f64,
  pub residual_bits_weight: f64,
  pub search_range: u32,
}

impl From<&CostParams> for CostInfo {
  fn from(p: &CostParams) -> Self {
    CostInfo {
      split_bits: p.split_bits,
      header_bits: p.header_bits,
      mv_bits_scale: p.mv_bits_scale,
      residual_bits_weight: p.residual_bits_weight,
      search_range: p.search_range,
    }
  }
}

/// JSON sidecar written next to a dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
  pub format: String,
  pub version: u16,
  pub ctu_size: u32,
  pub record_count: usize,
  pub record_bytes: usize,
  pub field_order: Vec<String>,
  /// VTT, VBT, NS, HBT, HTT.
  pub mt_label_order: Vec<String>,
  pub input: String,
  pub frames: usize,
  pub width: usize,
  pub height: usize,
  pub qps: Vec<u8>,
  pub gop_structure: String,
  pub gop_size: u32,
  pub constraints: ConstraintsInfo,
  pub cost: CostInfo,
}

pub fn gop_name(s: GopStructure) -> &'static str {
  match s {
    GopStructure::LowDelay => "low-delay",
    GopStructure::Hierarchical => "hierarchical",
  }
}

pub fn save_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
  let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
  serde_json::to_writer_pretty(BufWriter::new(f), sidecar).map_err(|e| ToolError::format(path.display().to_string(), e.to_string()))
}

pub fn load_sidecar(path: &Path) -> Result<Sidecar> {
  let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
  serde_json::from_reader(BufReader::new(f)).map_err(|e| ToolError::format(path.display().to_string(), e.to_string()))
}
