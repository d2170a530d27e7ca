//! "MVFP" prediction files: per-CTU QT depth maps and MT class
//! probabilities, little-endian.
//!
//! ```text
//! magic "MVFP" | version u16 | ctu_size u16 | count u32
//! count x { poc u32 | ctu_x u16 | ctu_y u16
//!           | qt f32 x (ctu/8)^2 | 3 x (ctu/4)^2 x 5 f32 (VTT, VBT, NS, HBT, HTT) }
//! ```
//!
//! `ctu_x`/`ctu_y` are CTU grid positions, not pixels.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use qtmt_core::maps::{MT_CELL, QT_CELL};
use qtmt_core::partition::{MT_CLASSES, MT_LEVELS};
use qtmt_core::predictor::{CtuKey, Predictor};
use qtmt_core::{Constraints, Grid, LabelMaps, Prediction};

use crate::error::{Result, ToolError};

pub const MAGIC: &[u8; 4] = b"MVFP";
pub const VERSION: u16 = 1;
/// Probability rows read from a file must sum to one within this.
pub const FILE_ROW_SUM_TOLERANCE: f64 = 1e-3;

pub type PredictionSet = BTreeMap<CtuKey, Prediction>;

fn dims(ctu_size: u32) -> (usize, usize) {
  ((ctu_size / QT_CELL) as usize, (ctu_size / MT_CELL) as usize)
}

pub fn record_bytes(ctu_size: u32) -> usize {
  let (q, m) = dims(ctu_size);
  8 + 4 * (q * q + MT_LEVELS * m * m * MT_CLASSES)
}

/// Writes `preds` in key order. Every prediction must match `ctu_size`.
pub fn write_predictions<W: Write>(mut w: W, ctu_size: u32, preds: &PredictionSet) -> Result<()> {
  let c = Constraints::for_ctu(ctu_size)?;
  let count = u32::try_from(preds.len()).map_err(|_| ToolError::Usage("too many predictions".into()))?;
  let io = |e| ToolError::io("<prediction output>", e);
  w.write_all(MAGIC).map_err(io)?;
  w.write_u16::<LE>(VERSION).map_err(io)?;
  w.write_u16::<LE>(ctu_size as u16).map_err(io)?;
  w.write_u32::<LE>(count).map_err(io)?;
  for (key, p) in preds {
    p.check_dims(&c)?;
    w.write_u32::<LE>(key.poc).map_err(io)?;
    w.write_u16::<LE>(key.ctu_x).map_err(io)?;
    w.write_u16::<LE>(key.ctu_y).map_err(io)?;
    for d in p.qt_depth.cells() {
      w.write_f32::<LE>(*d).map_err(io)?;
    }
    for g in &p.mt_probs {
      for row in g.cells() {
        for v in row {
          w.write_f32::<LE>(*v).map_err(io)?;
        }
      }
    }
  }
  w.flush().map_err(io)
}

/// Parses a prediction file. Returns the CTU size and the predictions.
pub fn read_predictions<R: Read>(mut r: R, name: &str) -> Result<(u32, PredictionSet)> {
  let fmt = |msg: String| ToolError::format(name, msg);
  let mut head = [0u8; 12];
  r.read_exact(&mut head).map_err(|_| fmt("truncated header".into()))?;
  if &head[..4] != MAGIC {
    return Err(fmt(format!("bad magic {:?}, expected \"MVFP\"", String::from_utf8_lossy(&head[..4]))));
  }
  let mut h = &head[4..];
  let version = h.read_u16::<LE>().unwrap();
  if version != VERSION {
    return Err(fmt(format!("unsupported version {version}")));
  }
  let ctu_size = h.read_u16::<LE>().unwrap() as u32;
  let c = Constraints::for_ctu(ctu_size).map_err(|e| fmt(format!("bad ctu_size {ctu_size}: {e}")))?;
  let count = h.read_u32::<LE>().unwrap();
  let (q, m) = dims(c.ctu_size);
  let mut buf = vec![0u8; record_bytes(ctu_size)];
  let mut out = PredictionSet::new();
  for i in 0..count {
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
      ErrorKind::UnexpectedEof => fmt(format!("truncated record {i} of {count}")),
      _ => fmt(format!("record {i}: {e}")),
    })?;
    let mut b = &buf[..];
    let key = CtuKey {
      poc: b.read_u32::<LE>().unwrap(),
      ctu_x: b.read_u16::<LE>().unwrap(),
      ctu_y: b.read_u16::<LE>().unwrap(),
    };
    let qt: Vec<f32> = (0..q * q).map(|_| b.read_f32::<LE>().unwrap()).collect();
    let mt_probs = std::array::from_fn(|_| {
      let rows = (0..m * m)
        .map(|_| std::array::from_fn(|_| b.read_f32::<LE>().unwrap()))
        .collect::<Vec<[f32; MT_CLASSES]>>();
      Grid::from_cells(m, rows).expect("row count matches grid")
    });
    let p = Prediction { qt_depth: Grid::from_cells(q, qt).expect("cell count matches grid"), mt_probs };
    let at = format!("record {i} (poc {}, ctu {},{})", key.poc, key.ctu_x, key.ctu_y);
    p.validate(FILE_ROW_SUM_TOLERANCE).map_err(|e| fmt(format!("{at}: {e}")))?;
    if out.insert(key, p).is_some() {
      return Err(fmt(format!("{at}: duplicate key")));
    }
  }
  let mut extra = [0u8; 1];
  if r.read(&mut extra).map_err(|e| fmt(e.to_string()))? != 0 {
    return Err(fmt(format!("trailing bytes after {count} records")));
  }
  Ok((ctu_size, out))
}

pub fn save_predictions(path: &Path, ctu_size: u32, preds: &PredictionSet) -> Result<()> {
  let f = File::create(path).map_err(|e| ToolError::io(path, e))?;
  write_predictions(BufWriter::new(f), ctu_size, preds)
}

pub fn load_predictions(path: &Path) -> Result<(u32, PredictionSet)> {
  let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
  read_predictions(BufReader::new(f), &path.display().to_string())
}

/// Predictions served from a loaded file; CTUs without a record get
/// `None` and fall back to the exhaustive search.
#[derive(Debug, Clone, Default)]
pub struct FilePredictor {
  pub preds: PredictionSet,
}

impl Predictor for FilePredictor {
  fn predict(&self, key: CtuKey, _truth: &LabelMaps) -> Option<Prediction> {
    self.preds.get(&key).cloned()
  }
}
