//! Integer-pixel block motion estimation, residual synthesis and the
//! multi-scale motion vector field fed to the split predictor.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A luma picture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
  pub width: usize,
  pub height: usize,
  pub poc: u32,
  luma: Vec<u8>,
}

impl Frame {
  pub fn new(width: usize, height: usize, poc: u32, luma: Vec<u8>) -> Result<Self> {
    if luma.len() != width * height {
      return Err(Error::DimensionMismatch { what: "luma plane", expected: width * height, found: luma.len() });
    }
    Ok(Frame { width, height, poc, luma })
  }

  #[inline]
  pub fn luma(&self) -> &[u8] {
    &self.luma
  }

  #[inline]
  pub fn at(&self, x: usize, y: usize) -> u8 {
    self.luma[y * self.width + x]
  }

  /// Sample with coordinates clamped to the picture.
  #[inline]
  pub fn at_clamped(&self, x: isize, y: isize) -> u8 {
    let x = x.clamp(0, self.width as isize - 1) as usize;
    let y = y.clamp(0, self.height as isize - 1) as usize;
    self.luma[y * self.width + x]
  }

  /// Origins of every CTU lying fully inside the picture, in raster order.
  pub fn full_ctus(&self, ctu_size: usize) -> impl Iterator<Item = (usize, usize)> {
    let cols = self.width / ctu_size;
    let rows = self.height / ctu_size;
    (0..rows).flat_map(move |r| (0..cols).map(move |c| (c * ctu_size, r * ctu_size)))
  }

  fn check_ctu(&self, x: usize, y: usize, size: usize) -> Result<()> {
    if x + size > self.width || y + size > self.height {
      return Err(Error::PartialCtu { x, y });
    }
    Ok(())
  }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
  pub x: usize,
  pub y: usize,
  pub width: usize,
  pub height: usize,
}

impl Rect {
  pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
    Rect { x, y, width, height }
  }

  #[inline]
  pub fn area(&self) -> usize {
    self.width * self.height
  }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MotionVector {
  pub dx: i32,
  pub dy: i32,
  pub sad: u32,
}

impl MotionVector {
  /// Ordering key: lowest SAD, then shortest vector, then smaller dy, dx.
  #[inline]
  fn key(&self) -> (u32, i32, i32, i32) {
    (self.sad, self.dx.abs() + self.dy.abs(), self.dy, self.dx)
  }

  #[inline]
  fn better_than(&self, other: &MotionVector) -> bool {
    self.key() < other.key()
  }
}

/// Reference pictures for one inter frame: nearest past (L0) and nearest
/// future (L1). When no future reference exists L1 repeats L0.
#[derive(Debug, Clone, Copy)]
pub struct RefPair<'a> {
  pub l0: &'a Frame,
  pub l1: &'a Frame,
}

impl<'a> RefPair<'a> {
  pub fn new(l0: &'a Frame, l1: &'a Frame) -> Self {
    RefPair { l0, l1 }
  }

  pub fn single(l0: &'a Frame) -> Self {
    RefPair { l0, l1: l0 }
  }

  pub fn lists(&self) -> [&'a Frame; 2] {
    [self.l0, self.l1]
  }
}

fn check_rect(cur: &Frame, rect: &Rect) -> Result<()> {
  if rect.width == 0
    || rect.height == 0
    || rect.x + rect.width > cur.width
    || rect.y + rect.height > cur.height
  {
    return Err(Error::RectOutOfBounds(format!(
      "{}x{} at ({},{}) in {}x{} frame",
      rect.width, rect.height, rect.x, rect.y, cur.width, cur.height
    )));
  }
  Ok(())
}

/// SAD between `rect` of `cur` and the same rectangle displaced by
/// `(dx, dy)` in `reference`, clamping reference coordinates.
pub fn sad_at(cur: &Frame, reference: &Frame, rect: &Rect, dx: i32, dy: i32) -> u32 {
  let x0 = rect.x as isize + dx as isize;
  let y0 = rect.y as isize + dy as isize;
  let inside = x0 >= 0
    && y0 >= 0
    && (x0 as usize + rect.width) <= reference.width
    && (y0 as usize + rect.height) <= reference.height;
  let mut sad = 0u32;
  for r in 0..rect.height {
    let row = &cur.luma[(rect.y + r) * cur.width + rect.x..][..rect.width];
    if inside {
      let off = (y0 as usize + r) * reference.width + x0 as usize;
      let rrow = &reference.luma[off..off + rect.width];
      sad += row.iter().zip(rrow).map(|(a, b)| a.abs_diff(*b) as u32).sum::<u32>();
    } else {
      for (c, a) in row.iter().enumerate() {
        let b = reference.at_clamped(x0 + c as isize, y0 + r as isize);
        sad += a.abs_diff(b) as u32;
      }
    }
  }
  sad
}

/// Exhaustive integer-pixel search over `[-range, range]^2`.
pub fn block_me(cur: &Frame, reference: &Frame, rect: &Rect, range: u32) -> Result<MotionVector> {
  check_rect(cur, rect)?;
  let r = range as i32;
  let mut best: Option<MotionVector> = None;
  for dy in -r..=r {
    for dx in -r..=r {
      let mv = MotionVector { dx, dy, sad: sad_at(cur, reference, rect, dx, dy) };
      if best.as_ref().is_none_or(|b| mv.better_than(b)) {
        best = Some(mv);
      }
    }
  }
  Ok(best.expect("search window is never empty"))
}

/// Precomputed SADs of every `unit`x`unit` block of one CTU against one
/// reference, for every displacement in the search window. Any rectangle
/// aligned to `unit` can then be searched with one summed-area lookup per
/// displacement; results equal [`block_me`] on the same rectangle.
pub struct MotionSearch {
  origin: (usize, usize),
  unit: usize,
  grid: usize,
  range: i32,
  tables: Vec<u32>,
}

impl MotionSearch {
  pub fn new(
    cur: &Frame,
    reference: &Frame,
    origin: (usize, usize),
    ctu_size: usize,
    unit: usize,
    range: u32,
  ) -> Result<Self> {
    cur.check_ctu(origin.0, origin.1, ctu_size)?;
    if unit == 0 || ctu_size % unit != 0 {
      return Err(Error::InvalidParameter(format!("unit {unit} does not divide CTU {ctu_size}")));
    }
    let grid = ctu_size / unit;
    let stride = (grid + 1) * (grid + 1);
    let r = range as i32;
    let side = (2 * r + 1) as usize;
    let mut tables = vec![0u32; side * side * stride];
    let mut block = vec![0u32; grid * grid];
    for (i, table) in tables.chunks_exact_mut(stride).enumerate() {
      let dy = (i / side) as i32 - r;
      let dx = (i % side) as i32 - r;
      for by in 0..grid {
        for bx in 0..grid {
          let rect = Rect::new(origin.0 + bx * unit, origin.1 + by * unit, unit, unit);
          block[by * grid + bx] = sad_at(cur, reference, &rect, dx, dy);
        }
      }
      for by in 0..grid {
        let mut row = 0u32;
        for bx in 0..grid {
          row += block[by * grid + bx];
          table[(by + 1) * (grid + 1) + bx + 1] = table[by * (grid + 1) + bx + 1] + row;
        }
      }
    }
    Ok(MotionSearch { origin, unit, grid, range: r, tables })
  }

  pub fn range(&self) -> u32 {
    self.range as u32
  }

  /// Best vector for a rectangle given in CTU-local pixels.
  pub fn best(&self, x: usize, y: usize, width: usize, height: usize) -> MotionVector {
    debug_assert!(x % self.unit == 0 && y % self.unit == 0);
    debug_assert!(width % self.unit == 0 && height % self.unit == 0);
    let (c0, r0) = (x / self.unit, y / self.unit);
    let (c1, r1) = (c0 + width / self.unit, r0 + height / self.unit);
    let g = self.grid + 1;
    let stride = g * g;
    let side = (2 * self.range + 1) as usize;
    let mut best = MotionVector { dx: 0, dy: 0, sad: u32::MAX };
    let mut first = true;
    for (i, t) in self.tables.chunks_exact(stride).enumerate() {
      let sad = t[r1 * g + c1] + t[r0 * g + c0] - t[r0 * g + c1] - t[r1 * g + c0];
      let mv = MotionVector {
        dy: (i / side) as i32 - self.range,
        dx: (i % side) as i32 - self.range,
        sad,
      };
      if first || mv.better_than(&best) {
        best = mv;
        first = false;
      }
    }
    best
  }

  /// CTU origin in picture coordinates.
  pub fn origin(&self) -> (usize, usize) {
    self.origin
  }
}

/// Number of scales in a motion field.
pub const MVF_SCALES: usize = 5;
/// Channels per cell: (dx, dy, sad) for L0 then L1.
pub const MVF_CHANNELS: usize = 6;
/// Motion vector components are divided by this.
pub const MV_NORM: f32 = 128.0;

/// Multi-scale motion vector field of one CTU. Scale `k` is a
/// `2^(k+1)` square grid; at the default 128 CTU its blocks are 64, 32,
/// 16, 8 and 4 pixels wide.
#[derive(Debug, Clone, PartialEq)]
pub struct MsMvField {
  grids: [Vec<[f32; MVF_CHANNELS]>; MVF_SCALES],
}

impl MsMvField {
  pub fn grid_dim(scale: usize) -> usize {
    2 << scale
  }

  pub fn zeros() -> Self {
    MsMvField {
      grids: core::array::from_fn(|k| vec![[0.0; MVF_CHANNELS]; Self::grid_dim(k).pow(2)]),
    }
  }

  pub fn from_grids(grids: [Vec<[f32; MVF_CHANNELS]>; MVF_SCALES]) -> Result<Self> {
    for (k, g) in grids.iter().enumerate() {
      let n = Self::grid_dim(k).pow(2);
      if g.len() != n {
        return Err(Error::DimensionMismatch { what: "motion field grid", expected: n, found: g.len() });
      }
    }
    Ok(MsMvField { grids })
  }

  pub fn grid(&self, scale: usize) -> &[[f32; MVF_CHANNELS]] {
    &self.grids[scale]
  }

  pub fn grids(&self) -> &[Vec<[f32; MVF_CHANNELS]>; MVF_SCALES] {
    &self.grids
  }

  /// Total number of scalar values over all scales.
  pub const fn value_count() -> usize {
    (4 + 16 + 64 + 256 + 1024) * MVF_CHANNELS
  }
}

/// Builds the motion field of the CTU at `origin` against both reference
/// lists.
pub fn build_msmvf(
  cur: &Frame,
  refs: RefPair<'_>,
  origin: (usize, usize),
  ctu_size: usize,
  range: u32,
) -> Result<MsMvField> {
  cur.check_ctu(origin.0, origin.1, ctu_size)?;
  let finest = MsMvField::grid_dim(MVF_SCALES - 1);
  if ctu_size % finest != 0 {
    return Err(Error::InvalidParameter(format!("CTU size {ctu_size} not divisible by {finest}")));
  }
  if range as f32 > MV_NORM {
    return Err(Error::InvalidParameter(format!("search range {range} exceeds {MV_NORM}")));
  }
  let unit = (ctu_size / finest).min(4);
  let l0 = MotionSearch::new(cur, refs.l0, origin, ctu_size, unit, range)?;
  let l1_owned;
  let l1 = if core::ptr::eq(refs.l0, refs.l1) {
    &l0
  } else {
    l1_owned = MotionSearch::new(cur, refs.l1, origin, ctu_size, unit, range)?;
    &l1_owned
  };
  let grids = core::array::from_fn(|k| {
    let dim = MsMvField::grid_dim(k);
    let block = ctu_size / dim;
    let norm = (block * block) as f64 * 255.0;
    let mut cells = Vec::with_capacity(dim * dim);
    for by in 0..dim {
      for bx in 0..dim {
        let mut cell = [0f32; MVF_CHANNELS];
        for (list, search) in [&l0, l1].into_iter().enumerate() {
          let mv = search.best(bx * block, by * block, block, block);
          cell[list * 3] = mv.dx as f32 / MV_NORM;
          cell[list * 3 + 1] = mv.dy as f32 / MV_NORM;
          cell[list * 3 + 2] = (mv.sad as f64 / norm) as f32;
        }
        cells.push(cell);
      }
    }
    cells
  });
  Ok(MsMvField { grids })
}

/// Block size of the motion compensation behind [`residual_ctu`].
pub const RESIDUAL_BLOCK: usize = 16;

/// Motion-compensated prediction of a CTU and its residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtuResidual {
  pub size: usize,
  pub prediction: Vec<u8>,
  pub residual: Vec<i16>,
}

/// Predicts each 16x16 block of the CTU from `nearest` with its best
/// full-search vector; residual = original - prediction.
pub fn residual_ctu(
  cur: &Frame,
  nearest: &Frame,
  origin: (usize, usize),
  ctu_size: usize,
  range: u32,
) -> Result<CtuResidual> {
  cur.check_ctu(origin.0, origin.1, ctu_size)?;
  if ctu_size % RESIDUAL_BLOCK != 0 {
    return Err(Error::InvalidParameter(format!("CTU size {ctu_size} not divisible by {RESIDUAL_BLOCK}")));
  }
  let search = MotionSearch::new(cur, nearest, origin, ctu_size, 4, range)?;
  let mut prediction = vec![0u8; ctu_size * ctu_size];
  let mut residual = vec![0i16; ctu_size * ctu_size];
  let blocks = ctu_size / RESIDUAL_BLOCK;
  for by in 0..blocks {
    for bx in 0..blocks {
      let (lx, ly) = (bx * RESIDUAL_BLOCK, by * RESIDUAL_BLOCK);
      let mv = search.best(lx, ly, RESIDUAL_BLOCK, RESIDUAL_BLOCK);
      for r in 0..RESIDUAL_BLOCK {
        for c in 0..RESIDUAL_BLOCK {
          let (px, py) = (origin.0 + lx + c, origin.1 + ly + r);
          let p = nearest.at_clamped(px as isize + mv.dx as isize, py as isize + mv.dy as isize);
          let i = (ly + r) * ctu_size + lx + c;
          prediction[i] = p;
          residual[i] = cur.at(px, py) as i16 - p as i16;
        }
      }
    }
  }
  Ok(CtuResidual { size: ctu_size, prediction, residual })
}
