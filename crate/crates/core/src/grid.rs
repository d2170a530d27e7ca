use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::partition::CuGeom;

/// Square row-major grid of per-cell values over a CTU.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid<T> {
  dim: usize,
  cells: Vec<T>,
}

impl<T: Clone> Grid<T> {
  pub fn filled(dim: usize, value: T) -> Self {
    Grid { dim, cells: vec![value; dim * dim] }
  }
}

impl<T> Grid<T> {
  /// Returns `None` unless `cells.len() == dim * dim`.
  pub fn from_cells(dim: usize, cells: Vec<T>) -> Option<Self> {
    (cells.len() == dim * dim).then_some(Grid { dim, cells })
  }

  #[inline]
  pub fn dim(&self) -> usize {
    self.dim
  }

  #[inline]
  pub fn cells(&self) -> &[T] {
    &self.cells
  }

  #[inline]
  pub fn cells_mut(&mut self) -> &mut [T] {
    &mut self.cells
  }

  pub fn into_cells(self) -> Vec<T> {
    self.cells
  }

  #[inline]
  pub fn get(&self, col: usize, row: usize) -> &T {
    &self.cells[row * self.dim + col]
  }

  #[inline]
  pub fn get_mut(&mut self, col: usize, row: usize) -> &mut T {
    &mut self.cells[row * self.dim + col]
  }

  /// Iterates the cells touched by `geom`, where each cell spans
  /// `cell_px` pixels. CUs narrower than a cell select the cell they sit in.
  pub fn cells_in<'a>(&'a self, geom: &CuGeom, cell_px: u32) -> impl Iterator<Item = &'a T> + 'a {
    let (cols, rows) = cell_span(geom, cell_px);
    rows.flat_map(move |r| cols.clone().map(move |c| self.get(c, r)))
  }

  pub fn fill(&mut self, geom: &CuGeom, cell_px: u32, value: T)
  where
    T: Clone,
  {
    let (cols, rows) = cell_span(geom, cell_px);
    for r in rows {
      for c in cols.clone() {
        *self.get_mut(c, r) = value.clone();
      }
    }
  }
}

pub(crate) fn cell_span(geom: &CuGeom, cell_px: u32) -> (Range<usize>, Range<usize>) {
  let c0 = (geom.x / cell_px) as usize;
  let r0 = (geom.y / cell_px) as usize;
  let c1 = (geom.x + geom.width).div_ceil(cell_px) as usize;
  let r1 = (geom.y + geom.height).div_ceil(cell_px) as usize;
  (c0..c1, r0..r1)
}
