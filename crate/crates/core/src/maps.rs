//! Partition-path label maps.
//!
//! A partition is described by one QT depth map at 8x8 granularity and
//! three MT split maps at 4x4 granularity. MT map `b` holds the decision
//! a CU took when it sat at MT depth `b`; cells of CUs that stopped earlier
//! hold NS.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::partition::{
  legal_splits, split_unchecked, Constraints, CuGeom, PartitionTree, SplitType, MT_LEVELS,
};

/// Pixel span of one QT depth map cell.
pub const QT_CELL: u32 = 8;
/// Pixel span of one MT split map cell.
pub const MT_CELL: u32 = 4;

pub type QtDepthMap = Grid<u8>;
pub type MtSplitMap = Grid<SplitType>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMaps {
  pub qt: QtDepthMap,
  pub mt: [MtSplitMap; MT_LEVELS],
}

impl LabelMaps {
  /// Maps of the single-CU partition.
  pub fn unsplit(ctu_size: u32) -> Self {
    LabelMaps {
      qt: Grid::filled((ctu_size / QT_CELL) as usize, 0),
      mt: core::array::from_fn(|_| Grid::filled((ctu_size / MT_CELL) as usize, SplitType::Ns)),
    }
  }

  pub fn ctu_size(&self) -> u32 {
    self.qt.dim() as u32 * QT_CELL
  }

  fn check_dims(&self, c: &Constraints) -> Result<()> {
    if c.min_qt_leaf_dim < QT_CELL {
      return Err(Error::InvalidConstraints("label maps need min_qt_leaf_dim >= 8"));
    }
    let qt_dim = (c.ctu_size / QT_CELL) as usize;
    if self.qt.dim() != qt_dim {
      return Err(Error::DimensionMismatch { what: "QT depth map", expected: qt_dim, found: self.qt.dim() });
    }
    let mt_dim = (c.ctu_size / MT_CELL) as usize;
    for m in &self.mt {
      if m.dim() != mt_dim {
        return Err(Error::DimensionMismatch { what: "MT split map", expected: mt_dim, found: m.dim() });
      }
    }
    Ok(())
  }
}

/// Encodes a partition tree as label maps.
pub fn maps_from_tree(tree: &PartitionTree) -> LabelMaps {
  let mut maps = LabelMaps::unsplit(tree.ctu_size());
  write_qt(tree, &mut maps);
  maps
}

fn write_qt(node: &PartitionTree, maps: &mut LabelMaps) {
  if node.split == SplitType::Qt {
    for child in &node.children {
      write_qt(child, maps);
    }
  } else {
    maps.qt.fill(&node.geom, QT_CELL, node.geom.qt_depth);
    write_mt(node, maps);
  }
}

fn write_mt(node: &PartitionTree, maps: &mut LabelMaps) {
  let level = node.geom.mt_depth as usize;
  if level < MT_LEVELS {
    maps.mt[level].fill(&node.geom, MT_CELL, node.split);
  }
  for child in &node.children {
    write_mt(child, maps);
  }
}

/// Decodes label maps back into the unique partition tree they describe.
pub fn tree_from_maps(maps: &LabelMaps, c: &Constraints) -> Result<PartitionTree> {
  c.validate()?;
  maps.check_dims(c)?;
  let tree = decode_qt(CuGeom::root(c.ctu_size), maps, c)?;
  let reencoded = maps_from_tree(&tree);
  if reencoded != *maps {
    let (geom, reason) = first_mismatch(&tree, maps, &reencoded);
    return Err(invalid(&geom, reason));
  }
  Ok(tree)
}

/// Outcome of [`validate_maps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
  pub valid: bool,
  pub diagnostic: Option<String>,
}

/// Checks that `maps` encode a legal partition. Dimension mismatches are
/// reported as errors; content problems as an invalid verdict.
pub fn validate_maps(maps: &LabelMaps, c: &Constraints) -> Result<Verdict> {
  c.validate()?;
  maps.check_dims(c)?;
  Ok(match tree_from_maps(maps, c) {
    Ok(_) => Verdict { valid: true, diagnostic: None },
    Err(e) => Verdict { valid: false, diagnostic: Some(format!("{e}")) },
  })
}

fn invalid(geom: &CuGeom, reason: &'static str) -> Error {
  Error::InvalidMapEncoding { x: geom.x, y: geom.y, width: geom.width, height: geom.height, reason }
}

fn decode_qt(geom: CuGeom, maps: &LabelMaps, c: &Constraints) -> Result<PartitionTree> {
  let cur = geom.qt_depth;
  let (mut all_eq, mut all_gt) = (true, true);
  for &d in maps.qt.cells_in(&geom, QT_CELL) {
    all_eq &= d == cur;
    all_gt &= d > cur;
  }
  if all_eq {
    return decode_mt(geom, maps, c);
  }
  if !all_gt {
    return Err(invalid(&geom, "QT depths do not nest as a quadtree"));
  }
  let legal = legal_splits(&geom, c).map_err(|_| invalid(&geom, "illegal geometry"))?;
  if !legal.contains(SplitType::Qt) {
    return Err(invalid(&geom, "QT depth implies an illegal QT split"));
  }
  let children = split_unchecked(&geom, SplitType::Qt)
    .into_iter()
    .map(|g| decode_qt(g, maps, c))
    .collect::<Result<Vec<_>>>()?;
  Ok(PartitionTree::node(geom, SplitType::Qt, children))
}

fn decode_mt(geom: CuGeom, maps: &LabelMaps, c: &Constraints) -> Result<PartitionTree> {
  let level = geom.mt_depth as usize;
  if level >= MT_LEVELS {
    return Ok(PartitionTree::leaf(geom));
  }
  let mut cells = maps.mt[level].cells_in(&geom, MT_CELL);
  let label = *cells.next().expect("CU covers at least one cell");
  if cells.any(|l| *l != label) {
    return Err(invalid(&geom, "MT labels differ within one CU"));
  }
  if label == SplitType::Ns {
    return Ok(PartitionTree::leaf(geom));
  }
  let legal = legal_splits(&geom, c).map_err(|_| invalid(&geom, "illegal geometry"))?;
  if label == SplitType::Qt || !legal.contains(label) {
    return Err(invalid(&geom, "MT label implies an illegal split"));
  }
  let children = split_unchecked(&geom, label)
    .into_iter()
    .map(|g| decode_mt(g, maps, c))
    .collect::<Result<Vec<_>>>()?;
  Ok(PartitionTree::node(geom, label, children))
}

fn first_mismatch(tree: &PartitionTree, maps: &LabelMaps, re: &LabelMaps) -> (CuGeom, &'static str) {
  let leaves = tree.leaves();
  let leaf_at = |x: u32, y: u32| {
    leaves.iter().copied().find(|g| g.contains(x, y)).unwrap_or(tree.geom)
  };
  for level in 0..MT_LEVELS {
    let dim = maps.mt[level].dim();
    for r in 0..dim {
      for col in 0..dim {
        if maps.mt[level].get(col, r) != re.mt[level].get(col, r) {
          let g = leaf_at(col as u32 * MT_CELL, r as u32 * MT_CELL);
          return (g, "split label below a terminated CU");
        }
      }
    }
  }
  (tree.geom, "maps do not re-encode identically")
}

#[cfg(test)]
mod tests {
  use super::*;
  use alloc::string::ToString;
  use alloc::vec;
  use crate::partition::apply_split;

  #[test]
  fn unsplit_tree_round_trips() {
    let c = Constraints::default();
    let maps = maps_from_tree(&PartitionTree::leaf(CuGeom::root(128)));
    assert_eq!(maps, LabelMaps::unsplit(128));
    assert_eq!(maps.qt.dim(), 16);
    assert_eq!(maps.mt[0].dim(), 32);
    assert_eq!(tree_from_maps(&maps, &c).unwrap(), PartitionTree::leaf(CuGeom::root(128)));
  }

  /// QT, QT, QT, then HBT with two unsplit halves: cells of either half
  /// read depth 3, HBT at MT0 and NS at MT1/MT2.
  #[test]
  fn qt3_then_hbt_path() {
    let c = Constraints::for_ctu(64).unwrap();
    let mut geom = CuGeom::root(64);
    let mut chain = Vec::new();
    for _ in 0..3 {
      let kids = apply_split(&geom, SplitType::Qt, &c).unwrap();
      chain.push((geom, kids.clone()));
      geom = kids[0];
    }
    let halves = apply_split(&geom, SplitType::Hbt, &c).unwrap();
    let mut tree = PartitionTree::node(
      geom,
      SplitType::Hbt,
      halves.into_iter().map(PartitionTree::leaf).collect(),
    );
    for (parent, kids) in chain.into_iter().rev() {
      let mut children: Vec<_> = kids.iter().map(|g| PartitionTree::leaf(*g)).collect();
      children[0] = tree;
      tree = PartitionTree::node(parent, SplitType::Qt, children);
    }
    tree.validate(&c).unwrap();
    let maps = maps_from_tree(&tree);
    assert_eq!(maps.qt.dim(), 8);
    assert_eq!(maps.mt[0].dim(), 16);
    assert_eq!(*maps.qt.get(0, 0), 3);
    assert_eq!(*maps.mt[0].get(0, 0), SplitType::Hbt);
    assert_eq!(*maps.mt[0].get(1, 1), SplitType::Hbt);
    assert_eq!(*maps.mt[1].get(0, 1), SplitType::Ns);
    assert_eq!(*maps.mt[2].get(1, 0), SplitType::Ns);
    assert_eq!(tree.path_at(0, 4).unwrap().steps(), &[SplitType::Qt, SplitType::Qt, SplitType::Qt, SplitType::Hbt, SplitType::Ns]);
    assert_eq!(tree_from_maps(&maps, &c).unwrap(), tree);
  }

  #[test]
  fn corrupted_mt_cell_is_rejected() {
    let c = Constraints::default();
    let mut maps = LabelMaps::unsplit(128);
    *maps.mt[0].get_mut(5, 5) = SplitType::Hbt;
    let err = tree_from_maps(&maps, &c).unwrap_err();
    assert!(err.to_string().contains("invalid map encoding"), "{err}");
    assert!(err.to_string().contains("(0,0) 128x128"), "{err}");
  }

  #[test]
  fn broken_quadtree_nesting() {
    let c = Constraints::default();
    let mut maps = LabelMaps::unsplit(128);
    *maps.qt.get_mut(0, 0) = 1;
    let v = validate_maps(&maps, &c).unwrap();
    assert!(!v.valid);
    assert!(v.diagnostic.unwrap().contains("quadtree"));
  }

  #[test]
  fn htt_on_short_cu_is_rejected() {
    let c = Constraints::for_ctu(64).unwrap();
    // 64 -> QT -> 32x32 -> HBT -> 32x16 -> HBT -> two 32x8 leaves at MT depth 2.
    let root = CuGeom::root(64);
    let quads = apply_split(&root, SplitType::Qt, &c).unwrap();
    let halves = apply_split(&quads[0], SplitType::Hbt, &c).unwrap();
    let strips = apply_split(&halves[0], SplitType::Hbt, &c).unwrap();
    let mut children: Vec<_> = quads.iter().map(|g| PartitionTree::leaf(*g)).collect();
    children[0] = PartitionTree::node(quads[0], SplitType::Hbt, vec![
      PartitionTree::node(halves[0], SplitType::Hbt, strips.iter().map(|g| PartitionTree::leaf(*g)).collect()),
      PartitionTree::leaf(halves[1]),
    ]);
    let tree = PartitionTree::node(root, SplitType::Qt, children);
    tree.validate(&c).unwrap();
    let mut maps = maps_from_tree(&tree);
    assert!(validate_maps(&maps, &c).unwrap().valid);
    assert_eq!(strips[0].height, 8);
    maps.mt[2].fill(&strips[0], MT_CELL, SplitType::Htt);
    let v = validate_maps(&maps, &c).unwrap();
    assert!(!v.valid);
    assert!(v.diagnostic.unwrap().contains("illegal split"));
    // The same label on the 16-tall CU at MT level 1 is legal.
    let mut ok = maps_from_tree(&tree);
    ok.mt[1].fill(&halves[1], MT_CELL, SplitType::Htt);
    assert!(validate_maps(&ok, &c).unwrap().valid);
  }

  #[test]
  fn dimension_mismatch_is_an_error() {
    let c = Constraints::default();
    let maps = LabelMaps::unsplit(64);
    assert!(matches!(validate_maps(&maps, &c), Err(Error::DimensionMismatch { .. })));
  }
}
