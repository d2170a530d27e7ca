//! CU geometry, split types, legality rules and partition trees.
//!
//! A CTU is split recursively: quadtree (QT) splits first, then at any
//! QT leaf a multi-type tree (MT) of binary and ternary splits. Once an MT
//! split has been applied no QT split may follow on the same path.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// The six split decisions available to a CU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitType {
  Ns,
  Qt,
  Hbt,
  Vbt,
  Htt,
  Vtt,
}

/// Number of classes in an MT split map.
pub const MT_CLASSES: usize = 5;

/// Number of MT levels tracked by the split maps.
pub const MT_LEVELS: usize = 3;

impl SplitType {
  /// Evaluation order used by every search: NS, QT, HBT, VBT, HTT, VTT.
  pub const ALL: [SplitType; 6] = [
    SplitType::Ns,
    SplitType::Qt,
    SplitType::Hbt,
    SplitType::Vbt,
    SplitType::Htt,
    SplitType::Vtt,
  ];

  pub const MT: [SplitType; 4] =
    [SplitType::Hbt, SplitType::Vbt, SplitType::Htt, SplitType::Vtt];

  /// MT split map classes in label order (VTT=0, VBT=1, NS=2, HBT=3, HTT=4).
  pub const LABEL_ORDER: [SplitType; MT_CLASSES] = [
    SplitType::Vtt,
    SplitType::Vbt,
    SplitType::Ns,
    SplitType::Hbt,
    SplitType::Htt,
  ];

  #[inline]
  pub fn is_mt(self) -> bool {
    matches!(self, SplitType::Hbt | SplitType::Vbt | SplitType::Htt | SplitType::Vtt)
  }

  #[inline]
  pub fn child_count(self) -> usize {
    match self {
      SplitType::Ns => 0,
      SplitType::Qt => 4,
      SplitType::Hbt | SplitType::Vbt => 2,
      SplitType::Htt | SplitType::Vtt => 3,
    }
  }

  /// Label used in MT split maps; `None` for QT.
  #[inline]
  pub fn mt_label(self) -> Option<u8> {
    match self {
      SplitType::Vtt => Some(0),
      SplitType::Vbt => Some(1),
      SplitType::Ns => Some(2),
      SplitType::Hbt => Some(3),
      SplitType::Htt => Some(4),
      SplitType::Qt => None,
    }
  }

  #[inline]
  pub fn from_mt_label(label: u8) -> Option<SplitType> {
    SplitType::LABEL_ORDER.get(label as usize).copied()
  }

  #[inline]
  fn bit(self) -> u8 {
    1 << (self as u8)
  }

  pub fn name(self) -> &'static str {
    match self {
      SplitType::Ns => "NS",
      SplitType::Qt => "QT",
      SplitType::Hbt => "HBT",
      SplitType::Vbt => "VBT",
      SplitType::Htt => "HTT",
      SplitType::Vtt => "VTT",
    }
  }
}

impl fmt::Display for SplitType {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str(self.name())
  }
}

/// A set of split types, iterated in [`SplitType::ALL`] order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SplitSet(u8);

impl SplitSet {
  pub const EMPTY: SplitSet = SplitSet(0);

  pub fn only(s: SplitType) -> Self {
    SplitSet(s.bit())
  }

  pub fn all() -> Self {
    SplitType::ALL.iter().copied().collect()
  }

  #[inline]
  pub fn contains(self, s: SplitType) -> bool {
    self.0 & s.bit() != 0
  }

  #[inline]
  pub fn insert(&mut self, s: SplitType) {
    self.0 |= s.bit();
  }

  #[inline]
  pub fn remove(&mut self, s: SplitType) {
    self.0 &= !s.bit();
  }

  #[inline]
  pub fn len(self) -> usize {
    self.0.count_ones() as usize
  }

  #[inline]
  pub fn is_empty(self) -> bool {
    self.0 == 0
  }

  #[inline]
  pub fn is_subset(self, other: SplitSet) -> bool {
    self.0 & !other.0 == 0
  }

  pub fn iter(self) -> impl Iterator<Item = SplitType> {
    SplitType::ALL.into_iter().filter(move |s| self.contains(*s))
  }

  pub fn bits(self) -> u8 {
    self.0
  }
}

impl FromIterator<SplitType> for SplitSet {
  fn from_iter<I: IntoIterator<Item = SplitType>>(iter: I) -> Self {
    let mut set = SplitSet::EMPTY;
    for s in iter {
      set.insert(s);
    }
    set
  }
}

impl fmt::Debug for SplitSet {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.debug_set().entries(self.iter()).finish()
  }
}

impl fmt::Display for SplitSet {
  fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for s in self.iter() {
      if !first {
        f.write_str("|")?;
      }
      first = false;
      f.write_str(s.name())?;
    }
    Ok(())
  }
}

/// Position, size and depth state of a coding unit inside its CTU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CuGeom {
  pub x: u32,
  pub y: u32,
  pub width: u32,
  pub height: u32,
  pub qt_depth: u8,
  pub mt_depth: u8,
  /// Set once any ancestor applied an MT split.
  pub after_mt: bool,
}

impl CuGeom {
  pub fn root(ctu_size: u32) -> Self {
    CuGeom {
      x: 0,
      y: 0,
      width: ctu_size,
      height: ctu_size,
      qt_depth: 0,
      mt_depth: 0,
      after_mt: false,
    }
  }

  #[inline]
  pub fn area(&self) -> u32 {
    self.width * self.height
  }

  #[inline]
  pub fn contains(&self, x: u32, y: u32) -> bool {
    x >= self.x && y >= self.y && x < self.x + self.width && y < self.y + self.height
  }

  /// Checks the geometry invariants under `c`.
  pub fn check(&self, c: &Constraints) -> Result<()> {
    let dim_ok = |d: u32| d.is_power_of_two() && d >= c.min_cu_dim && d <= c.ctu_size;
    let fail = |why: &str| {
      Err(Error::IllegalGeometry(format!(
        "{}x{} at ({},{}) qt {} mt {}: {}",
        self.width, self.height, self.x, self.y, self.qt_depth, self.mt_depth, why
      )))
    };
    if !dim_ok(self.width) || !dim_ok(self.height) {
      return fail("dimension");
    }
    if self.x + self.width > c.ctu_size || self.y + self.height > c.ctu_size {
      return fail("exceeds CTU");
    }
    if self.x % c.min_cu_dim != 0 || self.y % c.min_cu_dim != 0 {
      return fail("misaligned");
    }
    if self.qt_depth > c.max_qt_depth || self.mt_depth > c.max_mt_depth {
      return fail("depth");
    }
    if self.after_mt != (self.mt_depth > 0) {
      return fail("after_mt flag");
    }
    Ok(())
  }
}

/// Partitioning limits. Defaults follow the usual VVC luma configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraints {
  pub ctu_size: u32,
  pub max_qt_depth: u8,
  pub max_mt_depth: u8,
  pub min_cu_dim: u32,
  pub max_mt_cu_dim: u32,
  pub min_qt_leaf_dim: u32,
}

impl Default for Constraints {
  fn default() -> Self {
    Constraints {
      ctu_size: 128,
      max_qt_depth: 4,
      max_mt_depth: 3,
      min_cu_dim: 4,
      max_mt_cu_dim: 64,
      min_qt_leaf_dim: 8,
    }
  }
}

impl Constraints {
  /// Default limits for a CTU of `ctu_size`, with the MT size cap clamped to
  /// the CTU.
  pub fn for_ctu(ctu_size: u32) -> Result<Self> {
    let d = Constraints::default();
    let c = Constraints {
      ctu_size,
      max_mt_cu_dim: d.max_mt_cu_dim.min(ctu_size),
      min_qt_leaf_dim: d.min_qt_leaf_dim.min(ctu_size),
      ..d
    };
    c.validate()?;
    Ok(c)
  }

  pub fn validate(&self) -> Result<()> {
    let dims = [self.ctu_size, self.min_cu_dim, self.max_mt_cu_dim, self.min_qt_leaf_dim];
    if dims.iter().any(|d| !d.is_power_of_two()) {
      return Err(Error::InvalidConstraints("sizes must be positive powers of two"));
    }
    if !(self.min_cu_dim <= self.min_qt_leaf_dim
      && self.min_qt_leaf_dim <= self.max_mt_cu_dim
      && self.max_mt_cu_dim <= self.ctu_size)
    {
      return Err(Error::InvalidConstraints(
        "need min_cu_dim <= min_qt_leaf_dim <= max_mt_cu_dim <= ctu_size",
      ));
    }
    if self.ctu_size % 8 != 0 || self.min_cu_dim < 4 {
      return Err(Error::InvalidConstraints("ctu_size must be >= 8 and min_cu_dim >= 4"));
    }
    if self.max_qt_depth == 0 || self.max_mt_depth == 0 || self.max_mt_depth as usize > MT_LEVELS {
      return Err(Error::InvalidConstraints("max_mt_depth must be in 1..=3, max_qt_depth >= 1"));
    }
    Ok(())
  }
}

/// Returns the splits allowed for `geom`. NS is always present.
pub fn legal_splits(geom: &CuGeom, c: &Constraints) -> Result<SplitSet> {
  geom.check(c)?;
  let mut set = SplitSet::only(SplitType::Ns);
  if geom.width == geom.height
    && geom.width >= 2 * c.min_qt_leaf_dim
    && geom.qt_depth < c.max_qt_depth
    && !geom.after_mt
  {
    set.insert(SplitType::Qt);
  }
  if geom.mt_depth < c.max_mt_depth
    && geom.width <= c.max_mt_cu_dim
    && geom.height <= c.max_mt_cu_dim
  {
    if geom.height >= 2 * c.min_cu_dim {
      set.insert(SplitType::Hbt);
    }
    if geom.width >= 2 * c.min_cu_dim {
      set.insert(SplitType::Vbt);
    }
    if geom.height >= 4 * c.min_cu_dim {
      set.insert(SplitType::Htt);
    }
    if geom.width >= 4 * c.min_cu_dim {
      set.insert(SplitType::Vtt);
    }
  }
  Ok(set)
}

/// Splits `geom` by `s`, returning the children in raster order.
pub fn apply_split(geom: &CuGeom, s: SplitType, c: &Constraints) -> Result<Vec<CuGeom>> {
  let legal = legal_splits(geom, c)?;
  if s == SplitType::Ns || !legal.contains(s) {
    return Err(Error::SplitNotAvailable(format!(
      "{} on {}x{} (legal: {})",
      s, geom.width, geom.height, legal
    )));
  }
  Ok(split_unchecked(geom, s))
}

pub(crate) fn split_unchecked(geom: &CuGeom, s: SplitType) -> Vec<CuGeom> {
  let mt = CuGeom { mt_depth: geom.mt_depth + 1, after_mt: true, ..*geom };
  let (w, h) = (geom.width, geom.height);
  match s {
    SplitType::Ns => Vec::new(),
    SplitType::Qt => {
      let (hw, hh) = (w / 2, h / 2);
      let q = CuGeom { width: hw, height: hh, qt_depth: geom.qt_depth + 1, ..*geom };
      vec![
        q,
        CuGeom { x: geom.x + hw, ..q },
        CuGeom { y: geom.y + hh, ..q },
        CuGeom { x: geom.x + hw, y: geom.y + hh, ..q },
      ]
    }
    SplitType::Hbt => {
      let c = CuGeom { height: h / 2, ..mt };
      vec![c, CuGeom { y: geom.y + h / 2, ..c }]
    }
    SplitType::Vbt => {
      let c = CuGeom { width: w / 2, ..mt };
      vec![c, CuGeom { x: geom.x + w / 2, ..c }]
    }
    SplitType::Htt => {
      let q = h / 4;
      vec![
        CuGeom { height: q, ..mt },
        CuGeom { y: geom.y + q, height: 2 * q, ..mt },
        CuGeom { y: geom.y + 3 * q, height: q, ..mt },
      ]
    }
    SplitType::Vtt => {
      let q = w / 4;
      vec![
        CuGeom { width: q, ..mt },
        CuGeom { x: geom.x + q, width: 2 * q, ..mt },
        CuGeom { x: geom.x + 3 * q, width: q, ..mt },
      ]
    }
  }
}

/// A CTU partition: each node records the split chosen for its CU.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionTree {
  pub geom: CuGeom,
  pub split: SplitType,
  pub children: Vec<PartitionTree>,
}

impl PartitionTree {
  pub fn leaf(geom: CuGeom) -> Self {
    PartitionTree { geom, split: SplitType::Ns, children: Vec::new() }
  }

  /// Builds a node by splitting `geom` and attaching `children` verbatim.
  /// Structure is checked by [`PartitionTree::validate`], not here.
  pub fn node(geom: CuGeom, split: SplitType, children: Vec<PartitionTree>) -> Self {
    PartitionTree { geom, split, children }
  }

  #[inline]
  pub fn is_leaf(&self) -> bool {
    self.children.is_empty()
  }

  pub fn ctu_size(&self) -> u32 {
    self.geom.width
  }

  /// Checks every tree invariant under `c`, including that the root covers
  /// the whole CTU.
  pub fn validate(&self, c: &Constraints) -> Result<()> {
    c.validate()?;
    if self.geom != CuGeom::root(c.ctu_size) {
      return Err(Error::IllegalGeometry(format!(
        "root must be the {0}x{0} CTU",
        c.ctu_size
      )));
    }
    self.validate_node(c)
  }

  fn validate_node(&self, c: &Constraints) -> Result<()> {
    if self.split == SplitType::Ns {
      legal_splits(&self.geom, c)?;
      if !self.children.is_empty() {
        return Err(Error::SplitNotAvailable("NS node with children".into()));
      }
      return Ok(());
    }
    let expected = apply_split(&self.geom, self.split, c)?;
    if expected.len() != self.children.len() {
      return Err(Error::SplitNotAvailable(format!(
        "{} node has {} children",
        self.split,
        self.children.len()
      )));
    }
    for (child, geom) in self.children.iter().zip(&expected) {
      if child.geom != *geom {
        return Err(Error::IllegalGeometry(format!(
          "child {}x{} at ({},{}) does not tile parent",
          child.geom.width, child.geom.height, child.geom.x, child.geom.y
        )));
      }
      child.validate_node(c)?;
    }
    Ok(())
  }

  /// Pre-order traversal.
  pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a PartitionTree)) {
    f(self);
    for child in &self.children {
      child.visit(f);
    }
  }

  pub fn leaves(&self) -> Vec<CuGeom> {
    let mut out = Vec::new();
    self.visit(&mut |n| {
      if n.is_leaf() {
        out.push(n.geom)
      }
    });
    out
  }

  pub fn node_count(&self) -> usize {
    1 + self.children.iter().map(PartitionTree::node_count).sum::<usize>()
  }

  /// Partition path of the CU covering pixel `(x, y)`: the splits applied
  /// from the root down to that CU, followed by its terminal NS.
  pub fn path_at(&self, x: u32, y: u32) -> Option<PartitionPath> {
    if !self.geom.contains(x, y) {
      return None;
    }
    let mut steps = Vec::new();
    let mut node = self;
    loop {
      steps.push(node.split);
      match node.children.iter().find(|c| c.geom.contains(x, y)) {
        Some(next) => node = next,
        None => break,
      }
    }
    Some(PartitionPath(steps))
  }
}

/// Sequence of split decisions leading from the CTU root to a CU.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionPath(Vec<SplitType>);

impl PartitionPath {
  pub fn new(steps: Vec<SplitType>) -> Result<Self> {
    let mut seen_mt = false;
    for s in &steps {
      if *s == SplitType::Qt && seen_mt {
        return Err(Error::SplitNotAvailable("QT after an MT split".into()));
      }
      seen_mt |= s.is_mt();
    }
    Ok(PartitionPath(steps))
  }

  pub fn steps(&self) -> &[SplitType] {
    &self.0
  }

  pub fn qt_depth(&self) -> usize {
    self.0.iter().filter(|s| **s == SplitType::Qt).count()
  }

  pub fn mt_depth(&self) -> usize {
    self.0.iter().filter(|s| s.is_mt()).count()
  }
}

/// Lazily enumerates every legal partition tree of a small CTU in a fixed
/// order: NS first, then each split in [`SplitType::ALL`] order with child
/// choices varied odometer-style (last child fastest).
pub fn enumerate_partitions(
  c: &Constraints,
) -> Result<impl Iterator<Item = PartitionTree>> {
  c.validate()?;
  if c.ctu_size > 32 {
    return Err(Error::EnumerationTooLarge(c.ctu_size));
  }
  Ok(enumerate_node(CuGeom::root(c.ctu_size), *c))
}

fn enumerate_node(
  geom: CuGeom,
  c: Constraints,
) -> Box<dyn Iterator<Item = PartitionTree>> {
  // Geometry reached from a valid parent is always valid.
  let legal = legal_splits(&geom, &c).unwrap_or(SplitSet::only(SplitType::Ns));
  Box::new(legal.iter().flat_map(move |s| -> Box<dyn Iterator<Item = PartitionTree>> {
    if s == SplitType::Ns {
      return Box::new(core::iter::once(PartitionTree::leaf(geom)));
    }
    let kids = split_unchecked(&geom, s);
    Box::new(
      enumerate_product(kids, c)
        .map(move |children| PartitionTree::node(geom, s, children)),
    )
  }))
}

fn enumerate_product(
  geoms: Vec<CuGeom>,
  c: Constraints,
) -> Box<dyn Iterator<Item = Vec<PartitionTree>>> {
  let Some((first, rest)) = geoms.split_first() else {
    return Box::new(core::iter::once(Vec::new()));
  };
  let rest: Vec<CuGeom> = rest.to_vec();
  Box::new(enumerate_node(*first, c).flat_map(move |head| {
    enumerate_product(rest.clone(), c).map(move |mut tail| {
      tail.insert(0, head.clone());
      tail
    })
  }))
}

/// Draws a random legal tree. At each node NS is chosen with probability
/// `1 - split_prob` (always when only NS is legal), otherwise a legal
/// split is chosen uniformly.
pub fn random_tree<R: Rng + ?Sized>(c: &Constraints, rng: &mut R, split_prob: f64) -> PartitionTree {
  random_node(CuGeom::root(c.ctu_size), c, rng, split_prob)
}

fn random_node<R: Rng + ?Sized>(
  geom: CuGeom,
  c: &Constraints,
  rng: &mut R,
  split_prob: f64,
) -> PartitionTree {
  let legal = legal_splits(&geom, c).unwrap_or(SplitSet::only(SplitType::Ns));
  let splits: Vec<SplitType> = legal.iter().filter(|s| *s != SplitType::Ns).collect();
  if splits.is_empty() || !rng.random_bool(split_prob.clamp(0.0, 1.0)) {
    return PartitionTree::leaf(geom);
  }
  let s = splits[rng.random_range(0..splits.len())];
  let children = split_unchecked(&geom, s)
    .into_iter()
    .map(|g| random_node(g, c, rng, split_prob))
    .collect();
  PartitionTree::node(geom, s, children)
}

#[cfg(test)]
mod tests {
  use super::*;
  use alloc::string::ToString;
  use alloc::vec;
  use SplitType::*;

  fn geom(w: u32, h: u32, qt: u8, mt: u8) -> CuGeom {
    CuGeom { x: 0, y: 0, width: w, height: h, qt_depth: qt, mt_depth: mt, after_mt: mt > 0 }
  }

  #[test]
  fn ctu_root_allows_only_ns_and_qt() {
    let set = legal_splits(&CuGeom::root(128), &Constraints::default()).unwrap();
    assert_eq!(set, [Ns, Qt].into_iter().collect());
  }

  #[test]
  fn smallest_cu_only_ns() {
    let set = legal_splits(&geom(4, 4, 4, 3), &Constraints::default()).unwrap();
    assert_eq!(set, SplitSet::only(Ns));
    let set = legal_splits(&geom(4, 4, 3, 1), &Constraints::default()).unwrap();
    assert_eq!(set, SplitSet::only(Ns));
  }

  #[test]
  fn thin_cu_bars_horizontal_ternary() {
    let set = legal_splits(&geom(32, 8, 2, 1), &Constraints::default()).unwrap();
    assert_eq!(set, [Ns, Hbt, Vbt, Vtt].into_iter().collect());
  }

  #[test]
  fn qt_is_barred_after_mt() {
    let set = legal_splits(&geom(32, 32, 1, 1), &Constraints::default()).unwrap();
    assert!(!set.contains(Qt));
    assert_eq!(set.len(), 5);
  }

  #[test]
  fn split_count_ranges_from_one_to_six() {
    let c = Constraints::default();
    let counts: Vec<usize> = [geom(4, 4, 4, 0), geom(64, 64, 1, 0)]
      .iter()
      .map(|g| legal_splits(g, &c).unwrap().len())
      .collect();
    assert_eq!(counts, vec![1, 6]);
  }

  #[test]
  fn bad_geometry_rejected() {
    let c = Constraints::default();
    let err = legal_splits(&geom(24, 32, 0, 0), &c).unwrap_err();
    assert!(err.to_string().contains("illegal CU geometry"));
    let mut g = geom(64, 64, 1, 0);
    g.x = 96;
    assert!(legal_splits(&g, &c).is_err());
    let mut g = geom(32, 32, 1, 1);
    g.after_mt = false;
    assert!(legal_splits(&g, &c).is_err());
  }

  #[test]
  fn quadtree_children() {
    let kids = apply_split(&CuGeom::root(128), Qt, &Constraints::default()).unwrap();
    let pos: Vec<_> = kids.iter().map(|k| (k.x, k.y, k.width, k.height, k.qt_depth)).collect();
    assert_eq!(pos, vec![(0, 0, 64, 64, 1), (64, 0, 64, 64, 1), (0, 64, 64, 64, 1), (64, 64, 64, 64, 1)]);
  }

  #[test]
  fn ternary_children_are_one_two_one() {
    let kids = apply_split(&geom(32, 32, 2, 0), Htt, &Constraints::default()).unwrap();
    let pos: Vec<_> = kids.iter().map(|k| (k.y, k.width, k.height)).collect();
    assert_eq!(pos, vec![(0, 32, 8), (8, 32, 16), (24, 32, 8)]);
    assert!(kids.iter().all(|k| k.mt_depth == 1 && k.after_mt));
  }

  #[test]
  fn vertical_binary_halves() {
    let kids = apply_split(&geom(64, 32, 1, 1), Vbt, &Constraints::default()).unwrap();
    let pos: Vec<_> = kids.iter().map(|k| (k.x, k.width, k.height, k.mt_depth)).collect();
    assert_eq!(pos, vec![(0, 32, 32, 2), (32, 32, 32, 2)]);
  }

  #[test]
  fn unavailable_split_errors() {
    let err = apply_split(&CuGeom::root(128), Hbt, &Constraints::default()).unwrap_err();
    assert!(err.to_string().contains("split not available"));
    assert!(apply_split(&CuGeom::root(128), Ns, &Constraints::default()).is_err());
  }

  #[test]
  fn tiny_enumeration() {
    let c = Constraints { ctu_size: 8, min_qt_leaf_dim: 8, max_mt_cu_dim: 8, max_mt_depth: 1, ..Constraints::default() };
    let trees: Vec<_> = enumerate_partitions(&c).unwrap().collect();
    assert_eq!(trees.len(), 3);
    assert_eq!(trees[0], PartitionTree::leaf(CuGeom::root(8)));
    for t in &trees {
      t.validate(&c).unwrap();
    }
  }

  #[test]
  fn enumeration_guard() {
    let c = Constraints::for_ctu(64).unwrap();
    assert!(matches!(enumerate_partitions(&c), Err(Error::EnumerationTooLarge(64))));
  }

  #[test]
  fn path_rejects_qt_after_mt() {
    assert!(PartitionPath::new(vec![Qt, Hbt, Ns]).is_ok());
    assert!(PartitionPath::new(vec![Hbt, Qt]).is_err());
  }
}
