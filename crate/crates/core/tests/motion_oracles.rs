mod common;

use common::{shift_clip, static_clip, texture};
use proptest::prelude::*;
use qtmt_core::motion::{block_me, build_msmvf, residual_ctu, MotionSearch, MVF_CHANNELS, MVF_SCALES, MV_NORM};
use qtmt_core::{Error, Frame, MsMvField, Rect, RefPair};

/// Second full-search implementation: collects every candidate and sorts
/// by the documented key.
fn scan_oracle(cur: &Frame, reference: &Frame, rect: &Rect, range: i32) -> (i32, i32, u32) {
  let sample = |x: i64, y: i64| {
    let x = x.clamp(0, reference.width as i64 - 1) as usize;
    let y = y.clamp(0, reference.height as i64 - 1) as usize;
    reference.luma()[y * reference.width + x] as i64
  };
  let mut all = Vec::new();
  for dy in -range..=range {
    for dx in -range..=range {
      let mut sad = 0i64;
      for y in rect.y..rect.y + rect.height {
        for x in rect.x..rect.x + rect.width {
          sad += (cur.luma()[y * cur.width + x] as i64 - sample(x as i64 + dx as i64, y as i64 + dy as i64)).abs();
        }
      }
      all.push((sad as u32, dx.abs() + dy.abs(), dy, dx));
    }
  }
  all.sort();
  (all[0].3, all[0].2, all[0].0)
}

fn frame(w: usize, h: usize, luma: Vec<u8>) -> Frame {
  Frame::new(w, h, 0, luma).unwrap()
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(96))]

  #[test]
  fn block_me_is_global_minimum(
    seed in any::<u64>(),
    x in 0usize..24,
    y in 0usize..24,
    range in 0u32..6,
    levels in 2u8..255,
  ) {
    // Few grey levels make ties common, exercising the tie-break order.
    let quant = |v: Vec<u8>| v.into_iter().map(|p| p % levels).collect::<Vec<_>>();
    let cur = frame(32, 32, quant(texture(32, 32, seed)));
    let reference = frame(32, 32, quant(texture(32, 32, seed ^ 1)));
    let rect = Rect::new(x, y, 8, 8);
    let mv = block_me(&cur, &reference, &rect, range).unwrap();
    prop_assert_eq!((mv.dx, mv.dy, mv.sad), scan_oracle(&cur, &reference, &rect, range as i32));
  }

  #[test]
  fn motion_search_equals_block_me(seed in any::<u64>(), bx in 0usize..8, by in 0usize..8, bw in 1usize..5, bh in 1usize..5) {
    let cur = frame(48, 40, texture(48, 40, seed).into_iter().map(|p| p / 32).collect());
    let reference = frame(48, 40, texture(48, 40, seed ^ 7).into_iter().map(|p| p / 32).collect());
    let origin = (8, 4);
    let search = MotionSearch::new(&cur, &reference, origin, 32, 4, 5).unwrap();
    let (w, h) = ((bw * 4).min(32 - bx * 4), (bh * 4).min(32 - by * 4));
    let fast = search.best(bx * 4, by * 4, w, h);
    let slow = block_me(&cur, &reference, &Rect::new(origin.0 + bx * 4, origin.1 + by * 4, w, h), 5).unwrap();
    prop_assert_eq!(fast, slow);
  }

  #[test]
  fn msmvf_values_in_range(seed in any::<u64>(), range in 0u32..10) {
    let cur = frame(64, 64, texture(64, 64, seed));
    let l0 = frame(64, 64, texture(64, 64, seed ^ 3));
    let l1 = frame(64, 64, vec![(seed % 256) as u8; 64 * 64]);
    let f = build_msmvf(&cur, RefPair::new(&l0, &l1), (0, 0), 64, range).unwrap();
    for k in 0..MVF_SCALES {
      for cell in f.grid(k) {
        for list in 0..2 {
          prop_assert!((-1.0..=1.0).contains(&cell[list * 3]));
          prop_assert!((-1.0..=1.0).contains(&cell[list * 3 + 1]));
          prop_assert!((0.0..=1.0).contains(&cell[list * 3 + 2]));
        }
      }
    }
  }
}

#[test]
fn global_shift_recovered() {
  let clip = shift_clip(96, 96, 2, (2, 0), 5);
  // cur(x, y) = ref(x + 2, y); interior blocks only.
  for (x, y) in [(8, 8), (40, 16), (56, 72)] {
    let mv = block_me(&clip[1], &clip[0], &Rect::new(x, y, 16, 16), 8).unwrap();
    assert_eq!((mv.dx, mv.dy, mv.sad), (2, 0, 0));
  }
}

#[test]
fn range_zero_is_colocated_sad() {
  let cur = frame(16, 16, texture(16, 16, 1));
  let reference = frame(16, 16, texture(16, 16, 2));
  let rect = Rect::new(4, 4, 8, 8);
  let mv = block_me(&cur, &reference, &rect, 0).unwrap();
  assert_eq!((mv.dx, mv.dy), (0, 0));
  assert_eq!(mv.sad, scan_oracle(&cur, &reference, &rect, 0).2);
}

#[test]
fn msmvf_static_is_zero() {
  let clip = static_clip(128, 128, 2, 9);
  let f = build_msmvf(&clip[1], RefPair::new(&clip[0], &clip[0]), (0, 0), 128, 16).unwrap();
  assert_eq!(f, MsMvField::zeros());
}

#[test]
fn msmvf_global_shift_is_constant() {
  let clip = shift_clip(192, 160, 2, (3, 1), 21);
  let (cur, prev) = (&clip[1], &clip[0]);
  let f = build_msmvf(cur, RefPair::new(prev, prev), (0, 0), 128, 8).unwrap();
  let expect = [3.0 / MV_NORM, 1.0 / MV_NORM, 0.0, 3.0 / MV_NORM, 1.0 / MV_NORM, 0.0];
  for k in 0..MVF_SCALES {
    let dim = MsMvField::grid_dim(k);
    assert_eq!(f.grid(k).len(), dim * dim);
    assert!(f.grid(k).iter().all(|cell| *cell == expect), "scale {k}");
  }
  assert_eq!(MsMvField::value_count(), (4 + 16 + 64 + 256 + 1024) * MVF_CHANNELS);
}

#[test]
fn msmvf_is_deterministic() {
  let clip = common::textured_clip(128, 128, 3, 4);
  let refs = RefPair::new(&clip[0], &clip[2]);
  let a = build_msmvf(&clip[1], refs, (0, 0), 128, 8).unwrap();
  let b = build_msmvf(&clip[1], refs, (0, 0), 128, 8).unwrap();
  let bits = |f: &MsMvField| f.grids().iter().flatten().flatten().map(|v| v.to_bits()).collect::<Vec<_>>();
  assert_eq!(bits(&a), bits(&b));
}

#[test]
fn msmvf_rejects_partial_ctu() {
  let clip = static_clip(96, 96, 2, 1);
  let err = build_msmvf(&clip[1], RefPair::single(&clip[0]), (0, 0), 128, 4).unwrap_err();
  assert!(matches!(err, Error::PartialCtu { .. }));
  assert!(err.to_string().starts_with("partial CTU unsupported"));
}

#[test]
fn residual_oracles() {
  let clip = static_clip(64, 64, 2, 3);
  let r = residual_ctu(&clip[1], &clip[0], (0, 0), 64, 4).unwrap();
  assert!(r.residual.iter().all(|v| *v == 0));

  let clip = shift_clip(160, 160, 2, (3, 1), 8);
  let r = residual_ctu(&clip[1], &clip[0], (16, 16), 64, 8).unwrap();
  assert!(r.residual.iter().all(|v| *v == 0));

  let clip = common::textured_clip(128, 128, 2, 6);
  let r = residual_ctu(&clip[1], &clip[0], (64, 0), 64, 4).unwrap();
  for (i, (p, e)) in r.prediction.iter().zip(&r.residual).enumerate() {
    let (x, y) = (64 + i % 64, i / 64);
    assert_eq!(*p as i16 + e, clip[1].at(x, y) as i16);
  }
}
