mod common;

use common::{bd_oracle, random_curve};
use proptest::prelude::*;
use qtmt_core::maps::LabelMaps;
use qtmt_core::metrics::{
  bd_rate, candsplit_accuracy, class_weight, hybrid_loss, prf1, skipmt_confusion, split_distribution, time_saving,
  ConfusionTable, DecisionLog, DecisionRecord, LossReduction, LossWeights, RdPoint,
};
use qtmt_core::partition::random_tree;
use qtmt_core::predictor::{oracle_predict, NoiseParams};
use qtmt_core::rdo::CuEvidence;
use qtmt_core::{maps_from_tree, Constraints, Error, SplitSet, SplitType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn prf1_closed_forms() {
  let p = prf1(&ConfusionTable::new(30.0, 0.0, 70.0, 0.0)).unwrap();
  assert_eq!((p.precision, p.recall, p.f1), (100.0, 100.0, 100.0));
  let p = prf1(&ConfusionTable::new(0.02, 0.0, 99.92, 0.06)).unwrap();
  assert!((p.precision - 25.0).abs() < 1e-9 && (p.recall - 100.0).abs() < 1e-9 && (p.f1 - 40.0).abs() < 1e-9);
  assert!(matches!(prf1(&ConfusionTable::default()), Err(Error::EmptyConfusion)));
  assert!(matches!(prf1(&ConfusionTable::new(0.0, 3.0, 5.0, 0.0)), Err(Error::DegenerateConfusion(_))));
}

fn oracle_log(seed: u64, noise: NoiseParams) -> (DecisionLog, Constraints) {
  let c = Constraints::for_ctu(64).unwrap();
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let mut log = DecisionLog::default();
  for i in 0..20 {
    let gt = random_tree(&c, &mut rng, 0.65);
    let pred = oracle_predict(&maps_from_tree(&gt), &NoiseParams { seed: noise.seed + i, ..noise }).unwrap();
    log.extend(DecisionLog::from_tree(&gt, &pred, &c).unwrap());
  }
  (log, c)
}

#[test]
fn noiseless_oracle_has_no_skipmt_errors() {
  let (log, _) = oracle_log(1, NoiseParams::default());
  let tables = skipmt_confusion(&log).unwrap();
  for t in &tables {
    assert_eq!((t.fp, t.fn_), (0.0, 0.0));
  }
  assert!(tables[0].total() > 0.0);
  for row in candsplit_accuracy(&log, &[0.0, 0.5, 1.0], false) {
    for acc in row.levels.into_iter().flatten() {
      assert_eq!(acc, 100.0);
    }
  }
}

#[test]
fn one_mislabel_is_one_off_diagonal_count() {
  let (mut log, _) = oracle_log(2, NoiseParams::default());
  let before = skipmt_confusion(&log).unwrap();
  let r = log.records.iter_mut().find(|r| r.skip_mt.is_some() && r.qt_depth == 1).unwrap();
  let needs = r.needs_qt();
  r.skip_mt = Some(!needs);
  let after = skipmt_confusion(&log).unwrap();
  for d in 0..4 {
    if d == 1 {
      let t = &after[1];
      let b = &before[1];
      assert_eq!(t.fp - b.fp + t.fn_ - b.fn_, 1.0);
      assert_eq!(t.total(), b.total());
    } else {
      assert_eq!(after[d], before[d]);
    }
  }
}

#[test]
fn skipmt_rejects_depth_four_and_empty_logs() {
  assert!(matches!(skipmt_confusion(&DecisionLog::default()), Err(Error::EmptyLog)));
  let (mut log, _) = oracle_log(3, NoiseParams::default());
  log.records[0].qt_depth = 4;
  log.records[0].skip_mt = Some(false);
  assert!(matches!(skipmt_confusion(&log), Err(Error::SkipMtDepth(4))));
}

/// Random record for the tally test.
fn random_record(rng: &mut ChaCha8Rng) -> DecisionRecord {
  let qt_depth = rng.random_range(0..4u8);
  let gt_split = if rng.random_bool(0.4) { SplitType::Qt } else { SplitType::Ns };
  let evidence = CuEvidence { legal: SplitSet::all(), qt_depth, qt_mean: 0.0, mt_probs: [0.25; 4] };
  let skip_mt = rng.random_bool(0.8).then(|| rng.random_bool(0.5));
  DecisionRecord { qt_depth, mt_depth: 0, gt_split, evidence, skip_mt, mt_level: None }
}

#[test]
fn skipmt_matches_manual_tally_on_fifty_entries() {
  let mut rng = ChaCha8Rng::seed_from_u64(50);
  let log = DecisionLog { records: (0..50).map(|_| random_record(&mut rng)).collect() };
  // Tally written out as a table: [depth][needs_qt][skip].
  let mut tally = [[[0u32; 2]; 2]; 4];
  for r in &log.records {
    if let Some(s) = r.skip_mt {
      tally[r.qt_depth as usize][(r.gt_split == SplitType::Qt) as usize][s as usize] += 1;
    }
  }
  let tables = skipmt_confusion(&log).unwrap();
  for d in 0..4 {
    let t = &tables[d];
    assert_eq!(t.tp, tally[d][1][1] as f64);
    assert_eq!(t.fn_, tally[d][1][0] as f64);
    assert_eq!(t.tn, tally[d][0][0] as f64);
    assert_eq!(t.fp, tally[d][0][1] as f64);
  }
}

#[test]
fn candsplit_accuracy_monotone_with_ns_floor() {
  let (log, _) = oracle_log(4, NoiseParams { smoothing: 0.7, depth_jitter: 0.3, seed: 9 });
  let grid: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
  let rows = candsplit_accuracy(&log, &grid, true);
  for b in 0..3 {
    let ns = log.records.iter().filter(|r| r.mt_level == Some(b) && r.gt_split == SplitType::Ns).count() as f64;
    let total = log.records.iter().filter(|r| r.mt_level == Some(b)).count() as f64;
    let curve: Vec<f64> = rows.iter().map(|r| r.levels[b].unwrap()).collect();
    assert!(curve.windows(2).all(|w| w[1] <= w[0]), "level {b}: {curve:?}");
    assert!(*curve.last().unwrap() >= ns / total * 100.0 - 1e-9);
    // Past every smoothed probability the list is {NS, best MT}: flat.
    assert_eq!(curve[36], curve[40]);
  }
}

#[test]
fn split_distribution_matches_second_count() {
  let c = Constraints::for_ctu(32).unwrap();
  let mut rng = ChaCha8Rng::seed_from_u64(8);
  let maps: Vec<LabelMaps> = (0..40).map(|_| maps_from_tree(&random_tree(&c, &mut rng, 0.7))).collect();
  let p = split_distribution(&maps).unwrap();
  for b in 0..3 {
    let mut hist = std::collections::BTreeMap::new();
    for m in &maps {
      for s in m.mt[b].cells() {
        *hist.entry(s.mt_label().unwrap()).or_insert(0usize) += 1;
      }
    }
    let total: usize = hist.values().sum();
    for label in 0..5u8 {
      let expect = *hist.get(&label).unwrap_or(&0) as f64 / total as f64;
      assert!((p[b][label as usize] - expect).abs() < 1e-15);
    }
  }
  let unsplit = split_distribution(&[LabelMaps::unsplit(32)]).unwrap();
  assert_eq!(unsplit[2], [0.0, 0.0, 1.0, 0.0, 0.0]);
  assert!(split_distribution(&[]).is_err());
}

fn props(p_ns: f64, p_hbt: f64) -> [[f64; 5]; 3] {
  let rest = (1.0 - p_ns - p_hbt) / 3.0;
  [[rest, rest, p_ns, p_hbt, rest]; 3]
}

#[test]
fn class_weight_closed_forms() {
  let w = LossWeights::with_proportions(props(0.6, 0.2));
  assert!((class_weight(0, SplitType::Hbt, &w).unwrap() - 6.0).abs() < 1e-12);
  assert_eq!(class_weight(1, SplitType::Ns, &w).unwrap(), 1.0);
  let rest = (1.0 - 0.8) / 3.0;
  assert!((class_weight(2, SplitType::Htt, &w).unwrap() - 0.6 / rest).abs() < 1e-12);
  let same = LossWeights { lambda: [1.0; 5], ..LossWeights::with_proportions([[0.2; 5]; 3]) };
  assert_eq!(class_weight(0, SplitType::Vtt, &same).unwrap(), 1.0);
  let mut unseen = props(0.6, 0.2);
  unseen[1][0] = 0.0;
  let w = LossWeights::with_proportions(unseen);
  let err = class_weight(1, SplitType::Vtt, &w).unwrap_err();
  assert!(err.to_string().starts_with("unseen class"));
  assert!(class_weight(0, SplitType::Qt, &w).is_err());
}

#[test]
fn hybrid_loss_oracles() {
  let c = Constraints::default();
  let mut rng = ChaCha8Rng::seed_from_u64(12);
  let maps = maps_from_tree(&random_tree(&c, &mut rng, 0.7));
  let w = LossWeights::with_proportions(props(0.6, 0.2));
  let perfect = oracle_predict(&maps, &NoiseParams::default()).unwrap();
  assert!(hybrid_loss(&perfect, &maps, &w, LossReduction::Sum).unwrap().abs() < 1e-9);

  // a = 1: mean squared depth error only.
  let noisy = oracle_predict(&maps, &NoiseParams { smoothing: 0.4, depth_jitter: 0.5, seed: 2 }).unwrap();
  let mse = noisy.qt_depth.cells().iter().zip(maps.qt.cells()).map(|(p, t)| (*p as f64 - *t as f64).powi(2)).sum::<f64>() / 256.0;
  let only_mse = LossWeights { a: 1.0, ..w };
  assert!((hybrid_loss(&noisy, &maps, &only_mse, LossReduction::Sum).unwrap() - mse).abs() < 1e-12);

  // One HBT cell predicted at 0.5 and one depth cell off by one.
  let mut labels = LabelMaps::unsplit(128);
  labels.mt[0].cells_mut()[37] = SplitType::Hbt;
  let mut pred = oracle_predict(&labels, &NoiseParams::default()).unwrap();
  pred.mt_probs[0].cells_mut()[37] = [0.0, 0.0, 0.5, 0.5, 0.0];
  pred.qt_depth.cells_mut()[100] = 1.0;
  let got = hybrid_loss(&pred, &labels, &w, LossReduction::Sum).unwrap();
  let expect = 0.8 / 256.0 + 0.2 * 6.0 * std::f64::consts::LN_2;
  assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
  let mean = hybrid_loss(&pred, &labels, &w, LossReduction::Mean).unwrap();
  assert!((mean - (0.8 / 256.0 + 0.2 * 6.0 * std::f64::consts::LN_2 / (3.0 * 1024.0))).abs() < 1e-12);

  let small = LabelMaps::unsplit(64);
  assert!(matches!(hybrid_loss(&pred, &small, &w, LossReduction::Sum), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn bd_rate_matches_trapezoid_oracle_on_random_curves() {
  let mut rng = ChaCha8Rng::seed_from_u64(2024);
  let mut checked = 0;
  while checked < 50 {
    let anchor = random_curve(&mut rng);
    let test = anchor.map(|p| RdPoint::new(p.bitrate * rng.random_range(0.8..1.3), p.psnr + rng.random_range(-0.4..0.4)));
    if test.windows(2).any(|w| w[1].psnr <= w[0].psnr || w[1].bitrate <= w[0].bitrate) {
      continue;
    }
    let got = bd_rate(&anchor, &test).unwrap();
    let expect = bd_oracle(&anchor, &test);
    assert!((got - expect).abs() < 0.01, "{got} vs {expect}");
    checked += 1;
  }
}

#[test]
fn bd_rate_shift_and_antisymmetry() {
  let mut rng = ChaCha8Rng::seed_from_u64(7);
  for _ in 0..20 {
    let a = random_curve(&mut rng);
    assert!(bd_rate(&a, &a).unwrap().abs() < 1e-9);
    let shifted = a.map(|p| RdPoint::new(p.bitrate * 1.1, p.psnr));
    assert!((bd_rate(&a, &shifted).unwrap() - 10.0).abs() < 0.01);
    let b = a.map(|p| RdPoint::new(p.bitrate * rng.random_range(0.9..1.1), p.psnr));
    let ab = bd_rate(&a, &b).unwrap();
    let ba = bd_rate(&b, &a).unwrap();
    assert!((ab + ba / (1.0 + ba / 100.0)).abs() < 0.05, "{ab} {ba}");
  }
}

#[test]
fn time_saving_cases() {
  assert_eq!(time_saving(&[100.0; 4], &[90.0, 80.0, 70.0, 60.0]).unwrap(), 25.0);
  assert_eq!(time_saving(&[3.0, 7.0, 11.0, 13.0], &[3.0, 7.0, 11.0, 13.0]).unwrap(), 0.0);
  assert!(matches!(time_saving(&[1.0; 4], &[1.0, -1.0, 1.0, 1.0]), Err(Error::NonPositiveTime(_))));
}

proptest! {
  #[test]
  fn hybrid_loss_nonnegative_and_zero_only_when_exact(seed in any::<u64>(), eps in 0.0f64..0.95, jitter in 0.0f64..1.0, a in 0.0f64..=1.0) {
    let c = Constraints::for_ctu(32).unwrap();
    let maps = maps_from_tree(&random_tree(&c, &mut ChaCha8Rng::seed_from_u64(seed), 0.6));
    let w = LossWeights { a, ..LossWeights::with_proportions([[0.1, 0.2, 0.4, 0.2, 0.1]; 3]) };
    let pred = oracle_predict(&maps, &NoiseParams { smoothing: eps, depth_jitter: jitter, seed }).unwrap();
    let l = hybrid_loss(&pred, &maps, &w, LossReduction::Sum).unwrap();
    prop_assert!(l >= 0.0);
    if l == 0.0 {
      prop_assert!(eps == 0.0 || a == 1.0);
      prop_assert!(jitter == 0.0 || a == 0.0);
    }
  }
}
