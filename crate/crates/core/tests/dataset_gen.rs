mod common;

use common::{static_clip, textured_clip};
use qtmt_core::dataset::{generate_samples, GenerationConfig, GopConfig, GopStructure};
use qtmt_core::metrics::split_distribution;
use qtmt_core::rdo::CostParams;
use qtmt_core::{tree_from_maps, Constraints, LabelMaps, SplitType};

fn config(ctu: u32, gop: GopConfig) -> GenerationConfig {
  GenerationConfig {
    gop,
    constraints: Constraints::for_ctu(ctu).unwrap(),
    cost: CostParams { search_range: 4, ..CostParams::default() },
  }
}

#[test]
fn static_clip_gives_unsplit_labels() {
  let clip = static_clip(96, 64, 5, 4);
  let cfg = config(32, GopConfig::new(GopStructure::Hierarchical, 4).unwrap());
  let samples = generate_samples(&clip, &[22, 37], &cfg).unwrap();
  // 3x2 CTUs, 4 inter frames, 2 QPs.
  assert_eq!(samples.len(), 6 * 4 * 2);
  for s in &samples {
    assert_eq!(s.record.labels, LabelMaps::unsplit(32));
    assert!(s.record.residual.iter().all(|v| *v == 0));
  }
}

#[test]
fn sample_count_order_and_labels() {
  // 80x72 leaves partial CTUs on the right and bottom; they are skipped.
  let clip = textured_clip(80, 72, 4, 9);
  let cfg = config(32, GopConfig::new(GopStructure::LowDelay, 4).unwrap());
  let qps = [37, 22];
  let samples = generate_samples(&clip, &qps, &cfg).unwrap();
  assert_eq!(samples.len(), 4 * 3 * qps.len());
  let keys: Vec<_> = samples.iter().map(|s| (s.poc, s.origin.1, s.origin.0)).collect();
  assert!(keys.windows(2).all(|w| w[0] <= w[1]));
  for (i, s) in samples.iter().enumerate() {
    assert_eq!(s.record.qp, qps[i % 2]);
    s.record.validate(&cfg.constraints).unwrap();
    assert_eq!(tree_from_maps(&s.record.labels, &cfg.constraints).unwrap(), s.result.tree);
    assert_eq!(s.record.tid, cfg.gop.tid(s.poc));
  }
  assert_eq!(generate_samples(&clip, &qps, &cfg).unwrap(), samples);
}

#[test]
fn textured_content_is_ns_heavier_deeper() {
  let clip = textured_clip(128, 96, 3, 31);
  let cfg = config(32, GopConfig::default());
  let samples = generate_samples(&clip, &[22, 27], &cfg).unwrap();
  let maps: Vec<_> = samples.iter().map(|s| s.record.labels.clone()).collect();
  let p = split_distribution(&maps).unwrap();
  let ns = SplitType::Ns.mt_label().unwrap() as usize;
  assert!(p[2][ns] > p[0][ns], "{p:?}");
  assert!(p[0][ns] < 1.0, "textured content should split somewhere");
}

#[test]
fn low_qp_splits_at_least_as_finely() {
  let clip = textured_clip(64, 64, 2, 5);
  let cfg = config(32, GopConfig::new(GopStructure::LowDelay, 2).unwrap());
  let samples = generate_samples(&clip, &[17, 42], &cfg).unwrap();
  let leaves = |qp: u8| samples.iter().filter(|s| s.record.qp == qp).map(|s| s.result.tree.leaves().len()).sum::<usize>();
  assert!(leaves(17) >= leaves(42));
}
