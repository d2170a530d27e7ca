//! Synthetic clips and small helpers shared by the integration tests.
#![allow(dead_code)]

use qtmt_core::metrics::RdPoint;
use qtmt_core::Frame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth gradient plus blocky texture plus per-pixel noise, so that
/// motion search has a unique optimum and some regions prefer splitting.
pub fn texture(w: usize, h: usize, seed: u64) -> Vec<u8> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let tiles: Vec<u8> = (0..(w / 8 + 1) * (h / 8 + 1)).map(|_| rng.random_range(0..96)).collect();
  (0..w * h)
    .map(|i| {
      let (x, y) = (i % w, i / w);
      let grad = (x * 40 / w + y * 40 / h) as i32;
      let tile = tiles[(y / 8) * (w / 8 + 1) + x / 8] as i32;
      let noise = rng.random_range(0..48) as i32;
      (40 + grad + tile + noise).clamp(0, 255) as u8
    })
    .collect()
}

pub fn crop(src: &[u8], src_w: usize, x0: usize, y0: usize, w: usize, h: usize) -> Vec<u8> {
  let mut out = Vec::with_capacity(w * h);
  for y in 0..h {
    out.extend_from_slice(&src[(y0 + y) * src_w + x0..][..w]);
  }
  out
}

/// `n` identical frames.
pub fn static_clip(w: usize, h: usize, n: usize, seed: u64) -> Vec<Frame> {
  let base = texture(w, h, seed);
  (0..n).map(|p| Frame::new(w, h, p as u32, base.clone()).unwrap()).collect()
}

/// Camera pan: frame `p` shows the background at offset `p * (dx, dy)`,
/// so `cur(x, y) = prev(x + dx, y + dy)` wherever both are defined.
pub fn shift_clip(w: usize, h: usize, n: usize, (dx, dy): (usize, usize), seed: u64) -> Vec<Frame> {
  let (bw, bh) = (w + dx * n, h + dy * n);
  let base = texture(bw, bh, seed);
  (0..n)
    .map(|p| Frame::new(w, h, p as u32, crop(&base, bw, p * dx, p * dy, w, h)).unwrap())
    .collect()
}

/// Pan with an independently moving block and fresh sensor noise per
/// frame; gives content where some CTUs split deeply and others do not.
pub fn textured_clip(w: usize, h: usize, n: usize, seed: u64) -> Vec<Frame> {
  let (bw, bh) = (w + 2 * n, h + n);
  let base = texture(bw, bh, seed);
  let object = texture(40, 24, seed ^ 0xA5);
  let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
  (0..n)
    .map(|p| {
      let mut luma = crop(&base, bw, 2 * p, p, w, h);
      let (ox, oy) = (20 + 5 * p, 30 + 3 * p);
      for y in 0..24 {
        for x in 0..40 {
          if ox + x < w && oy + y < h {
            luma[(oy + y) * w + ox + x] = object[y * 40 + x].wrapping_add(60);
          }
        }
      }
      for v in luma.iter_mut() {
        *v = (*v as i32 + rng.random_range(-6..=6)).clamp(0, 255) as u8;
      }
      Frame::new(w, h, p as u32, luma).unwrap()
    })
    .collect()
}

/// Cubic through four points (Lagrange form) integrated with a dense
/// trapezoid rule.
pub fn bd_oracle(anchor: &[RdPoint; 4], test: &[RdPoint; 4]) -> f64 {
  let lagrange = |pts: &[RdPoint; 4], x: f64| {
    (0..4)
      .map(|i| {
        let basis: f64 = (0..4).filter(|j| *j != i).map(|j| (x - pts[j].psnr) / (pts[i].psnr - pts[j].psnr)).product();
        basis * pts[i].bitrate.log10()
      })
      .sum::<f64>()
  };
  let lo = anchor[0].psnr.max(test[0].psnr);
  let hi = anchor[3].psnr.min(test[3].psnr);
  let n = 20_000;
  let h = (hi - lo) / n as f64;
  let diff = |x: f64| lagrange(test, x) - lagrange(anchor, x);
  let mut area = (diff(lo) + diff(hi)) / 2.0;
  for i in 1..n {
    area += diff(lo + i as f64 * h);
  }
  (10f64.powf(area * h / (hi - lo)) - 1.0) * 100.0
}

pub fn random_curve(rng: &mut ChaCha8Rng) -> [RdPoint; 4] {
  let mut psnr = rng.random_range(30.0..34.0);
  let mut rate: f64 = rng.random_range(300.0..1500.0);
  std::array::from_fn(|_| {
    let p = RdPoint::new(rate, psnr);
    psnr += rng.random_range(1.5..3.5);
    rate *= rng.random_range(1.4..2.2);
    p
  })
}
