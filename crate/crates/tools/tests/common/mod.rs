#![allow(dead_code)]

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth random texture: a coarse random grid, bilinearly upsampled.
pub fn texture(w: usize, h: usize, seed: u64) -> Vec<u8> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let step = 6;
  let (gw, gh) = (w / step + 2, h / step + 2);
  let g: Vec<f64> = (0..gw * gh).map(|_| rng.random_range(0.0..255.0)).collect();
  let mut out = vec![0u8; w * h];
  for y in 0..h {
    for x in 0..w {
      let (fx, fy) = (x as f64 / step as f64, y as f64 / step as f64);
      let (ix, iy) = (fx as usize, fy as usize);
      let (tx, ty) = (fx - ix as f64, fy - iy as f64);
      let at = |i: usize, j: usize| g[j * gw + i];
      let v = at(ix, iy) * (1.0 - tx) * (1.0 - ty)
        + at(ix + 1, iy) * tx * (1.0 - ty)
        + at(ix, iy + 1) * (1.0 - tx) * ty
        + at(ix + 1, iy + 1) * tx * ty;
      out[y * w + x] = v.round() as u8;
    }
  }
  out
}

/// `n` frames where frame t is the texture window moved by t*(dx, dy).
pub fn shift_clip(w: usize, h: usize, n: usize, (dx, dy): (usize, usize), seed: u64) -> Vec<Vec<u8>> {
  let (bw, bh) = (w + dx * n, h + dy * n);
  let big = texture(bw, bh, seed);
  (0..n)
    .map(|t| {
      let mut f = Vec::with_capacity(w * h);
      for y in 0..h {
        let row = (y + dy * t) * bw + dx * t;
        f.extend_from_slice(&big[row..row + w]);
      }
      f
    })
    .collect()
}

/// Plain 4:2:0 YUV4MPEG2 writer with neutral chroma.
pub fn write_y4m(path: &Path, w: usize, h: usize, frames: &[Vec<u8>]) {
  let mut f = std::fs::File::create(path).unwrap();
  write!(f, "YUV4MPEG2 W{w} H{h} F25:1 Ip A1:1 C420jpeg\n").unwrap();
  let chroma = vec![128u8; 2 * w.div_ceil(2) * h.div_ceil(2)];
  for luma in frames {
    f.write_all(b"FRAME\n").unwrap();
    f.write_all(luma).unwrap();
    f.write_all(&chroma).unwrap();
  }
}

/// Like [`shift_clip`] over uniform noise, so every block has a unique best match.
pub fn noise_clip(w: usize, h: usize, n: usize, (dx, dy): (usize, usize), seed: u64) -> Vec<Vec<u8>> {
  let (bw, bh) = (w + dx * n, h + dy * n);
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  let big: Vec<u8> = (0..bw * bh).map(|_| rng.random()).collect();
  (0..n)
    .map(|t| {
      let mut f = Vec::with_capacity(w * h);
      for y in 0..h {
        let row = (y + dy * t) * bw + dx * t;
        f.extend_from_slice(&big[row..row + w]);
      }
      f
    })
    .collect()
}
