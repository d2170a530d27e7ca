use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One rate-distortion operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdPoint {
  /// kbit/s
  pub bitrate: f64,
  /// dB
  pub psnr: f64,
}

impl RdPoint {
  pub fn new(bitrate: f64, psnr: f64) -> Self {
    RdPoint { bitrate, psnr }
  }
}

/// Cubic `log10(rate)` as a function of `(psnr - center) / scale`.
struct CubicFit {
  coef: [f64; 4],
  center: f64,
  scale: f64,
  lo: f64,
  hi: f64,
}

impl CubicFit {
  fn new(points: &[RdPoint]) -> Result<Self> {
    if points.len() < 4 {
      return Err(Error::InvalidCurve("need at least four points"));
    }
    if points.iter().any(|p| !(p.bitrate > 0.0) || !p.psnr.is_finite()) {
      return Err(Error::InvalidCurve("bitrates must be positive and PSNR finite"));
    }
    let mut pts: Vec<RdPoint> = points.to_vec();
    pts.sort_by(|a, b| a.bitrate.total_cmp(&b.bitrate));
    if pts.windows(2).any(|w| !(w[1].psnr > w[0].psnr) || !(w[1].bitrate > w[0].bitrate)) {
      return Err(Error::InvalidCurve("PSNR must increase strictly with bitrate"));
    }
    let lo = pts[0].psnr;
    let hi = pts[pts.len() - 1].psnr;
    let center = (lo + hi) / 2.0;
    let scale = ((hi - lo) / 2.0).max(1e-9);
    // Normal equations of the least-squares cubic.
    let mut ata = [[0.0f64; 4]; 4];
    let mut aty = [0.0f64; 4];
    for p in &pts {
      let u = (p.psnr - center) / scale;
      let y = libm::log10(p.bitrate);
      let pows = [1.0, u, u * u, u * u * u];
      for i in 0..4 {
        aty[i] += pows[i] * y;
        for j in 0..4 {
          ata[i][j] += pows[i] * pows[j];
        }
      }
    }
    let coef = solve4(ata, aty).ok_or(Error::InvalidCurve("singular fit"))?;
    Ok(CubicFit { coef, center, scale, lo, hi })
  }

  /// Integral of the fitted curve over `psnr` in `[a, b]`.
  fn integral(&self, a: f64, b: f64) -> f64 {
    let anti = |x: f64| {
      let u = (x - self.center) / self.scale;
      let c = &self.coef;
      self.scale * (c[0] * u + c[1] * u * u / 2.0 + c[2] * u * u * u / 3.0 + c[3] * u * u * u * u / 4.0)
    };
    anti(b) - anti(a)
  }
}

fn solve4(mut m: [[f64; 4]; 4], mut v: [f64; 4]) -> Option<[f64; 4]> {
  for col in 0..4 {
    let pivot = (col..4).max_by(|a, b| m[*a][col].abs().total_cmp(&m[*b][col].abs()))?;
    if m[pivot][col].abs() < 1e-300 {
      return None;
    }
    m.swap(col, pivot);
    v.swap(col, pivot);
    for row in col + 1..4 {
      let f = m[row][col] / m[col][col];
      for k in col..4 {
        m[row][k] -= f * m[col][k];
      }
      v[row] -= f * v[col];
    }
  }
  let mut x = [0.0; 4];
  for row in (0..4).rev() {
    let s: f64 = (row + 1..4).map(|k| m[row][k] * x[k]).sum();
    x[row] = (v[row] - s) / m[row][row];
  }
  Some(x)
}

/// Bjontegaard delta rate of `test` against `anchor`, in percent: average
/// bitrate difference at equal PSNR over the overlapping quality range.
pub fn bd_rate(anchor: &[RdPoint], test: &[RdPoint]) -> Result<f64> {
  let fa = CubicFit::new(anchor)?;
  let ft = CubicFit::new(test)?;
  let lo = fa.lo.max(ft.lo);
  let hi = fa.hi.min(ft.hi);
  if !(hi > lo) {
    return Err(Error::InvalidCurve("PSNR ranges do not overlap"));
  }
  let avg = (ft.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
  Ok((libm::pow(10.0, avg) - 1.0) * 100.0)
}
