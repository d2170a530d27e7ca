//! YUV4MPEG2 and raw 8-bit luma input. Only the luma plane is kept.

use std::fs::File;
use std::io::{BufRead, BufReader, ErrorKind, Read};
use std::path::Path;

use qtmt_core::Frame;

use crate::error::{Result, ToolError};

const MAX_HEADER: usize = 4096;

/// Bytes of chroma that follow each luma plane.
fn chroma_bytes(colorspace: &str, w: usize, h: usize) -> Option<usize> {
  let (cw, ch) = (w.div_ceil(2), h.div_ceil(2));
  Some(match colorspace {
    "420" | "420jpeg" | "420paldv" | "420mpeg2" => 2 * cw * ch,
    "422" => 2 * cw * h,
    "444" => 2 * w * h,
    "444alpha" => 3 * w * h,
    "mono" => 0,
    _ => return None,
  })
}

/// Reads one `\n`-terminated line. `Ok(None)` on a clean end of input.
fn read_line<R: BufRead>(r: &mut R, name: &str, what: &str) -> Result<Option<String>> {
  let mut buf = Vec::new();
  let n = r
    .by_ref()
    .take(MAX_HEADER as u64)
    .read_until(b'\n', &mut buf)
    .map_err(|e| ToolError::format(name, format!("reading {what}: {e}")))?;
  if n == 0 {
    return Ok(None);
  }
  if buf.last() != Some(&b'\n') {
    if n >= MAX_HEADER {
      return Err(ToolError::format(name, format!("malformed header: {what} longer than {MAX_HEADER} bytes")));
    }
    return Err(ToolError::format(name, format!("unexpected end of stream in {what}")));
  }
  buf.pop();
  String::from_utf8(buf)
    .map(Some)
    .map_err(|_| ToolError::format(name, format!("malformed header: {what} is not ASCII")))
}

struct Y4mHeader {
  width: usize,
  height: usize,
  chroma: usize,
}

fn parse_header(line: &str, name: &str) -> Result<Y4mHeader> {
  let bad = |msg: String| ToolError::format(name, format!("malformed header: {msg}"));
  let mut tokens = line.split(' ').filter(|t| !t.is_empty());
  if tokens.next() != Some("YUV4MPEG2") {
    return Err(bad("missing YUV4MPEG2 signature".into()));
  }
  let (mut width, mut height, mut colorspace) = (None, None, "420jpeg".to_string());
  for tok in tokens {
    let (tag, val) = tok.split_at(1);
    match tag {
      "W" => width = Some(val.parse::<usize>().map_err(|_| bad(format!("bad width {val:?}")))?),
      "H" => height = Some(val.parse::<usize>().map_err(|_| bad(format!("bad height {val:?}")))?),
      "C" => colorspace = val.to_string(),
      "X" => {
        let depth = val.strip_prefix("YSCSS=").and_then(|v| v.rsplit_once('P')).map(|(_, d)| d);
        if let Some(d) = depth.filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && *d != "8") {
          return Err(ToolError::format(name, format!("unsupported bit depth: {val} ({d}-bit)")));
        }
      }
      "F" | "I" | "A" => {}
      _ => return Err(bad(format!("unknown tag {tok:?}"))),
    }
  }
  let width = width.filter(|w| *w > 0).ok_or_else(|| bad("missing or zero width".into()))?;
  let height = height.filter(|h| *h > 0).ok_or_else(|| bad("missing or zero height".into()))?;
  let digits = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
  let depth = match colorspace.rsplit_once('p') {
    Some((_, d)) if digits(d) => Some(d),
    _ => colorspace.strip_prefix("mono").filter(|d| digits(d)),
  };
  if let Some(d) = depth {
    return Err(ToolError::format(name, format!("unsupported bit depth: C{colorspace} ({d}-bit)")));
  }
  let chroma = chroma_bytes(&colorspace, width, height).ok_or_else(|| bad(format!("unsupported colorspace C{colorspace}")))?;
  Ok(Y4mHeader { width, height, chroma })
}

fn read_payload<R: Read>(r: &mut R, buf: &mut [u8], name: &str, poc: usize) -> Result<()> {
  r.read_exact(buf).map_err(|e| match e.kind() {
    ErrorKind::UnexpectedEof => ToolError::format(name, format!("unexpected end of stream in frame {poc}")),
    _ => ToolError::format(name, format!("frame {poc}: {e}")),
  })
}

/// Parses a YUV4MPEG2 stream; frames get POCs in display order from 0.
pub fn read_y4m<R: BufRead>(mut r: R, name: &str) -> Result<Vec<Frame>> {
  let line = read_line(&mut r, name, "stream header")?
    .ok_or_else(|| ToolError::format(name, "malformed header: empty file"))?;
  let hdr = parse_header(&line, name)?;
  let mut frames = Vec::new();
  let mut chroma = vec![0u8; hdr.chroma];
  while let Some(line) = read_line(&mut r, name, "frame header")? {
    let poc = frames.len();
    if line != "FRAME" && !line.starts_with("FRAME ") {
      return Err(ToolError::format(name, format!("malformed header: frame {poc} does not start with FRAME")));
    }
    let mut luma = vec![0u8; hdr.width * hdr.height];
    read_payload(&mut r, &mut luma, name, poc)?;
    read_payload(&mut r, &mut chroma, name, poc)?;
    frames.push(Frame::new(hdr.width, hdr.height, poc as u32, luma)?);
  }
  Ok(frames)
}

pub fn load_y4m(path: &Path) -> Result<Vec<Frame>> {
  let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
  read_y4m(BufReader::new(f), &path.display().to_string())
}

/// Planar 8-bit luma frames of a known size, back to back.
pub fn read_raw_y<R: Read>(mut r: R, width: usize, height: usize, name: &str) -> Result<Vec<Frame>> {
  if width == 0 || height == 0 {
    return Err(ToolError::Usage("raw input needs non-zero --width and --height".into()));
  }
  let mut frames = Vec::new();
  loop {
    let mut luma = vec![0u8; width * height];
    let mut filled = 0;
    while filled < luma.len() {
      match r.read(&mut luma[filled..]) {
        Ok(0) => break,
        Ok(n) => filled += n,
        Err(e) if e.kind() == ErrorKind::Interrupted => {}
        Err(e) => return Err(ToolError::format(name, e.to_string())),
      }
    }
    if filled == 0 {
      return Ok(frames);
    }
    if filled < luma.len() {
      return Err(ToolError::format(name, format!("unexpected end of stream in frame {}", frames.len())));
    }
    let poc = frames.len() as u32;
    frames.push(Frame::new(width, height, poc, luma)?);
  }
}

/// Loads `.y4m` files by header, anything else as raw luma of the given
/// size.
pub fn load_video(path: &Path, raw_size: Option<(usize, usize)>) -> Result<Vec<Frame>> {
  let is_y4m = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("y4m"));
  if is_y4m {
    return load_y4m(path);
  }
  let (w, h) = raw_size.ok_or_else(|| {
    ToolError::Usage(format!("{}: not a .y4m file; pass --width and --height for raw luma", path.display()))
  })?;
  let f = File::open(path).map_err(|e| ToolError::io(path, e))?;
  read_raw_y(BufReader::new(f), w, h, &path.display().to_string())
}
