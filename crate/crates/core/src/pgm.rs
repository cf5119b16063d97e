//! Binary greymap (P5, maxval 255) output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Maps `[0, 1]` to a byte by `round(v * 255)`, clamping outside the range.
#[inline]
pub fn unit_to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn encode_p5(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height, "pixel buffer size");
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn write_p5(path: &Path, width: usize, height: usize, pixels: &[u8]) -> io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(&encode_p5(width, height, pixels))?;
    f.flush()
}
