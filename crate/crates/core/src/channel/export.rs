use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"NDCH";

/// Bytes per complex entry in the binary dump.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Two `f32`.
    Complex64,
    /// Two `f64`.
    Complex128,
}

impl Precision {
    fn bytes(self) -> u32 {
        match self {
            Precision::Complex64 => 8,
            Precision::Complex128 => 16,
        }
    }
}

/// Writes `magic, rows, cols, bytes per entry` (little-endian `u32`s) followed
/// by the entries in row-major order.
pub fn write_binary(path: &Path, mat: MatRef<'_, c64>, precision: Precision) -> Result<()> {
    let rows = u32::try_from(mat.nrows()).map_err(|_| Error::InvalidArgument("too many rows".into()))?;
    let cols = u32::try_from(mat.ncols()).map_err(|_| Error::InvalidArgument("too many columns".into()))?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    for v in [rows, cols, precision.bytes()] {
        w.write_all(&v.to_le_bytes())?;
    }
    for i in 0..mat.nrows() {
        for j in 0..mat.ncols() {
            let z = mat[(i, j)];
            match precision {
                Precision::Complex64 => {
                    w.write_all(&(z.re as f32).to_le_bytes())?;
                    w.write_all(&(z.im as f32).to_le_bytes())?;
                }
                Precision::Complex128 => {
                    w.write_all(&z.re.to_le_bytes())?;
                    w.write_all(&z.im.to_le_bytes())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<Mat<c64>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(Error::InvalidArgument("not a channel dump: bad magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(header[4 * i..4 * i + 4].try_into().unwrap()) as usize;
    let (rows, cols, bytes) = (word(1), word(2), word(3));
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    if (bytes != 8 && bytes != 16) || data.len() != rows * cols * bytes {
        return Err(Error::InvalidArgument("channel dump is truncated or has an unknown precision".into()));
    }
    let half = bytes / 2;
    let real = |off: usize| -> f64 {
        if half == 4 {
            f32::from_le_bytes(data[off..off + 4].try_into().unwrap()) as f64
        } else {
            f64::from_le_bytes(data[off..off + 8].try_into().unwrap())
        }
    };
    Ok(Mat::from_fn(rows, cols, |i, j| {
        let off = (i * cols + j) * bytes;
        c64::new(real(off), real(off + half))
    }))
}
