//! Plot-data writers.
//!
//! Tables are plain CSV with a header row, `.` decimals and LF line endings.
//! Floats use the shortest representation that parses back to the same
//! value, so identical results give identical bytes.

use std::io::Write;

use crate::capacity::WaterfillResult;
use crate::error::Result;
use crate::geometry::Direction;
use crate::shadow::MutualShadowResult;
use crate::spectra::SpectrumResult;

/// Shortest round-trip decimal; exponent notation outside `[1e-4, 1e16)`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// Generic numeric table.
pub fn write_table<W: Write>(mut w: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// `n, sigma, zeta[, zeta_times_Na]` with `n` starting at 1.
pub fn write_spectrum_csv<W: Write>(mut w: W, s: &SpectrumResult, n_a: Option<f64>) -> Result<()> {
    match n_a {
        Some(_) => writeln!(w, "n,sigma,zeta,zeta_times_Na")?,
        None => writeln!(w, "n,sigma,zeta")?,
    }
    for (i, (sigma, zeta)) in s.sigma.iter().zip(&s.zeta).enumerate() {
        write!(w, "{},{},{}", i + 1, fmt_float(*sigma), fmt_float(*zeta))?;
        if let Some(na) = n_a {
            write!(w, ",{}", fmt_float(zeta * na))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// One row per evaluated direction: `theta` is empty in 2D.
pub fn write_shadow_csv<W: Write>(mut w: W, msr: &MutualShadowResult) -> Result<()> {
    writeln!(w, "index,theta,phi,weight,measure")?;
    for (i, s) in msr.per_direction.iter().enumerate() {
        let (theta, phi) = match s.dir {
            Direction::Planar { phi } => (String::new(), phi),
            Direction::Spatial { theta, phi } => (fmt_float(theta), phi),
        };
        writeln!(w, "{i},{theta},{},{},{}", fmt_float(phi), fmt_float(s.weight), fmt_float(s.measure))?;
    }
    Ok(())
}

/// `gamma, capacity_bits, active_modes`.
pub fn write_capacity_csv<W: Write>(mut w: W, results: &[WaterfillResult]) -> Result<()> {
    writeln!(w, "gamma,capacity_bits,active_modes")?;
    for r in results {
        writeln!(w, "{},{},{}", fmt_float(r.gamma), fmt_float(r.capacity), r.active)?;
    }
    Ok(())
}
