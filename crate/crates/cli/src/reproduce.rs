//! Desk-scale versions of the paper's figures. Each figure writes one CSV
//! per curve into `out/<figure id>/`.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndof::capacity::{inverse_eigen_curve, waterfill};
use ndof::channel::{assemble_channel, far_field_ports, sample_region, KernelKind, LinearOperator, Receiver};
use ndof::geometry::{Shape2, Shape3};
use ndof::io::write_table;
use ndof::quadrature::DirectionQuadrature;
use ndof::shadow::{
    paraxial_sphere_area, shadow_area_two_spheres, shadow_length_two_lines, total_far_field_shadow,
    total_mutual_shadow, wavelength_for_ndof, NdofModel, Region,
};
use ndof::spectra::{dense_spectrum, randomized_spectrum, SpectrumResult};
use ndof::{Error, Result};

pub const FIGURES: [&str; 8] = [
    "fig_ideal_squares",
    "fig_waterfill",
    "fig_cyl_coverage",
    "fig_lines_sweep",
    "fig_geos_2d",
    "fig_shadow_r2r",
    "fig_spectra_r2r",
    "fig_spheres_paraxial",
];

/// Runs one figure (or `all`) and returns the files written.
pub fn reproduce(figure: &str, out: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    if figure == "all" {
        let mut files = Vec::new();
        for f in FIGURES {
            files.extend(reproduce(f, out, seed)?);
        }
        return Ok(files);
    }
    let dir = out.join(figure);
    std::fs::create_dir_all(&dir)?;
    let mut w = Writer { dir, files: Vec::new() };
    match figure {
        "fig_ideal_squares" => ideal_squares(&mut w, seed)?,
        "fig_waterfill" => waterfill_levels(&mut w, seed)?,
        "fig_cyl_coverage" => cyl_coverage(&mut w)?,
        "fig_lines_sweep" => lines_sweep(&mut w)?,
        "fig_geos_2d" => geos_2d(&mut w, seed)?,
        "fig_shadow_r2r" => shadow_r2r(&mut w)?,
        "fig_spectra_r2r" => spectra_r2r(&mut w, seed)?,
        "fig_spheres_paraxial" => spheres_paraxial(&mut w)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure id {other:?}; expected one of {} or all",
                FIGURES.join(", ")
            )))
        }
    }
    Ok(w.files)
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let path = self.dir.join(format!("{name}.csv"));
        let mut f = BufWriter::new(File::create(&path)?);
        write_table(&mut f, header, rows)?;
        f.flush()?;
        self.files.push(path);
        Ok(())
    }

    fn spectrum(&mut self, name: &str, s: &SpectrumResult, n_a: f64) -> Result<()> {
        let rows: Vec<Vec<f64>> = s
            .zeta
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let n = (i + 1) as f64;
                vec![n, n / n_a, *z, z * n_a]
            })
            .collect();
        self.table(name, &["n", "n_over_Na", "zeta", "zeta_times_Na"], &rows)
    }
}

fn label(x: f64) -> String {
    format!("{x}").replace('.', "p")
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn sphere_quadrature() -> Result<DirectionQuadrature> {
    DirectionQuadrature::sphere(128, 256)
}

/// Unit squares: the transmitter in `z = 0`, the receiver at height `d`.
#[derive(Clone, Copy, Debug)]
enum SquareSetup {
    Parallel,
    /// Receiver also shifted by `d` along x.
    Shifted,
    /// Receiver stands vertically above the transmitter's centre line.
    Rotated,
}

impl SquareSetup {
    fn name(self) -> &'static str {
        match self {
            SquareSetup::Parallel => "parallel",
            SquareSetup::Shifted => "shifted",
            SquareSetup::Rotated => "rotated",
        }
    }

    fn regions(self, d: f64) -> Result<(Region, Region)> {
        let t = Shape3::plate(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]])?;
        let r = match self {
            SquareSetup::Parallel => Shape3::plate(&[[0.0, 0.0, d], [1.0, 0.0, d], [1.0, 1.0, d], [0.0, 1.0, d]])?,
            SquareSetup::Shifted => {
                Shape3::plate(&[[d, 0.0, d], [1.0 + d, 0.0, d], [1.0 + d, 1.0, d], [d, 1.0, d]])?
            }
            SquareSetup::Rotated => {
                Shape3::plate(&[[0.0, 0.5, d], [1.0, 0.5, d], [1.0, 0.5, d + 1.0], [0.0, 0.5, d + 1.0]])?
            }
        };
        Ok((Region::spatial("T", vec![t])?, Region::spatial("R", vec![r])?))
    }
}

/// Scalar point-source spectrum between two regions at `λ` chosen for `n_a`.
fn region_spectrum(t: &Region, r: &Region, quad: &DirectionQuadrature, n_a: f64, seed: Option<u64>) -> Result<SpectrumResult> {
    let (model, kind) = if t.dimension() == 2 {
        (NdofModel::Scalar2d, KernelKind::Scalar2d)
    } else {
        (NdofModel::Scalar3d, KernelKind::Scalar3d)
    };
    let msr = total_mutual_shadow(t, r, quad)?;
    let lambda = wavelength_for_ndof(&msr, n_a, model)?;
    let ts = sample_region(t, lambda / 5.0)?;
    let rs = sample_region(r, lambda / 5.0)?;
    let h = assemble_channel(&ts, Receiver::Points(&rs), 2.0 * PI / lambda, kind)?;
    match seed {
        Some(seed) => {
            let p = ((3.0 * n_a).ceil() as usize).min(h.nrows().min(h.ncols()));
            randomized_spectrum(&h, p, seed, 1)
        }
        None => dense_spectrum(&h),
    }
}

fn squares_spectrum(setup: SquareSetup, d: f64, n_a: f64, seed: u64) -> Result<SpectrumResult> {
    let (t, r) = setup.regions(d)?;
    region_spectrum(&t, &r, &sphere_quadrature()?, n_a, Some(seed))
}

const SQUARES_NA: [f64; 2] = [50.0, 100.0];

fn ideal_squares(w: &mut Writer, seed: u64) -> Result<()> {
    let n_max = 2.0 * SQUARES_NA[1];
    let ideal: Vec<Vec<f64>> = (1..=n_max as usize)
        .map(|n| {
            let x = n as f64 / SQUARES_NA[1];
            vec![x, if x <= 1.0 { 1.0 } else { 0.0 }]
        })
        .collect();
    w.table("ideal", &["n_over_Na", "zeta_times_Na"], &ideal)?;
    for n_a in SQUARES_NA {
        let s = squares_spectrum(SquareSetup::Parallel, 1.0, n_a, seed)?;
        w.spectrum(&format!("squares_na{n_a}"), &s, n_a)?;
    }
    Ok(())
}

fn waterfill_levels(w: &mut Writer, seed: u64) -> Result<()> {
    for n_a in SQUARES_NA {
        let s = squares_spectrum(SquareSetup::Parallel, 1.0, n_a, seed)?;
        let inverse = inverse_eigen_curve(&s.zeta, n_a)?;
        let rows: Vec<Vec<f64>> =
            inverse.iter().enumerate().map(|(i, v)| vec![(i + 1) as f64 / n_a, *v]).collect();
        w.table(&format!("inverse_na{n_a}"), &["n_over_Na", "inverse_zeta_Na"], &rows)?;
        let nu: Vec<f64> = s.zeta.iter().map(|z| z * n_a).collect();
        let levels = logspace(1e-2, 1e3, 26)
            .into_iter()
            .map(|gamma| {
                let r = waterfill(&nu, gamma)?;
                Ok(vec![gamma, r.capacity, r.active as f64, r.water_level * gamma])
            })
            .collect::<Result<Vec<_>>>()?;
        w.table(
            &format!("waterfill_na{n_a}"),
            &["gamma", "capacity_bits", "active_modes", "water_level_gamma"],
            &levels,
        )?;
    }
    Ok(())
}

fn cyl_coverage(w: &mut Writer) -> Result<()> {
    let region = Region::planar("T", vec![Shape2::disc([0.0, 0.0], 1.0)?])?;
    for (name, span) in [("full", 2.0 * PI), ("quarter", PI / 2.0)] {
        let quad = DirectionQuadrature::arc(0.0, span, 512)?;
        let msr = total_far_field_shadow(&region, &quad)?;
        let ports = far_field_ports(&quad, false)?;
        for n_a in [50.0, 100.0] {
            let lambda = wavelength_for_ndof(&msr, n_a, NdofModel::Scalar2d)?;
            let t = sample_region(&region, lambda / 5.0)?;
            let h = assemble_channel(&t, Receiver::FarField(&ports), 2.0 * PI / lambda, KernelKind::FarField2d)?;
            w.spectrum(&format!("cylinder_{name}_na{n_a}"), &dense_spectrum(&h)?, n_a)?;
        }
    }
    Ok(())
}

fn two_lines(d: f64) -> Result<(Region, Region)> {
    Ok((
        Region::planar("T", vec![Shape2::segment([-0.5, 0.0], [0.5, 0.0])?])?,
        Region::planar("R", vec![Shape2::segment([-0.25, d], [0.25, d])?])?,
    ))
}

fn lines_sweep(w: &mut Writer) -> Result<()> {
    let quad = DirectionQuadrature::circle(4096)?;
    for n_a in [5.0, 10.0, 50.0] {
        for d in [0.1, 0.5, 1.0, 5.0] {
            let (t, r) = two_lines(d)?;
            let s = region_spectrum(&t, &r, &quad, n_a, None)?;
            w.spectrum(&format!("lines_na{n_a}_d{}", label(d)), &s, n_a)?;
        }
    }
    let rows: Vec<Vec<f64>> = logspace(1e-2, 1e2, 41)
        .into_iter()
        .map(|d| vec![d, shadow_length_two_lines(1.0, 0.5, d), 0.5 / d])
        .collect();
    w.table("shadow_length", &["d_over_l", "L_TR_over_l", "paraxial_over_l"], &rows)
}

#[derive(Clone, Copy)]
enum Planar {
    Parallel,
    Rotated(f64),
    Rectangles,
}

impl Planar {
    fn name(self) -> String {
        match self {
            Planar::Parallel => "parallel".into(),
            Planar::Rotated(phi) => format!("rotated{}deg", (phi.to_degrees()).round()),
            Planar::Rectangles => "rectangles".into(),
        }
    }

    /// Lines of length 1 and 1/2, or rectangles of those widths and depth
    /// 1/10, a gap `d` apart. A rotated receiver line turns about its centre.
    fn regions(self, d: f64) -> Result<(Region, Region)> {
        match self {
            Planar::Parallel => two_lines(d),
            Planar::Rotated(phi) => {
                let (c, s) = (0.25 * phi.cos(), 0.25 * phi.sin());
                Ok((
                    Region::planar("T", vec![Shape2::segment([-0.5, 0.0], [0.5, 0.0])?])?,
                    Region::planar("R", vec![Shape2::segment([-c, d + 0.25 - s], [c, d + 0.25 + s])?])?,
                ))
            }
            Planar::Rectangles => Ok((
                Region::planar("T", vec![Shape2::polygon(&[[-0.5, -0.1], [0.5, -0.1], [0.5, 0.0], [-0.5, 0.0]])?])?,
                Region::planar("R", vec![Shape2::polygon(&[[-0.25, d], [0.25, d], [0.25, d + 0.1], [-0.25, d + 0.1]])?])?,
            )),
        }
    }
}

fn geos_2d(w: &mut Writer, seed: u64) -> Result<()> {
    let quad = DirectionQuadrature::circle(4096)?;
    let families = [Planar::Parallel, Planar::Rotated(PI / 9.0), Planar::Rotated(2.0 * PI / 9.0), Planar::Rectangles];
    let ds = logspace(0.05, 10.0, 25);
    for family in families {
        let rows = ds
            .iter()
            .map(|&d| {
                let (t, r) = family.regions(d)?;
                Ok(vec![d, total_mutual_shadow(&t, &r, &quad)?.total])
            })
            .collect::<Result<Vec<_>>>()?;
        w.table(&format!("shadow_{}", family.name()), &["d_over_l", "L_TR_over_l"], &rows)?;
    }
    for family in [Planar::Parallel, Planar::Rotated(PI / 9.0), Planar::Rectangles] {
        for d in [0.5, 1.0, 2.0] {
            for n_a in [5.0, 10.0] {
                let (t, r) = family.regions(d)?;
                let s = region_spectrum(&t, &r, &quad, n_a, Some(seed))?;
                w.spectrum(&format!("spectrum_{}_d{}_na{n_a}", family.name(), label(d)), &s, n_a)?;
            }
        }
    }
    Ok(())
}

fn shadow_r2r(w: &mut Writer) -> Result<()> {
    let quad = sphere_quadrature()?;
    for setup in [SquareSetup::Parallel, SquareSetup::Shifted, SquareSetup::Rotated] {
        let rows = logspace(0.02, 10.0, 25)
            .into_iter()
            .map(|d| {
                let (t, r) = setup.regions(d)?;
                Ok(vec![d, total_mutual_shadow(&t, &r, &quad)?.total, PI, 1.0 / (d * d)])
            })
            .collect::<Result<Vec<_>>>()?;
        w.table(setup.name(), &["d_over_l", "A_TR_over_l2", "half_weyl", "paraxial"], &rows)?;
    }
    Ok(())
}

fn spectra_r2r(w: &mut Writer, seed: u64) -> Result<()> {
    for setup in [SquareSetup::Parallel, SquareSetup::Shifted, SquareSetup::Rotated] {
        // The end-fire receiver's shadow shrinks fast with distance, so at a
        // fixed N_a its sample count explodes (about 8·10⁴ points at d = 2).
        let distances = match setup {
            SquareSetup::Rotated => [0.25, 0.5, 1.0],
            _ => [0.5, 1.0, 2.0],
        };
        for d in distances {
            let n_a = 50.0;
            let s = squares_spectrum(setup, d, n_a, seed)?;
            w.spectrum(&format!("{}_d{}_na{n_a}", setup.name(), label(d)), &s, n_a)?;
        }
    }
    Ok(())
}

fn spheres_paraxial(w: &mut Writer) -> Result<()> {
    for ratio in [1.0, 0.5, 0.25] {
        let (a1, a2) = (1.0, ratio);
        let rows = logspace(1.05, 20.0, 40)
            .into_iter()
            .map(|x| {
                let h = x * (a1 + a2);
                Ok(vec![x, shadow_area_two_spheres(a1, a2, h, 64)? / paraxial_sphere_area(a1, a2, h)])
            })
            .collect::<Result<Vec<_>>>()?;
        w.table(&format!("ratio_a{}", label(ratio)), &["h_over_a1_plus_a2", "area_over_paraxial"], &rows)?;
    }
    Ok(())
}
