//! Running a scenario end to end: shadow, NDoF, sampling, channel, spectrum
//! and, for far-field receivers, capacity.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndof::capacity::{inverse_eigen_curve, radiation_modes, trace_identity, waterfill, ConstraintMatrix, WaterfillResult};
use ndof::channel::{
    assemble_channel, far_field_ports, sample_region, ChannelOperator, FarFieldPort, KernelKind, LinearOperator,
    Receiver, SampleSet,
};
use ndof::geometry::Shape3;
use ndof::io::{fmt_float, write_capacity_csv, write_shadow_csv, write_spectrum_csv};
use ndof::shadow::{
    ndof_from_shadow, total_far_field_shadow, total_mutual_shadow, wavelength_for_ndof, MutualShadowResult,
    NdofModel, Parts, Region,
};
use ndof::spectra::{dense_spectrum_with_cap, randomized_spectrum, SpectrumMethod, SpectrumResult};
use ndof::{Error, Result};
use serde::Serialize;
use serde_json::json;

use crate::config::{MethodKind, ScenarioConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub method: Option<MethodKind>,
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { out: None, format: Format::Csv, method: None, seed: None }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub shadow_s: f64,
    pub sampling_s: f64,
    pub assembly_s: f64,
    pub spectrum_s: f64,
    pub total_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapacitySummary {
    pub rho: f64,
    pub trace_lhs: f64,
    pub trace_rhs: f64,
    pub trace_mismatch: f64,
    pub results: Vec<WaterfillResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub name: String,
    pub dimension: usize,
    pub kernel: KernelKind,
    pub ndof_model: NdofModel,
    pub wavelength: f64,
    pub sample_spacing: f64,
    pub shadow_total: f64,
    #[serde(rename = "N_a")]
    pub n_a: f64,
    #[serde(rename = "N_e")]
    pub n_e: Option<f64>,
    #[serde(rename = "N_k")]
    pub n_k: Option<usize>,
    pub method: Option<SpectrumMethod>,
    pub captured: Option<f64>,
    pub n_transmitters: Option<usize>,
    pub n_receivers: Option<usize>,
    pub channel_rows: Option<usize>,
    pub channel_cols: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacitySummary>,
    pub warnings: Vec<String>,
    pub threads: usize,
    pub parallel: bool,
    pub timings: Timings,
}

/// Shadow and the resolved wavelength / NDoF pair.
pub struct Prepared {
    pub config: ScenarioConfig,
    pub transmitter: Region,
    pub receiver: Option<Region>,
    pub shadow: MutualShadowResult,
    pub wavelength: f64,
    pub n_a: f64,
    pub summary: Summary,
    started: Instant,
}

pub fn prepare(config: &ScenarioConfig) -> Result<Prepared> {
    let started = Instant::now();
    config.check()?;
    let transmitter = config.transmitter_region()?;
    let receiver = config.receiver_region()?;
    let quad = config.shadow_quadrature()?;
    let model = config.ndof_model();
    let shadow = match &receiver {
        Some(r) => total_mutual_shadow(&transmitter, r, &quad)?,
        None => total_far_field_shadow(&transmitter, &quad)?,
    };
    let mut warnings = Vec::new();
    let (wavelength, n_a) = match (config.wavelength, config.n_a) {
        (Some(l), _) => (l, ndof_from_shadow(&shadow, l, model)?.n_a),
        (None, Some(n)) if shadow.total > 0.0 => (wavelength_for_ndof(&shadow, n, model)?, n),
        _ => {
            warnings.push("mutual shadow is zero; no wavelength can reach the requested N_a".to_owned());
            (f64::NAN, 0.0)
        }
    };
    let summary = Summary {
        name: config.name.clone(),
        dimension: config.dimension,
        kernel: config.kernel(),
        ndof_model: model,
        wavelength,
        sample_spacing: wavelength / config.sampling_factor,
        shadow_total: shadow.total,
        n_a,
        n_e: None,
        n_k: None,
        method: None,
        captured: None,
        n_transmitters: None,
        n_receivers: None,
        channel_rows: None,
        channel_cols: None,
        capacity: None,
        warnings,
        threads: rayon::current_num_threads(),
        parallel: ndof::PARALLEL,
        timings: Timings { shadow_s: started.elapsed().as_secs_f64(), ..Timings::default() },
    };
    Ok(Prepared { config: config.clone(), transmitter, receiver, shadow, wavelength, n_a, summary, started })
}

pub struct Channel {
    pub transmitters: SampleSet,
    pub receivers: Option<SampleSet>,
    pub ports: Vec<FarFieldPort>,
    pub operator: ChannelOperator,
}

impl Prepared {
    pub fn has_channel(&self) -> bool {
        self.n_a > 0.0 && self.wavelength.is_finite()
    }

    pub fn build_channel(&mut self) -> Result<Channel> {
        let spacing = self.wavelength / self.config.sampling_factor;
        let t0 = Instant::now();
        let transmitters = sample_region(&self.transmitter, spacing)?;
        let receivers = self.receiver.as_ref().map(|r| sample_region(r, spacing)).transpose()?;
        let ports = match &self.config.receiver.far_field {
            Some(ff) => far_field_ports(&self.config.port_quadrature(ff)?, ff.polarized)?,
            None => Vec::new(),
        };
        self.summary.timings.sampling_s = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let k = 2.0 * PI / self.wavelength;
        let receiver = match &receivers {
            Some(set) => Receiver::Points(set),
            None => Receiver::FarField(&ports),
        };
        let operator = assemble_channel(&transmitters, receiver, k, self.config.kernel())?;
        self.summary.timings.assembly_s = t1.elapsed().as_secs_f64();
        self.summary.n_transmitters = Some(transmitters.len());
        self.summary.n_receivers = Some(receivers.as_ref().map_or(ports.len(), SampleSet::len));
        self.summary.channel_rows = Some(operator.nrows());
        self.summary.channel_cols = Some(operator.ncols());
        Ok(Channel { transmitters, receivers, ports, operator })
    }

    pub fn spectrum(&mut self, h: &ChannelOperator, opts: &RunOptions) -> Result<SpectrumResult> {
        let t0 = Instant::now();
        let cfg = &self.config.spectrum;
        let method = opts.method.unwrap_or(cfg.method);
        let seed = opts.seed.or(cfg.seed);
        let (rows, cols) = (h.nrows(), h.ncols());
        let p = ((cfg.p_factor * self.n_a).ceil() as usize).clamp(1, rows.min(cols));
        let result = match method {
            MethodKind::Dense if rows.saturating_mul(cols) <= cfg.dense_cap => dense_spectrum_with_cap(h, cfg.dense_cap)?,
            MethodKind::Dense => {
                let seed = seed.unwrap_or(0);
                self.summary.warnings.push(format!(
                    "{rows} x {cols} channel is above the dense cap; switched to randomized with P = {p}, seed = {seed}"
                ));
                randomized_spectrum(h, p, seed, cfg.power_iters)?
            }
            MethodKind::Randomized => {
                let seed = seed.ok_or_else(|| Error::InvalidArgument("randomized spectrum needs a seed".into()))?;
                randomized_spectrum(h, p, seed, cfg.power_iters)?
            }
        };
        self.summary.timings.spectrum_s = t0.elapsed().as_secs_f64();
        self.summary.n_e = Some(result.n_e);
        self.summary.n_k = Some(result.n_k);
        self.summary.method = Some(result.method);
        self.summary.captured = Some(result.captured);
        Ok(result)
    }

    fn finish(mut self) -> Summary {
        self.summary.timings.total_s = self.started.elapsed().as_secs_f64();
        self.summary
    }
}

/// Shadow and NDoF only.
pub fn run_ndof(config: &ScenarioConfig, opts: &RunOptions) -> Result<Summary> {
    let prepared = prepare(config)?;
    let shadow = prepared.shadow.clone();
    let summary = prepared.finish();
    if let Some(out) = &opts.out {
        std::fs::create_dir_all(out)?;
        write_shadow(out, opts.format, &shadow)?;
        write_summary(out, &summary)?;
    }
    Ok(summary)
}

/// Full run: shadow, channel and spectrum.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<Summary> {
    let mut prepared = prepare(config)?;
    let out = opts.out.clone();
    if let Some(out) = &out {
        std::fs::create_dir_all(out)?;
        write_shadow(out, opts.format, &prepared.shadow)?;
    }
    if prepared.has_channel() {
        let channel = prepared.build_channel()?;
        let spectrum = prepared.spectrum(&channel.operator, opts)?;
        if let Some(out) = &out {
            write_spectrum(out, opts.format, &spectrum, prepared.n_a)?;
        }
    }
    let summary = prepared.finish();
    if let Some(out) = &out {
        write_summary(out, &summary)?;
    }
    Ok(summary)
}

/// Radiation modes, trace identity and water-filling for a far-field receiver.
pub fn run_capacity(config: &ScenarioConfig, opts: &RunOptions) -> Result<Summary> {
    if config.receiver.far_field.is_none() {
        return Err(Error::InvalidArgument("capacity needs a far-field receiver".into()));
    }
    let mut prepared = prepare(config)?;
    if !prepared.has_channel() {
        return Err(Error::InvalidArgument("zero mutual shadow: nothing to water-fill".into()));
    }
    let channel = prepared.build_channel()?;
    let t0 = Instant::now();
    let rho = config.capacity.rho;
    let rx = ConstraintMatrix::ScaledIdentity(rho);
    let modes = radiation_modes(&channel.operator, &rx)?;
    let trace = trace_identity(&channel.operator, &rx)?;
    let spectrum = SpectrumResult::from_sigma(modes.efficiencies.clone(), SpectrumMethod::Dense, None)?;
    let results = config.capacity.gammas.iter().map(|&g| waterfill(&spectrum.sigma, g)).collect::<Result<Vec<_>>>()?;
    prepared.summary.timings.spectrum_s = t0.elapsed().as_secs_f64();
    prepared.summary.n_e = Some(spectrum.n_e);
    prepared.summary.n_k = Some(spectrum.n_k);
    prepared.summary.method = Some(SpectrumMethod::Dense);
    prepared.summary.captured = Some(1.0);
    let n_a = prepared.n_a;
    if let Some(out) = &opts.out {
        std::fs::create_dir_all(out)?;
        write_capacity(out, opts.format, &results)?;
        write_modes(out, opts.format, &spectrum, n_a)?;
    }
    prepared.summary.capacity = Some(CapacitySummary {
        rho,
        trace_lhs: trace.lhs,
        trace_rhs: trace.rhs,
        trace_mismatch: trace.rel_mismatch,
        results,
    });
    let summary = prepared.finish();
    if let Some(out) = &opts.out {
        write_summary(out, &summary)?;
    }
    Ok(summary)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.into()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_summary(out: &Path, summary: &Summary) -> Result<()> {
    write_json(&out.join("summary.json"), summary)
}

fn write_shadow(out: &Path, format: Format, msr: &MutualShadowResult) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = create(&out.join("shadow.csv"))?;
            write_shadow_csv(&mut w, msr)?;
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = msr
                .per_direction
                .iter()
                .map(|s| {
                    let u = s.dir.unit();
                    json!({ "direction": [u.x, u.y, u.z], "weight": s.weight, "measure": s.measure })
                })
                .collect();
            write_json(&out.join("shadow.json"), &json!({ "total": msr.total, "directions": rows }))?;
        }
    }
    Ok(())
}

fn write_spectrum(out: &Path, format: Format, s: &SpectrumResult, n_a: f64) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = create(&out.join("spectrum.csv"))?;
            write_spectrum_csv(&mut w, s, Some(n_a))?;
            w.flush()?;
        }
        Format::Json => write_json(&out.join("spectrum.json"), s)?,
    }
    Ok(())
}

fn write_capacity(out: &Path, format: Format, results: &[WaterfillResult]) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = create(&out.join("capacity.csv"))?;
            write_capacity_csv(&mut w, results)?;
            w.flush()?;
        }
        Format::Json => write_json(&out.join("capacity.json"), &results)?,
    }
    Ok(())
}

fn write_modes(out: &Path, format: Format, s: &SpectrumResult, n_a: f64) -> Result<()> {
    let inverse = inverse_eigen_curve(&s.zeta, n_a)?;
    match format {
        Format::Csv => {
            let mut w = create(&out.join("modes.csv"))?;
            writeln!(w, "n,nu,zeta,inverse_zeta_Na")?;
            for (i, ((nu, z), inv)) in s.sigma.iter().zip(&s.zeta).zip(&inverse).enumerate() {
                writeln!(w, "{},{},{},{}", i + 1, fmt_float(*nu), fmt_float(*z), fmt_float(*inv))?;
            }
            w.flush()?;
        }
        Format::Json => write_json(
            &out.join("modes.json"),
            &json!({ "nu": s.sigma, "zeta": s.zeta, "inverse_zeta_Na": inverse }),
        )?,
    }
    Ok(())
}

/// Static checks of a scenario.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    pub wavelength: Option<f64>,
    #[serde(rename = "N_a")]
    pub n_a: Option<f64>,
    pub estimated_transmitters: Option<usize>,
    pub estimated_receivers: Option<usize>,
    pub dense_bytes: Option<f64>,
}

/// Checks a scenario without sampling or assembling anything.
pub fn validate(config: &ScenarioConfig, method: Option<MethodKind>) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Err(e) = config.check() {
        report.violations.push(e.to_string());
        return report;
    }
    let t = match config.transmitter_region() {
        Ok(t) => t,
        Err(e) => {
            report.violations.push(format!("transmitter: {e}"));
            return report;
        }
    };
    let r = match config.receiver_region() {
        Ok(r) => r,
        Err(e) => {
            report.violations.push(format!("receiver: {e}"));
            return report;
        }
    };
    if let Some(r) = &r {
        if let Err(e) = t.check_disjoint(r) {
            report.violations.push(e.to_string());
            return report;
        }
    }
    let prepared = match prepare(config) {
        Ok(p) => p,
        Err(e) => {
            report.violations.push(e.to_string());
            return report;
        }
    };
    if prepared.shadow.total <= 0.0 {
        report.violations.push("receiver coverage is empty: the mutual shadow is zero".into());
        return report;
    }
    report.wavelength = Some(prepared.wavelength);
    report.n_a = Some(prepared.n_a);
    let spacing = prepared.wavelength / config.sampling_factor;
    let n_t = estimate_points(&t, spacing);
    let (n_r, rows, cols) = match (&r, &config.receiver.far_field) {
        (Some(r), _) => {
            let n_r = estimate_points(r, spacing);
            let vec = if config.kernel() == KernelKind::Dyadic3d { 3 } else { 1 };
            (n_r, vec * n_r, vec * n_t)
        }
        (None, Some(ff)) => {
            let ports = config.port_quadrature(ff).map(|q| q.len()).unwrap_or(0) * if ff.polarized { 2 } else { 1 };
            (ports, ports, if ff.polarized { 3 * n_t } else { n_t })
        }
        (None, None) => unreachable!("checked above"),
    };
    report.estimated_transmitters = Some(n_t);
    report.estimated_receivers = Some(n_r);
    let entries = rows.saturating_mul(cols);
    report.dense_bytes = Some(16.0 * entries as f64);
    let method = method.unwrap_or(config.spectrum.method);
    if method == MethodKind::Dense && entries > config.spectrum.dense_cap {
        report.warnings.push(format!(
            "dense request above cap: {rows} x {cols} channel exceeds {} entries; use method = \"randomized\"",
            config.spectrum.dense_cap
        ));
    }
    if method == MethodKind::Randomized && config.spectrum.seed.is_none() {
        report.violations.push("randomized spectrum needs spectrum.seed (or --seed)".into());
    }
    if let Some(r) = &r {
        if let Ok(d) = t.min_distance(r) {
            if d < spacing {
                report.violations.push(format!("regions too close: distance {d} < sample spacing {spacing}"));
            }
        }
    }
    report.ok = report.violations.is_empty();
    report
}

/// `measure / Δ^dim`, plus one end point for segments.
fn estimate_points(region: &Region, spacing: f64) -> usize {
    let total: f64 = match region.parts() {
        Parts::Planar(parts) => parts
            .iter()
            .map(|p| match p {
                ndof::geometry::Shape2::Segment(s) => s.length() / spacing + 1.0,
                other => other.measure() / (spacing * spacing),
            })
            .sum(),
        Parts::Spatial(parts) => parts
            .iter()
            .map(|p| match p {
                Shape3::Sphere(s) => 4.0 / 3.0 * PI * s.radius().powi(3) / spacing.powi(3),
                Shape3::Plate(p) => p.area() / (spacing * spacing),
                Shape3::Mesh(m) => m.area() / (spacing * spacing),
            })
            .sum(),
    };
    total.ceil() as usize
}
