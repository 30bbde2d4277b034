//! Parallel vs sequential throughput of the hot loops.
//!
//! `cargo bench -p ndof` measures the rayon build on one thread and on the
//! global pool; `cargo bench -p ndof --no-default-features` adds the plain
//! sequential build under the same group names for comparison.

use std::f64::consts::TAU;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use faer::{c64, Mat};
use nalgebra::Vector3;
use ndof::channel::{assemble_channel, sample_region, ChannelOperator, KernelKind, LinearOperator, Receiver};
use ndof::geometry::{mesh, Shape2, Shape3};
use ndof::quadrature::DirectionQuadrature;
use ndof::shadow::{mesh_mutual_shadow, total_mutual_shadow, Region};
use ndof::spectra::randomized_spectrum;

fn backends() -> Vec<(String, rayon::ThreadPool)> {
    let build = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    if ndof::PARALLEL {
        let all = rayon::current_num_threads();
        let mut pools = vec![("rayon-1t".to_string(), build(1))];
        if all > 1 {
            pools.push((format!("rayon-{all}t"), build(all)));
        }
        pools
    } else {
        vec![("sequential".into(), build(1))]
    }
}

fn lines() -> (Region, Region) {
    (
        Region::planar("t", vec![Shape2::segment([-0.5, 0.0], [0.5, 0.0]).unwrap()]).unwrap(),
        Region::planar("r", vec![Shape2::segment([-0.25, 1.0], [0.25, 1.0]).unwrap()]).unwrap(),
    )
}

fn squares() -> (Region, Region) {
    let plate = |z: f64| Shape3::plate(&[[0.0, 0.0, z], [1.0, 0.0, z], [1.0, 1.0, z], [0.0, 1.0, z]]).unwrap();
    (Region::spatial("t", vec![plate(0.0)]).unwrap(), Region::spatial("r", vec![plate(1.0)]).unwrap())
}

fn line_channel(lambda: f64) -> ChannelOperator {
    let (t, r) = lines();
    let t = sample_region(&t, lambda / 5.0).unwrap();
    let r = sample_region(&r, lambda / 5.0).unwrap();
    assemble_channel(&t, Receiver::Points(&r), TAU / lambda, KernelKind::Scalar2d).unwrap()
}

fn shadow(c: &mut Criterion) {
    let mut group = c.benchmark_group("shadow");
    group.sample_size(20);
    let (lt, lr) = lines();
    let circle = DirectionQuadrature::circle(4096).unwrap();
    let (st, sr) = squares();
    let sphere = DirectionQuadrature::sphere(32, 64).unwrap();
    let disc = |z: f64| {
        Region::spatial("d", vec![Shape3::Mesh(mesh::disc(Vector3::new(0.0, 0.0, z), Vector3::z(), 1.0, 0.05))]).unwrap()
    };
    let (dt, dr) = (disc(0.0), disc(1.0));
    for (name, pool) in backends() {
        group.bench_function(BenchmarkId::new("lines_2d_4096", &name), |b| {
            b.iter(|| pool.install(|| total_mutual_shadow(black_box(&lt), &lr, &circle).unwrap().total))
        });
        group.bench_function(BenchmarkId::new("squares_3d_32x64", &name), |b| {
            b.iter(|| pool.install(|| total_mutual_shadow(black_box(&st), &sr, &sphere).unwrap().total))
        });
        group.bench_function(BenchmarkId::new("disc_mesh_a20", &name), |b| {
            b.iter(|| pool.install(|| mesh_mutual_shadow(black_box(&dt), &dr).unwrap()))
        });
    }
    group.finish();
}

fn channel(c: &mut Criterion) {
    let mut group = c.benchmark_group("channel");
    group.sample_size(10);
    let h = line_channel(0.44 / 200.0);
    let x = Mat::from_fn(h.ncols(), 16, |i, j| c64::new((i as f64).sin(), (j as f64).cos()));
    let y = Mat::from_fn(h.nrows(), 16, |i, j| c64::new((i as f64).cos(), (j as f64).sin()));
    for (name, pool) in backends() {
        group.bench_function(BenchmarkId::new(format!("apply_{}x{}x16", h.nrows(), h.ncols()), &name), |b| {
            b.iter(|| pool.install(|| h.apply(black_box(x.as_ref()))))
        });
        group.bench_function(BenchmarkId::new("adjoint_apply", &name), |b| {
            b.iter(|| pool.install(|| h.adjoint_apply(black_box(y.as_ref()))))
        });
        group.bench_function(BenchmarkId::new("randomized_spectrum_p150", &name), |b| {
            b.iter(|| pool.install(|| randomized_spectrum(black_box(&h), 150, 1, 1).unwrap().n_e))
        });
    }
    group.finish();
}

criterion_group!(benches, shadow, channel);
criterion_main!(benches);
