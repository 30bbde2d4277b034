use std::f64::consts::{PI, TAU};

use faer::{c64, Mat};
use nalgebra::Rotation3;
use ndof::capacity::{radiation_modes, trace_identity, waterfill, ConstraintMatrix};
use ndof::channel::{assemble_channel, DenseOperator, KernelKind, LinearOperator, Receiver, SampleSet};
use ndof::geometry::{
    circle_intersection_area, convex_hull, convex_polygon_intersection, project_shape_2d, project_shape_3d, Direction,
    Point2, Point3, Shape2, Shape3, ShadowRegion,
};
use ndof::quadrature::DirectionQuadrature;
use ndof::shadow::{
    ndof_from_shadow, shadow_length_two_lines, total_mutual_shadow, wavelength_for_ndof, NdofModel, Region,
};
use ndof::spectra::{dense_spectrum, randomized_spectrum, SpectrumMethod, SpectrumResult};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hull_from(seed: u64, center: Point2, scale: f64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..10);
    let pts: Vec<Point2> = (0..n)
        .map(|_| {
            let (r, t) = (scale * rng.gen_range(0.4..1.0), rng.gen_range(0.0..TAU));
            center + Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    convex_hull(&pts)
}

/// Disc, polygon or segment within radius `scale` of `center`.
fn shape2(kind: u8, seed: u64, center: Point2, scale: f64) -> Shape2 {
    match kind % 3 {
        0 => Shape2::disc([center.x, center.y], scale).unwrap(),
        1 => {
            let hull = hull_from(seed, center, scale);
            let v: Vec<[f64; 2]> = hull.iter().map(|p| [p.x, p.y]).collect();
            Shape2::polygon(&v).unwrap_or_else(|_| Shape2::disc([center.x, center.y], scale).unwrap())
        }
        _ => {
            let t = (seed % 628) as f64 / 100.0;
            let u = Point2::new(t.cos(), t.sin()) * scale;
            Shape2::segment([center.x - u.x, center.y - u.y], [center.x + u.x, center.y + u.y]).unwrap()
        }
    }
}

fn planar(parts: Vec<Shape2>) -> Region {
    Region::planar("region", parts).unwrap()
}

fn random_matrix(seed: u64, m: usize, n: usize) -> Mat<c64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = rand_distr::StandardNormal;
    Mat::from_fn(m, n, |_, _| c64::new(rng.sample(normal), rng.sample(normal)))
}

fn inner(a: &Mat<c64>, b: &Mat<c64>) -> c64 {
    (0..a.nrows()).map(|i| a[(i, 0)].conj() * b[(i, 0)]).sum()
}

fn check_normalization(s: &SpectrumResult) -> Result<(), TestCaseError> {
    let sum: f64 = s.zeta.iter().sum();
    let sq: f64 = s.zeta.iter().map(|z| z * z).sum();
    prop_assert!((sum - 1.0).abs() < 1e-12);
    prop_assert!((sq * s.n_e - 1.0).abs() < 1e-12);
    let nonzero = s.sigma.iter().filter(|&&x| x > 0.0).count() as f64;
    prop_assert!(s.n_e >= 1.0 - 1e-12 && s.n_e <= nonzero + 1e-9);
    prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_sign_invariant_2d(kind in 0u8..3, seed in any::<u64>(), phi in 0.0..TAU) {
        let s = shape2(kind, seed, Point2::new(0.3, -0.2), 1.0);
        let d = Direction::planar(phi);
        let a = project_shape_2d(&s, &d).measure();
        let b = project_shape_2d(&s, &d.opposite()).measure();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn projection_is_sign_invariant_3d(theta in 0.0..PI, phi in 0.0..TAU, tilt in 0.0..PI, sphere in any::<bool>()) {
        let s = if sphere {
            Shape3::sphere([0.1, 0.2, 0.3], 0.7).unwrap()
        } else {
            let (c, sn) = (tilt.cos(), tilt.sin());
            Shape3::plate(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, c, sn], [0.0, c, sn]]).unwrap()
        };
        let d = Direction::spatial(theta, phi);
        let a = project_shape_3d(&s, &d).measure();
        let b = project_shape_3d(&s, &d.opposite()).measure();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn polygon_intersection_bounds(s1 in any::<u64>(), s2 in any::<u64>(), dx in -1.5..1.5f64, dy in -1.5..1.5f64) {
        let a = ShadowRegion::Polygon(hull_from(s1, Point2::zeros(), 1.0));
        let b = ShadowRegion::Polygon(hull_from(s2, Point2::new(dx, dy), 1.0));
        let ab = convex_polygon_intersection(&a, &b).measure();
        let ba = convex_polygon_intersection(&b, &a).measure();
        prop_assert!(ab >= 0.0);
        prop_assert!(ab <= a.measure().min(b.measure()) * (1.0 + 1e-12));
        prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1e-300) + 1e-15);
        let aa = convex_polygon_intersection(&a, &a).measure();
        prop_assert!((aa - a.measure()).abs() <= 1e-12 * a.measure());
    }

    #[test]
    fn lens_area_is_continuous_at_tangency(a1 in 0.1..2.0f64, a2 in 0.1..2.0f64) {
        for d in [(a1 - a2).abs(), a1 + a2] {
            let jump = (circle_intersection_area(a1, a2, d + 1e-9) - circle_intersection_area(a1, a2, (d - 1e-9).max(0.0))).abs();
            prop_assert!(jump < 1e-6, "jump {jump} at d = {d}");
        }
    }

    #[test]
    fn mutual_shadow_is_symmetric(kt in 0u8..3, kr in 0u8..3, st in any::<u64>(), sr in any::<u64>(), dist in 2.5..6.0f64, angle in 0.0..TAU) {
        let c = Point2::new(dist * angle.cos(), dist * angle.sin());
        let t = planar(vec![shape2(kt, st, Point2::zeros(), 1.0)]);
        let r = planar(vec![shape2(kr, sr, c, 1.0)]);
        let quad = DirectionQuadrature::circle(1024).unwrap();
        let tr = total_mutual_shadow(&t, &r, &quad).unwrap().total;
        let rt = total_mutual_shadow(&r, &t, &quad).unwrap().total;
        prop_assert!((tr - rt).abs() <= 1e-6 * tr.max(1e-12), "{tr} vs {rt}");
    }

    #[test]
    fn mutual_shadow_grows_with_the_region(kt in 0u8..3, st in any::<u64>(), angle in 0.0..TAU, extra in 0.2..1.0f64) {
        let t = planar(vec![shape2(kt, st, Point2::zeros(), 1.0)]);
        let c = Point2::new(3.0, 0.0);
        let base = Shape2::disc([c.x, c.y], 0.5).unwrap();
        let added = Shape2::disc([c.x + 2.0 * angle.cos(), c.y + 2.0 * angle.sin()], extra * 0.5).unwrap();
        if ndof::geometry::min_distance_2d(&added, &shape2(kt, st, Point2::zeros(), 1.0)) < 0.1 {
            return Ok(());
        }
        let quad = DirectionQuadrature::circle(1024).unwrap();
        let small = total_mutual_shadow(&t, &planar(vec![base.clone()]), &quad).unwrap().total;
        let large = total_mutual_shadow(&t, &planar(vec![base, added]), &quad).unwrap().total;
        prop_assert!(large >= small * (1.0 - 1e-9), "{large} < {small}");
    }

    #[test]
    fn mutual_shadow_is_invariant_under_rigid_motion(kt in 0u8..3, st in any::<u64>(), rot in 0.0..TAU, dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let t = shape2(kt, st, Point2::zeros(), 1.0);
        let r = Shape2::polygon(&[[2.5, -0.5], [3.5, -0.3], [3.2, 0.8]]).unwrap();
        let quad = DirectionQuadrature::circle(1024).unwrap();
        let before = total_mutual_shadow(&planar(vec![t.clone()]), &planar(vec![r.clone()]), &quad).unwrap().total;
        let offset = Point2::new(dx, dy);
        let moved = |s: &Shape2| s.rotated(rot).translated(offset);
        let after = total_mutual_shadow(&planar(vec![moved(&t)]), &planar(vec![moved(&r)]), &quad).unwrap().total;
        prop_assert!((before - after).abs() <= 1e-6 * before, "{before} vs {after}");
    }

    #[test]
    fn two_line_total_matches_closed_form(l1 in 0.1..2.0f64, l2 in 0.1..2.0f64, d in 0.05..10.0f64) {
        let t = planar(vec![Shape2::segment([-l1 / 2.0, 0.0], [l1 / 2.0, 0.0]).unwrap()]);
        let r = planar(vec![Shape2::segment([-l2 / 2.0, d], [l2 / 2.0, d]).unwrap()]);
        let total = total_mutual_shadow(&t, &r, &DirectionQuadrature::circle(4096).unwrap()).unwrap().total;
        let closed = shadow_length_two_lines(l1, l2, d);
        prop_assert!((total - closed).abs() <= 1e-6 * closed);
    }

    #[test]
    fn ndof_models_and_inverse(area in 0.01..10.0f64, n in 1.0..1000.0f64) {
        let plate = |z: f64| Shape3::plate(&[[0.0, 0.0, z], [area.sqrt(), 0.0, z], [area.sqrt(), area.sqrt(), z], [0.0, area.sqrt(), z]]).unwrap();
        let t = Region::spatial("t", vec![plate(0.0)]).unwrap();
        let r = Region::spatial("r", vec![plate(1.0)]).unwrap();
        let msr = total_mutual_shadow(&t, &r, &DirectionQuadrature::sphere(8, 16).unwrap()).unwrap();
        let lambda = wavelength_for_ndof(&msr, n, NdofModel::Scalar3d).unwrap();
        let scalar = ndof_from_shadow(&msr, lambda, NdofModel::Scalar3d).unwrap().n_a;
        let em = ndof_from_shadow(&msr, lambda, NdofModel::Em3d).unwrap().n_a;
        prop_assert_eq!(em, 2.0 * scalar);
        prop_assert!((scalar - n).abs() <= 1e-12 * n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn channel_adjoint_is_consistent(seed in any::<u64>(), nt in 2usize..60, nr in 2usize..60, three_d in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dim, kind) = if three_d { (3, KernelKind::Scalar3d) } else { (2, KernelKind::Scalar2d) };
        let mut pts = |n: usize, z0: f64| -> Vec<Point3> {
            (0..n).map(|i| {
                let z = if dim == 3 { z0 + rng.gen_range(0.0..1.0) } else { 0.0 };
                let y = if dim == 2 { z0 } else { rng.gen_range(0.0..1.0) };
                Point3::new(i as f64 * 0.05, y + rng.gen_range(0.0..0.01), z)
            }).collect()
        };
        let t = SampleSet::from_points(pts(nt, 0.0), dim, 0.01).unwrap();
        let r = SampleSet::from_points(pts(nr, 3.0), dim, 0.01).unwrap();
        let h = assemble_channel(&t, Receiver::Points(&r), 7.0, kind).unwrap();
        let x = random_matrix(seed ^ 1, h.ncols(), 1);
        let y = random_matrix(seed ^ 2, h.nrows(), 1);
        let lhs = inner(&y, &h.apply(x.as_ref()));
        let rhs = inner(&h.adjoint_apply(y.as_ref()), &x);
        let scale = x.norm_l2() * y.norm_l2() * h.to_dense().norm_l2();
        prop_assert!((lhs - rhs).norm() < 1e-10 * scale);
    }

    #[test]
    fn spectrum_normalization_and_scale_invariance(seed in any::<u64>(), m in 1usize..30, n in 1usize..30, c in 0.01..100.0f64) {
        let h = random_matrix(seed, m, n);
        let s = dense_spectrum(&DenseOperator::new(h.clone())).unwrap();
        check_normalization(&s)?;
        let scaled = dense_spectrum(&DenseOperator::new(Mat::from_fn(m, n, |i, j| h[(i, j)] * c64::new(0.0, c)))).unwrap();
        prop_assert!((s.n_e - scaled.n_e).abs() <= 1e-12 * s.n_e);
        prop_assert_eq!(s.n_k, scaled.n_k);
        for (a, b) in s.zeta.iter().zip(&scaled.zeta) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn from_sigma_normalization(sigma in prop::collection::vec(0.0..1e3f64, 1..50)) {
        prop_assume!(sigma.iter().any(|&x| x > 0.0));
        check_normalization(&SpectrumResult::from_sigma(sigma, SpectrumMethod::Dense, None).unwrap())?;
    }

    #[test]
    fn randomized_spectrum_is_reproducible(seed in any::<u64>(), p in 1usize..12) {
        let h = DenseOperator::new(random_matrix(seed, 30, 20));
        let a = randomized_spectrum(&h, p, seed, 1).unwrap();
        let b = randomized_spectrum(&h, p, seed, 1).unwrap();
        prop_assert_eq!(&a.sigma, &b.sigma);
        check_normalization(&a)?;
    }

    #[test]
    fn waterfill_optimality_and_monotonicity(nu in prop::collection::vec(0.0..10.0f64, 1..20), gamma in 0.01..1e3f64, bump in 0.0..5.0f64, pick in any::<prop::sample::Index>()) {
        prop_assume!(nu.iter().any(|&x| x > 0.0));
        let w = waterfill(&nu, gamma).unwrap();
        prop_assert!(w.allocations.iter().all(|&p| p >= 0.0));
        prop_assert!((w.allocations.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(w.kkt_residual() < 1e-10);
        let louder = waterfill(&nu, gamma * 2.0).unwrap();
        prop_assert!(louder.capacity >= w.capacity * (1.0 - 1e-12));
        let quieter = waterfill(&nu, gamma / 2.0).unwrap();
        prop_assert!(quieter.active <= w.active);
        let mut stronger = nu.clone();
        stronger[pick.index(nu.len())] += bump;
        prop_assert!(waterfill(&stronger, gamma).unwrap().capacity >= w.capacity * (1.0 - 1e-12));
    }

    #[test]
    fn trace_identity_holds(seed in any::<u64>(), m in 1usize..25, n in 1usize..25, scaled in any::<bool>()) {
        let f = DenseOperator::new(random_matrix(seed, m, n));
        let rx = if scaled {
            ConstraintMatrix::ScaledIdentity(0.5 + (seed % 7) as f64)
        } else {
            let a = random_matrix(seed ^ 9, n, n);
            let r = &a * a.adjoint();
            ConstraintMatrix::Matrix(Mat::from_fn(n, n, |i, j| {
                (r[(i, j)] + r[(j, i)].conj()) * 0.5 + if i == j { c64::new(n as f64, 0.0) } else { c64::new(0.0, 0.0) }
            }))
        };
        prop_assert!(trace_identity(&f, &rx).unwrap().rel_mismatch < 1e-10);
    }

    #[test]
    fn scaled_identity_modes_are_channel_eigenvalues(seed in any::<u64>(), m in 1usize..25, n in 1usize..25, c in 0.1..10.0f64) {
        let f = DenseOperator::new(random_matrix(seed, m, n));
        let modes = radiation_modes(&f, &ConstraintMatrix::ScaledIdentity(c)).unwrap();
        let s = dense_spectrum(&f).unwrap();
        for (nu, sigma) in modes.efficiencies.iter().zip(&s.sigma) {
            prop_assert!((nu - sigma / c).abs() <= 1e-12 * s.sigma[0] / c);
        }
    }
}

#[test]
fn far_field_frobenius_is_rotation_invariant_3d() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<Point3> = (0..40)
        .map(|_| Point3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
        .collect();
    let quad = DirectionQuadrature::sphere(24, 48).unwrap();
    let ports = ndof::channel::far_field_ports(&quad, true).unwrap();
    let norm = |p: &[Point3]| {
        let t = SampleSet::from_points(p.to_vec(), 3, 0.01).unwrap();
        assemble_channel(&t, Receiver::FarField(&ports), 9.0, KernelKind::FarField3d).unwrap().to_dense().norm_l2()
    };
    let base = norm(&pts);
    for (ax, angle) in [(Point3::x_axis(), 0.7), (Point3::z_axis(), 2.1), (nalgebra::Unit::new_normalize(Point3::new(1.0, 2.0, 3.0)), 1.3)] {
        let rot = Rotation3::from_axis_angle(&ax, angle);
        let moved: Vec<Point3> = pts.iter().map(|p| rot * p).collect();
        let err = (norm(&moved) - base).abs() / base;
        assert!(err < 1e-8, "rotation changed the Frobenius norm by {err:.2e}");
    }
}

/// Mean top-k error over 20 seeds on low-rank plus noise must not grow with P.
#[test]
fn oversampling_never_hurts_on_average() {
    let (m, n, rank, k) = (120, 100, 10, 8);
    let u = random_matrix(1, m, rank);
    let v = random_matrix(2, rank, n);
    let decay = Mat::from_fn(rank, rank, |i, j| if i == j { c64::new(0.7f64.powi(i as i32), 0.0) } else { c64::new(0.0, 0.0) });
    let noise = random_matrix(3, m, n);
    let signal = &u * &decay * &v;
    let h = Mat::from_fn(m, n, |i, j| signal[(i, j)] + noise[(i, j)] * 1e-3);
    let op = DenseOperator::new(h);
    let exact = dense_spectrum(&op).unwrap();
    let mean_err = |p: usize| {
        (0..20u64)
            .map(|seed| {
                let s = randomized_spectrum(&op, p, seed, 0).unwrap();
                (0..k).map(|i| (s.sigma[i] - exact.sigma[i]).abs() / exact.sigma[i]).fold(0.0, f64::max)
            })
            .sum::<f64>()
            / 20.0
    };
    let errs: Vec<f64> = [10, 14, 20, 30, 45].iter().map(|&p| mean_err(p)).collect();
    for w in errs.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "mean errors not monotone: {errs:?}");
    }
}
