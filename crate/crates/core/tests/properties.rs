use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use polyvortex_core::corotating::{corotating_nested, corotating_single, RayKind};
use polyvortex_core::dynamics::{classify, velocities, EquilibriumKind, DEFAULT_CLASSIFY_TOL};
use polyvortex_core::nested::{
    absolute_equilibrium, count_roots_analytic, equation_coefficients, lambda, positive_roots,
    solve_nested, Alignment, PolynomialInstance,
};
use polyvortex_core::plane::{point, root_of_unity, unit, PlanePoint, I};
use polyvortex_core::polygon::{polygon_field, polygon_omega, PolygonRing};
use polyvortex_core::system::{conserved, mutual_distances, VortexSystem};
use polyvortex_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn system(min_n: usize, max_n: usize, vort: std::ops::Range<f64>) -> impl Strategy<Value = VortexSystem> {
    (min_n..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec((coord(), coord()), n),
            prop::collection::vec(vort.clone(), n),
        )
            .prop_filter_map("vortices too close", |(z, g)| {
                let z: Vec<_> = z.into_iter().map(|(x, y)| point(x, y)).collect();
                VortexSystem::new(z, g).ok().filter(|s| s.min_distance() > 1e-3)
            })
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn ring(n: usize, s: PlanePoint, gamma: f64) -> VortexSystem {
    PolygonRing::equal(n, s, gamma).unwrap().to_system().unwrap()
}

proptest! {
    #[test]
    fn center_of_vorticity_follows_translation(s in system(2, 8, 0.1..3.0), wx in coord(), wy in coord()) {
        let w = point(wx, wy);
        let moved = s.transformed(point(1.0, 0.0), w).unwrap();
        let c0 = conserved(&s).center_of_vorticity.unwrap();
        let c1 = conserved(&moved).center_of_vorticity.unwrap();
        prop_assert!((c1 - (c0 + w)).norm() < 1e-13 * (1.0 + c0.norm() + w.norm()));
    }

    #[test]
    fn center_of_vorticity_follows_translation_mixed_signs(s in system(2, 8, -3.0..3.0), wx in coord(), wy in coord()) {
        let total = s.total_vorticity();
        prop_assume!(total.abs() > 0.1);
        let w = point(wx, wy);
        let moved = s.transformed(point(1.0, 0.0), w).unwrap();
        let c0 = conserved(&s).center_of_vorticity.unwrap();
        let c1 = conserved(&moved).center_of_vorticity.unwrap();
        let scale: f64 = s.vorticities().iter().map(|g| g.abs()).sum::<f64>() * 20.0 / total.abs();
        prop_assert!((c1 - (c0 + w)).norm() < 1e-14 * scale.max(1.0) * 10.0);
    }

    #[test]
    fn hamiltonian_and_impulse_are_rotation_invariant(s in system(2, 8, -3.0..3.0), theta in -PI..PI) {
        let r = s.transformed(unit(theta), point(0.0, 0.0)).unwrap();
        let (a, b) = (conserved(&s), conserved(&r));
        let h_scale: f64 = s.vorticities().iter().map(|g| g.abs()).sum::<f64>().powi(2);
        prop_assert!((a.hamiltonian - b.hamiltonian).abs() < 1e-12 * h_scale.max(a.hamiltonian.abs()));
        let i_scale: f64 = s.vorticities().iter().zip(s.positions()).map(|(g, z)| g.abs() * z.norm_sqr()).sum();
        prop_assert!((a.angular_impulse - b.angular_impulse).abs() < 1e-12 * i_scale.max(1.0));
    }

    #[test]
    fn distances_are_invariant_under_rigid_motion(s in system(2, 8, -3.0..3.0), theta in -PI..PI, wx in coord(), wy in coord()) {
        let moved = s.transformed(unit(theta), point(wx, wy)).unwrap();
        let (d0, d1) = (mutual_distances(&s), mutual_distances(&moved));
        for (r0, r1) in d0.iter().zip(&d1) {
            for (a, b) in r0.iter().zip(r1) {
                prop_assert!(rel(*a, *b) < 1e-12 || (a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn velocities_match_direct_sum(s in system(2, 7, -3.0..3.0)) {
        let z = s.positions();
        let g = s.vorticities();
        let v = velocities(&s);
        for k in 0..z.len() {
            let mut acc = PlanePoint::new(0.0, 0.0);
            for l in 0..z.len() {
                if l != k {
                    let d = z[k] - z[l];
                    acc += d / d.norm_sqr() * g[l];
                }
            }
            prop_assert_eq!(v[k], I * acc);
        }
    }

    #[test]
    fn vorticity_weighted_velocity_vanishes(s in system(2, 8, -3.0..3.0)) {
        let v = velocities(&s);
        let sum: PlanePoint = v.iter().zip(s.vorticities()).map(|(vk, gk)| vk * gk).sum();
        let scale: f64 = v.iter().zip(s.vorticities()).map(|(vk, gk)| vk.norm() * gk.abs()).sum();
        prop_assert!(sum.norm() < 1e-12 * scale.max(1.0));
    }

    #[test]
    fn classify_scales_omega_inverse_square(n in 2usize..12, sx in 0.2..3.0f64, sy in -3.0..3.0f64, gamma in 0.1..4.0f64, factor in 0.1..10.0f64) {
        let s = ring(n, point(sx, sy), gamma);
        let scaled = s.transformed(point(factor, 0.0), point(0.0, 0.0)).unwrap();
        let (a, b) = (classify(&s, DEFAULT_CLASSIFY_TOL), classify(&scaled, DEFAULT_CLASSIFY_TOL));
        prop_assert_eq!(a.kind, EquilibriumKind::Rotation);
        prop_assert_eq!(a.kind, b.kind);
        prop_assert!(rel(a.omega / (factor * factor), b.omega) < 1e-10);
    }

    #[test]
    fn classify_is_rotation_invariant(s in system(3, 6, -3.0..3.0), theta in -PI..PI) {
        let rotated = s.transformed(unit(theta), point(0.0, 0.0)).unwrap();
        let (a, b) = (classify(&s, DEFAULT_CLASSIFY_TOL), classify(&rotated, DEFAULT_CLASSIFY_TOL));
        prop_assert_eq!(a.kind, b.kind);
        let scale = a.max_speed.max(1.0);
        prop_assert!((a.omega - b.omega).abs() < 1e-11 * scale);
        prop_assert!((a.residual - b.residual).abs() < 1e-11 * scale);
    }

    #[test]
    fn rotated_ring_keeps_its_classification(n in 2usize..10, theta in -PI..PI, gamma in -3.0..3.0f64) {
        prop_assume!(gamma.abs() > 0.1);
        let s = ring(n, point(1.3, 0.4), gamma);
        let rotated = s.transformed(unit(theta), point(0.0, 0.0)).unwrap();
        let (a, b) = (classify(&s, DEFAULT_CLASSIFY_TOL), classify(&rotated, DEFAULT_CLASSIFY_TOL));
        prop_assert_eq!(a.kind, EquilibriumKind::Rotation);
        prop_assert_eq!(b.kind, EquilibriumKind::Rotation);
        prop_assert!((a.omega - b.omega).abs() < 1e-11);
        prop_assert!((a.center.unwrap() * unit(theta) - b.center.unwrap()).norm() < 1e-11);
    }

    #[test]
    fn ring_fields_superpose(n in 2usize..10, s1x in 0.2..3.0f64, s2x in -3.0..3.0f64, s2y in -3.0..3.0f64,
                             g1 in -3.0..3.0f64, g2 in -3.0..3.0f64, zx in coord(), zy in coord()) {
        let (s1, s2, z) = (point(s1x, 0.3), point(s2x, s2y), point(zx, zy));
        let mut positions: Vec<_> = (0..n as i64).map(|k| s1 * root_of_unity(n, k)).collect();
        positions.extend((0..n as i64).map(|k| s2 * root_of_unity(n, k)));
        let mut vorticities = vec![g1; n];
        vorticities.extend(vec![g2; n]);
        let Ok(both) = VortexSystem::new(positions, vorticities) else { return Ok(()); };
        prop_assume!(both.positions().iter().all(|p| (p - z).norm() > 1e-2));
        let direct = polyvortex_core::dynamics::field_at(&both, z);
        let (Ok(f1), Ok(f2)) = (polygon_field(n, s1, g1, z), polygon_field(n, s2, g2, z)) else { return Ok(()); };
        let scale: f64 = both.positions().iter().zip(both.vorticities()).map(|(p, g)| g.abs() / (p - z).norm()).sum();
        prop_assert!((f1 + f2 - direct).norm() < 1e-13 * scale.max(1.0) * 10.0);
    }

    #[test]
    fn ring_omega_matches_classification(n in 2usize..16, sx in -3.0..3.0f64, sy in -3.0..3.0f64, gamma in -4.0..4.0f64) {
        prop_assume!(sx.hypot(sy) > 0.1 && gamma.abs() > 0.05);
        let s = point(sx, sy);
        let report = classify(&ring(n, s, gamma), DEFAULT_CLASSIFY_TOL);
        prop_assert!(rel(report.omega, polygon_omega(n, s, n as f64 * gamma)) < 1e-11);
    }

    #[test]
    fn ring_swap_duality(n in 2usize..12, mag in -2.0..2.0f64, negative in any::<bool>(), staggered in any::<bool>()) {
        let r = if negative { -(10f64.powf(mag)) } else { 10f64.powf(mag) };
        let a = if staggered { Alignment::Staggered } else { Alignment::Aligned };
        let roots = positive_roots(&equation_coefficients(n, r, a));
        let dual = positive_roots(&equation_coefficients(n, 1.0 / r, a));
        prop_assert_eq!(roots.len(), dual.len());
        for (x, y) in roots.iter().zip(dual.iter().rev()) {
            prop_assert!(rel(1.0 / x, *y) < 1e-9, "x = {}, dual = {}", x, y);
        }
    }

    #[test]
    fn same_sign_aligned_has_two_roots(n in 2usize..=12, mag in -3.0..3.0f64) {
        let r = 10f64.powf(mag);
        prop_assert_eq!(positive_roots(&equation_coefficients(n, r, Alignment::Aligned)).len(), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nested_solutions_rotate_about_origin(n in 2usize..=7, mag in -1.0..1.0f64, negative in any::<bool>(),
                                            sx in 0.5..2.0f64, sy in -1.0..1.0f64) {
        let r = if negative { -(10f64.powf(mag)) } else { 10f64.powf(mag) };
        let out = solve_nested(n, 1.0, r, point(sx, sy)).unwrap();
        for sol in &out.solutions {
            prop_assert!(sol.report.residual < 1e-9, "residual {}", sol.report.residual);
            match sol.report.kind {
                EquilibriumKind::Rotation => prop_assert!(sol.report.center.unwrap().norm() < 1e-9),
                EquilibriumKind::Absolute => {}
                other => prop_assert!(false, "unexpected kind {:?}", other),
            }
        }
    }

    #[test]
    fn tracers_do_not_change_classification(n in 2usize..=6, mag in -1.0..1.0f64, negative in any::<bool>()) {
        let r = if negative { -(10f64.powf(mag)) } else { 10f64.powf(mag) };
        let out = solve_nested(n, 1.0, r, point(1.0, 0.0)).unwrap();
        for sol in &out.solutions {
            let Ok(points) = corotating_nested(&sol.config) else { continue; };
            let base = classify(&sol.system, DEFAULT_CLASSIFY_TOL);
            for p in &points {
                let with = sol.system.with_vortex(p.position, 0.0).unwrap();
                let rep = classify(&with, DEFAULT_CLASSIFY_TOL);
                prop_assert_eq!(rep.kind, base.kind);
                prop_assert!((rep.omega - base.omega).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn corotating_points_rotate_with_the_ring(n in 2usize..=12, theta in -PI..PI, rad in 0.3..3.0f64, gamma in -3.0..3.0f64) {
        prop_assume!(gamma.abs() > 0.1);
        let s = unit(theta) * rad;
        let a = corotating_single(n, s, gamma).unwrap();
        let b = corotating_single(n, s * root_of_unity(n, 1), gamma).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for ray in [RayKind::VertexRay, RayKind::MidpointRay] {
            let ra: Vec<f64> = a.iter().filter(|p| p.ray == ray).map(|p| p.radius).collect();
            let rb: Vec<f64> = b.iter().filter(|p| p.ray == ray).map(|p| p.radius).collect();
            prop_assert_eq!(ra.len(), rb.len());
            for (x, y) in ra.iter().zip(&rb) {
                prop_assert!((x - y).abs() < 1e-11);
            }
        }
        for p in &a {
            prop_assert!(b.iter().any(|q| (q.position - p.position).norm() < 1e-11 * rad.max(1.0) * 10.0));
        }
        let base = classify(&ring(n, s, gamma), DEFAULT_CLASSIFY_TOL);
        for p in &a {
            let rep = classify(&ring(n, s, gamma).with_vortex(p.position, 0.0).unwrap(), DEFAULT_CLASSIFY_TOL);
            prop_assert_eq!(rep.kind, base.kind);
            prop_assert!((rep.omega - base.omega).abs() < 1e-10);
        }
    }
}

#[test]
fn staggered_equal_rings_contain_unit_root() {
    for n in 2..=12 {
        let p = equation_coefficients(n, 1.0, Alignment::Staggered);
        assert!(p.g(1.0).abs() < 1e-12, "n = {n}");
        assert!(positive_roots(&p).iter().any(|x| (x - 1.0).abs() < 1e-12), "n = {n}");
    }
}

#[test]
fn absolute_equilibrium_identities() {
    for n in 2..=12 {
        let eq = absolute_equilibrium(n, 1.0).unwrap();
        let r = eq.gamma2;
        let lhs = eq.s2_over_s1.powi(n as i32);
        assert!((lhs + r * r).norm() < 1e-12 * r * r, "n = {n}");
        assert!((r * r + lambda(n) * r + 1.0).abs() < 1e-12 * r * r, "n = {n}");
    }
}

/// Eigenvalues with positive real part of the companion matrix of `G_n`.
///
/// Unbalanced companion matrices can stall the QR iteration; on failure the
/// matrix is conjugated by a random orthogonal matrix and retried.
fn companion_positive_roots(p: &PolynomialInstance, rng: &mut ChaCha8Rng) -> Option<Vec<(f64, f64)>> {
    // G = x^{n+2} - α xⁿ - β x² + (αβ - γ)
    let d = p.n + 2;
    let mut c = vec![0.0; d];
    c[0] = p.alpha * p.beta - p.gamma;
    c[2] -= p.beta;
    c[p.n] -= p.alpha;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i];
    }
    for _ in 0..4 {
        if let Some(schur) = Schur::try_new(m.clone(), 1e-15, 2_000) {
            return Some(
                schur
                    .complex_eigenvalues()
                    .iter()
                    .filter(|e| e.re > 0.0)
                    .map(|e| (e.re, e.im))
                    .collect(),
            );
        }
        let q = DMatrix::<f64>::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0)).qr().q();
        m = &q * m * q.transpose();
    }
    None
}

#[test]
fn analytic_count_matches_numeric_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    let mut boundary = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(2..=12);
        let mag: f64 = rng.random_range(-3.0..3.0);
        let r = if rng.random_bool(0.5) { -(10f64.powf(mag)) } else { 10f64.powf(mag) };
        for a in [Alignment::Aligned, Alignment::Staggered] {
            let p = equation_coefficients(n, r, a);
            match count_roots_analytic(&p) {
                Ok(k) => {
                    checked += 1;
                    let roots = positive_roots(&p);
                    assert_eq!(k, roots.len(), "n = {n}, r = {r}, {a:?}: {roots:?}");
                }
                Err(Error::Boundary { .. }) => boundary += 1,
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(boundary * 100 < checked, "{boundary} boundary cases");
}

#[test]
fn analytic_count_on_random_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let p = PolynomialInstance {
            alpha: rng.random_range(-6.0..6.0),
            beta: rng.random_range(-6.0..6.0),
            gamma: rng.random_range(-30.0..30.0),
            n: rng.random_range(2..=10),
        };
        if let Ok(k) = count_roots_analytic(&p) {
            assert_eq!(k, positive_roots(&p).len(), "{p:?}");
        }
    }
}

#[test]
fn numeric_roots_agree_with_companion_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut skipped = 0;
    for _ in 0..1_000 {
        let n = rng.random_range(2..=10);
        let mag: f64 = rng.random_range(-1.5..1.5);
        let r = if rng.random_bool(0.5) { -(10f64.powf(mag)) } else { 10f64.powf(mag) };
        for a in [Alignment::Aligned, Alignment::Staggered] {
            let p = equation_coefficients(n, r, a);
            if count_roots_analytic(&p).is_err() {
                continue;
            }
            let roots = positive_roots(&p);
            let Some(eig) = companion_positive_roots(&p, &mut rng) else {
                skipped += 1;
                continue;
            };
            let real: Vec<f64> = eig
                .iter()
                .filter(|(re, im)| im.abs() < 1e-7 * re.max(1.0))
                .map(|(re, _)| *re)
                .collect();
            assert_eq!(roots.len(), real.len(), "n = {n}, r = {r}: {roots:?} vs {eig:?}");
            for x in &roots {
                assert!(real.iter().any(|e| rel(*e, *x) < 1e-6), "n = {n}, r = {r}: {x} vs {real:?}");
            }
        }
    }
    assert!(skipped < 20, "{skipped} eigenvalue solves did not converge");
}

#[test]
fn random_unequal_rings_are_not_equilibria() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 4..=12 {
        for _ in 0..100 {
            let g: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
            let s = PolygonRing::new(n, point(1.0, 0.0), g).unwrap().to_system().unwrap();
            let rep = classify(&s, DEFAULT_CLASSIFY_TOL);
            assert_eq!(rep.kind, EquilibriumKind::None);
            assert!(rep.residual > 1e-6);
        }
    }
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // Equal-vorticity rings with n <= 6 are linearly stable, so rounding
    // errors in the initial state do not grow over a period.
    #[test]
    fn stable_rings_return_after_one_period(n in 2usize..=6, rad in 0.5..2.0f64, gamma in 0.2..2.0f64, theta in -PI..PI) {
        let rel_tol = 1e-10;
        let s = ring(n, unit(theta) * rad, gamma);
        let rep = classify(&s, DEFAULT_CLASSIFY_TOL);
        prop_assert_eq!(rep.kind, EquilibriumKind::Rotation);
        let traj = polyvortex_core::integrate(&s, 2.0 * PI / rep.omega.abs(), rel_tol).unwrap();
        prop_assert!(traj.return_error() < 100.0 * rel_tol * rad.max(1.0), "{}", traj.return_error());
    }
}
