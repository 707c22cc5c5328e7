use std::f64::consts::PI;

use gardner_core::stability::{
    amplification_factors, verify_stability, StabilityInput, STABILITY_TOL,
};
use gardner_core::PhysicsParams;
use num_complex::Complex64;
use proptest::prelude::*;

/// Eigenvalues of the 2x2 Fourier symbol of the scheme linearised about a
/// constant state, with advection speed `adv`. Built directly from the nodal
/// stencils: `xi` solves `det(B - xi A) = 0`.
fn symbol_eigenvalues(
    lambda: f64,
    h: f64,
    dt: f64,
    mu3: f64,
    adv: f64,
    phi: f64,
) -> [Complex64; 2] {
    let a1 = (4.0 - lambda) / 24.0;
    let a2 = (8.0 + lambda) / 12.0;
    let a3 = 1.0 / (2.0 * h);
    let g1 = (2.0 + lambda) / (2.0 * h * h);
    let g2 = -(4.0 + 2.0 * lambda) / (2.0 * h * h);
    let s = Complex64::from(2.0 * a1 * phi.cos() + a2);
    let g = Complex64::from(2.0 * g1 * phi.cos() + g2);
    let b = Complex64::new(0.0, 2.0 * a3 * phi.sin());
    let a = [[s * (2.0 / dt) + b * adv, g * mu3], [-b, s]];
    let bm = [[s * (2.0 / dt), -g * mu3 - s * adv], [b, -s]];
    let qa = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let qb = -(a[0][0] * bm[1][1] + bm[0][0] * a[1][1]) + (a[0][1] * bm[1][0] + bm[0][1] * a[1][0]);
    let qc = bm[0][0] * bm[1][1] - bm[0][1] * bm[1][0];
    let root = (qb * qb - qa * qc * 4.0).sqrt();
    [(-qb + root) / (qa * 2.0), (-qb - root) / (qa * 2.0)]
}

fn params(lambda: f64, mu3: f64) -> PhysicsParams {
    PhysicsParams::new(1.0, -5.0, mu3).with_lambda(lambda)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rho2_has_unit_modulus_for_any_amplitudes(
        lambda in -1.0f64..1.0,
        h in 0.05f64..2.0,
        dt in 1e-3f64..0.5,
        eps in -2.0f64..2.0,
        phi in 0.01f64..6.27,
        re1 in -3.0f64..3.0, im1 in -3.0f64..3.0,
        re2 in -3.0f64..3.0, im2 in -3.0f64..3.0,
    ) {
        prop_assume!(re1.hypot(im1) + re2.hypot(im2) > 1e-3);
        let mut input = StabilityInput::new(params(lambda, 1.0), h, dt, eps, phi, 0.0, 0.0);
        input.amp1 = Complex64::new(re1, im1);
        input.amp2 = Complex64::new(re2, im2);
        let (_, rho2) = amplification_factors(&input).unwrap();
        prop_assert!((rho2.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn conjugate_symmetry_for_real_amplitudes(
        lambda in -1.0f64..1.0,
        h in 0.05f64..2.0,
        eps in -1.0f64..1.0,
        phi in 0.01f64..3.13,
        amp1 in -2.0f64..2.0,
        amp2 in -2.0f64..2.0,
    ) {
        prop_assume!(amp1.abs() > 1e-3);
        let p = params(lambda, 1.0);
        let (r1, r2) = amplification_factors(&StabilityInput::new(p, h, 0.1, eps, phi, amp1, amp2)).unwrap();
        let (m1, m2) = amplification_factors(&StabilityInput::new(p, h, 0.1, eps, 2.0 * PI - phi, amp1, amp2)).unwrap();
        prop_assert!((r1 - m1.conj()).norm() <= 1e-12 * (1.0 + r1.norm()));
        prop_assert!((r2 - m2.conj()).norm() <= 1e-12);
    }

    #[test]
    fn physical_branch_is_neutral_and_matches_symbol(
        lambda in -1.0f64..1.0,
        h in 0.05f64..2.0,
        dt in 1e-3f64..0.5,
        mu3 in 0.0f64..3.0,
        eps in -2.0f64..2.0,
        phi in 0.01f64..6.27,
    ) {
        let p = params(lambda, mu3);
        let input = StabilityInput::physical(p, h, dt, eps, phi).unwrap();
        let (rho1, _) = amplification_factors(&input).unwrap();
        prop_assert!((rho1.norm() - 1.0).abs() <= 1e-12);
        let eig = symbol_eigenvalues(lambda, h, dt, mu3, -eps, phi);
        for e in eig {
            prop_assert!((e.norm() - 1.0).abs() <= 1e-10);
        }
        let d = eig.iter().map(|e| (e - rho1).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!(d <= 1e-10, "rho1 {rho1} vs {eig:?}");
    }

    #[test]
    fn spurious_branch_is_minus_one(lambda in -1.0f64..1.0, eps in -1.0f64..1.0, phi in 0.01f64..6.27) {
        let input = StabilityInput::spurious(params(lambda, 1.0), 1.6, 0.1, eps, phi);
        let (_, rho2) = amplification_factors(&input).unwrap();
        prop_assert!((rho2 + 1.0).norm() <= 1e-14);
    }
}

#[test]
fn unequal_unit_amplitudes_are_not_neutral() {
    // Amplitudes off the physical branch do not give a neutral rho1.
    let p = params(0.0, 1.0);
    let (up, _) =
        amplification_factors(&StabilityInput::new(p, 0.5, 0.1, 0.1, 1.2, 1.0, 1.0)).unwrap();
    let (down, _) =
        amplification_factors(&StabilityInput::new(p, 0.5, 0.1, 0.1, 1.2, 1.0, -1.0)).unwrap();
    assert!(up.norm() > 1.0 + 1e-3);
    assert!(down.norm() < 1.0 - 1e-3);
}

#[test]
fn invalid_inputs_rejected() {
    let p = params(0.0, 1.0);
    for phi in [0.0, 2.0 * PI, -1.0, f64::NAN] {
        assert!(
            amplification_factors(&StabilityInput::new(p, 1.0, 0.1, 0.0, phi, 1.0, 0.0)).is_err()
        );
    }
    assert!(amplification_factors(&StabilityInput::new(p, 1.0, 0.1, 0.0, 1.0, 0.0, 0.0)).is_err());
    assert!(amplification_factors(&StabilityInput::new(p, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0)).is_err());
    assert!(verify_stability(p, 1.0, 0.1, (0.0, 1.0), 4).is_err());
    assert!(verify_stability(p, 1.0, 0.1, (1.0, 0.0), 64).is_err());
}

#[test]
fn preset_sweeps_pass() {
    for (mu, h, dt, range) in [
        ((4.0, -3.0, 1.0), 0.5, 0.1, (0.0, 0.1)),
        ((1.0, -5.0, 1.0), 1.6, 0.1, (0.0, 0.24)),
        ((10.0, -3.0, 1.0), 0.25, 0.01, (0.0, 1.25)),
    ] {
        let p = PhysicsParams::new(mu.0, mu.1, mu.2);
        let report = verify_stability(p, h, dt, range, 720).unwrap();
        assert!(report.passed);
        assert!(report.max_abs_rho1 <= 1.0 + STABILITY_TOL);
        assert_eq!(report.samples.len(), 720 * 16);
    }
}
