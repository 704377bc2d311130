//! Randomized invariants of the structure parameter, the ping-pong states,
//! the bistability equation and the kinetic coefficients.

use num_complex::Complex64;
use pingpong_core::bistability::{
    bistability_condition_nu, bistability_condition_standard, bistability_roots, fixed_point_residual,
    intensity_cubic, ScaledForm,
};
use pingpong_core::kinetics::{
    diffusion_atomic, diffusion_field, diffusion_free, f_function, scaled_atom_rates, scaled_mode_rates, FVariant,
};
use pingpong_core::states::{bounced1, bounced2, polarized1, state_residual, DEFAULT_POLE_GUARD};
use pingpong_core::{CouplingProfile, StateVariant, SystemParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (SystemParams, f64)> {
    (
        0.01..5.0f64,
        0.01..5.0f64,
        -10.0..10.0f64,
        -10.0..10.0f64,
        0.1..5.0f64,
        0.001..5.0f64,
        0.0..0.25f64,
    )
        .prop_map(|(gamma, kappa, omega_a, omega_c, g0, n0, x)| {
            (
                SystemParams::new(gamma, kappa, omega_a, omega_c)
                    .with_g0(g0)
                    .with_photon_number(n0),
                x,
            )
        })
}

/// Whether `a >= b` is decided with a margin of `1e-9` relative.
fn clear(a: f64, b: f64) -> bool {
    (a - b).abs() > 1e-9 * (a.abs() + b.abs())
}

fn conditions_are_clear(c: f64, delta: f64, theta: f64) -> bool {
    let lhs = 4.0 * (delta * theta + c - 1.0).powi(3);
    let rhs = 27.0 * c * (delta * delta + 1.0) * (theta * theta + 1.0);
    clear(lhs, rhs) && clear(2.0 * c, delta * theta - 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn resonant_nu_is_minus_twice_the_cooperativity(
        gamma in 1e-3..10.0f64, kappa in 1e-3..10.0f64, g0 in 0.01..10.0f64, x in 0.0..0.25f64,
    ) {
        let p = SystemParams::new(gamma, kappa, 0.0, 0.0).with_g0(g0);
        let nu = p.nu(x).unwrap();
        let c = p.cooperativity(x).unwrap().c;
        prop_assert!((nu + 2.0 * c).norm() <= 1e-12 * (2.0 * c).max(1e-300));
    }

    #[test]
    fn nu_is_a_function_of_the_cooperativity_and_scaled_detunings((p, x) in params()) {
        let nu = p.nu(x).unwrap();
        let via_c = p.cooperativity(x).unwrap().nu();
        prop_assert!((nu - via_c).norm() <= 1e-12 * nu.norm());
    }

    #[test]
    fn bistability_conditions_agree_in_both_planes(
        c in 0.1..100.0f64, delta in -20.0..20.0f64, theta in -20.0..20.0f64,
    ) {
        prop_assume!(conditions_are_clear(c, delta, theta));
        let nu = ScaledForm::new(c, delta, theta, Complex64::new(0.0, 0.0)).nu();
        prop_assert_eq!(bistability_condition_standard(c, delta, theta), bistability_condition_nu(nu));
    }

    #[test]
    fn nu_plane_conditions_are_blind_to_a_joint_rescaling((p, x) in params(), k in 0.05..20.0f64) {
        // Frequencies times k and g times k leave nu unchanged.
        let q = SystemParams::new(p.gamma * k, p.kappa * k, p.omega_a * k, p.omega_c * k).with_g0(p.g0 * k);
        let (a, b) = (p.nu(x).unwrap(), q.nu(x).unwrap());
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        let m2 = a.norm_sqr();
        prop_assume!(clear((m2 + 2.0 * a.re).powi(3), 27.0 * m2 * m2) && clear(m2, a.re));
        prop_assert_eq!(bistability_condition_nu(a), bistability_condition_nu(b));
    }

    #[test]
    fn mode_pulling_sign(
        gamma in 1e-4..0.01f64, kappa in 1e-4..0.01f64,
        omega_a in prop_oneof![-5.0..-0.5f64, 0.5..5.0f64],
        omega_c in prop_oneof![-5.0..-0.5f64, 0.5..5.0f64],
    ) {
        let pulling = kappa * omega_a + gamma * omega_c;
        prop_assume!(pulling.abs() > 1e-6);
        let nu = SystemParams::new(gamma, kappa, omega_a, omega_c).nu(0.0).unwrap();
        prop_assert_eq!(nu.im.signum(), pulling.signum());
    }

    #[test]
    fn every_bistability_root_solves_the_state_equation((p, x) in params()) {
        let roots = bistability_roots(&p, x).unwrap();
        let nu = p.nu(x).unwrap();
        let a0 = p.alpha0().unwrap();
        let eta = p.saturation_per_photon(p.coupling(x)).unwrap();
        let [c3, c2, c1, c0] = intensity_cubic(nu, eta, a0.norm_sqr());
        for r in &roots.roots {
            prop_assert!(r.residual < 1e-10 * (1.0 + a0.norm()), "{:?}", r);
            prop_assert!((fixed_point_residual(r.amplitude, a0, nu, eta) - r.residual).abs() < 1e-14 * (1.0 + a0.norm()));
            let i = r.intensity;
            let cubic = ((c3 * i + c2) * i + c1) * i + c0;
            let scale = (c3 * i * i * i).abs() + (c2 * i * i).abs() + (c1 * i).abs() + c0.abs();
            prop_assert!(cubic.abs() <= 1e-10 * scale);
        }
        prop_assert!(roots.len() == 1 || roots.len() == 3 || roots.roots.iter().any(|r| r.multiplicity == 2));
    }

    #[test]
    fn cubic_and_fixed_point_residuals_vanish_together((p, x) in params(), t in 0.0..1.0f64) {
        let roots = bistability_roots(&p, x).unwrap();
        let nu = p.nu(x).unwrap();
        let a0 = p.alpha0().unwrap();
        let eta = p.saturation_per_photon(p.coupling(x)).unwrap();
        let coeffs = intensity_cubic(nu, eta, a0.norm_sqr());
        let cubic = |i: f64| {
            let [c3, c2, c1, c0] = coeffs;
            let v = ((c3 * i + c2) * i + c1) * i + c0;
            v.abs() / ((c3 * i * i * i).abs() + (c2 * i * i).abs() + (c1 * i).abs() + c0.abs())
        };
        // Trial amplitude of modulus sqrt(I), phased by the state equation.
        let fixed_point = |i: f64| {
            let u = 1.0 + eta * i;
            let phase = (a0 * u / (u - nu)).arg();
            let trial = Complex64::from_polar(i.sqrt(), phase);
            fixed_point_residual(trial, a0, nu, eta) / (1.0 + a0.norm())
        };
        for r in &roots.roots {
            prop_assert!(fixed_point(r.intensity) < 1e-12 && cubic(r.intensity) < 1e-12);
        }
        let i = t * 2.0 * (roots.highest().intensity + 1.0);
        prop_assume!(roots.roots.iter().all(|r| (r.intensity - i).abs() > 1e-3 * (1.0 + i)));
        prop_assert!(fixed_point(i) > 1e-6 && cubic(i) > 1e-6, "{} {}", fixed_point(i), cubic(i));
    }

    #[test]
    fn scaled_form_is_the_same_equation(
        c in 0.1..50.0f64, delta in -10.0..10.0f64, theta in -10.0..10.0f64,
        y_re in -30.0..30.0f64, y_im in -30.0..30.0f64,
    ) {
        let form = ScaledForm::new(c, delta, theta, Complex64::new(y_re, y_im));
        let err = form.bijection_error().unwrap();
        // Root counts can differ only at a fold, where two roots merge.
        prop_assume!(err.is_finite());
        prop_assert!(err < 1e-6, "{}", err);
        let via_params = form.to_params().nu(0.0).unwrap();
        prop_assert!((via_params - form.nu()).norm() <= 1e-12 * form.nu().norm());
    }

    #[test]
    fn decoupled_states_are_the_empty_cavity((p, x) in params()) {
        let p = p.with_profile(CouplingProfile::Off);
        let a0 = p.alpha0().unwrap();
        for v in StateVariant::PING_PONG {
            let st = v.build(&p, x, DEFAULT_POLE_GUARD).unwrap();
            prop_assert!((st.alpha - a0).norm() <= 1e-14 * (1.0 + a0.norm()), "{:?}", v);
        }
    }

    #[test]
    fn bounced1_is_an_exact_correlation_fixed_point((p, x) in params()) {
        prop_assume!((1.0 - p.nu(x).unwrap()).norm() > 1e-3);
        let st = bounced1(&p, x).unwrap();
        let r = state_residual(&st, &p).unwrap();
        let scale = p.rates().wct.norm() * (p.alpha0().unwrap().norm() + st.alpha.norm());
        prop_assert!(r.correlation.norm() <= 1e-14 * scale.max(1e-300));
    }

    #[test]
    fn bounced2_reduces_to_bounced1_at_weak_drive((p, x) in params()) {
        let p = p.with_photon_number(1e-10);
        prop_assume!((1.0 - p.nu(x).unwrap()).norm() > 1e-3);
        let (b1, b2) = (bounced1(&p, x).unwrap(), bounced2(&p, x).unwrap());
        prop_assert!((b2.alpha - b1.alpha).norm() < 1e-6 * b1.alpha.norm());
    }

    #[test]
    fn polarized1_and_bounced1_meet_for_small_nu((p, x) in params()) {
        let nu = p.nu(x).unwrap();
        prop_assume!(nu.norm() < 0.1 && nu.norm() > 0.0);
        let a0 = p.alpha0().unwrap();
        let (b1, p1) = (bounced1(&p, x).unwrap(), polarized1(&p, x).unwrap());
        // The gap is second order in nu; near a node that drops below rounding.
        let bound = (2.0 * nu.norm_sqr() + 1e-14) * a0.norm();
        prop_assert!((p1.alpha - b1.alpha).norm() <= bound);
    }

    #[test]
    fn closures_are_ordered_on_the_lossless_resonance(s in 0.0..1e3f64) {
        let one = Complex64::new(1.0, 0.0);
        let v1 = f_function(s, one, FVariant::V1).unwrap();
        let v2 = f_function(s, one, FVariant::V2).unwrap();
        let v3 = f_function(s, one, FVariant::V3).unwrap();
        prop_assert!(v2 <= v1 && v1 <= v3);
        let tol = 1e-12;
        prop_assert!((v3 - (1.0 / (1.0 + s) + 2.0 * s / (1.0 + s).powi(2))).abs() <= tol);
        prop_assert!((v2 - 1.0 / (1.0 + s).powi(2)).abs() <= tol);
        prop_assert!((f_function(s, one, FVariant::V2Nu).unwrap() - v2).abs() <= tol);
    }

    #[test]
    fn diffusion_is_nonnegative((p, x) in params(), variant in 0usize..6) {
        let v = StateVariant::PING_PONG[variant];
        let Ok(st) = v.build(&p, x, DEFAULT_POLE_GUARD) else {
            return Ok(());
        };
        let ar = scaled_atom_rates(&p, x, st.s).unwrap();
        let mr = scaled_mode_rates(&p, x, st.s).unwrap();
        let a0 = p.alpha0().unwrap();
        prop_assert!(diffusion_atomic(&ar, a0, st.alpha, st.s).d_at >= 0.0);
        prop_assert!(diffusion_atomic(&ar, a0, a0, st.s).total() >= 0.0);
        prop_assert!(diffusion_field(st.beta, &mr) >= 0.0);
        prop_assert!(diffusion_free(&p, &st) >= 0.0);
    }
}

#[test]
fn lossless_tuned_pair_has_nu_one() {
    for (wa, wc) in [(1.0, 1.0), (2.0, 0.5), (-0.3, -3.0)] {
        let g = f64::sqrt(wa * wc);
        let p = SystemParams::new(1e-8, 1e-8, wa, wc)
            .with_g0(g)
            .with_profile(CouplingProfile::Uniform);
        assert!((p.nu(0.0).unwrap() - 1.0).norm() < 1e-6);
    }
}

#[test]
fn boundary_draws_are_rare() {
    // The same distribution as the proptest above, counted explicitly.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let mut excluded = 0;
    for _ in 0..1000 {
        let (c, delta, theta) = (
            rng.gen_range(0.1..100.0),
            rng.gen_range(-20.0..20.0),
            rng.gen_range(-20.0..20.0),
        );
        if !conditions_are_clear(c, delta, theta) {
            excluded += 1;
            continue;
        }
        let nu = ScaledForm::new(c, delta, theta, Complex64::new(0.0, 0.0)).nu();
        assert_eq!(bistability_condition_standard(c, delta, theta), bistability_condition_nu(nu));
    }
    assert!(excluded < 10, "{excluded} boundary draws");
}

#[test]
fn branches_are_continuous_between_folds() {
    let mut previous: Option<Vec<f64>> = None;
    let mut count_changes = 0;
    for k in 0..=8000 {
        let y = 40.0 * k as f64 / 8000.0;
        let form = ScaledForm::new(20.0, 0.0, 0.0, Complex64::new(y, 0.0));
        let now: Vec<f64> = form.roots().iter().map(|r| r.intensity).collect();
        if let Some(before) = &previous {
            if before.len() == now.len() {
                for (a, b) in before.iter().zip(&now) {
                    assert!((a - b).abs() < 0.05 * (1.0 + a), "jump {a} -> {b} at y = {y}");
                }
            } else {
                assert_eq!(before.len().abs_diff(now.len()), 2, "at y = {y}");
                count_changes += 1;
            }
        }
        previous = Some(now);
    }
    // Into and out of the hysteresis window.
    assert_eq!(count_changes, 2);
}
