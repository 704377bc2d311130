//! Friction and diffusion formulas against independent references: a slowly
//! ramped coupling integrated in the time domain, closed-form limits and
//! the free-space limit.

use num_complex::Complex64;
use ode_solvers::dop_shared::OutputType;
use ode_solvers::dopri5::Dopri5;
use ode_solvers::{DVector, System};
use pingpong_core::kinetics::{
    diffusion_atomic, diffusion_cavity, diffusion_field, diffusion_free, f_function, friction_atomic,
    friction_coefficients, friction_field, scaled_atom_rates, scaled_mode_rates, AtomicFrictionOptions,
    CavityDiffusionOptions, FVariant,
};
use pingpong_core::scan::presets::{hood, pinkse, HOOD_N0, PINKSE_N0};
use pingpong_core::states::{bounced1, polarized2};
use pingpong_core::{SemiclassicalState, SystemParams};

/// `dy/dt = -i Omega(g(t)) y + i c(g(t))` with `g(t) = g + rate (t - t_end)`.
struct Ramp<'a> {
    omega: &'a dyn Fn(f64) -> Complex64,
    drive: &'a dyn Fn(f64) -> Complex64,
    g: f64,
    rate: f64,
    t_end: f64,
}

impl System<f64, DVector<f64>> for Ramp<'_> {
    fn system(&self, t: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
        let g = self.g + self.rate * (t - self.t_end);
        let v = Complex64::new(y[0], y[1]);
        let d = -Complex64::i() * (self.omega)(g) * v + Complex64::i() * (self.drive)(g);
        dy[0] = d.re;
        dy[1] = d.im;
    }
}

/// Adiabatic expansion `y = y_s(g) + g' y_1(g)` of a driven damped
/// oscillator whose coupling is swept slowly, read off from ramps of
/// opposite sign arriving at `g` together. Two ramp rates remove the
/// third-order lag by Richardson extrapolation.
fn slaved_response(omega: &dyn Fn(f64) -> Complex64, drive: &dyn Fn(f64) -> Complex64, g: f64) -> (Complex64, Complex64) {
    let steady = |g: f64| drive(g) / omega(g);
    let decay = -omega(g).im;
    let t_end = 60.0 / decay;
    let run = |rate: f64| {
        let y0 = steady(g - rate * t_end);
        let sys = Ramp {
            omega,
            drive,
            g,
            rate,
            t_end,
        };
        // Sparse output ends on an accepted step rather than an interpolant.
        let mut stepper = Dopri5::from_param(
            sys,
            0.0,
            t_end,
            t_end,
            DVector::from_vec(vec![y0.re, y0.im]),
            1e-13,
            1e-15 * y0.norm(),
            0.9,
            0.04,
            0.2,
            10.0,
            t_end,
            0.0,
            1_000_000,
            1000,
            OutputType::Sparse,
        );
        stepper.integrate().expect("ramp integrates");
        let y = stepper.y_out().last().unwrap().clone();
        Complex64::new(y[0], y[1])
    };
    let lag = |rate: f64| (run(rate) - run(-rate)) / (2.0 * rate);
    let rate = 1e-4;
    let mean = 0.5 * (run(rate) + run(-rate));
    (mean, (4.0 * lag(rate) - lag(2.0 * rate)) / 3.0)
}

fn unsaturated(state: SemiclassicalState) -> SemiclassicalState {
    SemiclassicalState { s: 0.0, ..state }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn field_friction_is_the_lag_of_a_slaved_mode() {
    for (p, x) in [(pinkse(), 0.0), (hood(), 0.15), (SystemParams::new(0.4, 0.2, -1.5, 0.9), 0.15)] {
        let p = p.with_photon_number(0.5);
        let st = unsaturated(bounced1(&p, x).unwrap());
        let atom = p.omega_a * p.omega_a + p.gamma * p.gamma;
        let omega = |g: f64| Complex64::new(p.omega_c - p.omega_a * g * g / atom, -(p.kappa + p.gamma * g * g / atom));
        let g = p.coupling(x);
        let c = omega(g) * st.alpha;
        let (alpha, alpha_1) = slaved_response(&omega, &|_| c, g);
        // The mean of the two ramps carries the second-order lag.
        assert!((alpha - st.alpha).norm() < 1e-3 * st.alpha.norm());
        let alpha = st.alpha;
        // The force on the atom is xi |alpha|^2 grad g with xi = -dW/dg.
        let xi = 2.0 * g * p.omega_a / atom;
        let oracle = -2.0 * xi * (alpha.conj() * alpha_1).re;
        let rates = scaled_mode_rates(&p, x, 0.0).unwrap();
        let g_field = friction_field(&p, x, &st, &rates, FVariant::V1, false).unwrap();
        assert!(rel(g_field, oracle) < 1e-5, "x={x}: {g_field} vs {oracle}");
    }
}

#[test]
fn atomic_friction_is_the_lag_of_a_slaved_dipole() {
    // At weak drive the dressed dipole is a linear oscillator, and its lag
    // has exactly the structure G_free + xi G_1 + zeta G_1z + xi^2 G_2 +
    // xi zeta G_2z to first order in N0, provided s_h is kept: G_2 and G_2z
    // are themselves first order in N0 through s_h.
    let n0 = 1e-8;
    for (p, x) in [(hood(), 0.0), (pinkse(), 0.1), (SystemParams::new(0.5, 0.7, 0.8, -0.6), 0.2)] {
        let p = p.with_photon_number(n0);
        let alpha0 = p.alpha0().unwrap();
        let cav = p.omega_c * p.omega_c + p.kappa * p.kappa;
        let omega = |g: f64| Complex64::new(p.omega_a - p.omega_c * g * g / cav, -(p.gamma + p.kappa * g * g / cav));
        let drive = |g: f64| g * alpha0;
        let g = p.coupling(x);
        let (sigma, sigma_1) = slaved_response(&omega, &drive, g);
        assert!((sigma - drive(g) / omega(g)).norm() < 1e-3 * sigma.norm());
        let sigma = drive(g) / omega(g);
        // H = W_A s+s - g (alpha0 s+ + h.c.), so -dH/dg = xi s+s + alpha0 s+ + h.c.
        let xi = 2.0 * g * p.omega_c / cav;
        let oracle = -xi * 2.0 * (sigma.conj() * sigma_1).re - 2.0 * (alpha0.conj() * sigma_1).re;
        let st = bounced1(&p, x).unwrap();
        let rates = scaled_atom_rates(&p, x, st.s).unwrap();
        let options = AtomicFrictionOptions {
            s_h_equals_s: false,
            zero_zeta: false,
        };
        let g_at = friction_atomic(&p, x, &st, &rates, FVariant::V1, options).unwrap().total();
        assert!(rel(g_at, oracle) < 1e-5, "x={x}: {g_at} vs {oracle}");
    }
}

#[test]
fn field_friction_without_saturation_is_the_good_cavity_form() {
    for (p, x) in [(pinkse(), 0.0), (hood(), 0.1), (SystemParams::new(0.187, 0.094, 6.0, 1.0 / 6.0), 0.05)] {
        let p = p.with_photon_number(0.7);
        let st = unsaturated(polarized2(&p, x).unwrap());
        let g = p.coupling(x);
        let atom = p.omega_a * p.omega_a + p.gamma * p.gamma;
        // Light shift per photon U = g^2 omega_a / |w~_a|^2 and the dressed mode.
        let du = 2.0 * g * p.omega_a / atom;
        let w = p.omega_c - p.omega_a * g * g / atom;
        let k = p.kappa + p.gamma * g * g / atom;
        let reference = 4.0 * st.photon_number() * du * du * k * w / (w * w + k * k).powi(2);
        let rates = scaled_mode_rates(&p, x, 0.0).unwrap();
        for variant in FVariant::ALL {
            let g_field = friction_field(&p, x, &st, &rates, variant, true).unwrap();
            assert!((g_field - reference).abs() <= 1e-12 * reference.abs(), "{g_field} vs {reference}");
        }
    }
}

#[test]
fn atomic_friction_without_mode_reaction_is_the_free_term() {
    // omega_c = 0 makes xi_a vanish; dropping zeta_a leaves G_free alone.
    let p = SystemParams::new(0.2, 0.5, 1.3, 0.0).with_photon_number(0.4);
    for x in [0.0, 0.07, 0.19] {
        let st = polarized2(&p, x).unwrap();
        let rates = scaled_atom_rates(&p, x, st.s).unwrap();
        let options = AtomicFrictionOptions {
            zero_zeta: true,
            ..AtomicFrictionOptions::default()
        };
        let at = friction_atomic(&p, x, &st, &rates, FVariant::V2Nu, options).unwrap();
        assert_eq!(at.xi_a, 0.0);
        assert_eq!(at.total(), at.g_free);
        let expected = friction_coefficients(rates.w_a, rates.gamma_a, rates.g, 0.4, st.s).g_free;
        assert!((at.g_free - expected).abs() <= 1e-12 * expected.abs());
    }
    let (w, gm, n0) = (1.3, 0.25, 0.4);
    let m = w * w + gm * gm;
    let at_zero = friction_coefficients(w, gm, 0.6, n0, 0.0);
    let expected = 2.0 * n0 / m * (w / gm) * (2.0 * gm * gm / m);
    assert!((at_zero.g_free - expected).abs() <= 1e-12 * expected);
    assert_eq!((at_zero.g_2, at_zero.g_2zeta), (0.0, 0.0));
}

#[test]
fn closures_reduce_to_their_closed_forms() {
    let nu = Complex64::new(-2.5, 1.7);
    for variant in FVariant::ALL {
        assert!((f_function(0.0, nu, variant).unwrap() - 1.0).abs() <= 1e-12);
    }
    for s in [0.01, 0.5, 1.0, 3.0, 40.0] {
        let v1 = f_function(s, nu, FVariant::V1).unwrap();
        let v2 = f_function(s, nu, FVariant::V2).unwrap();
        assert!((v1 - 1.0 / (1.0 + s)).abs() <= 1e-12);
        assert!((v2 - 1.0 / (1.0 + s).powi(2)).abs() <= 1e-12);
        let v2nu_at_one = f_function(s, Complex64::new(1.0, 0.0), FVariant::V2Nu).unwrap();
        assert!((v2nu_at_one - v2).abs() <= 1e-12);
    }
}

/// `(D_field / D_at, |D_cav| / D_at, |D_at - D_free| / D_free)` at the
/// antinode with `kappa` multiplied by `factor` and `N0` held fixed.
fn free_space_ratios(p: &SystemParams, factor: f64) -> [f64; 3] {
    let n0 = p.n0().unwrap();
    let p = SystemParams {
        kappa: p.kappa * factor,
        ..*p
    }
    .with_photon_number(n0);
    let st = polarized2(&p, 0.0).unwrap();
    let ar = scaled_atom_rates(&p, 0.0, st.s).unwrap();
    let mr = scaled_mode_rates(&p, 0.0, st.s).unwrap();
    let d_at = diffusion_atomic(&ar, p.alpha0().unwrap(), st.alpha, st.s).d_at;
    let d_free = diffusion_free(&p, &st);
    let d_field = diffusion_field(st.beta, &mr);
    let d_cav = diffusion_cavity(&p, 0.0, &st, CavityDiffusionOptions::default()).unwrap();
    [d_field / d_at, d_cav.abs() / d_at, rel(d_at, d_free)]
}

#[test]
fn free_space_limit_is_approached_as_kappa_grows() {
    // The residual cavity effects scale like the cooperativity, i.e. like
    // 1/kappa, so each ratio drops by about the factor kappa grew by.
    for name in ["fig2a", "fig2b", "fig3b", "fig6a", "fig7"] {
        let (p, _) = pingpong_core::scan::preset(name).unwrap().point(0.0);
        let near = free_space_ratios(&p, 1e3);
        let far = free_space_ratios(&p, 1e6);
        for (n, f) in near.iter().zip(&far) {
            assert!(*f < 1e-2, "{name}: {far:?}");
            assert!(n / f > 500.0, "{name}: {near:?} -> {far:?}");
        }
    }
}

#[test]
fn dropping_zeta_c_is_a_small_change_for_pinkse() {
    let p = pinkse().with_photon_number(PINKSE_N0);
    let st = polarized2(&p, 0.0).unwrap();
    let rates = scaled_mode_rates(&p, 0.0, st.s).unwrap();
    let with = friction_field(&p, 0.0, &st, &rates, FVariant::V2Nu, false).unwrap();
    let without = friction_field(&p, 0.0, &st, &rates, FVariant::V2Nu, true).unwrap();
    assert!(rel(without, with) < 0.1, "{without} vs {with}");
}

#[test]
fn friction_is_blind_to_the_sign_of_the_gradient() {
    // Mirror positions about the antinode have opposite gradients.
    let p = hood().with_photon_number(HOOD_N0);
    for x in [0.04, 0.11, 0.2] {
        let (a, b) = (polarized2(&p, x).unwrap(), polarized2(&p, -x).unwrap());
        let field = |st: &SemiclassicalState, x: f64| {
            let r = scaled_mode_rates(&p, x, st.s).unwrap();
            friction_field(&p, x, st, &r, FVariant::V2Nu, true).unwrap()
        };
        let atomic = |st: &SemiclassicalState, x: f64| {
            let r = scaled_atom_rates(&p, x, st.s).unwrap();
            friction_atomic(&p, x, st, &r, FVariant::V2Nu, AtomicFrictionOptions::default())
                .unwrap()
                .total()
        };
        assert!(p.coupling_gradient(x) * p.coupling_gradient(-x) < 0.0);
        assert!(rel(field(&b, -x), field(&a, x)) < 1e-12);
        assert!(rel(atomic(&b, -x), atomic(&a, x)) < 1e-12);
    }
}

