//! Exact diffusion and friction from linear solves on the traceless
//! subspace (quantum regression).
//!
//! With `F_d = dH/dg` the force is `-grad(g) F_d`.
//!
//! Diffusion: `D = Re int_0^inf <dF(t) dF(0)> dt` with `dF = F_d - <F_d>`.
//! Propagating `dF rho_s` and integrating gives `D = Re Tr(dF X)` with
//! `L X = -dF rho_s`. Because `F_d` is self-adjoint the real part of the
//! one-sided integral equals half the symmetrized two-sided one.
//!
//! Friction: for an atom moving slowly, `rho = rho_s(g) + g_dot Z` to first
//! order with `L Y = i [F_d, rho_s]` (so `Y = d rho_s / dg`) and `L Z = Y`.
//! The mean force picks up `-(v . grad g) grad g Tr(F_d Z)`, hence
//! `G = Tr(F_d Z)` with positive values damping the motion.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::basis::{commutator, scaled, trace_product, Operator};
use super::steady::{steady_state, SteadyState, SteadyStateOptions};
use crate::error::{Error, Result};
use crate::kinetics::{friction_field, scaled_mode_rates, FVariant};
use crate::model::{CouplingProfile, SystemParams};
use crate::states::polarized1;

/// `F_d - <F_d>` and `<F_d>`.
fn centered_force(state: &SteadyState) -> (Operator, f64) {
    let f = state.basis.force();
    let mean = state.expect(&f).re;
    let centered = &f - scaled(&state.basis.identity(), Complex64::new(mean, 0.0));
    (centered, mean)
}

/// Exact diffusion scalar multiplying `(grad g)_i (grad g)_j`, without the
/// spontaneous-emission recoil part.
pub fn exact_diffusion(state: &SteadyState) -> Result<f64> {
    let (df, _) = centered_force(state);
    let rhs = scaled(&(&df * &state.rho), Complex64::new(-1.0, 0.0));
    let x = state
        .factorized()
        .solve_traceless(&rhs, &state.rho, "diffusion solve")?;
    Ok(trace_product(&df, &x).re)
}

/// `d rho_s / dg` from `L Y = i [F_d, rho_s]`.
pub fn coupling_derivative(state: &SteadyState) -> Result<Operator> {
    let f = state.basis.force();
    let rhs = scaled(&commutator(&f, &state.rho), Complex64::new(0.0, 1.0));
    state
        .factorized()
        .solve_traceless(&rhs, &state.rho, "coupling-derivative solve")
}

/// `Tr(F_d Z)` with `L Z = d rho_s / dg`, before the sign calibration.
pub fn raw_friction(state: &SteadyState) -> Result<f64> {
    let y = coupling_derivative(state)?;
    let z = state
        .factorized()
        .solve_traceless(&y, &state.rho, "friction solve")?;
    Ok(trace_product(&state.basis.force(), &z).re)
}

/// Exact friction scalar, positive for cooling.
pub fn exact_friction(state: &SteadyState) -> Result<f64> {
    Ok(friction_sign()? * raw_friction(state)?)
}

/// Cavity detuning of the sign-calibration point. It puts the dressed
/// cavity frequency `W_C` close to its linewidth `K_c`, where the
/// good-cavity friction is largest.
pub const CALIBRATION_OMEGA_C: f64 = 0.02;

/// Good-cavity, low-saturation reference point used to fix the sign of
/// the exact friction.
pub fn calibration_params() -> SystemParams {
    SystemParams::new(1.0, 0.01, 10.0, CALIBRATION_OMEGA_C)
        .with_g0(0.3)
        .with_profile(CouplingProfile::Uniform)
        .with_photon_number(0.01)
}

/// Exact and field-picture friction at the calibration point.
pub fn calibration_values() -> Result<(f64, f64)> {
    let p = calibration_params();
    let st = steady_state(&p, 0.0, &SteadyStateOptions::default())?;
    let exact = raw_friction(&st)?;
    let state = polarized1(&p, 0.0)?;
    let rates = scaled_mode_rates(&p, 0.0, state.s)?;
    let field = friction_field(&p, 0.0, &state, &rates, FVariant::V1, true)?;
    Ok((exact, field))
}

/// `+1` or `-1`, chosen once so that the exact friction agrees in sign
/// with the field-picture friction at [`calibration_params`].
pub fn friction_sign() -> Result<f64> {
    static SIGN: OnceLock<std::result::Result<f64, f64>> = OnceLock::new();
    let cached = SIGN.get_or_init(|| match calibration_values() {
        Ok((exact, field)) if exact.abs() >= 1e-12 && field.abs() >= 1e-12 => {
            Ok(if (exact > 0.0) == (field > 0.0) { 1.0 } else { -1.0 })
        }
        Ok((exact, field)) => Err(exact.abs().min(field.abs())),
        Err(_) => Err(f64::NAN),
    });
    cached.map_err(Error::CalibrationMismatch)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undriven_system_has_no_diffusion() {
        let p = SystemParams::new(0.3, 0.2, 0.7, -0.4);
        let st = steady_state(&p, 0.0, &SteadyStateOptions::default()).unwrap();
        assert!(exact_diffusion(&st).unwrap().abs() < 1e-14);
    }

    #[test]
    fn sign_calibration_is_unambiguous() {
        let (exact, field) = calibration_values().unwrap();
        assert!(exact.abs() > 1e-12 && field.abs() > 1e-12);
        assert_eq!(friction_sign().unwrap(), 1.0);
    }
}
