//! Parameter sets of the reference figures, ready to scan.
//!
//! Frequencies are in units of `g0 = 1`. Position scans cover a quarter
//! wavelength from the antinode `x = 0` to the node `x = 1/4`; the cosine
//! profile makes every other position a mirror image of these.

use super::config::{DriveAxis, DriveSpec, Quantity, ScanAxis, ScanConfig};
use crate::bistability::Axis;
use crate::error::{Error, Result};
use crate::kinetics::{AlphaDChoice, FVariant, SaturationRegime};
use crate::model::{CouplingProfile, SystemParams};
use crate::states::StateVariant;

/// Short description of every preset, in registry order.
pub const PRESETS: [(&str, &str); 13] = [
    ("fig1", "bistability equation vs exact, atomic-detuning scan"),
    ("fig2a", "photon number vs position, Pinkse parameters"),
    ("fig2b", "photon number vs position, Hood parameters"),
    ("fig3a", "heterodyne transmission vs drive strength"),
    ("fig3b", "photon number vs position, intermediate regime"),
    ("fig4a", "diffusion vs position, Hood parameters"),
    ("fig4b", "diffusion vs position, Pinkse parameters"),
    ("fig5a", "friction vs position, Pinkse parameters"),
    ("fig5b", "friction vs position, Hood parameters"),
    ("fig6a", "diffusion and friction, reversed decay hierarchy"),
    ("fig6b", "diffusion and friction, intermediate regime"),
    ("fig7", "diffusion and friction, resonant cavity with N0 = 11"),
    ("hood", "alias of fig2b"),
];

/// Pinkse parameters.
pub fn pinkse() -> SystemParams {
    SystemParams::new(0.187, 0.087, 2.8, 0.31)
}

/// Hood parameters.
pub fn hood() -> SystemParams {
    SystemParams::new(0.02, 0.13, 1.13, 0.7)
}

pub const PINKSE_N0: f64 = 0.9;
pub const HOOD_N0: f64 = 0.32;

/// Position of the friction maximum expected for `fig7`, where
/// `g(x)^2 = -omega_a kappa`.
pub fn fig7_trap_point() -> f64 {
    let p = preset("fig7").expect("fig7 is registered").params;
    (-p.omega_a * p.kappa / (p.g0 * p.g0)).sqrt().acos() * p.lambda / (2.0 * std::f64::consts::PI)
}

fn position_scan(name: &str, params: SystemParams, n0: f64, quantities: Vec<Quantity>) -> ScanConfig {
    ScanConfig {
        name: name.to_string(),
        params,
        drive: DriveSpec::PhotonNumber(n0),
        axis: ScanAxis::Position,
        drive_axis: DriveAxis::default(),
        grid: Axis::new(0.0, 0.25, 51),
        x: 0.0,
        quantities,
        state_variant: StateVariant::Polarized2,
        f_variant: FVariant::V1,
        alpha_d: AlphaDChoice::State,
        cavity_regime: SaturationRegime::High,
        n_max: None,
    }
}

/// Looks a preset up by name.
pub fn preset(name: &str) -> Result<ScanConfig> {
    use Quantity::*;
    let photons = || vec![States, Transmission, Exact];
    let diffusion = || vec![Rates, Diffusion, ExactKinetics];
    let friction = || vec![Rates, Friction, ExactKinetics];
    let both = || vec![Rates, Diffusion, Friction, Temperature, ExactKinetics];
    let fig6 = SystemParams::new(0.187, 0.094, 6.0, 1.0 / 6.0);
    let cfg = match name {
        "fig1" => ScanConfig {
            axis: ScanAxis::AtomicDetuning,
            grid: Axis::new(-3.0, 3.0, 61),
            quantities: vec![Transmission, Excited, Bistability, Exact],
            ..position_scan(name, SystemParams::new(0.02, 0.6, 1.0, 0.1), 0.37, vec![])
        },
        "fig2a" => position_scan(name, pinkse(), PINKSE_N0, photons()),
        "fig2b" | "hood" => position_scan("fig2b", hood(), HOOD_N0, photons()),
        "fig3a" => ScanConfig {
            axis: ScanAxis::Drive,
            drive_axis: DriveAxis::SqrtPhotonNumber,
            grid: Axis::new(0.1, 4.0, 40),
            params: SystemParams::new(0.02, 0.33, 0.166, 0.166).with_profile(CouplingProfile::Uniform),
            quantities: vec![Transmission, Bistability, Exact],
            ..position_scan(name, SystemParams::new(0.0, 0.0, 0.0, 0.0), 0.0, vec![])
        },
        "fig3b" => position_scan(name, fig6, 2.63, photons()),
        "fig4a" => position_scan(name, hood(), HOOD_N0, diffusion()),
        "fig4b" => position_scan(name, pinkse(), PINKSE_N0, diffusion()),
        "fig5a" => ScanConfig {
            f_variant: FVariant::V2Nu,
            ..position_scan(name, pinkse(), PINKSE_N0, friction())
        },
        "fig5b" => position_scan(name, hood(), HOOD_N0, friction()),
        "fig6a" => ScanConfig {
            state_variant: StateVariant::Polarized1,
            f_variant: FVariant::V3Nu,
            cavity_regime: SaturationRegime::Low,
            ..position_scan(name, SystemParams::new(0.0236, 0.13, 6.0, 1.0 / 6.0), 2.16, both())
        },
        "fig6b" => ScanConfig {
            state_variant: StateVariant::Polarized1,
            f_variant: FVariant::V2Nu,
            cavity_regime: SaturationRegime::Low,
            ..position_scan(name, fig6, 2.63, both())
        },
        "fig7" => ScanConfig {
            state_variant: StateVariant::Bounced2,
            f_variant: FVariant::V3Nu,
            cavity_regime: SaturationRegime::Low,
            grid: Axis::new(0.0, 0.25, 41),
            ..position_scan(name, SystemParams::new(0.18, 0.09, -5.0, 0.0), 11.0, both())
        },
        _ => return Err(Error::PresetNotFound(name.to_string())),
    };
    Ok(cfg)
}
