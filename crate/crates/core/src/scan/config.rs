//! Scan configuration and its `key = value` text form.
//!
//! ```text
//! # Hood antinode, exact kinetics only
//! preset = fig2b
//! grid_points = 11
//! quantities = exact, exact_kinetics
//! ```
//!
//! A `preset` line (anywhere in the file) seeds every field; the other keys
//! override it. Without a preset the physical keys `gamma`, `kappa`,
//! `omega_a`, `omega_c` and one of `n0`/`drive` are required.

use std::fmt::Write as _;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::presets::preset;
use crate::bistability::Axis;
use crate::error::{Error, Result};
use crate::exact::{CutoffPolicy, SteadyStateOptions, MAX_CUTOFF};
use crate::kinetics::{AlphaDChoice, CavityDiffusionOptions, FVariant, SaturationRegime};
use crate::model::{CouplingProfile, SystemParams};
use crate::states::StateVariant;

/// Abscissa of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    /// Axial atom position in wavelengths.
    Position,
    /// Atomic detuning `omega_a`, at fixed `N0`.
    AtomicDetuning,
    /// Drive strength, read through [`DriveAxis`].
    Drive,
}

impl ScanAxis {
    /// Column name of the abscissa.
    pub fn tag(&self) -> &'static str {
        match self {
            ScanAxis::Position => "x",
            ScanAxis::AtomicDetuning => "omega_a",
            ScanAxis::Drive => "drive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "x" | "position" => Some(ScanAxis::Position),
            "omega_a" | "atomic_detuning" => Some(ScanAxis::AtomicDetuning),
            "drive" | "drive_strength" => Some(ScanAxis::Drive),
            _ => None,
        }
    }
}

/// Meaning of the abscissa of a drive scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriveAxis {
    /// The real drive amplitude `E`.
    Amplitude,
    /// The empty-cavity photon number `N0`.
    #[default]
    PhotonNumber,
    /// `sqrt(N0)`, the empty-cavity field amplitude.
    SqrtPhotonNumber,
}

impl DriveAxis {
    pub fn tag(&self) -> &'static str {
        match self {
            DriveAxis::Amplitude => "e",
            DriveAxis::PhotonNumber => "n0",
            DriveAxis::SqrtPhotonNumber => "sqrt_n0",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "e" | "amplitude" => Some(DriveAxis::Amplitude),
            "n0" => Some(DriveAxis::PhotonNumber),
            "sqrt_n0" => Some(DriveAxis::SqrtPhotonNumber),
            _ => None,
        }
    }
}

/// How the drive is fixed when it is not the scanned variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveSpec {
    /// Empty-cavity photon number; `E` is recomputed from the current `w~_c`.
    PhotonNumber(f64),
    Amplitude(Complex64),
}

/// Groups of output columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// `<tag>_photons` for the six ping-pong states.
    States,
    /// `<tag>_transmission` for the six ping-pong states.
    Transmission,
    /// `<tag>_excited` for the six ping-pong states.
    Excited,
    /// Field and correlation residuals of the selected state.
    Residuals,
    /// Root count and the lowest/highest bistability branches.
    Bistability,
    /// Exact photon number, transmission, excited population and cutoff.
    Exact,
    /// Scaled atomic and mode rates from the selected state's saturation.
    Rates,
    /// Diffusion coefficients of the selected state.
    Diffusion,
    /// Friction coefficients of the selected state.
    Friction,
    /// Semiclassical temperature `(D_field + D_at) / (G_field + G_at)`.
    Temperature,
    /// Exact diffusion, friction and their ratio.
    ExactKinetics,
}

impl Quantity {
    pub const ALL: [Quantity; 11] = [
        Quantity::States,
        Quantity::Transmission,
        Quantity::Excited,
        Quantity::Residuals,
        Quantity::Bistability,
        Quantity::Exact,
        Quantity::Rates,
        Quantity::Diffusion,
        Quantity::Friction,
        Quantity::Temperature,
        Quantity::ExactKinetics,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Quantity::States => "states",
            Quantity::Transmission => "transmission",
            Quantity::Excited => "excited",
            Quantity::Residuals => "residuals",
            Quantity::Bistability => "bistability",
            Quantity::Exact => "exact",
            Quantity::Rates => "rates",
            Quantity::Diffusion => "diffusion",
            Quantity::Friction => "friction",
            Quantity::Temperature => "temperature",
            Quantity::ExactKinetics => "exact_kinetics",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.tag() == s)
    }

    /// True when the quantity needs the exact steady state.
    pub fn needs_exact(&self) -> bool {
        matches!(self, Quantity::Exact | Quantity::ExactKinetics)
    }
}

/// Everything needed to run one scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Preset name, or `custom`.
    pub name: String,
    /// Rates and coupling; the drive is set from [`ScanConfig::drive`].
    pub params: SystemParams,
    pub drive: DriveSpec,
    pub axis: ScanAxis,
    pub drive_axis: DriveAxis,
    pub grid: Axis,
    /// Atom position for scans whose abscissa is not the position.
    pub x: f64,
    pub quantities: Vec<Quantity>,
    /// State feeding the rates, diffusion and friction.
    pub state_variant: StateVariant,
    pub f_variant: FVariant,
    pub alpha_d: AlphaDChoice,
    pub cavity_regime: SaturationRegime,
    /// Fixed photon cutoff; adaptive when `None`.
    pub n_max: Option<usize>,
}

impl ScanConfig {
    /// Parameters at one abscissa value, with the drive applied.
    pub fn point(&self, v: f64) -> (SystemParams, f64) {
        let mut p = self.params;
        let mut drive = self.drive;
        let mut x = self.x;
        match self.axis {
            ScanAxis::Position => x = v,
            ScanAxis::AtomicDetuning => p.omega_a = v,
            ScanAxis::Drive => {
                drive = match self.drive_axis {
                    DriveAxis::Amplitude => DriveSpec::Amplitude(Complex64::new(v, 0.0)),
                    DriveAxis::PhotonNumber => DriveSpec::PhotonNumber(v),
                    DriveAxis::SqrtPhotonNumber => DriveSpec::PhotonNumber(v * v),
                }
            }
        }
        let p = match drive {
            DriveSpec::PhotonNumber(n0) => p.with_photon_number(n0),
            DriveSpec::Amplitude(e) => p.with_drive(e),
        };
        (p, x)
    }

    pub fn steady_state_options(&self) -> SteadyStateOptions {
        SteadyStateOptions {
            policy: match self.n_max {
                Some(n) => CutoffPolicy::Fixed(n),
                None => CutoffPolicy::Adaptive { cap: MAX_CUTOFF },
            },
            ..SteadyStateOptions::default()
        }
    }

    pub fn cavity_options(&self) -> CavityDiffusionOptions {
        CavityDiffusionOptions {
            regime: self.cavity_regime,
            include_free_term: false,
        }
    }

    pub fn needs_exact(&self) -> bool {
        self.quantities.iter().any(Quantity::needs_exact)
    }

    pub fn validate(&self) -> Result<()> {
        let (p, _) = self.point(self.grid.min);
        p.validate()?;
        if let Some(n) = self.n_max {
            if !(1..=MAX_CUTOFF).contains(&n) {
                return Err(Error::InvalidParams(format!("n_max must be in 1..={MAX_CUTOFF}")));
            }
        }
        if self.state_variant == StateVariant::BistabilityRoot {
            return Err(Error::InvalidParams(
                "state_variant must be one of b1 b2 b3 p1 p2 p3".into(),
            ));
        }
        if !(self.grid.min.is_finite() && self.grid.max.is_finite()) {
            return Err(Error::InvalidParams("grid bounds must be finite".into()));
        }
        Ok(())
    }

    /// Canonical text form: every field, fixed order, shortest round-trip
    /// numbers. Parsing it gives back the same configuration.
    pub fn canonical(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("name", self.name.clone());
        line("gamma", format!("{:e}", p.gamma));
        line("kappa", format!("{:e}", p.kappa));
        line("omega_a", format!("{:e}", p.omega_a));
        line("omega_c", format!("{:e}", p.omega_c));
        line("g0", format!("{:e}", p.g0));
        line("lambda", format!("{:e}", p.lambda));
        line("profile", p.profile.name().to_string());
        match self.drive {
            DriveSpec::PhotonNumber(n0) => line("n0", format!("{n0:e}")),
            DriveSpec::Amplitude(e) => {
                line("drive", format!("{:e}", e.re));
                line("drive_im", format!("{:e}", e.im));
            }
        }
        line("scan", self.axis.tag().to_string());
        line("drive_axis", self.drive_axis.tag().to_string());
        line("grid_min", format!("{:e}", self.grid.min));
        line("grid_max", format!("{:e}", self.grid.max));
        line("grid_points", self.grid.points.to_string());
        line("x", format!("{:e}", self.x));
        line(
            "quantities",
            self.quantities.iter().map(Quantity::tag).collect::<Vec<_>>().join(","),
        );
        line("state_variant", self.state_variant.tag().to_string());
        line("f_variant", self.f_variant.tag().to_string());
        line("alpha_d_choice", self.alpha_d.tag().to_string());
        line(
            "cavity_regime",
            match self.cavity_regime {
                SaturationRegime::High => "high",
                SaturationRegime::Low => "low",
            }
            .to_string(),
        );
        line("n_max", self.n_max.map_or_else(|| "auto".to_string(), |n| n.to_string()));
        out
    }

    /// First 12 hex digits of the SHA-256 of [`ScanConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(6).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Parses the `key = value` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            entries.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }

        let mut cfg = match entries.iter().find(|(_, k, _)| k == "preset") {
            Some((line, _, name)) => preset(name).map_err(|e| match e {
                Error::PresetNotFound(_) => Error::ConfigParse {
                    line: *line,
                    message: e.to_string(),
                },
                other => other,
            })?,
            None => Self::blank(),
        };
        let mut seen_physics = [false; 5];
        for (line, key, value) in &entries {
            cfg.apply(key, value, &mut seen_physics)
                .map_err(|message| Error::ConfigParse { line: *line, message })?;
        }
        if cfg.name.is_empty() {
            if let Some(k) = ["gamma", "kappa", "omega_a", "omega_c", "n0 or drive"]
                .iter()
                .zip(seen_physics)
                .find_map(|(k, seen)| (!seen).then_some(k))
            {
                return Err(Error::ConfigParse {
                    line: 0,
                    message: format!("missing key `{k}` (no preset given)"),
                });
            }
            cfg.name = "custom".to_string();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Placeholder filled field by field when no preset is given.
    fn blank() -> Self {
        Self {
            name: String::new(),
            params: SystemParams::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN),
            drive: DriveSpec::PhotonNumber(f64::NAN),
            axis: ScanAxis::Position,
            drive_axis: DriveAxis::default(),
            grid: Axis::new(0.0, 0.5, 101),
            x: 0.0,
            quantities: vec![Quantity::States, Quantity::Exact],
            state_variant: StateVariant::Polarized2,
            f_variant: FVariant::V1,
            alpha_d: AlphaDChoice::State,
            cavity_regime: SaturationRegime::High,
            n_max: None,
        }
    }

    fn apply(&mut self, key: &str, value: &str, seen: &mut [bool; 5]) -> std::result::Result<(), String> {
        let num = || -> std::result::Result<f64, String> {
            value
                .parse::<f64>()
                .map_err(|_| format!("`{key}` expects a number, found `{value}`"))
        };
        let unknown = |what: &str| format!("unknown {what} `{value}`");
        match key {
            "preset" => {}
            "name" => self.name = value.to_string(),
            "gamma" => {
                self.params.gamma = num()?;
                seen[0] = true;
            }
            "kappa" => {
                self.params.kappa = num()?;
                seen[1] = true;
            }
            "omega_a" => {
                self.params.omega_a = num()?;
                seen[2] = true;
            }
            "omega_c" => {
                self.params.omega_c = num()?;
                seen[3] = true;
            }
            "g0" => self.params.g0 = num()?,
            "lambda" => self.params.lambda = num()?,
            "profile" => self.params.profile = CouplingProfile::parse(value).ok_or_else(|| unknown("profile"))?,
            "n0" => {
                self.drive = DriveSpec::PhotonNumber(num()?);
                seen[4] = true;
            }
            "drive" => {
                let im = match self.drive {
                    DriveSpec::Amplitude(e) => e.im,
                    DriveSpec::PhotonNumber(_) => 0.0,
                };
                self.drive = DriveSpec::Amplitude(Complex64::new(num()?, im));
                seen[4] = true;
            }
            "drive_im" => {
                let re = match self.drive {
                    DriveSpec::Amplitude(e) => e.re,
                    DriveSpec::PhotonNumber(_) => 0.0,
                };
                self.drive = DriveSpec::Amplitude(Complex64::new(re, num()?));
                seen[4] = true;
            }
            "scan" => self.axis = ScanAxis::parse(value).ok_or_else(|| unknown("scan axis"))?,
            "drive_axis" => self.drive_axis = DriveAxis::parse(value).ok_or_else(|| unknown("drive axis"))?,
            "grid_min" => self.grid.min = num()?,
            "grid_max" => self.grid.max = num()?,
            "grid_points" => {
                self.grid.points = value
                    .parse()
                    .map_err(|_| format!("`grid_points` expects a nonnegative integer, found `{value}`"))?
            }
            "x" => self.x = num()?,
            "quantities" => {
                let mut list = Vec::new();
                for tag in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let q = Quantity::parse(tag).ok_or_else(|| format!("unknown quantity `{tag}`"))?;
                    if !list.contains(&q) {
                        list.push(q);
                    }
                }
                self.quantities = list;
            }
            "state_variant" => {
                self.state_variant = StateVariant::from_tag(value).ok_or_else(|| unknown("state variant"))?
            }
            "f_variant" => self.f_variant = FVariant::from_tag(value).ok_or_else(|| unknown("F variant"))?,
            "alpha_d_choice" => self.alpha_d = AlphaDChoice::from_tag(value).ok_or_else(|| unknown("alpha_d choice"))?,
            "cavity_regime" => {
                self.cavity_regime = match value {
                    "high" => SaturationRegime::High,
                    "low" => SaturationRegime::Low,
                    _ => return Err(unknown("cavity regime")),
                }
            }
            "n_max" => {
                self.n_max = match value {
                    "auto" => None,
                    v => Some(v.parse().map_err(|_| format!("`n_max` expects an integer or `auto`, found `{v}`"))?),
                }
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}
