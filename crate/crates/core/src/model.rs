//! Physical parameters of the driven atom-cavity system and the complex
//! quantities derived from them.
//!
//! Frequencies are expressed in units of the peak coupling `g0` and
//! positions in units of the wavelength. Detunings are taken with respect
//! to the probe frequency (`omega_a = omega_atom - omega_probe`,
//! `omega_c = omega_cav - omega_probe`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spatial dependence of the atom-mode coupling along the cavity axis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CouplingProfile {
    /// `g(x) = g0 cos(2 pi x / lambda)`.
    #[default]
    Cosine,
    /// `g(x) = g0` at every position (zero gradient).
    Uniform,
    /// `g(x) = 0`: the atom is decoupled from the mode.
    Off,
}

impl CouplingProfile {
    pub fn name(&self) -> &'static str {
        match self {
            CouplingProfile::Cosine => "cosine",
            CouplingProfile::Uniform => "uniform",
            CouplingProfile::Off => "off",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cosine" => Some(CouplingProfile::Cosine),
            "uniform" => Some(CouplingProfile::Uniform),
            "off" => Some(CouplingProfile::Off),
            _ => None,
        }
    }
}

/// Complex atomic and cavity rates `w~_a = omega_a - i gamma` and
/// `w~_c = omega_c - i kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRates {
    pub wat: Complex64,
    pub wct: Complex64,
}

/// One scenario: rates, detunings, coupling profile and drive.
///
/// The drive is stored as the complex amplitude `E`. Use
/// [`SystemParams::with_photon_number`] to specify it through the
/// empty-cavity photon number `N0 = |E / w~_c|^2`, in which case `E` is
/// taken real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub gamma: f64,
    pub kappa: f64,
    pub omega_a: f64,
    pub omega_c: f64,
    pub g0: f64,
    pub lambda: f64,
    pub drive: Complex64,
    pub profile: CouplingProfile,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            kappa: 0.0,
            omega_a: 0.0,
            omega_c: 0.0,
            g0: 1.0,
            lambda: 1.0,
            drive: Complex64::new(0.0, 0.0),
            profile: CouplingProfile::Cosine,
        }
    }
}

impl SystemParams {
    /// Parameters with `g0 = 1`, `lambda = 1`, cosine profile and zero drive.
    pub fn new(gamma: f64, kappa: f64, omega_a: f64, omega_c: f64) -> Self {
        Self {
            gamma,
            kappa,
            omega_a,
            omega_c,
            ..Self::default()
        }
    }

    pub fn with_drive(mut self, drive: Complex64) -> Self {
        self.drive = drive;
        self
    }

    /// Sets `E = sqrt(N0) |w~_c|`, real and positive.
    pub fn with_photon_number(mut self, n0: f64) -> Self {
        self.drive = Complex64::new(n0.max(0.0).sqrt() * self.rates().wct.norm(), 0.0);
        self
    }

    pub fn with_g0(mut self, g0: f64) -> Self {
        self.g0 = g0;
        self
    }

    pub fn with_profile(mut self, profile: CouplingProfile) -> Self {
        self.profile = profile;
        self
    }

    /// Checks the sign constraints on rates, coupling and wavelength.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.gamma,
            self.kappa,
            self.omega_a,
            self.omega_c,
            self.g0,
            self.lambda,
            self.drive.re,
            self.drive.im,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.gamma < 0.0 || self.kappa < 0.0 {
            return Err(Error::InvalidParams("decay rates must be >= 0".into()));
        }
        if self.g0 <= 0.0 {
            return Err(Error::InvalidParams("g0 must be > 0".into()));
        }
        if self.lambda <= 0.0 {
            return Err(Error::InvalidParams("lambda must be > 0".into()));
        }
        Ok(())
    }

    pub fn rates(&self) -> ComplexRates {
        ComplexRates {
            wat: Complex64::new(self.omega_a, -self.gamma),
            wct: Complex64::new(self.omega_c, -self.kappa),
        }
    }

    /// Coupling `g(x)`.
    pub fn coupling(&self, x: f64) -> f64 {
        match self.profile {
            CouplingProfile::Cosine => self.g0 * (2.0 * PI * x / self.lambda).cos(),
            CouplingProfile::Uniform => self.g0,
            CouplingProfile::Off => 0.0,
        }
    }

    /// Spatial derivative `dg/dx`.
    pub fn coupling_gradient(&self, x: f64) -> f64 {
        match self.profile {
            CouplingProfile::Cosine => {
                let k = 2.0 * PI / self.lambda;
                -self.g0 * k * (k * x).sin()
            }
            CouplingProfile::Uniform | CouplingProfile::Off => 0.0,
        }
    }

    /// Largest value of `g(x)^2` over all positions.
    pub fn max_coupling_sq(&self) -> f64 {
        match self.profile {
            CouplingProfile::Off => 0.0,
            _ => self.g0 * self.g0,
        }
    }

    /// Structure parameter `nu = g^2 / (w~_a w~_c)` at position `x`.
    pub fn nu(&self, x: f64) -> Result<Complex64> {
        nu_for_coupling(self, self.coupling(x))
    }

    /// Empty-cavity amplitude `alpha0 = E / w~_c`.
    pub fn alpha0(&self) -> Result<Complex64> {
        let wct = self.rates().wct;
        if wct == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularRates("w~_c"));
        }
        Ok(self.drive / wct)
    }

    /// Empty-cavity photon number `N0 = |alpha0|^2`.
    pub fn n0(&self) -> Result<f64> {
        Ok(self.alpha0()?.norm_sqr())
    }

    /// Saturation per unit intensity, `eta = 2 g^2 / |w~_a|^2`.
    pub fn saturation_per_photon(&self, g: f64) -> Result<f64> {
        let wat2 = self.rates().wat.norm_sqr();
        if wat2 == 0.0 {
            return Err(Error::SingularRates("w~_a"));
        }
        Ok(2.0 * g * g / wat2)
    }

    /// Cooperativity `C = g^2 / (2 kappa gamma)` with scaled detunings.
    pub fn cooperativity(&self, x: f64) -> Result<Cooperativity> {
        let kg = self.kappa * self.gamma;
        if kg == 0.0 {
            return Err(Error::DivisionByZero("cooperativity (kappa * gamma = 0)"));
        }
        let g = self.coupling(x);
        Ok(Cooperativity {
            c: g * g / (2.0 * kg),
            delta: self.omega_a / self.gamma,
            theta: self.omega_c / self.kappa,
        })
    }

    /// Detuning of the lowest dressed state from the probe,
    /// `(omega_a + omega_c)/2 - sqrt(4 g^2 + (omega_a - omega_c)^2)/2`.
    pub fn dressed_resonance_mismatch(&self, x: f64) -> f64 {
        let g = self.coupling(x);
        let d = self.omega_a - self.omega_c;
        0.5 * (self.omega_a + self.omega_c) - 0.5 * (4.0 * g * g + d * d).sqrt()
    }
}

/// `nu` for an explicitly supplied coupling value.
pub fn nu_for_coupling(params: &SystemParams, g: f64) -> Result<Complex64> {
    let ComplexRates { wat, wct } = params.rates();
    let zero = Complex64::new(0.0, 0.0);
    if wat == zero {
        return Err(Error::SingularRates("w~_a"));
    }
    if wct == zero {
        return Err(Error::SingularRates("w~_c"));
    }
    Ok(Complex64::new(g * g, 0.0) / (wat * wct))
}

/// Bonifacio-Lugiato cooperativity with the scaled detunings
/// `delta = omega_a / gamma` and `theta = omega_c / kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cooperativity {
    pub c: f64,
    pub delta: f64,
    pub theta: f64,
}

impl Cooperativity {
    /// `nu = 2C / ((delta - i)(theta - i))`.
    pub fn nu(&self) -> Complex64 {
        let i = Complex64::i();
        Complex64::new(2.0 * self.c, 0.0) / ((self.delta - i) * (self.theta - i))
    }
}
