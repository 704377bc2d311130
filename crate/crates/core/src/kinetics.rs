//! Semiclassical diffusion and friction coefficients.
//!
//! Every coefficient here is the scalar that multiplies the gradient
//! factors: the diffusion tensor is `(grad g)_i (grad g)_j D` and the
//! velocity-dependent force is `-(v . grad g) grad g G`. Positive `G` damps
//! the motion (cooling); negative `G` heats.
//!
//! Two reduced pictures are used. Eliminating the mode gives a two-level
//! atom with modified frequency `W_A` and decay `Gamma_A`; eliminating the
//! atom gives a damped mode with modified frequency `W_C` and decay `K_c`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::states::{SemiclassicalState, DEFAULT_POLE_GUARD};

/// Two-level atom dressed by the eliminated mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAtomRates {
    /// Local coupling the rates were evaluated at.
    pub g: f64,
    pub w_a: f64,
    pub gamma_a: f64,
    /// `g alpha0 / (W_A - i Gamma_A)`
    pub beta_h: Complex64,
    /// `2 |beta_h|^2`
    pub s_h: f64,
}

impl ScaledAtomRates {
    pub fn complex_frequency(&self) -> Complex64 {
        Complex64::new(self.w_a, -self.gamma_a)
    }
}

/// `W_A = omega_a - omega_c g^2 / (omega_c^2 + kappa^2) / (1 + s)`,
/// `Gamma_A = gamma + kappa g^2 / (omega_c^2 + kappa^2) / (1 + s)`.
pub fn scaled_atom_rates(params: &SystemParams, x: f64, s: f64) -> Result<ScaledAtomRates> {
    let g = params.coupling(x);
    let den = params.omega_c * params.omega_c + params.kappa * params.kappa;
    if den == 0.0 {
        return Err(Error::SingularRates("w~_c"));
    }
    let reaction = g * g / den / (1.0 + s);
    let w_a = params.omega_a - params.omega_c * reaction;
    let gamma_a = params.gamma + params.kappa * reaction;
    let wt = Complex64::new(w_a, -gamma_a);
    if wt.norm_sqr() == 0.0 {
        return Err(Error::SingularRates("W_A - i Gamma_A"));
    }
    let beta_h = g * params.alpha0()? / wt;
    Ok(ScaledAtomRates {
        g,
        w_a,
        gamma_a,
        beta_h,
        s_h: 2.0 * beta_h.norm_sqr(),
    })
}

/// Damped mode dressed by the eliminated atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledModeRates {
    pub w_c: f64,
    pub k_c: f64,
}

/// `W_C = omega_c - omega_a g^2 / (omega_a^2 + gamma^2) / (1 + s)`,
/// `K_c = kappa + gamma g^2 / (omega_a^2 + gamma^2) / (1 + s)`.
pub fn scaled_mode_rates(params: &SystemParams, x: f64, s: f64) -> Result<ScaledModeRates> {
    let g = params.coupling(x);
    let den = params.omega_a * params.omega_a + params.gamma * params.gamma;
    if den == 0.0 {
        return Err(Error::SingularRates("w~_a"));
    }
    let reaction = g * g / den / (1.0 + s);
    Ok(ScaledModeRates {
        w_c: params.omega_c - params.omega_a * reaction,
        k_c: params.kappa + params.gamma * reaction,
    })
}

/// Closures for `Re(g d_g beta / beta)` inside
/// `F(s, nu) = 1 - s/(1+s) Re(g d_g beta / beta)`.
///
/// The `*Nu` variants keep the `nu` dependence; their plain counterparts
/// are the smoothed limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FVariant {
    /// Pure standing wave: the ratio is 1, so `F = 1/(1+s)`.
    #[default]
    V1,
    /// `1 + Re(nu)/(1+s)`.
    V2Nu,
    /// `nu -> 1` limit of `V2Nu`: `F = 1/(1+s)^2`.
    V2,
    /// `Re(1 + 2 nu_a / (1 - nu_a))` with `nu_a = nu/(1+s)`.
    V3Nu,
    /// `1 - 2/(1+s)`.
    V3,
    /// Self-consistent: `Re(1 + 2 nu_a F / (1 - nu_a))` with the same `F`.
    V4,
}

impl FVariant {
    pub const ALL: [FVariant; 6] = [
        FVariant::V1,
        FVariant::V2Nu,
        FVariant::V2,
        FVariant::V3Nu,
        FVariant::V3,
        FVariant::V4,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            FVariant::V1 => "v1",
            FVariant::V2Nu => "v2nu",
            FVariant::V2 => "v2",
            FVariant::V3Nu => "v3nu",
            FVariant::V3 => "v3",
            FVariant::V4 => "v4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.tag() == tag)
    }
}

fn bounced_ratio(nu: Complex64, s: f64, variant: FVariant) -> Result<Complex64> {
    let nu_a = nu / (1.0 + s);
    let distance = (1.0 - nu_a).norm();
    if distance <= DEFAULT_POLE_GUARD {
        return Err(Error::SingularState {
            variant: variant.tag(),
            distance,
        });
    }
    Ok(2.0 * nu_a / (1.0 - nu_a))
}

/// `F(s, nu)` for the chosen closure.
pub fn f_function(s: f64, nu: Complex64, variant: FVariant) -> Result<f64> {
    let w = s / (1.0 + s);
    let ratio = match variant {
        FVariant::V1 => 1.0,
        FVariant::V2Nu => 1.0 + nu.re / (1.0 + s),
        FVariant::V2 => 1.0 + 1.0 / (1.0 + s),
        FVariant::V3Nu => 1.0 + bounced_ratio(nu, s, variant)?.re,
        FVariant::V3 => 1.0 - 2.0 / (1.0 + s),
        FVariant::V4 => {
            // F (1 + s + s Re r) = 1 with r = 2 nu_a / (1 - nu_a)
            let r = bounced_ratio(nu, s, variant)?;
            let den = 1.0 + s + s * r.re;
            if den.abs() < 1e-15 {
                return Err(Error::DivisionByZero("self-consistent F"));
            }
            return Ok(1.0 / den);
        }
    };
    Ok(1.0 - w * ratio)
}

/// Sensitivities `xi = -d_g W`, `zeta = d_g K` of the reduced pictures,
/// including the saturation factor `F / (1 + s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionSensitivities {
    pub xi_a: f64,
    pub zeta_a: f64,
    pub xi_c: f64,
    pub zeta_c: f64,
    pub f_value: f64,
    pub variant: FVariant,
}

pub fn friction_sensitivities(
    params: &SystemParams,
    x: f64,
    s: f64,
    variant: FVariant,
) -> Result<FrictionSensitivities> {
    let g = params.coupling(x);
    let f = f_function(s, params.nu(x)?, variant)?;
    let scale = 2.0 * g * f / (1.0 + s);
    let cav = params.omega_c * params.omega_c + params.kappa * params.kappa;
    let atom = params.omega_a * params.omega_a + params.gamma * params.gamma;
    Ok(FrictionSensitivities {
        xi_a: scale * params.omega_c / cav,
        zeta_a: scale * params.kappa / cav,
        xi_c: scale * params.omega_a / atom,
        zeta_c: scale * params.gamma / atom,
        f_value: f,
        variant,
    })
}

/// Amplitude defining the dipole force in the atomic picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaDChoice {
    /// The field amplitude of the supplied state.
    #[default]
    State,
    /// The empty-cavity amplitude.
    Alpha0,
}

impl AlphaDChoice {
    pub fn tag(&self) -> &'static str {
        match self {
            AlphaDChoice::State => "alpha",
            AlphaDChoice::Alpha0 => "alpha0",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "alpha" => Some(AlphaDChoice::State),
            "alpha0" => Some(AlphaDChoice::Alpha0),
            _ => None,
        }
    }

    pub fn resolve(&self, params: &SystemParams, state: &SemiclassicalState) -> Result<Complex64> {
        match self {
            AlphaDChoice::State => Ok(state.alpha),
            AlphaDChoice::Alpha0 => params.alpha0(),
        }
    }
}

/// Atomic-picture diffusion split into the free-space-like part and the
/// correction that appears when the driving and force amplitudes differ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicDiffusion {
    pub d_at: f64,
    pub d_0: Complex64,
}

impl AtomicDiffusion {
    /// `D = D_at + Re D_0`.
    pub fn total(&self) -> f64 {
        self.d_at + self.d_0.re
    }
}

/// Gordon-Ashkin type diffusion of a two-level atom with frequency `w`,
/// decay `gamma`, saturation `s` and force amplitude `alpha_d`.
fn gordon_ashkin(w: f64, gamma: f64, alpha_d: Complex64, s: f64) -> f64 {
    let m = w * w + gamma * gamma;
    let poly = 1.0 + (4.0 * gamma * gamma / m - 1.0) * s + 3.0 * s * s + m / (gamma * gamma) * s.powi(3);
    gamma / m * alpha_d.norm_sqr() / (1.0 + s).powi(3) * poly
}

/// Diffusion of the mode-eliminated atom driven by `alpha_h`, with the
/// force defined through `alpha_d`.
pub fn diffusion_atomic(
    rates: &ScaledAtomRates,
    alpha_h: Complex64,
    alpha_d: Complex64,
    s_h: f64,
) -> AtomicDiffusion {
    let (w, gm) = (rates.w_a, rates.gamma_a);
    let m = w * w + gm * gm;
    let d_at = gordon_ashkin(w, gm, alpha_d, s_h);
    let delta = alpha_h * alpha_h * (alpha_d.conj() * alpha_d.conj())
        - alpha_h.norm_sqr() * alpha_d.norm_sqr();
    let wt = Complex64::new(w, -gm);
    let bracket = 1.0 + 4.0 * gm * gm / (wt * wt) + 2.0 * s_h * w / wt;
    let d_0 = (1.0 / gm) * (rates.g * rates.g / m) * delta / (1.0 + s_h)
        * (1.0 - bracket / (1.0 + s_h).powi(2));
    AtomicDiffusion { d_at, d_0 }
}

/// Free-space diffusion of an atom in a standing wave of amplitude
/// `<a>`, with the bare `(omega_a, gamma)` and the state's saturation.
pub fn diffusion_free(params: &SystemParams, state: &SemiclassicalState) -> f64 {
    gordon_ashkin(params.omega_a, params.gamma, state.alpha, state.s)
}

/// `D_field = |beta|^2 K_c / (W_C^2 + K_c^2)`.
pub fn diffusion_field(beta: Complex64, rates: &ScaledModeRates) -> f64 {
    beta.norm_sqr() * rates.k_c / (rates.w_c * rates.w_c + rates.k_c * rates.k_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SaturationRegime {
    #[default]
    High,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CavityDiffusionOptions {
    pub regime: SaturationRegime,
    /// Adds the free-space-like term `gamma / |w~_a|^2 |alpha|^2 / (1 + s)`.
    pub include_free_term: bool,
}

/// Cooperative diffusion of the coupled atom-mode system, proportional to
/// `Im nu`. Negative where `Im nu < 0`; not clamped.
pub fn diffusion_cavity(
    params: &SystemParams,
    x: f64,
    state: &SemiclassicalState,
    options: CavityDiffusionOptions,
) -> Result<f64> {
    let nu = params.nu(x)?;
    let n0 = params.n0()?;
    if n0 == 0.0 {
        return Err(Error::DivisionByZero("D_cav with N0 = 0"));
    }
    let atom = params.omega_a * params.omega_a + params.gamma * params.gamma;
    let n = state.alpha.norm_sqr();
    let s = state.s;
    let mut n_eff = n;
    if options.regime == SaturationRegime::Low {
        n_eff /= 1.0 + s;
    }
    let mut d = 4.0 * params.omega_a / atom * n_eff * (n / n0) * nu.im / (1.0 + s);
    if options.include_free_term {
        d += params.gamma / atom * n / (1.0 + s);
    }
    Ok(d)
}

/// Spontaneous-emission diffusion: `prefactor` times the excited-state
/// population `(s/2)/(1+s)`.
pub fn diffusion_spontaneous(state: &SemiclassicalState, prefactor: f64) -> f64 {
    prefactor * 0.5 * state.s / (1.0 + state.s)
}

/// Friction of the atom-eliminated mode.
///
/// With `zero_zeta` the loss sensitivity `zeta_c` is dropped, which is
/// usually a good approximation.
pub fn friction_field(
    params: &SystemParams,
    x: f64,
    state: &SemiclassicalState,
    rates: &ScaledModeRates,
    variant: FVariant,
    zero_zeta: bool,
) -> Result<f64> {
    let sens = friction_sensitivities(params, x, state.s, variant)?;
    let zeta = if zero_zeta { 0.0 } else { sens.zeta_c };
    Ok(field_friction_formula(
        state.alpha.norm_sqr(),
        rates.w_c,
        rates.k_c,
        sens.xi_c,
        zeta,
    ))
}

fn field_friction_formula(n: f64, w: f64, k: f64, xi: f64, zeta: f64) -> f64 {
    let m = w * w + k * k;
    4.0 * n * xi / m * (k * w / m * xi + 0.5 * (w * w - k * k) / m * zeta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicFrictionOptions {
    /// Evaluate the coefficient functions at the state's `s` instead of `s_h`.
    pub s_h_equals_s: bool,
    /// Drop `zeta_a`.
    pub zero_zeta: bool,
}

impl Default for AtomicFrictionOptions {
    fn default() -> Self {
        Self {
            s_h_equals_s: true,
            zero_zeta: false,
        }
    }
}

/// Atomic friction and its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicFriction {
    pub g_free: f64,
    pub g_1: f64,
    pub g_2: f64,
    pub g_1zeta: f64,
    pub g_2zeta: f64,
    pub xi_a: f64,
    pub zeta_a: f64,
    /// Saturation the five functions were evaluated at.
    pub s_h: f64,
}

impl AtomicFriction {
    /// Contribution of the mode reaction: `xi G_1 + xi^2 G_2 + zeta (G_1z + xi G_2z)`.
    pub fn translational(&self) -> f64 {
        self.xi_a * self.g_1
            + self.xi_a * self.xi_a * self.g_2
            + self.zeta_a * (self.g_1zeta + self.xi_a * self.g_2zeta)
    }

    pub fn total(&self) -> f64 {
        self.g_free + self.translational()
    }
}

/// The five coefficient functions at saturation `s_h`, with
/// `n0 = |alpha0|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionCoefficients {
    pub g_free: f64,
    pub g_1: f64,
    pub g_2: f64,
    pub g_1zeta: f64,
    pub g_2zeta: f64,
}

pub fn friction_coefficients(w: f64, gm: f64, g: f64, n0: f64, s_h: f64) -> FrictionCoefficients {
    let m = w * w + gm * gm;
    let r = gm * gm / m;
    let cube = (1.0 + s_h).powi(3);
    let amp = 2.0 * n0 / cube / m;
    let sat = s_h / cube / m;
    FrictionCoefficients {
        g_free: amp * (w / gm) * (-s_h * s_h + 2.0 * (1.0 - s_h) * r),
        g_1: amp * (g / gm) * (-s_h * s_h + 0.5 * s_h + (4.0 - 3.0 * s_h) * r - 4.0 * r * r),
        g_2: sat * (w / gm) * (0.5 * s_h + 2.0 * r),
        g_1zeta: amp * (g * w / m) * (1.0 - 4.0 * r),
        g_2zeta: sat * (1.0 + 0.5 * s_h - 2.0 * r),
    }
}

/// Friction of the mode-eliminated atom.
pub fn friction_atomic(
    params: &SystemParams,
    x: f64,
    state: &SemiclassicalState,
    rates: &ScaledAtomRates,
    variant: FVariant,
    options: AtomicFrictionOptions,
) -> Result<AtomicFriction> {
    if !(rates.gamma_a > 0.0) {
        return Err(Error::InvalidParams("Gamma_A must be > 0".into()));
    }
    let sens = friction_sensitivities(params, x, state.s, variant)?;
    let s_h = if options.s_h_equals_s { state.s } else { rates.s_h };
    let c = friction_coefficients(rates.w_a, rates.gamma_a, rates.g, params.n0()?, s_h);
    Ok(AtomicFriction {
        g_free: c.g_free,
        g_1: c.g_1,
        g_2: c.g_2,
        g_1zeta: c.g_1zeta,
        g_2zeta: c.g_2zeta,
        xi_a: sens.xi_a,
        zeta_a: if options.zero_zeta { 0.0 } else { sens.zeta_a },
        s_h,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperature {
    /// `D / G`
    pub value: f64,
    /// Set when `G < 0`: the motion is amplified rather than damped.
    pub heating: bool,
}

pub fn temperature(d: f64, g: f64) -> Result<Temperature> {
    if !(g.abs() >= 1e-15) {
        return Err(Error::DivisionByZero("temperature with G = 0"));
    }
    Ok(Temperature {
        value: d / g,
        heating: g < 0.0,
    })
}
