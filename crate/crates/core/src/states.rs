//! Factorized ("ping-pong") steady states.
//!
//! Every state is a coherent field `<a> = -alpha` times the optical Bloch
//! steady state of an atom driven by that field. The bounced states feed the
//! saturation of a referred state back into `nu`; the polarized states add
//! the polarization of a referred state to the empty-cavity amplitude.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Default distance to the bounced pole `|1 - nu_ref| = 0` below which a
/// state is reported singular.
pub const DEFAULT_POLE_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateVariant {
    Bounced1,
    Bounced2,
    Bounced3,
    Polarized1,
    Polarized2,
    Polarized3,
    BistabilityRoot,
}

impl StateVariant {
    /// The six ping-pong constructions, in a fixed order.
    pub const PING_PONG: [StateVariant; 6] = [
        StateVariant::Bounced1,
        StateVariant::Bounced2,
        StateVariant::Bounced3,
        StateVariant::Polarized1,
        StateVariant::Polarized2,
        StateVariant::Polarized3,
    ];

    /// Short tag used in config files and CSV column names.
    pub fn tag(&self) -> &'static str {
        match self {
            StateVariant::Bounced1 => "b1",
            StateVariant::Bounced2 => "b2",
            StateVariant::Bounced3 => "b3",
            StateVariant::Polarized1 => "p1",
            StateVariant::Polarized2 => "p2",
            StateVariant::Polarized3 => "p3",
            StateVariant::BistabilityRoot => "ob",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [Self::PING_PONG.as_slice(), &[StateVariant::BistabilityRoot]]
            .concat()
            .into_iter()
            .find(|v| v.tag() == tag)
    }

    /// Builds the state at `x`. Not available for [`StateVariant::BistabilityRoot`],
    /// which has up to three solutions; see [`crate::bistability`].
    pub fn build(self, params: &SystemParams, x: f64, pole_guard: f64) -> Result<SemiclassicalState> {
        let ladder = Ladder::new(params, x, pole_guard)?;
        match self {
            StateVariant::Bounced1 => ladder.bounced1(),
            StateVariant::Bounced2 => ladder.bounced2(),
            StateVariant::Bounced3 => ladder.bounced3(),
            StateVariant::Polarized1 => Ok(ladder.polarized1()),
            StateVariant::Polarized2 => ladder.polarized2(),
            StateVariant::Polarized3 => ladder.polarized3(),
            StateVariant::BistabilityRoot => Err(Error::InvalidParams(
                "bistability roots are built by bistability::bistability_roots".into(),
            )),
        }
    }
}

/// A factorized steady state `rho_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalState {
    pub variant: StateVariant,
    pub x: f64,
    /// Local coupling `g(x)` the state was built with.
    pub g: f64,
    /// Field amplitude, `<a> = -alpha`.
    pub alpha: Complex64,
    /// Atomic amplitude `g alpha / w~_a`.
    pub beta: Complex64,
    /// Saturation `2 |beta|^2`.
    pub s: f64,
    /// Saturations of the referred states, innermost first.
    pub referred_saturations: Vec<f64>,
}

impl SemiclassicalState {
    pub fn from_alpha(
        variant: StateVariant,
        params: &SystemParams,
        x: f64,
        alpha: Complex64,
        referred_saturations: Vec<f64>,
    ) -> Self {
        let g = params.coupling(x);
        let beta = g * alpha / params.rates().wat;
        Self {
            variant,
            x,
            g,
            alpha,
            beta,
            s: 2.0 * beta.norm_sqr(),
            referred_saturations,
        }
    }

    pub fn photon_number(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn moments(&self, params: &SystemParams) -> BlochMoments {
        bloch_moments(self, params)
    }
}

/// Expectation values in `rho_alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMoments {
    pub photon_number: f64,
    pub sigma_z: f64,
    pub sigma: Complex64,
    pub excited_population: f64,
    /// `<F_d>`; the mean force is `-grad(g) <F_d>`.
    pub dipole_force_expectation: f64,
}

pub fn bloch_moments(state: &SemiclassicalState, params: &SystemParams) -> BlochMoments {
    let s = state.s;
    let n = state.alpha.norm_sqr();
    let (wa, ga) = (params.omega_a, params.gamma);
    let lorentz = if wa == 0.0 { 0.0 } else { wa / (wa * wa + ga * ga) };
    BlochMoments {
        photon_number: n,
        sigma_z: -1.0 / (1.0 + s),
        sigma: state.beta / (1.0 + s),
        excited_population: 0.5 * s / (1.0 + s),
        dipole_force_expectation: -2.0 * state.g * lorentz * n / (1.0 + s),
    }
}

/// Residuals of the field equation `<dc/dt>` and of `<d(a sigma_z)/dt>`
/// evaluated in `rho_alpha`. Both vanish when `rho_alpha` is an exact
/// steady state of the full Liouvillian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateResidual {
    pub field: Complex64,
    pub correlation: Complex64,
}

pub fn state_residual(state: &SemiclassicalState, params: &SystemParams) -> Result<StateResidual> {
    let wct = params.rates().wct;
    let alpha0 = params.alpha0()?;
    let m = bloch_moments(state, params);
    let pol = state.g * m.sigma / wct;
    let minus_i_wct = -Complex64::i() * wct;
    let shift = alpha0 - state.alpha;
    Ok(StateResidual {
        field: minus_i_wct * (shift + pol),
        correlation: minus_i_wct * (m.sigma_z * shift - pol),
    })
}

/// Local ingredients shared by all constructions at one position.
struct Ladder<'a> {
    params: &'a SystemParams,
    x: f64,
    nu: Complex64,
    alpha0: Complex64,
    /// `2 g^2 / |w~_a|^2`
    eta: f64,
    guard: f64,
}

impl<'a> Ladder<'a> {
    fn new(params: &'a SystemParams, x: f64, guard: f64) -> Result<Self> {
        let g = params.coupling(x);
        Ok(Self {
            params,
            x,
            nu: params.nu(x)?,
            alpha0: params.alpha0()?,
            eta: params.saturation_per_photon(g)?,
            guard,
        })
    }

    fn state(&self, variant: StateVariant, alpha: Complex64, refs: Vec<f64>) -> SemiclassicalState {
        SemiclassicalState::from_alpha(variant, self.params, self.x, alpha, refs)
    }

    /// `alpha0 / (1 - nu_ref)` with the pole guard.
    fn bounce(&self, variant: StateVariant, nu_ref: Complex64) -> Result<Complex64> {
        let distance = (1.0 - nu_ref).norm();
        if distance <= self.guard {
            return Err(Error::SingularState {
                variant: variant.tag(),
                distance,
            });
        }
        Ok(self.alpha0 / (1.0 - nu_ref))
    }

    fn saturation(&self, alpha: Complex64) -> f64 {
        self.eta * alpha.norm_sqr()
    }

    fn bounced1(&self) -> Result<SemiclassicalState> {
        let alpha = self.bounce(StateVariant::Bounced1, self.nu)?;
        Ok(self.state(StateVariant::Bounced1, alpha, Vec::new()))
    }

    /// `(alpha_2b, s_1b, nu_1b)`
    fn bounced2_parts(&self) -> Result<(Complex64, f64, Complex64)> {
        let alpha_1b = self.bounce(StateVariant::Bounced2, self.nu)?;
        let s_1b = self.saturation(alpha_1b);
        let nu_1b = self.nu / (1.0 + s_1b);
        let alpha_2b = self.bounce(StateVariant::Bounced2, nu_1b)?;
        Ok((alpha_2b, s_1b, nu_1b))
    }

    fn bounced2(&self) -> Result<SemiclassicalState> {
        let (alpha, s_1b, _) = self.bounced2_parts()?;
        Ok(self.state(StateVariant::Bounced2, alpha, vec![s_1b]))
    }

    fn polarized1(&self) -> SemiclassicalState {
        self.state(StateVariant::Polarized1, self.alpha0 * (1.0 + self.nu), Vec::new())
    }

    fn polarized2(&self) -> Result<SemiclassicalState> {
        let (alpha_2b, s_1b, nu_1b) = self.bounced2_parts()?;
        let s_2b = self.saturation(alpha_2b);
        let nu_2b = self.nu / (1.0 + s_2b);
        let alpha = alpha_2b * (1.0 + (nu_2b - nu_1b));
        Ok(self.state(StateVariant::Polarized2, alpha, vec![s_1b, s_2b]))
    }

    /// `(alpha_3b, s_1p, nu_1p)`
    fn bounced3_parts(&self, variant: StateVariant) -> Result<(Complex64, f64, Complex64)> {
        let s_1p = self.saturation(self.alpha0 * (1.0 + self.nu));
        let nu_1p = self.nu / (1.0 + s_1p);
        Ok((self.bounce(variant, nu_1p)?, s_1p, nu_1p))
    }

    fn bounced3(&self) -> Result<SemiclassicalState> {
        let (alpha, s_1p, _) = self.bounced3_parts(StateVariant::Bounced3)?;
        Ok(self.state(StateVariant::Bounced3, alpha, vec![s_1p]))
    }

    fn polarized3(&self) -> Result<SemiclassicalState> {
        let (alpha_3b, s_1p, nu_1p) = self.bounced3_parts(StateVariant::Polarized3)?;
        let s_3b = self.saturation(alpha_3b);
        let nu_3b = self.nu / (1.0 + s_3b);
        let alpha = alpha_3b * (1.0 + (nu_3b - nu_1p));
        Ok(self.state(StateVariant::Polarized3, alpha, vec![s_1p, s_3b]))
    }
}

/// First bounced state `alpha0 / (1 - nu)`.
pub fn bounced1(params: &SystemParams, x: f64) -> Result<SemiclassicalState> {
    StateVariant::Bounced1.build(params, x, DEFAULT_POLE_GUARD)
}

/// Second bounced state `alpha0 / (1 - nu_1b)`, `nu_1b = nu / (1 + s_1b)`.
pub fn bounced2(params: &SystemParams, x: f64) -> Result<SemiclassicalState> {
    StateVariant::Bounced2.build(params, x, DEFAULT_POLE_GUARD)
}

/// Third bounced state, referred to the saturation of the first polarized state.
pub fn bounced3(params: &SystemParams, x: f64) -> Result<SemiclassicalState> {
    StateVariant::Bounced3.build(params, x, DEFAULT_POLE_GUARD)
}

/// First polarized state `alpha0 (1 + nu)`.
pub fn polarized1(params: &SystemParams, x: f64) -> Result<SemiclassicalState> {
    StateVariant::Polarized1.build(params, x, DEFAULT_POLE_GUARD)
}

/// Second polarized state `alpha_2b (1 + nu_2b - nu_1b)`.
pub fn polarized2(params: &SystemParams, x: f64) -> Result<SemiclassicalState> {
    StateVariant::Polarized2.build(params, x, DEFAULT_POLE_GUARD)
}

/// Third polarized state `alpha_3b (1 + nu_3b - nu_1p)`.
pub fn polarized3(params: &SystemParams, x: f64) -> Result<SemiclassicalState> {
    StateVariant::Polarized3.build(params, x, DEFAULT_POLE_GUARD)
}
