//! Optical bistability: the fully factorized state equation, its standard
//! scaled form, and the bistability conditions in `(C, delta, theta)` and in
//! the complex `nu` plane.
//!
//! The state equation `alpha = alpha0 / (1 - nu / (1 + eta |alpha|^2))` with
//! `eta = 2 g^2 / |w~_a|^2` fixes the intensity `I = |alpha|^2` through the
//! real cubic
//!
//! ```text
//! I |1 + eta I - nu|^2 = N0 (1 + eta I)^2
//! ```
//!
//! and the phase through `alpha = alpha0 (1 + eta I) / (1 + eta I - nu)`.
//!
//! The standard form `x = y / {1 + i theta + 2C (1 - i delta) / (1 + delta^2 + |x|^2)}`
//! is the same equation after the rescaling `alpha = k x`,
//! `alpha0 = k y / (1 + i theta)` with `k = gamma / (sqrt(2) g)` and
//! `nu = 2C / ((delta - i)(theta - i))`.

use num_complex::Complex64;

use crate::cubic;
use crate::error::{Error, Result};
use crate::model::{CouplingProfile, SystemParams};
use crate::scan::{Cell, ScanResult};
use crate::states::{SemiclassicalState, StateVariant};

/// Two intensities closer than `MERGE_TOL (1 + I)` are one double root.
pub const MERGE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BistabilityRoot {
    /// `I = |alpha_ob|^2`
    pub intensity: f64,
    pub amplitude: Complex64,
    /// `s_ob = eta I`
    pub saturation: f64,
    /// 2 at a fold point where two branches merge, 1 otherwise.
    pub multiplicity: u8,
    /// `|alpha_ob (1 - nu / (1 + s(alpha_ob))) - alpha0|`
    pub residual: f64,
}

/// Nonnegative solutions of the state equation, ascending in intensity.
#[derive(Debug, Clone, PartialEq)]
pub struct BistabilityRoots {
    pub roots: Vec<BistabilityRoot>,
}

impl BistabilityRoots {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.intensity).collect()
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.amplitude).collect()
    }

    pub fn saturations(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.saturation).collect()
    }

    pub fn lowest(&self) -> &BistabilityRoot {
        &self.roots[0]
    }

    pub fn highest(&self) -> &BistabilityRoot {
        &self.roots[self.roots.len() - 1]
    }

    /// Wraps one root as a [`SemiclassicalState`].
    pub fn state(&self, params: &SystemParams, x: f64, index: usize) -> SemiclassicalState {
        SemiclassicalState::from_alpha(
            StateVariant::BistabilityRoot,
            params,
            x,
            self.roots[index].amplitude,
            vec![self.roots[index].saturation],
        )
    }
}

/// Coefficients `[c3, c2, c1, c0]` of the cubic in `I`.
pub fn intensity_cubic(nu: Complex64, eta: f64, n0: f64) -> [f64; 4] {
    let c = 1.0 - nu.re;
    let b = nu.im;
    [
        eta * eta,
        2.0 * c * eta - n0 * eta * eta,
        c * c + b * b - 2.0 * n0 * eta,
        -n0,
    ]
}

/// Residual of the fixed-point form for a trial amplitude.
pub fn fixed_point_residual(alpha: Complex64, alpha0: Complex64, nu: Complex64, eta: f64) -> f64 {
    let s = eta * alpha.norm_sqr();
    (alpha * (1.0 - nu / (1.0 + s)) - alpha0).norm()
}

/// All nonnegative solutions of the bistability state equation at `x`.
pub fn bistability_roots(params: &SystemParams, x: f64) -> Result<BistabilityRoots> {
    let g = params.coupling(x);
    let nu = params.nu(x)?;
    let alpha0 = params.alpha0()?;
    let eta = params.saturation_per_photon(g)?;
    Ok(roots_for(nu, alpha0, eta))
}

fn roots_for(nu: Complex64, alpha0: Complex64, eta: f64) -> BistabilityRoots {
    let n0 = alpha0.norm_sqr();
    let coeffs = intensity_cubic(nu, eta, n0);
    let amplitude = |i: f64| {
        let u = 1.0 + eta * i;
        alpha0 * u / (u - nu)
    };
    let mut candidates: Vec<f64> = cubic::real_roots(coeffs)
        .into_iter()
        .filter(|&i| i >= -1e-12 * (1.0 + n0))
        .map(|i| i.max(0.0))
        .filter(|&i| {
            // Multiplying through by |1 + eta I - nu|^2 can admit spurious
            // roots (e.g. alpha0 = 0 with a lossless nu); keep only those
            // whose amplitude reproduces the intensity.
            let a = amplitude(i);
            a.is_finite() && (a.norm_sqr() - i).abs() <= 1e-6 * (1.0 + i)
        })
        .collect();
    candidates.sort_by(f64::total_cmp);

    let mut roots: Vec<BistabilityRoot> = Vec::with_capacity(3);
    for i in candidates {
        if let Some(last) = roots.last_mut() {
            if (i - last.intensity).abs() < MERGE_TOL * (1.0 + last.intensity) {
                last.multiplicity = 2;
                continue;
            }
        }
        let a = amplitude(i);
        roots.push(BistabilityRoot {
            intensity: i,
            amplitude: a,
            saturation: eta * i,
            multiplicity: 1,
            residual: fixed_point_residual(a, alpha0, nu, eta),
        });
    }
    assert!(
        !roots.is_empty(),
        "state equation without a nonnegative root (nu = {nu}, eta = {eta}, N0 = {n0})"
    );
    BistabilityRoots { roots }
}

/// The standard scaled state equation in `(C, delta, theta, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledForm {
    pub c: f64,
    pub delta: f64,
    pub theta: f64,
    pub y: Complex64,
}

/// One solution `x` of the scaled equation with `X = |x|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledRoot {
    pub x: Complex64,
    pub intensity: f64,
}

impl ScaledForm {
    pub fn new(c: f64, delta: f64, theta: f64, y: Complex64) -> Self {
        Self { c, delta, theta, y }
    }

    /// `nu = 2C / ((delta - i)(theta - i))`.
    pub fn nu(&self) -> Complex64 {
        let i = Complex64::i();
        2.0 * self.c / ((self.delta - i) * (self.theta - i))
    }

    /// Amplitude scale `k` with `alpha = k x` for the system returned by
    /// [`ScaledForm::to_params`] (`gamma = kappa = 1`, so `k = 1 / (2 sqrt C)`).
    pub fn amplitude_scale(&self) -> f64 {
        0.5 / self.c.sqrt()
    }

    /// A system with `gamma = kappa = 1`, `omega_a = delta`,
    /// `omega_c = theta`, `g = sqrt(2C)` everywhere and
    /// `E = -i k y`, whose state equation is this scaled equation.
    pub fn to_params(&self) -> SystemParams {
        SystemParams::new(1.0, 1.0, self.delta, self.theta)
            .with_g0((2.0 * self.c).sqrt())
            .with_profile(CouplingProfile::Uniform)
            .with_drive(-Complex64::i() * self.amplitude_scale() * self.y)
    }

    fn denominator(&self, intensity: f64) -> Complex64 {
        let i = Complex64::i();
        1.0 + i * self.theta
            + 2.0 * self.c * (1.0 - i * self.delta) / (1.0 + self.delta * self.delta + intensity)
    }

    /// Solves the scaled equation directly: with `u = 1 + delta^2 + X`,
    /// `X [(u + 2C)^2 + (theta u - 2C delta)^2] = |y|^2 u^2`.
    pub fn roots(&self) -> Vec<ScaledRoot> {
        let a = 1.0 + self.delta * self.delta;
        let p = a + 2.0 * self.c;
        let q = self.theta * a - 2.0 * self.c * self.delta;
        let y2 = self.y.norm_sqr();
        let coeffs = [
            1.0 + self.theta * self.theta,
            2.0 * (p + self.theta * q) - y2,
            p * p + q * q - 2.0 * a * y2,
            -a * a * y2,
        ];
        let mut out: Vec<ScaledRoot> = Vec::new();
        for xi in cubic::real_roots(coeffs) {
            if xi < -1e-12 * (1.0 + y2) {
                continue;
            }
            let xi = xi.max(0.0);
            let x = self.y / self.denominator(xi);
            if (x.norm_sqr() - xi).abs() > 1e-6 * (1.0 + xi) {
                continue;
            }
            if let Some(last) = out.last() {
                if (xi - last.intensity).abs() < MERGE_TOL * (1.0 + last.intensity) {
                    continue;
                }
            }
            out.push(ScaledRoot { x, intensity: xi });
        }
        out
    }

    /// Largest relative mismatch between the scaled roots (rescaled by `k`)
    /// and the roots of [`bistability_roots`] for [`ScaledForm::to_params`].
    /// Infinite when the root counts differ.
    pub fn bijection_error(&self) -> Result<f64> {
        let scaled = self.roots();
        let direct = bistability_roots(&self.to_params(), 0.0)?;
        if scaled.len() != direct.len() {
            return Ok(f64::INFINITY);
        }
        let k = self.amplitude_scale();
        Ok(scaled
            .iter()
            .zip(&direct.roots)
            .map(|(s, d)| (k * s.x - d.amplitude).norm() / (d.amplitude.norm() + 1e-300))
            .fold(0.0, f64::max))
    }
}

/// Standard bistability conditions
/// `4 (delta theta + C - 1)^3 >= 27 C (delta^2 + 1)(theta^2 + 1)` and
/// `2C >= delta theta - 1`.
pub fn bistability_condition_standard(c: f64, delta: f64, theta: f64) -> (bool, bool) {
    let lhs = 4.0 * (delta * theta + c - 1.0).powi(3);
    let rhs = 27.0 * c * (delta * delta + 1.0) * (theta * theta + 1.0);
    (lhs >= rhs, 2.0 * c >= delta * theta - 1.0)
}

/// The same conditions in the `nu` plane:
/// `(|nu|^2 + 2 Re nu)^3 >= 27 |nu|^4` and `|nu|^2 >= Re nu`.
pub fn bistability_condition_nu(nu: Complex64) -> (bool, bool) {
    let m2 = nu.norm_sqr();
    ((m2 + 2.0 * nu.re).powi(3) >= 27.0 * m2 * m2, m2 >= nu.re)
}

/// Locates the sign change of the first `nu`-plane condition on the real
/// axis between `lo` and `hi` by bisection.
pub fn real_axis_threshold(lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let inside = |v: f64| bistability_condition_nu(Complex64::new(v, 0.0)).0;
    let (mut a, mut b) = (lo, hi);
    let fa = inside(a);
    if fa == inside(b) {
        return None;
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if inside(m) == fa {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Evenly spaced samples of an interval; a single point sits at `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|k| self.min + (self.max - self.min) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Grids accepted by [`region_scan`].
#[derive(Debug, Clone, PartialEq)]
pub enum RegionGrid {
    /// Rectangle in the complex `nu` plane.
    NuPlane { re: Axis, im: Axis },
    /// Slice of the `(C, delta, theta)` space.
    Standard { c: Axis, delta: Axis, theta: Axis },
}

/// Evaluates both conditions and their conjunction on every grid point.
pub fn region_scan(grid: &RegionGrid) -> ScanResult {
    let flag = |b: bool| Cell::Value(if b { 1.0 } else { 0.0 });
    match grid {
        RegionGrid::NuPlane { re, im } => {
            let mut rows = Vec::new();
            for r in re.values() {
                for i in im.values() {
                    let (c1, c2) = bistability_condition_nu(Complex64::new(r, i));
                    rows.push(vec![Cell::Value(r), Cell::Value(i), flag(c1), flag(c2), flag(c1 && c2)]);
                }
            }
            ScanResult::new(
                "bistab-region",
                ["nu_re", "nu_im", "cond_cubic", "cond_linear", "bistable"],
                rows,
            )
        }
        RegionGrid::Standard { c, delta, theta } => {
            let mut rows = Vec::new();
            for cv in c.values() {
                for d in delta.values() {
                    for t in theta.values() {
                        let (c1, c2) = bistability_condition_standard(cv, d, t);
                        rows.push(vec![
                            Cell::Value(cv),
                            Cell::Value(d),
                            Cell::Value(t),
                            flag(c1),
                            flag(c2),
                            flag(c1 && c2),
                        ]);
                    }
                }
            }
            ScanResult::new(
                "bistab-region",
                ["c", "delta", "theta", "cond_cubic", "cond_linear", "bistable"],
                rows,
            )
        }
    }
}

/// Number of nonnegative roots of the scaled equation for each `y` of a real sweep.
pub fn branch_counts(c: f64, delta: f64, theta: f64, ys: &[f64]) -> Vec<usize> {
    ys.iter()
        .map(|&y| ScaledForm::new(c, delta, theta, Complex64::new(y, 0.0)).roots().len())
        .collect()
}

impl From<&BistabilityRoot> for Complex64 {
    fn from(r: &BistabilityRoot) -> Self {
        r.amplitude
    }
}

/// Fails when `C <= 0`, where the scaled form is undefined.
pub fn scaled_form_roots(c: f64, delta: f64, theta: f64, y: Complex64) -> Result<Vec<ScaledRoot>> {
    if !(c > 0.0) {
        return Err(Error::InvalidParams("cooperativity must be > 0".into()));
    }
    Ok(ScaledForm::new(c, delta, theta, y).roots())
}
