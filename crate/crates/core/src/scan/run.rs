//! Evaluation of a [`ScanConfig`] over its grid.
//!
//! Grid points run concurrently on a rayon pool and are collected in grid
//! order, so the output does not depend on the thread count. A failure at
//! one point fills the affected cells with `SINGULAR`, records a tag in
//! the row status and leaves the rest of the scan untouched.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{Quantity, ScanConfig};
use super::result::{Cell, ScanResult, STATUS_OK};
use crate::bistability::bistability_roots;
use crate::error::{Error, Result};
use crate::exact::{exact_diffusion, exact_friction, friction_sign, steady_state, SteadyState};
use crate::kinetics::{
    diffusion_atomic, diffusion_cavity, diffusion_field, diffusion_free, friction_atomic, friction_field,
    scaled_atom_rates, scaled_mode_rates, temperature, AtomicFrictionOptions,
};
use crate::model::SystemParams;
use crate::states::{state_residual, SemiclassicalState, StateVariant, DEFAULT_POLE_GUARD};

/// Environment variable capping the number of worker threads (`0` = all cores).
pub const THREADS_ENV: &str = "CAVITY_PINGPONG_THREADS";

/// `T = |<a>|^2 / N0`, so the empty cavity reads 1.
pub fn transmission(field: Complex64, params: &SystemParams) -> Result<f64> {
    let n0 = params.n0()?;
    if !(n0 > 0.0) {
        return Err(Error::DivisionByZero("transmission with N0 = 0"));
    }
    Ok(field.norm_sqr() / n0)
}

/// Thread cap read from [`THREADS_ENV`]; `0` when unset.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("{THREADS_ENV} must be a nonnegative integer, found `{v}`"))),
    }
}

/// Column names in output order, the abscissa and `g` first.
pub fn columns(cfg: &ScanConfig) -> Vec<String> {
    let mut cols = vec![cfg.axis.tag().to_string(), "g".to_string()];
    let per_state = |cols: &mut Vec<String>, suffix: &str| {
        cols.extend(StateVariant::PING_PONG.iter().map(|v| format!("{}_{suffix}", v.tag())));
    };
    for q in &cfg.quantities {
        match q {
            Quantity::States => per_state(&mut cols, "photons"),
            Quantity::Transmission => per_state(&mut cols, "transmission"),
            Quantity::Excited => per_state(&mut cols, "excited"),
            Quantity::Residuals => cols.extend(["residual_field", "residual_correlation"].map(String::from)),
            Quantity::Bistability => cols.extend(
                [
                    "ob_roots",
                    "ob_low_photons",
                    "ob_high_photons",
                    "ob_low_transmission",
                    "ob_high_transmission",
                    "ob_low_excited",
                    "ob_high_excited",
                ]
                .map(String::from),
            ),
            Quantity::Exact => cols.extend(
                ["exact_photons", "exact_transmission", "exact_excited", "exact_residual"].map(String::from),
            ),
            Quantity::Rates => cols.extend(["saturation", "w_a", "gamma_a", "w_c", "k_c"].map(String::from)),
            Quantity::Diffusion => cols.extend(
                [
                    "d_at_alpha",
                    "d_at_alpha0",
                    "d_0",
                    "d_atomic",
                    "d_field",
                    "d_field_at",
                    "d_cav",
                    "d_free",
                ]
                .map(String::from),
            ),
            Quantity::Friction => cols.extend(
                ["g_field", "g_free", "g_translational", "g_at", "g_field_at"].map(String::from),
            ),
            Quantity::Temperature => cols.push("temperature".to_string()),
            Quantity::ExactKinetics => {
                cols.extend(["exact_d", "exact_g", "exact_temperature"].map(String::from))
            }
        }
    }
    if cfg.needs_exact() {
        cols.push("n_max".to_string());
    }
    cols
}

/// Cells of one row and the failures met while filling them.
struct RowBuilder {
    cells: Vec<Cell>,
    failures: Vec<String>,
}

impl RowBuilder {
    fn fail(&mut self, e: &Error, what: &str) {
        let tag = format!("{}:{what}", e.tag());
        if !self.failures.contains(&tag) {
            self.failures.push(tag);
        }
    }

    fn push(&mut self, v: Result<f64>, what: &str) {
        match v {
            Ok(v) => self.cells.push(Cell::Value(v)),
            Err(e) => {
                self.fail(&e, what);
                self.cells.push(Cell::Singular);
            }
        }
    }

    /// Pushes `n` cells computed together.
    fn push_all<const N: usize>(&mut self, v: Result<[f64; N]>, what: &str) {
        match v {
            Ok(vs) => self.cells.extend(vs.map(Cell::Value)),
            Err(e) => {
                self.fail(&e, what);
                self.cells.extend([Cell::Singular; N]);
            }
        }
    }

    fn status(&self) -> String {
        if self.failures.is_empty() {
            STATUS_OK.to_string()
        } else {
            self.failures.join(";")
        }
    }
}

/// Per-point cache: each state and the exact steady state are built once.
struct Point<'a> {
    cfg: &'a ScanConfig,
    params: SystemParams,
    x: f64,
    states: Vec<Result<SemiclassicalState>>,
    exact: Option<Result<SteadyState>>,
}

impl<'a> Point<'a> {
    fn new(cfg: &'a ScanConfig, v: f64) -> Self {
        let (params, x) = cfg.point(v);
        let states = StateVariant::PING_PONG
            .iter()
            .map(|s| s.build(&params, x, DEFAULT_POLE_GUARD))
            .collect();
        let exact = cfg
            .needs_exact()
            .then(|| steady_state(&params, x, &cfg.steady_state_options()));
        Self {
            cfg,
            params,
            x,
            states,
            exact,
        }
    }

    fn state(&self, variant: StateVariant) -> Result<&SemiclassicalState> {
        let k = StateVariant::PING_PONG
            .iter()
            .position(|v| *v == variant)
            .ok_or_else(|| Error::InvalidParams(format!("no ping-pong state `{}`", variant.tag())))?;
        self.states[k].as_ref().map_err(Clone::clone)
    }

    fn selected(&self) -> Result<&SemiclassicalState> {
        self.state(self.cfg.state_variant)
    }

    fn exact(&self) -> Result<&SteadyState> {
        match &self.exact {
            Some(r) => r.as_ref().map_err(Clone::clone),
            None => Err(Error::InvalidParams("exact state not requested".into())),
        }
    }

    fn diffusion(&self) -> Result<[f64; 8]> {
        let (p, x) = (&self.params, self.x);
        let st = self.selected()?;
        let ar = scaled_atom_rates(p, x, st.s)?;
        let mr = scaled_mode_rates(p, x, st.s)?;
        let alpha0 = p.alpha0()?;
        let alpha_d = self.cfg.alpha_d.resolve(p, st)?;
        let with_state = diffusion_atomic(&ar, alpha0, st.alpha, st.s).d_at;
        let with_alpha0 = diffusion_atomic(&ar, alpha0, alpha0, st.s).d_at;
        let chosen = diffusion_atomic(&ar, alpha0, alpha_d, st.s);
        let d_field = diffusion_field(st.beta, &mr);
        Ok([
            with_state,
            with_alpha0,
            chosen.d_0.re,
            chosen.total(),
            d_field,
            d_field + chosen.d_at,
            diffusion_cavity(p, x, st, self.cfg.cavity_options())?,
            diffusion_free(p, st),
        ])
    }

    fn friction(&self) -> Result<[f64; 5]> {
        let (p, x, f) = (&self.params, self.x, self.cfg.f_variant);
        let st = self.selected()?;
        let ar = scaled_atom_rates(p, x, st.s)?;
        let mr = scaled_mode_rates(p, x, st.s)?;
        let g_field = friction_field(p, x, st, &mr, f, true)?;
        let at = friction_atomic(p, x, st, &ar, f, AtomicFrictionOptions::default())?;
        Ok([g_field, at.g_free, at.translational(), at.total(), g_field + at.total()])
    }

    fn temperature(&self) -> Result<f64> {
        let [_, _, _, _, _, d_field_at, _, _] = self.diffusion()?;
        let [_, _, _, _, g_field_at] = self.friction()?;
        Ok(temperature(d_field_at, g_field_at)?.value)
    }

    fn row(&self, v: f64) -> RowBuilder {
        let mut row = RowBuilder {
            cells: vec![Cell::Value(v), Cell::Value(self.params.coupling(self.x))],
            failures: Vec::new(),
        };
        let p = &self.params;
        for q in &self.cfg.quantities {
            match q {
                Quantity::States | Quantity::Transmission | Quantity::Excited => {
                    for variant in StateVariant::PING_PONG {
                        let st = self.state(variant);
                        let value = st.and_then(|s| match q {
                            Quantity::States => Ok(s.photon_number()),
                            Quantity::Transmission => transmission(s.alpha, p),
                            _ => Ok(s.moments(p).excited_population),
                        });
                        row.push(value, variant.tag());
                    }
                }
                Quantity::Residuals => {
                    let r = self
                        .selected()
                        .and_then(|s| state_residual(s, p))
                        .map(|r| [r.field.norm(), r.correlation.norm()]);
                    row.push_all(r, "residual");
                }
                Quantity::Bistability => {
                    let r = bistability_roots(p, self.x).and_then(|roots| {
                        let lo = roots.lowest();
                        let hi = roots.highest();
                        let excited = |i: usize| roots.state(p, self.x, i).moments(p).excited_population;
                        Ok([
                            roots.len() as f64,
                            lo.intensity,
                            hi.intensity,
                            transmission(lo.amplitude, p)?,
                            transmission(hi.amplitude, p)?,
                            excited(0),
                            excited(roots.len() - 1),
                        ])
                    });
                    row.push_all(r, "ob");
                }
                Quantity::Exact => {
                    let r = self.exact().and_then(|st| {
                        Ok([
                            st.photon_number(),
                            transmission(st.field(), p)?,
                            st.excited_population(),
                            st.report.residual,
                        ])
                    });
                    row.push_all(r, "exact");
                }
                Quantity::Rates => {
                    let r = self.selected().and_then(|st| {
                        let ar = scaled_atom_rates(p, self.x, st.s)?;
                        let mr = scaled_mode_rates(p, self.x, st.s)?;
                        Ok([st.s, ar.w_a, ar.gamma_a, mr.w_c, mr.k_c])
                    });
                    row.push_all(r, "rates");
                }
                Quantity::Diffusion => row.push_all(self.diffusion(), "diffusion"),
                Quantity::Friction => row.push_all(self.friction(), "friction"),
                Quantity::Temperature => row.push(self.temperature(), "temperature"),
                Quantity::ExactKinetics => {
                    let r = self.exact().and_then(|st| {
                        let d = exact_diffusion(st)?;
                        let g = exact_friction(st)?;
                        Ok([d, g, temperature(d, g).map_or(f64::NAN, |t| t.value)])
                    });
                    row.push_all(r, "exact_kinetics");
                }
            }
        }
        if self.cfg.needs_exact() {
            let n = self.exact().map(|st| st.report.n_max as f64);
            row.push(n, "exact");
        }
        row
    }
}

/// Runs the scan with the thread cap from [`THREADS_ENV`].
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    run_scan_with_threads(cfg, threads_from_env()?)
}

/// Runs the scan on at most `threads` workers (`0` = all cores).
pub fn run_scan_with_threads(cfg: &ScanConfig, threads: usize) -> Result<ScanResult> {
    cfg.validate()?;
    // Grid points are the unit of parallelism; keep the dense kernels serial.
    faer::set_global_parallelism(faer::Par::Seq);
    if cfg.quantities.contains(&Quantity::ExactKinetics) {
        friction_sign()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let grid = cfg.grid.values();
    let rows: Vec<RowBuilder> = pool.install(|| grid.par_iter().map(|&v| Point::new(cfg, v).row(v)).collect());

    let mut result = ScanResult::new(&cfg.name, columns(cfg), Vec::with_capacity(rows.len()));
    result.config_hash = cfg.hash();
    for row in rows {
        result.status.push(row.status());
        result.rows.push(row.cells);
    }
    Ok(result)
}

/// True when some row met a failure of the exact solver.
pub fn has_numerical_failure(result: &ScanResult) -> bool {
    result
        .status
        .iter()
        .any(|s| s.split(';').any(|t| t.starts_with("nonconvergence") || t.starts_with("ill_conditioned")))
}
