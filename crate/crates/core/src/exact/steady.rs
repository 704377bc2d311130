//! Steady state of the Liouvillian and linear solves on the traceless
//! subspace.
//!
//! The Liouvillian is singular: its null space is spanned by the steady
//! state and its range is the traceless subspace. One sparse LU of `L` with
//! the row of the `(0, 0)` element replaced by the trace functional serves
//! both problems. With right-hand side `e_0` it yields the normalized
//! steady state; with a traceless right-hand side whose first entry is
//! zeroed it yields the traceless solution of `L X = B`.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use num_complex::Complex64;

use super::basis::{scaled, trace, trace_product, unvectorize, vectorize, FockBasis, Operator};
use super::liouvillian::{build_liouvillian, Superoperator};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Hard ceiling on the photon cutoff.
pub const MAX_CUTOFF: usize = 64;

const REFINEMENT_STEPS: usize = 4;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `L` together with the LU factors of its row-replaced form.
pub struct FactorizedLiouvillian {
    l: Superoperator,
    replaced: Superoperator,
    lu: Lu<usize, Complex64>,
}

impl std::fmt::Debug for FactorizedLiouvillian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorizedLiouvillian")
            .field("operator_dim", &self.l.operator_dim())
            .field("nnz", &self.l.nnz())
            .finish()
    }
}

impl FactorizedLiouvillian {
    pub fn new(l: Superoperator) -> Result<Self> {
        let d = l.operator_dim();
        let mut entries: Vec<(usize, usize, Complex64)> =
            l.entries().iter().copied().filter(|e| e.0 != 0).collect();
        entries.extend((0..d).map(|k| (0, k * (d + 1), Complex64::new(1.0, 0.0))));
        let replaced = Superoperator::from_unsorted(d, entries);
        let triplets: Vec<Triplet<usize, usize, Complex64>> = replaced
            .entries()
            .iter()
            .map(|&(r, c, v)| Triplet::new(r, c, v))
            .collect();
        let n = l.size();
        let sparse = SparseColMat::<usize, Complex64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::InvalidParams(format!("sparse assembly failed: {e:?}")))?;
        let lu = sparse.sp_lu().map_err(|_| Error::IllConditioned {
            context: "Liouvillian factorization",
            residual: f64::INFINITY,
        })?;
        Ok(Self { l, replaced, lu })
    }

    pub fn liouvillian(&self) -> &Superoperator {
        &self.l
    }

    pub fn operator_dim(&self) -> usize {
        self.l.operator_dim()
    }

    fn lu_solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        let x = self.lu.solve(&b);
        (0..rhs.len()).map(|i| x[(i, 0)]).collect()
    }

    /// Solves the row-replaced system with iterative refinement.
    fn solve_replaced(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut x = self.lu_solve(rhs);
        let mut best = f64::INFINITY;
        for _ in 0..REFINEMENT_STEPS {
            let ax = self.replaced.apply(&x);
            let r: Vec<Complex64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let rn = norm(&r);
            if !(rn < 0.5 * best) || rn == 0.0 {
                break;
            }
            best = rn;
            let dx = self.lu_solve(&r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        x
    }

    /// Normalized, Hermitian steady state and `||L vec(rho)||`.
    pub fn steady_state(&self) -> (Operator, f64) {
        let d = self.operator_dim();
        let mut rhs = vec![Complex64::new(0.0, 0.0); d * d];
        rhs[0] = Complex64::new(1.0, 0.0);
        let rho = unvectorize(&self.solve_replaced(&rhs), d);
        let mut rho = scaled(&(&rho + rho.adjoint()), Complex64::new(0.5, 0.0));
        let tr = trace(&rho);
        rho = scaled(&rho, Complex64::new(1.0, 0.0) / tr);
        let residual = norm(&self.l.apply(&vectorize(&rho)));
        (rho, residual)
    }

    /// Solves `L X = rhs` for traceless `X`, given a traceless right-hand side.
    ///
    /// The right-hand side is first projected on the traceless subspace. The
    /// solution is made traceless by removing its component along `rho_s`,
    /// which leaves `L X` unchanged.
    pub fn solve_traceless(&self, rhs: &Operator, rho_s: &Operator, context: &'static str) -> Result<Operator> {
        let d = self.operator_dim();
        let shift = trace(rhs) / d as f64;
        let mut b = vectorize(rhs);
        for k in 0..d {
            b[k * (d + 1)] -= shift;
        }
        let target = b.clone();
        b[0] = Complex64::new(0.0, 0.0);
        let mut x = unvectorize(&self.solve_replaced(&b), d);
        let tr = trace(&x);
        x = &x - scaled(rho_s, tr);
        let lx = self.l.apply(&vectorize(&x));
        let r: Vec<Complex64> = lx.iter().zip(&target).map(|(a, t)| a - t).collect();
        let residual = norm(&r) / norm(&target).max(f64::MIN_POSITIVE);
        if !(residual < 1e-8) && norm(&target) > 1e-300 {
            return Err(Error::IllConditioned { context, residual });
        }
        Ok(x)
    }
}

/// How the photon cutoff is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffPolicy {
    /// Start from the heuristic seed and double until converged, never
    /// exceeding `cap`.
    Adaptive { cap: usize },
    /// Solve once at the given cutoff.
    Fixed(usize),
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy::Adaptive { cap: MAX_CUTOFF }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateOptions {
    pub policy: CutoffPolicy,
    /// Bound on the population of the two highest Fock levels.
    pub tail_tolerance: f64,
    /// Bound on the relative change of `<a^dagger a>` between cutoffs.
    pub shift_tolerance: f64,
    pub residual_tolerance: f64,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            policy: CutoffPolicy::default(),
            tail_tolerance: 1e-8,
            shift_tolerance: 1e-6,
            residual_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport {
    /// Every cutoff solved, in order.
    pub cutoff_trajectory: Vec<usize>,
    pub n_max: usize,
    pub tail_population: f64,
    pub photon_number: f64,
    /// `||L vec(rho)||`
    pub residual: f64,
    pub min_eigenvalue: f64,
    pub warnings: Vec<String>,
}

/// Converged steady state with everything needed for response solves.
#[derive(Debug)]
pub struct SteadyState {
    pub basis: FockBasis,
    pub rho: Operator,
    pub params: SystemParams,
    pub x: f64,
    pub report: SteadyStateReport,
    factorized: FactorizedLiouvillian,
}

impl SteadyState {
    pub fn factorized(&self) -> &FactorizedLiouvillian {
        &self.factorized
    }

    pub fn expect(&self, op: &Operator) -> Complex64 {
        trace_product(op, &self.rho)
    }

    /// `<a>`
    pub fn field(&self) -> Complex64 {
        self.expect(&self.basis.annihilation())
    }

    pub fn photon_number(&self) -> f64 {
        self.report.photon_number
    }

    pub fn sigma_z(&self) -> f64 {
        self.expect(&self.basis.sigma_z()).re
    }

    pub fn excited_population(&self) -> f64 {
        self.expect(&self.basis.excited()).re
    }
}

/// `Tr(op rho)` with a dimension check.
pub fn expectation(rho: &Operator, op: &Operator) -> Result<Complex64> {
    if rho.nrows() != op.nrows() || rho.ncols() != op.ncols() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            found: op.nrows(),
        });
    }
    Ok(trace_product(op, rho))
}

/// Initial cutoff `max(8, ceil(6 N0 max_x |1 + nu|^2))`. The maximum over
/// positions is attained at `g = 0` or `g = g0` because `|1 + nu|^2` is
/// convex in `g^2`.
pub fn cutoff_seed(params: &SystemParams) -> Result<usize> {
    let n0 = params.n0()?;
    let nu_max = crate::model::nu_for_coupling(params, params.max_coupling_sq().sqrt())?;
    let peak = (1.0 + nu_max).norm_sqr().max(1.0);
    let seed = (6.0 * n0 * peak).ceil();
    Ok(if seed.is_finite() { (seed as usize).max(8) } else { usize::MAX })
}

/// Steady state at a fixed cutoff.
pub fn solve_at_cutoff(params: &SystemParams, x: f64, n_max: usize) -> Result<SteadyState> {
    let basis = FockBasis::new(n_max)?;
    let factorized = FactorizedLiouvillian::new(build_liouvillian(params, x, &basis))?;
    let (rho, residual) = factorized.steady_state();
    let tail_population = trace_product(&basis.top_levels(), &rho).re;
    let photon_number = trace_product(&basis.number(), &rho).re;
    let min_eigenvalue = rho
        .self_adjoint_eigenvalues(Side::Lower)
        .map(|e| e.into_iter().fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::NAN);
    let mut warnings = Vec::new();
    if min_eigenvalue < -1e-8 {
        warnings.push(format!("positivity violated: min eigenvalue {min_eigenvalue:e}"));
    }
    Ok(SteadyState {
        basis,
        rho,
        params: *params,
        x,
        report: SteadyStateReport {
            cutoff_trajectory: vec![n_max],
            n_max,
            tail_population,
            photon_number,
            residual,
            min_eigenvalue,
            warnings,
        },
        factorized,
    })
}

/// Steady state with the cutoff chosen by `options.policy`.
pub fn steady_state(params: &SystemParams, x: f64, options: &SteadyStateOptions) -> Result<SteadyState> {
    params.validate()?;
    if !(params.kappa > 0.0) {
        return Err(Error::InvalidParams("the exact solver needs kappa > 0".into()));
    }
    let cap = match options.policy {
        CutoffPolicy::Fixed(n) => {
            let mut st = solve_at_cutoff(params, x, n)?;
            check_residual(&st, options)?;
            if st.report.tail_population >= options.tail_tolerance {
                st.report.warnings.push(format!(
                    "fixed cutoff {n}: top-level population {:e}",
                    st.report.tail_population
                ));
            }
            return Ok(st);
        }
        CutoffPolicy::Adaptive { cap } => cap.max(1),
    };

    let shift_ok = |a: f64, b: f64| (a - b).abs() <= options.shift_tolerance * b.abs().max(a.abs()) + 1e-14;
    let mut trajectory = Vec::new();
    let mut n = cutoff_seed(params)?.min(cap);
    let mut previous: Option<(usize, f64)> = None;
    loop {
        let mut current = solve_at_cutoff(params, x, n)?;
        trajectory.push(n);
        let tail_ok = current.report.tail_population < options.tail_tolerance;
        if tail_ok {
            if let Some((_, p)) = previous {
                if shift_ok(p, current.report.photon_number) {
                    check_residual(&current, options)?;
                    current.report.cutoff_trajectory = trajectory;
                    return Ok(current);
                }
            }
            if 2 * n <= cap {
                previous = Some((n, current.report.photon_number));
                n *= 2;
                continue;
            }
            // At the ceiling: confirm against a smaller cutoff instead.
            let lower = n - (n / 4).max(1);
            if lower >= 1 && previous.map(|p| p.0) != Some(lower) {
                let reference = solve_at_cutoff(params, x, lower)?;
                trajectory.push(lower);
                if shift_ok(reference.report.photon_number, current.report.photon_number) {
                    check_residual(&current, options)?;
                    current.report.cutoff_trajectory = trajectory;
                    return Ok(current);
                }
            }
            return Err(Error::NonConvergence {
                trajectory,
                reason: "photon number still shifting at the cutoff ceiling".into(),
            });
        }
        if n >= cap {
            return Err(Error::NonConvergence {
                trajectory,
                reason: format!(
                    "top-level population {:e} at the cutoff ceiling",
                    current.report.tail_population
                ),
            });
        }
        previous = Some((n, current.report.photon_number));
        n = (2 * n).min(cap);
    }
}

fn check_residual(st: &SteadyState, options: &SteadyStateOptions) -> Result<()> {
    if st.report.residual < options.residual_tolerance {
        Ok(())
    } else {
        Err(Error::IllConditioned {
            context: "steady state",
            residual: st.report.residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CouplingProfile;

    #[test]
    fn vacuum_without_drive() {
        let p = SystemParams::new(0.3, 0.2, 0.7, -0.4);
        let st = steady_state(&p, 0.0, &SteadyStateOptions::default()).unwrap();
        let g0 = st.basis.index(false, 0);
        for j in 0..st.basis.dim() {
            for i in 0..st.basis.dim() {
                let expected = if i == g0 && j == g0 { 1.0 } else { 0.0 };
                assert!((st.rho[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn uncoupled_mode_is_coherent() {
        let p = SystemParams::new(0.3, 0.2, 0.7, -0.4)
            .with_profile(CouplingProfile::Off)
            .with_photon_number(0.8);
        let st = steady_state(&p, 0.0, &SteadyStateOptions::default()).unwrap();
        let alpha0 = p.alpha0().unwrap();
        assert!((st.field() + alpha0).norm() < 1e-8);
        assert!((st.photon_number() - 0.8).abs() < 1e-8);
        assert!(st.excited_population() < 1e-8);
        assert!((trace(&st.rho).re - 1.0).abs() < 1e-12);
        assert!(st.report.cutoff_trajectory.len() >= 2);
    }

    #[test]
    fn seed_scales_with_the_dressed_amplitude() {
        let p = SystemParams::new(0.02, 0.13, 1.13, 0.7).with_photon_number(0.32);
        let nu = crate::model::nu_for_coupling(&p, 1.0).unwrap();
        let expected = ((6.0 * 0.32 * (1.0 + nu).norm_sqr()).ceil() as usize).max(8);
        assert_eq!(cutoff_seed(&p).unwrap(), expected);
        let weak = p.with_photon_number(1e-4);
        assert_eq!(cutoff_seed(&weak).unwrap(), 8);
    }

    #[test]
    fn expectation_checks_dimensions() {
        let a = FockBasis::new(2).unwrap();
        let b = FockBasis::new(3).unwrap();
        assert!(expectation(&a.identity(), &b.identity()).is_err());
        assert_eq!(expectation(&a.identity(), &a.identity()).unwrap().re, 6.0);
    }

    #[test]
    fn fixed_cutoff_reports_truncation() {
        let p = SystemParams::new(0.3, 0.2, 0.7, -0.4)
            .with_profile(CouplingProfile::Off)
            .with_photon_number(4.0);
        let opts = SteadyStateOptions {
            policy: CutoffPolicy::Fixed(3),
            ..Default::default()
        };
        let st = steady_state(&p, 0.0, &opts).unwrap();
        assert_eq!(st.report.n_max, 3);
        assert!(!st.report.warnings.is_empty());
    }

    #[test]
    fn ceiling_too_low_fails_with_trajectory() {
        let p = SystemParams::new(0.3, 0.2, 0.7, -0.4)
            .with_profile(CouplingProfile::Off)
            .with_photon_number(6.0);
        let opts = SteadyStateOptions {
            policy: CutoffPolicy::Adaptive { cap: 6 },
            ..Default::default()
        };
        match steady_state(&p, 0.0, &opts) {
            Err(Error::NonConvergence { trajectory, .. }) => assert_eq!(trajectory, vec![6]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
