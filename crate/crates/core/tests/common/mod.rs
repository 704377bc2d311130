//! Helpers shared by the integration tests.

use num_complex::Complex64;
use ode_solvers::dop_shared::OutputType;
use ode_solvers::dopri5::Dopri5;
use ode_solvers::{DVector, System};
use pingpong_core::exact::basis::{scaled, vectorize};
use pingpong_core::exact::{Operator, SteadyState, Superoperator};
use pingpong_core::SystemParams;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Small random systems whose steady states fit in a handful of photons.
pub fn random_params(rng: &mut ChaCha8Rng) -> (SystemParams, f64) {
    let p = SystemParams::new(
        rng.gen_range(0.2..1.0),
        rng.gen_range(0.2..1.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
    .with_g0(rng.gen_range(0.3..1.5))
    .with_photon_number(rng.gen_range(0.05..0.4));
    (p, rng.gen_range(0.0..0.25))
}

/// `d/dt [Re y, Im y, I] = [L y, Re Tr(dF y)]`, stopping once `y` has decayed.
struct Regression<'a> {
    l: &'a Superoperator,
    df: &'a Operator,
    stop_norm: f64,
}

impl Regression<'_> {
    fn complex(&self, y: &DVector<f64>) -> Vec<Complex64> {
        let n = self.l.size();
        (0..n).map(|k| Complex64::new(y[k], y[n + k])).collect()
    }

    fn integrand(&self, v: &[Complex64]) -> f64 {
        // Tr(dF Y) with Y(i, j) stored at i + j d
        let d = self.df.nrows();
        let mut acc = 0.0;
        for j in 0..d {
            for i in 0..d {
                acc += (self.df[(j, i)] * v[i + j * d]).re;
            }
        }
        acc
    }
}

impl System<f64, DVector<f64>> for Regression<'_> {
    fn system(&self, _t: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
        let n = self.l.size();
        let v = self.complex(y);
        let lv = self.l.apply(&v);
        for k in 0..n {
            dy[k] = lv[k].re;
            dy[n + k] = lv[k].im;
        }
        dy[2 * n] = self.integrand(&v);
    }

    fn solout(&mut self, _t: f64, y: &DVector<f64>, _dy: &DVector<f64>) -> bool {
        let n = self.l.size();
        let norm = (0..2 * n).map(|k| y[k] * y[k]).sum::<f64>().sqrt();
        norm < self.stop_norm
    }
}

/// `D` as the time integral of the regressed force correlation.
pub fn time_domain_diffusion(st: &SteadyState) -> f64 {
    let f = st.basis.force();
    let mean = st.expect(&f).re;
    let df = &f - scaled(&st.basis.identity(), Complex64::new(mean, 0.0));
    let y0 = vectorize(&(&df * &st.rho));
    let n = y0.len();
    let mut init = DVector::zeros(2 * n + 1);
    for (k, v) in y0.iter().enumerate() {
        init[k] = v.re;
        init[n + k] = v.im;
    }
    let norm0 = y0.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let sys = Regression {
        l: st.factorized().liouvillian(),
        df: &df,
        stop_norm: 1e-10 * norm0,
    };
    // The decay rates span two orders of magnitude, which trips the
    // integrator's stiffness heuristic long before anything goes wrong.
    let mut stepper = Dopri5::from_param(
        sys,
        0.0,
        1e4,
        1e4,
        init,
        1e-12,
        1e-14 * norm0,
        0.9,
        0.04,
        0.2,
        10.0,
        1e4,
        0.0,
        2_000_000,
        u32::MAX,
        OutputType::Sparse,
    );
    stepper.integrate().expect("integration succeeds");
    let last = stepper.y_out().last().expect("at least one output");
    last[2 * n]
}

