//! Hamiltonian and vectorized Liouvillian of the driven atom-mode system.
//!
//! Vectorization is column stacking, so `vec(A rho B) = (B^T kron A) vec(rho)`
//! and the matrix entry `(i, j)` of an operator sits at `i + j d`.

use faer::Mat;
use num_complex::Complex64;

use super::basis::{FockBasis, Operator};
use crate::model::SystemParams;

/// `H = omega_a sigma^dagger sigma + omega_c a^dagger a + g (a^dagger sigma + a sigma^dagger)
///  + E a^dagger + E^* a`, in the frame rotating at the probe frequency.
pub fn build_hamiltonian(params: &SystemParams, x: f64, basis: &FockBasis) -> Operator {
    hamiltonian_for_coupling(params, params.coupling(x), basis)
}

/// Same as [`build_hamiltonian`] for an explicit coupling value.
pub fn hamiltonian_for_coupling(params: &SystemParams, g: f64, basis: &FockBasis) -> Operator {
    let mut h = basis.zeros();
    let c = |v: f64| Complex64::new(v, 0.0);
    for excited in [false, true] {
        for n in 0..=basis.n_max() {
            let i = basis.index(excited, n);
            let atom = if excited { params.omega_a } else { 0.0 };
            h[(i, i)] = c(atom + params.omega_c * n as f64);
            if n < basis.n_max() {
                let j = basis.index(excited, n + 1);
                let root = ((n + 1) as f64).sqrt();
                // <n+1| E a^dagger |n> and its conjugate
                h[(j, i)] += params.drive * root;
                h[(i, j)] += params.drive.conj() * root;
            }
        }
    }
    for n in 0..basis.n_max() {
        let e = basis.index(true, n);
        let g1 = basis.index(false, n + 1);
        let v = c(g * ((n + 1) as f64).sqrt());
        h[(e, g1)] += v;
        h[(g1, e)] += v;
    }
    h
}

/// Sparse `d^2 x d^2` superoperator stored as merged triplets sorted by
/// column then row.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

fn nonzeros(op: &Operator) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for j in 0..op.ncols() {
        for i in 0..op.nrows() {
            let v = op[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl Superoperator {
    pub(crate) fn from_unsorted(dim: usize, mut raw: Vec<(usize, usize, Complex64)>) -> Self {
        raw.sort_by_key(|&(r, c, _)| (c, r));
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| e.2 != Complex64::new(0.0, 0.0));
        Self { dim, entries }
    }

    /// Operator dimension `d`; the superoperator is `d^2 x d^2`.
    pub fn operator_dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.dim * self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.size());
        let mut out = vec![Complex64::new(0.0, 0.0); self.size()];
        for &(r, c, val) in &self.entries {
            out[r] += val * v[c];
        }
        out
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let mut m = Mat::zeros(self.size(), self.size());
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `max |vec(I)^T L|`, zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let mut row = vec![Complex64::new(0.0, 0.0); self.size()];
        for &(r, c, v) in &self.entries {
            if r % (self.dim + 1) == 0 {
                row[c] += v;
            }
        }
        row.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `L rho = -i [H, rho] + gamma L_sigma rho + kappa L_a rho` with
/// `L_b rho = 2 b rho b^dagger - rho b^dagger b - b^dagger b rho`.
pub fn build_liouvillian(params: &SystemParams, x: f64, basis: &FockBasis) -> Superoperator {
    liouvillian_for_hamiltonian(
        &build_hamiltonian(params, x, basis),
        &[(params.gamma, basis.lowering()), (params.kappa, basis.annihilation())],
    )
}

/// Liouvillian for an arbitrary Hamiltonian and weighted jump operators.
pub fn liouvillian_for_hamiltonian(h: &Operator, jumps: &[(f64, Operator)]) -> Superoperator {
    let d = h.nrows();
    let i = Complex64::new(0.0, 1.0);
    let mut raw = Vec::new();
    for &(r, c, v) in &nonzeros(h) {
        for k in 0..d {
            // -i (I kron H)
            raw.push((k * d + r, k * d + c, -i * v));
            // +i (H^T kron I): (H^T)[c, r] = H[r, c]
            raw.push((c * d + k, r * d + k, i * v));
        }
    }
    for (rate, b) in jumps {
        if *rate == 0.0 {
            continue;
        }
        let nb = nonzeros(b);
        let bdb = nonzeros(&(b.adjoint() * b));
        for &(k, l, u) in &nb {
            for &(r, c, v) in &nb {
                raw.push((k * d + r, l * d + c, 2.0 * rate * u.conj() * v));
            }
        }
        for &(r, c, m) in &bdb {
            for k in 0..d {
                raw.push((k * d + r, k * d + c, -rate * m));
                raw.push((c * d + k, r * d + k, -rate * m));
            }
        }
    }
    Superoperator::from_unsorted(d, raw)
}
