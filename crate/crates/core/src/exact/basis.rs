//! Truncated atom-mode product basis and the operators acting on it.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense operator on the truncated space.
pub type Operator = Mat<Complex64>;

/// Product basis `{g, e} x {|0>, ..., |n_max>}`, atom-major: the state
/// `|atom, n>` sits at index `atom (n_max + 1) + n` with `g = 0`, `e = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    n_max: usize,
}

impl FockBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParams("n_max must be >= 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        2 * self.levels()
    }

    pub fn index(&self, excited: bool, n: usize) -> usize {
        debug_assert!(n <= self.n_max);
        usize::from(excited) * self.levels() + n
    }

    pub fn zeros(&self) -> Operator {
        Mat::zeros(self.dim(), self.dim())
    }

    pub fn identity(&self) -> Operator {
        Mat::identity(self.dim(), self.dim())
    }

    /// Mode annihilation `a`; the creation operator is its adjoint, so the
    /// top level is annihilated by `a^dagger` and `a^dagger a` is diagonal.
    pub fn annihilation(&self) -> Operator {
        let mut m = self.zeros();
        for excited in [false, true] {
            for n in 1..=self.n_max {
                m[(self.index(excited, n - 1), self.index(excited, n))] = Complex64::new((n as f64).sqrt(), 0.0);
            }
        }
        m
    }

    /// Atomic lowering operator `sigma = |g><e|`.
    pub fn lowering(&self) -> Operator {
        let mut m = self.zeros();
        for n in 0..=self.n_max {
            m[(self.index(false, n), self.index(true, n))] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// `sigma_z = |e><e| - |g><g|`.
    pub fn sigma_z(&self) -> Operator {
        let mut m = self.zeros();
        for n in 0..=self.n_max {
            m[(self.index(true, n), self.index(true, n))] = Complex64::new(1.0, 0.0);
            m[(self.index(false, n), self.index(false, n))] = Complex64::new(-1.0, 0.0);
        }
        m
    }

    /// `a^dagger a`.
    pub fn number(&self) -> Operator {
        let mut m = self.zeros();
        for excited in [false, true] {
            for n in 0..=self.n_max {
                m[(self.index(excited, n), self.index(excited, n))] = Complex64::new(n as f64, 0.0);
            }
        }
        m
    }

    /// Force operator `F_d = dH/dg = a^dagger sigma + a sigma^dagger`.
    pub fn force(&self) -> Operator {
        let a = self.annihilation();
        let s = self.lowering();
        let t = a.adjoint() * &s;
        &t + t.adjoint()
    }

    /// Projector on the two highest Fock levels, used to test truncation.
    pub fn top_levels(&self) -> Operator {
        let mut m = self.zeros();
        for excited in [false, true] {
            for n in self.n_max.saturating_sub(1)..=self.n_max {
                m[(self.index(excited, n), self.index(excited, n))] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }

    /// Projector on the excited atomic level.
    pub fn excited(&self) -> Operator {
        let mut m = self.zeros();
        for n in 0..=self.n_max {
            m[(self.index(true, n), self.index(true, n))] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

pub fn trace(op: &Operator) -> Complex64 {
    (0..op.nrows()).map(|i| op[(i, i)]).sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &Operator, b: &Operator) -> Complex64 {
    let d = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..d {
        for i in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `c op`
pub fn scaled(op: &Operator, c: Complex64) -> Operator {
    Mat::from_fn(op.nrows(), op.ncols(), |i, j| c * op[(i, j)])
}

/// `a b - b a`
pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    a * b - b * a
}

/// Largest absolute entry of `a - a^dagger`.
pub fn hermiticity_defect(a: &Operator) -> f64 {
    let d = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..d {
        for i in 0..d {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Column-stacked vectorization: entry `(i, j)` goes to `i + j d`.
pub fn vectorize(op: &Operator) -> Vec<Complex64> {
    let d = op.nrows();
    let mut v = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            v.push(op[(i, j)]);
        }
    }
    v
}

pub fn unvectorize(v: &[Complex64], d: usize) -> Operator {
    assert_eq!(v.len(), d * d);
    Mat::from_fn(d, d, |i, j| v[i + j * d])
}
