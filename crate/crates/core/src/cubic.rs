//! Real roots of polynomials of degree at most three.

use std::f64::consts::PI;

/// Real roots of `c[0] x^3 + c[1] x^2 + c[2] x + c[3]`, ascending, each
/// polished by Newton steps on the original polynomial. Roots of even
/// multiplicity may come out as two nearby values.
pub fn real_roots(c: [f64; 4]) -> Vec<f64> {
    let mut roots = if c[0] != 0.0 {
        depressed_cubic_roots(c[1] / c[0], c[2] / c[0], c[3] / c[0])
    } else if c[1] != 0.0 {
        quadratic_roots(c[1], c[2], c[3])
    } else if c[2] != 0.0 {
        vec![-c[3] / c[2]]
    } else {
        Vec::new()
    };
    for r in roots.iter_mut() {
        *r = polish(c, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

pub fn eval(c: [f64; 4], x: f64) -> f64 {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

fn eval_derivative(c: [f64; 4], x: f64) -> f64 {
    (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2]
}

fn polish(c: [f64; 4], mut x: f64) -> f64 {
    let mut fx = eval(c, x).abs();
    for _ in 0..8 {
        let d = eval_derivative(c, x);
        if d == 0.0 || fx == 0.0 {
            break;
        }
        let next = x - eval(c, x) / d;
        let fn_ = eval(c, next).abs();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // A slightly negative discriminant is a double root lost to rounding.
        if disc > -1e-14 * b * b {
            return vec![-b / (2.0 * a)];
        }
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q / a, c / q]
}

/// Roots of the monic cubic `x^3 + b x^2 + c x + d`.
fn depressed_cubic_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;
    if p == 0.0 && q == 0.0 {
        return vec![-shift; 3];
    }
    if disc > 0.0 {
        let a = -half_q.signum() * (half_q.abs() + disc.sqrt()).cbrt();
        let t = if a == 0.0 { 0.0 } else { a - p / (3.0 * a) };
        vec![t - shift]
    } else {
        let r = 2.0 * (-third_p).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(roots: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(roots.len(), expected.len(), "{roots:?} vs {expected:?}");
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() <= tol * (1.0 + e.abs()), "{roots:?} vs {expected:?}");
        }
    }

    #[test]
    fn three_distinct_roots() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        check(&real_roots([1.0, 0.0, -7.0, 6.0]), &[-3.0, 1.0, 2.0], 1e-14);
        // 2 (x - 0.1)(x - 5)(x - 40)
        let (a, b, c) = (0.1, 5.0, 40.0);
        let coeffs = [2.0, -2.0 * (a + b + c), 2.0 * (a * b + b * c + a * c), -2.0 * a * b * c];
        check(&real_roots(coeffs), &[a, b, c], 1e-13);
    }

    #[test]
    fn single_real_root() {
        // (x - 2)(x^2 + 1)
        check(&real_roots([1.0, -2.0, 1.0, -2.0]), &[2.0], 1e-14);
    }

    #[test]
    fn lower_degree_fallbacks() {
        check(&real_roots([0.0, 1.0, -3.0, 2.0]), &[1.0, 2.0], 1e-14);
        check(&real_roots([0.0, 0.0, 2.0, -1.0]), &[0.5], 1e-15);
        assert!(real_roots([0.0, 0.0, 0.0, 1.0]).is_empty());
        assert!(real_roots([0.0, 1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn double_and_triple_roots() {
        // (x - 1)^2 (x + 2) = x^3 - 3x + 2
        let r = real_roots([1.0, 0.0, -3.0, 2.0]);
        assert!(r.len() >= 2);
        assert!((r[0] + 2.0).abs() < 1e-12);
        assert!(r[1..].iter().all(|v| (v - 1.0).abs() < 1e-6));
        check(&real_roots([1.0, -3.0, 3.0, -1.0]), &[1.0, 1.0, 1.0], 1e-12);
    }

    #[test]
    fn roots_satisfy_polynomial() {
        let coeffs = [0.37, -1.3, 0.2, 0.05];
        for r in real_roots(coeffs) {
            assert!(eval(coeffs, r).abs() < 1e-14);
        }
    }
}
