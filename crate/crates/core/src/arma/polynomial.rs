//! Complex roots of real polynomials (Aberth–Ehrlich iteration).

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

impl Add for Complex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Div for Complex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

/// Evaluates `p(z)` and `p'(z)` with coefficients in increasing degree.
fn eval_with_derivative(coeffs: &[f64], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, 0.0);
    }
    (p, dp)
}

/// Roots of `c₀ + c₁z + … + c_k z^k`. Trailing zero coefficients are
/// dropped, so the number of roots is the effective degree.
pub fn roots(coeffs: &[f64]) -> Vec<Complex> {
    let degree = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(k) => k,
        None => return Vec::new(),
    };
    let coeffs = &coeffs[..=degree];
    match degree {
        0 => return Vec::new(),
        1 => return alloc::vec![Complex::new(-coeffs[0] / coeffs[1], 0.0)],
        _ => {}
    }

    // Cauchy bound for initial circle radius
    let lead = coeffs[degree];
    let radius = 1.0 + coeffs[..degree].iter().fold(0.0_f64, |m, c| m.max((c / lead).abs()));
    let mut z: Vec<Complex> = (0..degree)
        .map(|k| {
            let angle = 2.0 * core::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex::new(radius * libm::cos(angle), radius * libm::sin(angle))
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..degree {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    repulsion = repulsion + Complex::new(1.0, 0.0) / (z[i] - zj);
                }
            }
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            z[i] = z[i] - step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Smallest root modulus, or `+inf` for a constant polynomial.
pub fn min_root_modulus(coeffs: &[f64]) -> f64 {
    roots(coeffs)
        .into_iter()
        .map(Complex::norm)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        // (z - 2)(z + 3) = z² + z - 6
        let mut r = roots(&[-6.0, 1.0, 1.0]);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0].re + 3.0).abs() < 1e-12 && r[0].im.abs() < 1e-12);
        assert!((r[1].re - 2.0).abs() < 1e-12 && r[1].im.abs() < 1e-12);
    }

    #[test]
    fn complex_pair() {
        // z² + 1
        let r = roots(&[1.0, 0.0, 1.0]);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(z.re.abs() < 1e-12);
        }
    }

    #[test]
    fn trailing_zeros_and_constants() {
        assert_eq!(roots(&[1.0, -0.5, 0.0]).len(), 1);
        assert!(roots(&[3.0]).is_empty());
        assert_eq!(min_root_modulus(&[1.0]), f64::INFINITY);
        assert!((min_root_modulus(&[1.0, -0.5]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_product_form() {
        // (1 - 0.5z)(1 - 0.8z)(1 + 0.25z)
        let a = [1.0, -0.5];
        let b = [1.0, -0.8];
        let c = [1.0, 0.25];
        let mut ab = [0.0; 3];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                ab[i + j] += x * y;
            }
        }
        let mut abc = [0.0; 4];
        for (i, x) in ab.iter().enumerate() {
            for (j, y) in c.iter().enumerate() {
                abc[i + j] += x * y;
            }
        }
        let mut moduli: Vec<f64> = roots(&abc).into_iter().map(Complex::norm).collect();
        moduli.sort_by(f64::total_cmp);
        for (got, want) in moduli.iter().zip([1.25, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }
}
