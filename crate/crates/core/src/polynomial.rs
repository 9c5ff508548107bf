use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// c0 + c1 z + c2 z^2
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Poly2 {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Poly2 {
    pub fn new(c0: impl Into<Complex64>, c1: impl Into<Complex64>, c2: impl Into<Complex64>) -> Self {
        Poly2 {
            c0: c0.into(),
            c1: c1.into(),
            c2: c2.into(),
        }
    }

    pub fn linear(c0: impl Into<Complex64>, c1: impl Into<Complex64>) -> Self {
        Self::new(c0, c1, ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.c0 + z * (self.c1 + z * self.c2)
    }

    pub fn derivative(&self) -> Poly2 {
        Poly2::new(self.c1, 2.0 * self.c2, ZERO)
    }

    pub fn second_derivative(&self) -> Complex64 {
        2.0 * self.c2
    }

    pub fn scale(&self, s: Complex64) -> Poly2 {
        Poly2::new(self.c0 * s, self.c1 * s, self.c2 * s)
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == ZERO && self.c1 == ZERO && self.c2 == ZERO
    }

    pub fn max_coefficient(&self) -> f64 {
        self.c0.norm().max(self.c1.norm()).max(self.c2.norm())
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, o: Poly2) -> Poly2 {
        Poly2::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, o: Poly2) -> Poly2 {
        Poly2::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2::new(-self.c0, -self.c1, -self.c2)
    }
}

impl Mul<Complex64> for Poly2 {
    type Output = Poly2;
    fn mul(self, s: Complex64) -> Poly2 {
        self.scale(s)
    }
}

/// Dense polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// Index of the highest non-zero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    pub fn leading(&self) -> Complex64 {
        self.degree().map_or(ZERO, |d| self.coeffs[d])
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// (p(z), p'(z), p''(z)) by a single Horner pass.
    pub fn eval_with_derivatives(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let (mut p, mut d1, mut d2) = (ZERO, ZERO, ZERO);
        for c in self.coeffs.iter().rev() {
            d2 = d2 * z + 2.0 * d1;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// x (x-1) ... (x-k+1)
pub fn falling_factorial(x: Complex64, k: usize) -> Complex64 {
    (0..k).fold(ONE, |acc, j| acc * (x - j as f64))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Coefficients of (c0 + c1 z)^k.
pub fn linear_power(c0: Complex64, c1: Complex64, k: usize) -> Vec<Complex64> {
    (0..=k)
        .map(|j| binomial(k, j) * c0.powu((k - j) as u32) * c1.powu(j as u32))
        .collect()
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the standard three-term recurrence.
pub fn jacobi_p(n: usize, a: Complex64, b: Complex64, x: Complex64) -> Complex64 {
    let p0 = ONE;
    if n == 0 {
        return p0;
    }
    let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    let (mut prev, mut cur) = (p0, p1);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn horner_derivatives_match_explicit() {
        let p = Poly::new(vec![r(1.0), r(-2.0), r(0.5), r(3.0)]);
        let z = r(0.7);
        let (v, d1, d2) = p.eval_with_derivatives(z);
        assert_relative_eq!(v.re, p.eval(z).re, epsilon = 1e-14);
        assert_relative_eq!(d1.re, p.derivative().eval(z).re, epsilon = 1e-14);
        assert_relative_eq!(d2.re, p.derivative().derivative().eval(z).re, epsilon = 1e-14);
    }

    #[test]
    fn degree_and_leading() {
        let p = Poly::new(vec![r(1.0), r(2.0), r(0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.leading(), r(2.0));
        assert!(Poly::constant(r(0.0)).is_zero());
    }

    #[test]
    fn falling_and_binomial() {
        assert_eq!(falling_factorial(r(5.0), 3), r(60.0));
        assert_eq!(falling_factorial(r(0.5), 0), r(1.0));
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(linear_power(r(1.0), r(-2.0), 2), vec![r(1.0), r(-4.0), r(4.0)]);
    }

    #[test]
    fn jacobi_low_orders() {
        // P_2^{(0,0)} is the Legendre polynomial (3x^2 - 1)/2
        let x = r(0.3);
        assert_relative_eq!(jacobi_p(2, r(0.0), r(0.0), x).re, (3.0 * 0.09 - 1.0) / 2.0, epsilon = 1e-15);
        // P_n^{(a,b)}(1) = (a+1)_n / n!
        let a = r(0.8);
        let b = r(0.3);
        let at_one = jacobi_p(3, a, b, r(1.0));
        assert_relative_eq!(at_one.re, 1.8 * 2.8 * 3.8 / 6.0, epsilon = 1e-13);
    }
}
