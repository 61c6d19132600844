//! Dense univariate polynomials with complex coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coefficients at or below this magnitude are treated as zero when trimming.
/// This is an underflow guard only; it never hides meaningful coefficients.
pub const TRIM_THRESHOLD: f64 = 1e-300;

/// A polynomial stored lowest degree first: `coeffs[i]` multiplies `x^i`.
///
/// The highest stored coefficient always has magnitude above
/// [`TRIM_THRESHOLD`]; the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<C64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() <= TRIM_THRESHOLD) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^degree`.
    pub fn monomial(c: C64, degree: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i`, zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> C64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: C64) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * x + c, dp * x + p))
    }

    /// `Σ |c_i| r^i`, the natural magnitude bound for evaluation at `|x| = r`.
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Coefficients reversed: `x^n p(1/x)` for `n = deg p`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    /// `p(x)^e` by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Monic polynomial with the given roots, scaled by `leading`.
    pub fn from_roots(leading: C64, roots: &[C64]) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            coeffs.push(C64::new(0.0, 0.0));
            for i in (1..coeffs.len()).rev() {
                coeffs[i] = coeffs[i - 1] - r * coeffs[i];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self::new(coeffs)
    }
}

fn zip_with(a: &ComplexPoly, b: &ComplexPoly, f: impl Fn(C64, C64) -> C64) -> ComplexPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    ComplexPoly::new((0..n).map(|i| f(a.coeff(i), b.coeff(i))).collect())
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ComplexPoly {
            type Output = ComplexPoly;
            fn $m(self, rhs: ComplexPoly) -> ComplexPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::polyparse::format_poly(self, 'z'))
    }
}

/// Serialized as `[[re, im], ...]`, lowest degree first.
impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(ComplexPoly::new(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> ComplexPoly {
        ComplexPoly::from_real(c)
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p(&[1.0, 1.0]) * &p(&[-1.0, 1.0]), p(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn power_rule() {
        assert_eq!(p(&[1.0, 0.0, 1.0, 1.0]).derivative(), p(&[0.0, 2.0, 3.0]));
    }

    #[test]
    fn substitution() {
        let v = p(&[1.0, 0.0, 1.0, 1.0]).eval(C64::new(-1.0, 0.0));
        assert_eq!(v, C64::new(1.0, 0.0));
    }

    #[test]
    fn zero_polynomial_is_canonical() {
        let z = &p(&[1.0, 2.0]) - &p(&[1.0, 2.0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z, ComplexPoly::zero());
        assert!((&z * &p(&[3.0])).is_zero());
        assert_eq!(ComplexPoly::from_real(&[0.0, 0.0]).degree(), None);
    }

    #[test]
    fn trimming_is_underflow_only() {
        let q = ComplexPoly::from_real(&[1.0, 1e-200]);
        assert_eq!(q.degree(), Some(1));
        let q = ComplexPoly::from_real(&[1.0, 1e-301]);
        assert_eq!(q.degree(), Some(0));
    }

    #[test]
    fn from_roots_and_pow() {
        let r = ComplexPoly::from_roots(C64::new(2.0, 0.0), &[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert_eq!(r, p(&[-2.0, 0.0, 2.0]));
        assert_eq!(p(&[1.0, 1.0]).pow(3), p(&[1.0, 3.0, 3.0, 1.0]));
        assert_eq!(p(&[5.0]).pow(0), ComplexPoly::one());
    }

    #[test]
    fn derivative_pass_matches() {
        let q = p(&[1.0, -2.0, 0.5, 3.0]);
        let x = C64::new(0.3, -1.1);
        let (v, dv) = q.eval_with_derivative(x);
        assert!((v - q.eval(x)).norm() < 1e-14);
        assert!((dv - q.derivative().eval(x)).norm() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let q = ComplexPoly::new(vec![C64::new(5.0, 0.0), C64::new(1.0, -2.0)]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[[5.0,0.0],[1.0,-2.0]]");
        let back: ComplexPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
