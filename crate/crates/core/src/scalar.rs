//! Coefficient fields for algebra elements: exact rationals or complex floats.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Exact rational coefficients.
pub type Rational = BigRational;

/// Arithmetic in which element coefficients, state values and Gram entries live.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(r: &Rational) -> Self;
    fn from_f64(x: f64) -> Option<Self>;
    fn conj(&self) -> Self;
    /// Exactly zero for rationals; below [`FLOAT_EPS`] in modulus for floats.
    fn is_negligible(&self) -> bool;
    fn modulus(&self) -> f64;
    /// Real part as `f64`, used to decide signs of pivots.
    fn real(&self) -> f64;
    fn to_complex(&self) -> Complex64;
    fn render(&self) -> String;

    fn from_integer(n: i64) -> Self {
        Self::from_ratio(&Rational::from_integer(BigInt::from(n)))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Modulus below which a float coefficient is dropped from an element.
pub const FLOAT_EPS: f64 = 1e-14;

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn real(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.real(), 0.0)
    }
    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_ratio(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then(|| Complex64::new(x, 0.0))
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_negligible(&self) -> bool {
        self.norm() <= FLOAT_EPS
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn real(&self) -> f64 {
        self.re
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn render(&self) -> String {
        if self.im.abs() <= FLOAT_EPS {
            format!("{}", self.re)
        } else {
            format!("{}{:+}i", self.re, self.im)
        }
    }
}

/// Parses `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_fractions() {
        assert_eq!(ratio(1, 4).render(), "1/4");
        assert_eq!(ratio(-6, 3).render(), "-2");
        assert_eq!(<Rational as Scalar>::zero().render(), "0");
        assert_eq!(Complex64::new(0.5, 0.0).render(), "0.5");
    }

    #[test]
    fn parse_fractions() {
        assert_eq!(parse_rational("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("-7"), Some(ratio(-7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn float_negligible() {
        assert!(Complex64::new(1e-16, 0.0).is_negligible());
        assert!(!Complex64::new(1e-6, 0.0).is_negligible());
        assert_eq!(ratio(2, 3).pow(3), ratio(8, 27));
    }
}
