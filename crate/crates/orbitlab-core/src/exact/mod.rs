//! Exact scalar arithmetic.
//!
//! Everything structural in this crate is computed over the rationals or the
//! Gaussian rationals ℚ(i); floating point is confined to the explicitly
//! labelled exploratory paths (float orbit sampling, Monte-Carlo checks).
//! `num_rational::BigRational` already maintains the invariants we need
//! (lowest terms, positive denominator), so it is used as the scalar
//! backbone; the algorithms on top of it are our own.

pub mod eigen;
pub mod hull;
pub mod mat;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};
use std::fmt;

/// Exact rational scalar: arbitrary precision, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Exact Gaussian rational scalar a + bi with a, b rational.
pub type Gaussian = Complex<Rational>;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Gaussian from rational real and imaginary parts.
pub fn gaussian(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

/// Purely real Gaussian.
pub fn greal(re: Rational) -> Gaussian {
    Complex::new(re, Rational::zero())
}

/// Purely imaginary Gaussian.
pub fn gim(im: Rational) -> Gaussian {
    Complex::new(Rational::zero(), im)
}

/// i as a Gaussian scalar.
pub fn gi() -> Gaussian {
    gim(Rational::one())
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// gcd of two non-negative rationals: gcd(a/b, c/d) = gcd(a,c)/lcm(b,d).
/// The result generates the group of integer combinations of the inputs.
pub fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = a.numer().abs().gcd(&b.numer().abs());
    let den = a.denom().lcm(b.denom());
    Rational::new(num, den)
}

/// Scalar fields the matrix layer is generic over: exact arithmetic plus a
/// way to clear a row to an integral form (same span) for fraction-free
/// elimination.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Num + std::ops::Neg<Output = Self>
{
    /// Multiply the row by a nonzero scalar so every entry becomes integral
    /// (denominator one). Row span is unchanged.
    fn integralize_row(row: &[Self]) -> Vec<Self>;

    /// Human-readable form for diagnostics.
    fn render(&self) -> String;
}

fn row_denominator_lcm(dens: impl Iterator<Item = BigInt>) -> BigInt {
    let mut l = BigInt::one();
    for d in dens {
        l = l.lcm(&d);
    }
    l
}

impl Scalar for Rational {
    fn integralize_row(row: &[Self]) -> Vec<Self> {
        let l = row_denominator_lcm(row.iter().map(|x| x.denom().clone()));
        let f = Rational::from_integer(l);
        row.iter().map(|x| x * &f).collect()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Gaussian {
    fn integralize_row(row: &[Self]) -> Vec<Self> {
        let l = row_denominator_lcm(
            row.iter()
                .flat_map(|x| [x.re.denom().clone(), x.im.denom().clone()]),
        );
        let f = greal(Rational::from_integer(l));
        row.iter().map(|x| x.clone() * f.clone()).collect()
    }

    fn render(&self) -> String {
        format!("{}+{}i", self.re, self.im)
    }
}

/// Dense exact vector helpers shared across modules.
pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t)
}

pub fn vec_is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Scale a rational vector to a primitive integer vector (positive leading
/// entry times content one). Zero vectors stay zero.
pub fn primitivize(v: &[Rational]) -> Vec<Rational> {
    if vec_is_zero(v) {
        return v.to_vec();
    }
    let cleared = Rational::integralize_row(v);
    let mut g = BigInt::zero();
    for x in &cleared {
        g = g.gcd(x.numer());
    }
    let mut out: Vec<Rational> = cleared
        .iter()
        .map(|x| Rational::new(x.numer() / &g, BigInt::one()))
        .collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(rational_sqrt(&rat(4, 9)), Some(rat(2, 3)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(0, 1)), Some(rint(0)));
        assert_eq!(rational_sqrt(&rat(-4, 9)), None);
    }

    #[test]
    fn rational_gcd_small_cases() {
        assert_eq!(rational_gcd(&rat(1, 2), &rat(3, 4)), rat(1, 4));
        assert_eq!(rational_gcd(&rint(0), &rat(5, 3)), rat(5, 3));
        assert_eq!(rational_gcd(&rint(2), &rint(3)), rint(1));
    }

    #[test]
    fn gaussian_field_ops_are_exact() {
        let z = gaussian(rat(1, 2), rat(1, 3));
        let w = gaussian(rat(2, 1), rat(-1, 1));
        let q = z.clone() / w.clone();
        assert_eq!(q * w, z);
    }

    #[test]
    fn primitivize_normalizes_sign_and_content() {
        let v = vec![rat(-2, 3), rat(4, 3), rint(0)];
        assert_eq!(primitivize(&v), vec![rint(1), rint(-2), rint(0)]);
    }
}
