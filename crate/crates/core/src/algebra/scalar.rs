//! Exact coefficients: Gaussian rationals times integer powers of hbar and c.

use std::ops::{Mul, Neg};

use num::{BigInt, BigRational, Complex, One, ToPrimitive, Zero};

/// `a + b i` with `a`, `b` exact rationals.
pub type Gaussian = Complex<BigRational>;

pub(crate) fn gaussian_zero() -> Gaussian {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub(crate) fn gaussian_one() -> Gaussian {
    Complex::new(BigRational::one(), BigRational::zero())
}

pub(crate) fn gaussian_is_zero(g: &Gaussian) -> bool {
    g.re.is_zero() && g.im.is_zero()
}

/// Coefficient of a term: `value * hbar^hbar_exp * c^c_exp`.
///
/// The zero scalar always carries zero exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    value: Gaussian,
    hbar_exp: i32,
    c_exp: i32,
}

impl Scalar {
    pub fn new(value: Gaussian, hbar_exp: i32, c_exp: i32) -> Self {
        if gaussian_is_zero(&value) {
            Self::zero()
        } else {
            Scalar { value, hbar_exp, c_exp }
        }
    }

    pub fn zero() -> Self {
        Scalar { value: gaussian_zero(), hbar_exp: 0, c_exp: 0 }
    }

    pub fn one() -> Self {
        Scalar { value: gaussian_one(), hbar_exp: 0, c_exp: 0 }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::new(Complex::new(r, BigRational::zero()), 0, 0)
    }

    /// The imaginary unit.
    pub fn imag() -> Self {
        Self::new(Complex::new(BigRational::zero(), BigRational::one()), 0, 0)
    }

    pub fn hbar(exp: i32) -> Self {
        Scalar { value: gaussian_one(), hbar_exp: exp, c_exp: 0 }
    }

    pub fn c(exp: i32) -> Self {
        Scalar { value: gaussian_one(), hbar_exp: 0, c_exp: exp }
    }

    pub fn value(&self) -> &Gaussian {
        &self.value
    }

    pub fn hbar_exp(&self) -> i32 {
        self.hbar_exp
    }

    pub fn c_exp(&self) -> i32 {
        self.c_exp
    }

    pub fn is_zero(&self) -> bool {
        gaussian_is_zero(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == gaussian_one() && self.hbar_exp == 0 && self.c_exp == 0
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar {
            value: self.value.inv(),
            hbar_exp: -self.hbar_exp,
            c_exp: -self.c_exp,
        })
    }

    /// Evaluate with concrete values for hbar and c.
    pub fn to_complex64(&self, hbar: f64, c: f64) -> Complex<f64> {
        let re = self.value.re.to_f64().unwrap_or(f64::NAN);
        let im = self.value.im.to_f64().unwrap_or(f64::NAN);
        let factor = hbar.powi(self.hbar_exp) * c.powi(self.c_exp);
        Complex::new(re * factor, im * factor)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.value * &rhs.value,
            self.hbar_exp + rhs.hbar_exp,
            self.c_exp + rhs.c_exp,
        )
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar::new(-self.value, self.hbar_exp, self.c_exp)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -self.clone()
    }
}
