use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{FieldError, LaurentPoly, QSqrt3};

/// Element of K = Q(√3)(d) as a reduced fraction of Laurent polynomials.
///
/// Canonical form: `gcd(num, den) = 1`, `den` has minimal exponent 0 and is
/// monic (leading coefficient 1). Zero is `0 / 1`. With this normalization
/// equal field elements have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_qsqrt3(QSqrt3::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::from_qsqrt3(QSqrt3::from_ratio(num, den))
    }

    pub fn from_qsqrt3(c: QSqrt3) -> Scalar {
        Scalar::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(num: LaurentPoly) -> Scalar {
        Scalar {
            num,
            den: LaurentPoly::one(),
        }
    }

    /// `num / den`, reduced to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Scalar, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Scalar::canonical(num, den))
    }

    /// The deformation parameter `d`.
    pub fn d() -> Scalar {
        Scalar::d_pow(1)
    }

    pub fn d_pow(k: i64) -> Scalar {
        Scalar::from_poly(LaurentPoly::monomial(QSqrt3::one(), k))
    }

    pub fn sqrt3() -> Scalar {
        Scalar::from_qsqrt3(QSqrt3::sqrt3())
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Total number of stored Laurent terms; a cheap size measure used for pivoting.
    pub fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms() - 1
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some((e, c)) = den.as_monomial() {
            let inv = c.inv().expect("nonzero denominator");
            return Scalar::from_poly(num.scale(&inv).shift(-e));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Scalar::normalize_units(num, den)
    }

    /// Fixes the unit `c·d^k` ambiguity of an already coprime fraction.
    fn normalize_units(num: LaurentPoly, den: LaurentPoly) -> Scalar {
        if let Some((e, c)) = den.as_monomial() {
            let inv = c.inv().expect("nonzero denominator");
            return Scalar::from_poly(num.scale(&inv).shift(-e));
        }
        let e = den.min_exp().unwrap();
        let inv = den.leading().unwrap().inv().unwrap();
        let mut num = num.scale(&inv);
        let mut den = den.scale(&inv);
        num.shift_in_place(-e);
        den.shift_in_place(-e);
        Scalar { num, den }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::normalize_units(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        let inv = other.inv().ok_or(FieldError::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// Star-involution: `d ↦ d⁻¹`, fixing Q(√3).
    pub fn conj(&self) -> Scalar {
        if self.den.is_one() {
            return Scalar::from_poly(self.num.conj());
        }
        Scalar::normalize_units(self.num.conj(), self.den.conj())
    }

    /// Multiplies by `d^k`; stays canonical without renormalizing.
    pub fn mul_d_pow(&self, k: i64) -> Scalar {
        Scalar {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &QSqrt3) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: i64) -> Result<Scalar, FieldError> {
        let base = if n < 0 {
            self.inv().ok_or(FieldError::DivisionByZero)?
        } else {
            self.clone()
        };
        let mut acc = Scalar::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Value at `d = e^{2πiθ}` with √3 real and positive.
    pub fn eval_numeric(&self, theta: f64) -> Result<Complex64, FieldError> {
        self.eval_at(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta))
            .map_err(|_| FieldError::Pole { theta })
    }

    pub fn eval_at(&self, d: Complex64) -> Result<Complex64, FieldError> {
        let n = self.num.eval(d);
        if self.den.is_one() {
            return Ok(n);
        }
        let den = self.den.eval(d);
        if den.norm() <= 1e-12 * self.den.l1_norm_f64() {
            return Err(FieldError::Pole { theta: d.arg() / (2.0 * std::f64::consts::PI) });
        }
        Ok(n / den)
    }

    /// If the scalar is `c·d^k` for a constant `c`, returns `(c, k)`.
    pub fn as_monomial(&self) -> Option<(&QSqrt3, i64)> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_monomial().map(|(e, c)| (c, e))
    }

    /// If the scalar lies in Q(√3), returns it.
    pub fn as_constant(&self) -> Option<&QSqrt3> {
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Zero for Scalar {
    fn zero() -> Scalar {
        Scalar::from_poly(LaurentPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Scalar {
        Scalar::from_poly(LaurentPoly::one())
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return Scalar::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Scalar::canonical(num, self.den.mul(&rhs.den))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(self.num.mul(&rhs.num));
        }
        Scalar::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] for a fallible form.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}

by_value!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, QSqrt3::from_int(c))))
    }

    #[test]
    fn sum_of_d_and_inverse() {
        let s = Scalar::d() + Scalar::d_pow(-1);
        assert_eq!(s.to_string(), "d + d^-1");
        assert!(s.is_laurent());
    }

    #[test]
    fn reduces_common_factor() {
        let x = Scalar::new(poly(&[(1, 1), (0, -1)]), poly(&[(1, 1), (0, -1)])).unwrap();
        assert!(x.is_one());
    }

    #[test]
    fn gamma_coefficient_cancels() {
        let m = Scalar::d_pow(-1) - Scalar::d();
        let g = &Scalar::from_int(2) / &m;
        assert_eq!(&g * &m, Scalar::from_int(2));
        assert_eq!(g.denom().min_exp(), Some(0));
        assert!(g.denom().leading().unwrap().is_one());
    }

    #[test]
    fn conj_of_quotient() {
        let x = Scalar::new(poly(&[(0, 1), (1, 1)]), poly(&[(0, 1), (1, -1)])).unwrap();
        let y = x.conj();
        let expected = Scalar::new(poly(&[(0, 1), (-1, 1)]), poly(&[(0, 1), (-1, -1)])).unwrap();
        assert_eq!(y, expected);
        assert_eq!(y.conj(), x);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn eval_quarter_turn() {
        let v = Scalar::d().eval_numeric(0.25).unwrap();
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let x = &Scalar::one() / &(Scalar::d() - Scalar::one());
        assert!(matches!(x.eval_numeric(0.0), Err(FieldError::Pole { .. })));
    }
}
