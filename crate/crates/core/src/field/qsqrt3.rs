use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rat::Rat;

/// An element `a + b·√3` of the quadratic field Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QSqrt3 {
    a: Rat,
    b: Rat,
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt3 {
            a: Rat::from_big(a),
            b: Rat::from_big(b),
        }
    }

    pub fn from_int(n: i64) -> Self {
        QSqrt3 {
            a: Rat::from_int(n),
            b: Rat::from_int(0),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        QSqrt3 {
            a: Rat::new(num, den),
            b: Rat::from_int(0),
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QSqrt3 {
            a: Rat::from_big(a),
            b: Rat::from_int(0),
        }
    }

    /// The element √3.
    pub fn sqrt3() -> Self {
        QSqrt3 {
            a: Rat::from_int(0),
            b: Rat::from_int(1),
        }
    }

    /// Rational part.
    pub fn rational_part(&self) -> BigRational {
        self.a.to_big()
    }

    /// Coefficient of √3.
    pub fn sqrt3_part(&self) -> BigRational {
        self.b.to_big()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<QSqrt3> {
        if self.is_zero() {
            return None;
        }
        if self.b.is_zero() {
            return Some(QSqrt3 {
                a: self.a.recip(),
                b: Rat::from_int(0),
            });
        }
        // (a + b√3)^{-1} = (a - b√3) / (a² - 3b²); the norm is nonzero since √3 is irrational.
        let norm = self.a.mul(&self.a).sub(&Rat::from_int(3).mul(&self.b.mul(&self.b)));
        Some(QSqrt3 {
            a: self.a.div(&norm),
            b: self.b.div(&norm).neg(),
        })
    }

    pub fn to_f64(&self) -> f64 {
        if self.b.is_zero() {
            return self.a.to_f64();
        }
        self.a.to_f64() + self.b.to_f64() * 3f64.sqrt()
    }

    /// Sign convention used for canonical forms: positive rational part,
    /// or zero rational part and positive √3 part.
    pub fn is_positive_normalized(&self) -> bool {
        self.a.is_positive() || (self.a.is_zero() && self.b.is_positive())
    }

    /// True when both parts are integers.
    pub fn is_integral(&self) -> bool {
        self.a.denom_is_one() && self.b.denom_is_one()
    }
}

impl Zero for QSqrt3 {
    fn zero() -> Self {
        QSqrt3::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt3 {
    fn one() -> Self {
        QSqrt3::from_int(1)
    }
    fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

impl<'a> Add<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3 {
            a: self.a.add(&rhs.a),
            b: self.b.add(&rhs.b),
        }
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, rhs: QSqrt3) -> QSqrt3 {
        &self + &rhs
    }
}

impl<'a> Sub<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: &QSqrt3) -> QSqrt3 {
        QSqrt3 {
            a: self.a.sub(&rhs.a),
            b: self.b.sub(&rhs.b),
        }
    }
}

impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, rhs: QSqrt3) -> QSqrt3 {
        &self - &rhs
    }
}

impl<'a> Mul<&'a QSqrt3> for &'a QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: &QSqrt3) -> QSqrt3 {
        if self.b.is_zero() && rhs.b.is_zero() {
            return QSqrt3 {
                a: self.a.mul(&rhs.a),
                b: Rat::from_int(0),
            };
        }
        let three = Rat::from_int(3);
        QSqrt3 {
            a: self.a.mul(&rhs.a).add(&three.mul(&self.b.mul(&rhs.b))),
            b: self.a.mul(&rhs.b).add(&self.b.mul(&rhs.a)),
        }
    }
}

impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, rhs: QSqrt3) -> QSqrt3 {
        &self * &rhs
    }
}

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        -&self
    }
}

impl Neg for &QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3 {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }
}

impl AddAssign<&QSqrt3> for QSqrt3 {
    fn add_assign(&mut self, rhs: &QSqrt3) {
        self.a = self.a.add(&rhs.a);
        if !rhs.b.is_zero() {
            self.b = self.b.add(&rhs.b);
        }
    }
}

impl SubAssign<&QSqrt3> for QSqrt3 {
    fn sub_assign(&mut self, rhs: &QSqrt3) {
        self.a = self.a.sub(&rhs.a);
        if !rhs.b.is_zero() {
            self.b = self.b.sub(&rhs.b);
        }
    }
}

fn fmt_rational(q: &Rat) -> String {
    let q = q.to_big();
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prints `3/2`, `-s3`, `2*s3`, or `(1/2 - 3*s3)`.
impl fmt::Display for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sqrt_term = |b: &Rat| -> String {
            if b.is_one() {
                "s3".to_string()
            } else if b.neg().is_one() {
                "-s3".to_string()
            } else {
                format!("{}*s3", fmt_rational(b))
            }
        };
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else if self.a.is_zero() {
            write!(f, "{}", sqrt_term(&self.b))
        } else if self.b.is_negative() {
            write!(f, "({} - {})", fmt_rational(&self.a), sqrt_term(&self.b.neg()))
        } else {
            write!(f, "({} + {})", fmt_rational(&self.a), sqrt_term(&self.b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_mixed_element() {
        let x = QSqrt3::from_int(2) + QSqrt3::sqrt3();
        let y = x.inv().unwrap();
        // (2 + √3)(2 - √3) = 1
        assert_eq!(y, QSqrt3::from_int(2) - QSqrt3::sqrt3());
        assert!((&x * &y).is_one());
    }

    #[test]
    fn sqrt3_squares_to_three() {
        let s = QSqrt3::sqrt3();
        assert_eq!(&s * &s, QSqrt3::from_int(3));
        assert!(QSqrt3::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(QSqrt3::from_ratio(3, 2).to_string(), "3/2");
        assert_eq!((-QSqrt3::sqrt3()).to_string(), "-s3");
        let mixed = QSqrt3::from_ratio(1, 2) + &QSqrt3::sqrt3() * &QSqrt3::from_int(-3);
        assert_eq!(mixed.to_string(), "(1/2 - 3*s3)");
    }
}
