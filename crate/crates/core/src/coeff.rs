//! Scalar abstraction shared by the exact and floating-point engines.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, One, Zero};

use crate::field::Scalar;

/// Coefficient ring for vectors: a field with a star-involution and a
/// distinguished unit `d`.
///
/// The exact [`Scalar`] carries `d` symbolically; complex floats fix
/// `d = e^{2πiθ}` through their context.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + Debug + Send + Sync;

    fn d_pow(ctx: &Self::Ctx, k: i64) -> Self;
    fn sqrt3(ctx: &Self::Ctx) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.clone() + other.clone();
    }

    /// `self · d^k`.
    fn mul_d_pow(&self, ctx: &Self::Ctx, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        self.mul_ref(&Self::d_pow(ctx, k))
    }

    /// Whether the coefficient should be dropped from a sparse vector.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for Scalar {
    type Ctx = ();

    fn d_pow(_: &(), k: i64) -> Scalar {
        Scalar::d_pow(k)
    }

    fn sqrt3(_: &()) -> Scalar {
        Scalar::sqrt3()
    }

    fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::from_ratio(num, den)
    }

    fn conj(&self) -> Scalar {
        Scalar::conj(self)
    }

    fn inv(&self) -> Option<Scalar> {
        Scalar::inv(self)
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Scalar) {
        *self = &*self + other;
    }

    fn mul_d_pow(&self, _: &(), k: i64) -> Scalar {
        Scalar::mul_d_pow(self, k)
    }
}

/// Evaluation point for the floating-point engine: `d = e^{2πiθ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericCtx<T> {
    pub theta: T,
}

impl<T: Float + FloatConst> NumericCtx<T> {
    pub fn new(theta: T) -> Self {
        NumericCtx { theta }
    }

    /// `d` itself.
    pub fn d(&self) -> Complex<T> {
        Complex::from_polar(T::one(), (T::one() + T::one()) * T::PI() * self.theta)
    }
}

impl<T> Coeff for Complex<T>
where
    T: Float + FloatConst + Debug + Send + Sync,
{
    type Ctx = NumericCtx<T>;

    fn d_pow(ctx: &NumericCtx<T>, k: i64) -> Self {
        let two_pi = (T::one() + T::one()) * T::PI();
        let k = T::from(k).expect("exponent fits the float type");
        Complex::from_polar(T::one(), two_pi * ctx.theta * k)
    }

    fn sqrt3(_: &NumericCtx<T>) -> Self {
        Complex::new(T::from(3).unwrap().sqrt(), T::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(T::from(num).unwrap() / T::from(den).unwrap(), T::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Complex::inv(self))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = *self + *other;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn numeric_d_powers_compose() {
        let ctx = NumericCtx::new(0.3_f64);
        let a = Complex64::d_pow(&ctx, 3);
        let b = Complex64::d_pow(&ctx, -1);
        let c = Complex64::d_pow(&ctx, 2);
        assert!((a * b - c).norm() < 1e-14);
    }

    #[test]
    fn exact_and_numeric_agree_on_d_pow() {
        let ctx = NumericCtx::new(0.3_f64);
        let exact = Scalar::d_pow(5).eval_numeric(0.3).unwrap();
        assert!((exact - Complex64::d_pow(&ctx, 5)).norm() < 1e-12);
    }

    #[test]
    fn single_precision_is_supported() {
        let ctx = NumericCtx::new(0.25_f32);
        let i = Complex::<f32>::d_pow(&ctx, 1);
        assert!((i - Complex::new(0.0, 1.0)).norm() < 1e-6);
    }
}
