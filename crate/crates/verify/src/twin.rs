//! A coefficient that carries an exact value and an independent float
//! recomputation of it side by side.
//!
//! Every check runs over [`Twin`]: the exact part decides pass/fail, and the
//! float part, computed by the same algorithm in complex arithmetic at
//! `d = e^{2πiθ}`, is compared against the evaluation of the exact part.

use std::ops::{Add, Mul, Neg, Sub};

use nctorus_core::{Coeff, ExactVector, NumericCtx, Scalar, Vector};
use num_complex::Complex64;
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct Twin {
    pub exact: Scalar,
    pub approx: Complex64,
}

pub type TwinVector = Vector<Twin>;

impl Twin {
    pub fn new(exact: Scalar, approx: Complex64) -> Twin {
        Twin { exact, approx }
    }

    /// Lifts an exact scalar; the float side is its evaluation at `θ`.
    pub fn lift(theta: f64, s: &Scalar) -> Twin {
        let approx = s.eval_numeric(theta).expect("d is not a pole at an irrational angle");
        Twin::new(s.clone(), approx)
    }

    /// `|eval(exact) − approx| / max(1, |eval(exact)|)`.
    pub fn deviation(&self, theta: f64) -> f64 {
        match self.exact.eval_numeric(theta) {
            Ok(e) => (e - self.approx).norm() / e.norm().max(1.0),
            Err(_) => f64::INFINITY,
        }
    }
}

impl PartialEq for Twin {
    fn eq(&self, other: &Twin) -> bool {
        self.exact == other.exact
    }
}

impl Zero for Twin {
    fn zero() -> Twin {
        Twin::new(Scalar::zero(), Complex64::zero())
    }
    fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }
}

impl One for Twin {
    fn one() -> Twin {
        Twin::new(Scalar::one(), Complex64::one())
    }
}

impl Add for Twin {
    type Output = Twin;
    fn add(self, rhs: Twin) -> Twin {
        Twin::new(&self.exact + &rhs.exact, self.approx + rhs.approx)
    }
}

impl Sub for Twin {
    type Output = Twin;
    fn sub(self, rhs: Twin) -> Twin {
        Twin::new(&self.exact - &rhs.exact, self.approx - rhs.approx)
    }
}

impl Mul for Twin {
    type Output = Twin;
    fn mul(self, rhs: Twin) -> Twin {
        self.mul_ref(&rhs)
    }
}

impl Neg for Twin {
    type Output = Twin;
    fn neg(self) -> Twin {
        Twin::new(-self.exact, -self.approx)
    }
}

impl Coeff for Twin {
    type Ctx = NumericCtx<f64>;

    fn d_pow(ctx: &NumericCtx<f64>, k: i64) -> Twin {
        Twin::new(Scalar::d_pow(k), Complex64::d_pow(ctx, k))
    }

    fn sqrt3(ctx: &NumericCtx<f64>) -> Twin {
        Twin::new(Scalar::sqrt3(), Complex64::sqrt3(ctx))
    }

    fn from_ratio(num: i64, den: i64) -> Twin {
        Twin::new(Scalar::from_ratio(num, den), Complex64::from_ratio(num, den))
    }

    fn conj(&self) -> Twin {
        Twin::new(self.exact.conj(), self.approx.conj())
    }

    fn inv(&self) -> Option<Twin> {
        let e = self.exact.inv()?;
        Some(Twin::new(e, Complex64::new(1.0, 0.0) / self.approx))
    }

    fn mul_ref(&self, other: &Twin) -> Twin {
        Twin::new(&self.exact * &other.exact, self.approx * other.approx)
    }

    fn add_assign_ref(&mut self, other: &Twin) {
        self.exact = &self.exact + &other.exact;
        self.approx += other.approx;
    }

    fn mul_d_pow(&self, ctx: &NumericCtx<f64>, k: i64) -> Twin {
        if k == 0 {
            return self.clone();
        }
        Twin::new(self.exact.mul_d_pow(k), self.approx * Complex64::d_pow(ctx, k))
    }
}

/// Lifts an exact vector coefficientwise.
pub fn lift_vector(theta: f64, v: &ExactVector) -> TwinVector {
    v.map(|c| Twin::lift(theta, c))
}

/// The exact side of a twin vector.
pub fn exact_part(v: &TwinVector) -> ExactVector {
    v.map(|c| c.exact.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nctorus_core::Algebra;

    #[test]
    fn float_side_tracks_exact_side() {
        let theta = nctorus_core::default_theta();
        let alg: Algebra<Twin> = Algebra::new(NumericCtx::new(theta));
        let x = alg.mul_all(&[&alg.chi(2), &alg.chi_tilde(), &alg.chi(1)]);
        let worst = x.iter().map(|(_, c)| c.deviation(theta)).fold(0.0, f64::max);
        assert!(worst < 1e-12);
        // τ(χ_2 (χ_2 + 4)) / √3 = 12/√3
        assert_eq!(x.trace().exact, &Scalar::from_int(12) * &Scalar::sqrt3().inv().unwrap());
    }

    #[test]
    fn equality_is_exact_only() {
        let a = Twin::new(Scalar::one(), Complex64::new(1.0, 0.0));
        let b = Twin::new(Scalar::one(), Complex64::new(1.5, 0.0));
        assert_eq!(a, b);
        assert!(b.deviation(0.3) > 0.4);
    }
}
