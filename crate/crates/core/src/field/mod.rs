//! The coefficient field K = Q(√3)(d).

mod laurent;
mod qsqrt3;
mod rat;
mod scalar;

pub use laurent::LaurentPoly;
pub use qsqrt3::QSqrt3;
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at theta = {theta}")]
    Pole { theta: f64 },
}
