//! Exact computation in the free product of two noncommutative tori
//! `u_i v_i = d v_i u_i` (i = 1, 2), with `d` a formal unit.
//!
//! The coefficient field is Q(√3)(d) ([`Scalar`]); the same vector and
//! multiplication code also runs over complex floats with `d = e^{2πiθ}`.

pub mod algebra;
pub mod basis;
pub mod coeff;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod vector;
pub mod word;

use num_complex::{Complex32, Complex64};

pub use algebra::Algebra;
pub use coeff::{Coeff, NumericCtx};
pub use field::{FieldError, LaurentPoly, QSqrt3, Scalar};
pub use vector::Vector;
pub use word::{Block, Letter, ScaledWord, Word, WordClass};

pub type ExactVector = Vector<Scalar>;
pub type ExactAlgebra = Algebra<Scalar>;
pub type NumericVector = Vector<Complex64>;
pub type NumericAlgebra = Algebra<Complex64>;
pub type NumericAlgebra32 = Algebra<Complex32>;

/// Default evaluation angle: the golden-ratio conjugate `(√5 − 1)/2`.
pub fn default_theta() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

impl NumericAlgebra {
    pub fn at_theta(theta: f64) -> Self {
        Algebra::new(NumericCtx::new(theta))
    }
}

impl ExactAlgebra {
    pub fn exact() -> Self {
        Algebra::new(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("vector is not supported in a single word length")]
    MixedLength,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("refined class needs l >= 1")]
    UndefinedClass,
    #[error("vector has a component in A (trace or chi part): {0}")]
    NotOrthogonalToA(String),
    #[error("vector is not in the truncated span; residual norm^2 = {residual_norm_sq}")]
    NotInSpan { residual_norm_sq: f64 },
}
