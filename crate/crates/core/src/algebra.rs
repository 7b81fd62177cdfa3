//! Multiplication in the algebraic free product and the χ / ξ_{r,s} constructions.

use std::collections::HashMap;

use crate::coeff::Coeff;
use crate::vector::{accumulate, Vector};
use crate::word::{u_words, Word};
use crate::CoreError;

/// The u-letters `u1, u1⁻¹, u2, u2⁻¹` as `(factor, sign)`.
pub const U_LETTERS: [(u8, i32); 4] = [(1, 1), (1, -1), (2, 1), (2, -1)];

/// Multiplication context; carries the meaning of `d` for the coefficient type.
#[derive(Clone, Debug)]
pub struct Algebra<S: Coeff> {
    pub ctx: S::Ctx,
}

impl<S: Coeff> Algebra<S> {
    pub fn new(ctx: S::Ctx) -> Self {
        Algebra { ctx }
    }

    pub fn d_pow(&self, k: i64) -> S {
        S::d_pow(&self.ctx, k)
    }

    pub fn sqrt3(&self) -> S {
        S::sqrt3(&self.ctx)
    }

    /// The word product as a vector `d^phase · w`.
    pub fn word_product(&self, x: &Word, y: &Word) -> Vector<S> {
        let p = x.multiply(y);
        Vector::monomial(self.d_pow(p.phase), p.word)
    }

    pub fn mul_vec(&self, x: &Vector<S>, y: &Vector<S>) -> Vector<S> {
        let mut acc: HashMap<Word, S> = HashMap::with_capacity(x.support_len() * y.support_len());
        for (wx, cx) in x.iter() {
            for (wy, cy) in y.iter() {
                let p = wx.multiply(wy);
                let c = cx.mul_ref(cy).mul_d_pow(&self.ctx, p.phase);
                accumulate(&mut acc, p.word, &c);
            }
        }
        Vector::from_map(acc)
    }

    /// Product of several vectors, left to right.
    pub fn mul_all(&self, factors: &[&Vector<S>]) -> Vector<S> {
        let mut acc = Vector::identity();
        for f in factors {
            acc = self.mul_vec(&acc, f);
        }
        acc
    }

    /// `x*`: conjugate coefficients, adjoint words.
    pub fn adjoint(&self, x: &Vector<S>) -> Vector<S> {
        Vector::from_distinct(x.iter().map(|(w, c)| {
            let a = w.adjoint();
            (a.word, c.conj().mul_d_pow(&self.ctx, a.phase))
        }))
    }

    /// `τ(y* x)`, the trace form; agrees with [`Vector::inner`] on the word basis.
    pub fn trace_inner(&self, x: &Vector<S>, y: &Vector<S>) -> S {
        self.mul_vec(&self.adjoint(y), x).trace()
    }

    /// `χ_l`: sum of all u-words of length `l`; `χ_0` is the identity.
    pub fn chi(&self, l: usize) -> Vector<S> {
        Vector::words(u_words(l))
    }

    /// `χ̃_1 = χ_1 / √3`.
    pub fn chi_tilde(&self) -> Vector<S> {
        let s = self.sqrt3().inv().expect("sqrt3 is invertible");
        self.chi(1).scale(&s)
    }

    /// Top-length part of `χ_1 · x`.
    pub fn top_left(&self, x: &Vector<S>) -> Vector<S> {
        let mut acc: HashMap<Word, S> = HashMap::with_capacity(x.support_len() * 3);
        for (w, c) in x.iter() {
            for (f, s) in U_LETTERS {
                if let Some(t) = w.left_u_top(f, s) {
                    accumulate(&mut acc, t, c);
                }
            }
        }
        Vector::from_map(acc)
    }

    /// Top-length part of `x · χ_1`.
    pub fn top_right(&self, x: &Vector<S>) -> Vector<S> {
        let mut acc: HashMap<Word, S> = HashMap::with_capacity(x.support_len() * 3);
        for (w, c) in x.iter() {
            for (f, s) in U_LETTERS {
                if let Some((ph, t)) = w.right_u_top(f, s) {
                    accumulate(&mut acc, t, &c.mul_d_pow(&self.ctx, ph));
                }
            }
        }
        Vector::from_map(acc)
    }

    /// `ξ_{r,s} = q_{l+r+s}(χ_r ξ χ_s)` for `ξ` supported in a single length.
    /// Negative `r` or `s` give the zero vector.
    pub fn xi_rs(&self, xi: &Vector<S>, r: i64, s: i64) -> Result<Vector<S>, CoreError> {
        if !xi.is_zero() && xi.homogeneous_length().is_none() {
            return Err(CoreError::MixedLength);
        }
        if r < 0 || s < 0 {
            return Ok(Vector::zero());
        }
        let mut out = xi.clone();
        for _ in 0..r {
            out = self.top_left(&out);
        }
        for _ in 0..s {
            out = self.top_right(&out);
        }
        Ok(out)
    }

    /// All `ξ_{r,s}` for `0 ≤ r ≤ rmax`, `0 ≤ s ≤ smax`, indexed `[r][s]`.
    pub fn xi_grid(&self, xi: &Vector<S>, rmax: usize, smax: usize) -> Result<Vec<Vec<Vector<S>>>, CoreError> {
        if !xi.is_zero() && xi.homogeneous_length().is_none() {
            return Err(CoreError::MixedLength);
        }
        let mut grid = Vec::with_capacity(rmax + 1);
        let mut left = xi.clone();
        for r in 0..=rmax {
            if r > 0 {
                left = self.top_left(&left);
            }
            let mut row = Vec::with_capacity(smax + 1);
            let mut cur = left.clone();
            for s in 0..=smax {
                if s > 0 {
                    cur = self.top_right(&cur);
                }
                row.push(cur.clone());
            }
            grid.push(row);
        }
        Ok(grid)
    }
}

impl<S: Coeff<Ctx = ()>> Default for Algebra<S> {
    fn default() -> Self {
        Algebra { ctx: () }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;

    fn alg() -> Algebra<Scalar> {
        Algebra::default()
    }

    #[test]
    fn chi_one_squared() {
        let a = alg();
        let c1 = a.chi(1);
        let lhs = a.mul_vec(&c1, &c1);
        let rhs = a.chi(2).add(&Vector::identity().scale(&Scalar::from_int(4)));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.trace(), Scalar::from_int(4));
    }

    #[test]
    fn chi_recursion_small() {
        let a = alg();
        let lhs = a.mul_vec(&a.chi(2), &a.chi(1));
        let rhs = a.chi(3).add(&a.chi(1).scale(&Scalar::from_int(3)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn xi_rs_matches_full_product() {
        let a = alg();
        let xi = Vector::from_word(Word::u(1, 1)).sub(&Vector::from_word(Word::u(1, -1)));
        for (r, s) in [(1, 1), (2, 0), (0, 2), (2, 1)] {
            let full = a.mul_all(&[&a.chi(r), &xi, &a.chi(s)]).project_length(1 + r + s);
            assert_eq!(a.xi_rs(&xi, r as i64, s as i64).unwrap(), full);
        }
        let x11 = a.xi_rs(&xi, 1, 1).unwrap();
        assert_eq!(x11.norm_sq(), Scalar::from_int(18));
    }

    #[test]
    fn mixed_length_is_rejected() {
        let a = alg();
        let x = Vector::from_word(Word::u(1, 1)).add(&Vector::identity());
        assert_eq!(a.xi_rs(&x, 1, 0), Err(CoreError::MixedLength));
    }

    #[test]
    fn left_chi_on_u1() {
        let a = alg();
        let p = a.mul_vec(&a.chi(1), &Vector::from_word(Word::u(1, 1)));
        let expected = Vector::words([
            Word::u(1, 2),
            Word::from_blocks([crate::word::Block::new(2, 1, 0), crate::word::Block::new(1, 1, 0)]),
            Word::from_blocks([crate::word::Block::new(2, -1, 0), crate::word::Block::new(1, 1, 0)]),
        ]);
        assert_eq!(p.project_length(2), expected);
        assert_eq!(p.project_length(0), Vector::identity());
    }
}
