use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

const SMALL_LIMIT: i64 = 1 << 62;

/// Rational number with an `i64` fast path; spills to `BigRational` on overflow.
///
/// Invariant: the `Big` variant is used only when the value does not fit the
/// small representation, so derived structural equality is value equality.
#[derive(Clone, Debug)]
pub(crate) enum Rat {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn fits(x: &BigInt) -> Option<i64> {
    x.to_i64().filter(|v| v.abs() < SMALL_LIMIT)
}

impl Rat {
    pub fn from_int(n: i64) -> Rat {
        Rat::from_big(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn new(num: i64, den: i64) -> Rat {
        Rat::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(q: BigRational) -> Rat {
        match (fits(q.numer()), fits(q.denom())) {
            (Some(n), Some(d)) => Rat::Small(Ratio::new_raw(n, d)),
            _ => Rat::Big(q),
        }
    }

    fn small(r: Ratio<i64>) -> Rat {
        if r.numer().abs() < SMALL_LIMIT && *r.denom() < SMALL_LIMIT {
            Rat::Small(r)
        } else {
            Rat::from_big(to_big(&r))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => to_big(r),
            Rat::Big(q) => q.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_one(),
            Rat::Big(_) => false,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_positive(),
            Rat::Big(q) => q.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_negative(),
            Rat::Big(q) => q.is_negative(),
        }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(b) {
                return Rat::small(c);
            }
        }
        Rat::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(c) = a.checked_sub(b) {
                return Rat::small(c);
            }
        }
        Rat::from_big(self.to_big() - o.to_big())
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(c) = a.checked_mul(b) {
                return Rat::small(c);
            }
        }
        Rat::from_big(self.to_big() * o.to_big())
    }

    pub fn div(&self, o: &Rat) -> Rat {
        self.mul(&o.recip())
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(-r),
            Rat::Big(q) => Rat::Big(-q),
        }
    }

    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(r.recip()),
            Rat::Big(q) => Rat::from_big(q.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Rat::Big(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn denom_is_one(&self) -> bool {
        match self {
            Rat::Small(r) => r.denom().is_one(),
            Rat::Big(q) => q.denom().is_one(),
        }
    }
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Rat::Big(q) => q.hash(state),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_spills_and_returns() {
        let big = Rat::from_int(1 << 61);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rat::Big(_)));
        let back = sq.div(&big);
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(_)));
    }

    #[test]
    fn small_arithmetic_is_reduced() {
        let x = Rat::new(1, 6).add(&Rat::new(1, 3));
        assert_eq!(x, Rat::new(1, 2));
    }
}
