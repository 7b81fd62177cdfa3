use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::QSqrt3;

/// Laurent polynomial in the formal unit `d` with coefficients in Q(√3).
///
/// Terms are kept sorted by ascending exponent with no zero coefficients, so
/// the empty term list is the zero polynomial and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, QSqrt3)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(QSqrt3::one())
    }

    pub fn constant(c: QSqrt3) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: QSqrt3, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: vec![(exp, c)],
        }
    }

    /// Builds from arbitrary (exponent, coefficient) pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, QSqrt3)>>(iter: I) -> Self {
        let mut terms: Vec<(i64, QSqrt3)> = iter.into_iter().collect();
        terms.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<(i64, QSqrt3)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: merged }
    }

    pub fn terms(&self) -> &[(i64, QSqrt3)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Coefficient of the highest power of `d`.
    pub fn leading(&self) -> Option<&QSqrt3> {
        self.terms.last().map(|(_, c)| c)
    }

    /// Single term `c·d^e`, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(i64, &QSqrt3)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((*e, c)),
            _ => None,
        }
    }

    /// Multiplies by `d^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn shift_in_place(&mut self, k: i64) {
        for (e, _) in &mut self.terms {
            *e += k;
        }
    }

    pub fn scale(&self, s: &QSqrt3) -> LaurentPoly {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// `d ↦ d⁻¹`; coefficients are real so they are left alone.
    pub fn conj(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.merge(other, true)
    }

    fn merge(&self, other: &LaurentPoly, negate: bool) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (e, c) = &other.terms[j];
                    out.push((*e, if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let (e, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let c = if negate { a - b } else { a + b };
                    if !c.is_zero() {
                        out.push((*e, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LaurentPoly { terms: out }
    }

    /// Adds `c·d^e` in place.
    pub fn add_monomial(&mut self, c: &QSqrt3, e: i64) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(idx) => {
                self.terms[idx].1 += c;
                if self.terms[idx].1.is_zero() {
                    self.terms.remove(idx);
                }
            }
            Err(idx) => self.terms.insert(idx, (e, c.clone())),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((e, c)) = other.as_monomial() {
            return self.scale(c).shift(e);
        }
        if let Some((e, c)) = self.as_monomial() {
            return other.scale(c).shift(e);
        }
        let lo = self.min_exp().unwrap() + other.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + other.max_exp().unwrap();
        let mut dense = vec![QSqrt3::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                dense[(ea + eb - lo) as usize] += &(ca * cb);
            }
        }
        Self::from_dense(dense, lo)
    }

    /// Evaluates at a complex value of `d`, with √3 taken as the positive real root.
    pub fn eval(&self, d: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| d.powi(*e as i32) * c.to_f64())
            .sum()
    }

    /// Sum of absolute values of the coefficients (as floats).
    pub fn l1_norm_f64(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.to_f64().abs()).sum()
    }

    // Dense helpers: ordinary polynomials, index = exponent offset from `lo`.

    pub(crate) fn to_dense(&self) -> (Vec<QSqrt3>, i64) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut dense = vec![QSqrt3::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            dense[(e - lo) as usize] = c.clone();
        }
        (dense, lo)
    }

    pub(crate) fn from_dense(dense: Vec<QSqrt3>, lo: i64) -> LaurentPoly {
        LaurentPoly {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect(),
        }
    }
}

fn trim(p: &mut Vec<QSqrt3>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Division with remainder of ordinary dense polynomials over Q(√3).
pub(crate) fn dense_divrem(num: &[QSqrt3], den: &[QSqrt3]) -> (Vec<QSqrt3>, Vec<QSqrt3>) {
    let mut rem: Vec<QSqrt3> = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    assert!(!den.is_empty(), "polynomial division by zero");
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = den.last().unwrap().inv().expect("nonzero leading coefficient");
    let mut quot = vec![QSqrt3::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() * &lead_inv;
        for (i, c) in den.iter().enumerate() {
            let t = c * &factor;
            rem[i + shift] -= &t;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

/// Monic gcd of two dense polynomials.
pub(crate) fn dense_gcd(a: &[QSqrt3], b: &[QSqrt3]) -> Vec<QSqrt3> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = dense_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last() {
        let inv = lead.inv().unwrap();
        for c in &mut x {
            *c = &*c * &inv;
        }
    }
    x
}

impl LaurentPoly {
    /// Greatest common divisor up to units `c·d^k`, normalized to minimal
    /// exponent 0 and leading coefficient 1.
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.normalized_associate();
        }
        if other.is_zero() {
            return self.normalized_associate();
        }
        if self.num_terms() == 1 || other.num_terms() == 1 {
            return LaurentPoly::one();
        }
        let (a, _) = self.to_dense();
        let (b, _) = other.to_dense();
        LaurentPoly::from_dense(dense_gcd(&a, &b), 0)
    }

    fn normalized_associate(&self) -> LaurentPoly {
        let (mut dense, _) = self.to_dense();
        let inv = dense.last().unwrap().inv().unwrap();
        for c in &mut dense {
            *c = &*c * &inv;
        }
        LaurentPoly::from_dense(dense, 0)
    }

    /// Exact quotient `self / other`; panics on a nonzero remainder.
    pub fn exact_div(&self, other: &LaurentPoly) -> LaurentPoly {
        if let Some((e, c)) = other.as_monomial() {
            return self.scale(&c.inv().unwrap()).shift(-e);
        }
        let (a, lo_a) = self.to_dense();
        let (b, lo_b) = other.to_dense();
        let (q, r) = dense_divrem(&a, &b);
        assert!(r.is_empty(), "inexact Laurent polynomial division");
        LaurentPoly::from_dense(q, lo_a - lo_b)
    }

    /// Quotient if `other` divides `self` exactly.
    pub fn checked_div(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if other.is_zero() {
            return None;
        }
        if let Some((e, c)) = other.as_monomial() {
            return Some(self.scale(&c.inv().unwrap()).shift(-e));
        }
        let (a, lo_a) = self.to_dense();
        let (b, lo_b) = other.to_dense();
        let (q, r) = dense_divrem(&a, &b);
        r.is_empty().then(|| LaurentPoly::from_dense(q, lo_a - lo_b))
    }
}

/// Prints terms by descending exponent, e.g. `d^2 - 3/2*d + (1 + s3)*d^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let term = fmt_term(c, *e);
            if idx == 0 {
                write!(f, "{term}")?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

fn fmt_term(c: &QSqrt3, e: i64) -> String {
    let power = match e {
        1 => "d".to_string(),
        _ => format!("d^{e}"),
    };
    if e == 0 {
        c.to_string()
    } else if c.is_one() {
        power
    } else if (-c).is_one() {
        format!("-{power}")
    } else {
        format!("{c}*{power}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, QSqrt3::from_int(c))))
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (d - 1)(d + 2) and (d - 1)(d - 3)
        let a = p(&[(2, 1), (1, 1), (0, -2)]);
        let b = p(&[(2, 1), (1, -4), (0, 3)]);
        assert_eq!(a.gcd(&b), p(&[(1, 1), (0, -1)]));
    }

    #[test]
    fn exact_division_tracks_exponents() {
        let a = p(&[(-1, 1), (1, -1)]); // d^-1 - d
        let b = p(&[(0, 1), (1, 1)]); // 1 + d
        let q = a.exact_div(&b);
        assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn display_descending() {
        let a = LaurentPoly::from_terms([
            (2, QSqrt3::from_int(1)),
            (1, QSqrt3::from_ratio(-3, 2)),
            (-1, QSqrt3::from_int(1) + QSqrt3::sqrt3()),
        ]);
        assert_eq!(a.to_string(), "d^2 - 3/2*d + (1 + s3)*d^-1");
    }
}
