//! Finitely supported vectors on the word basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::coeff::Coeff;
use crate::word::{Word, WordClass};

/// Sparse vector `Σ c_w · w` with no stored zero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Vector<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Coeff> Default for Vector<S> {
    fn default() -> Self {
        Vector::zero()
    }
}

impl<S: Coeff> Vector<S> {
    pub fn zero() -> Self {
        Vector {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(S::one(), w)
    }

    pub fn monomial(c: S, w: Word) -> Self {
        let mut v = Self::zero();
        if !c.is_negligible() {
            v.terms.insert(w, c);
        }
        v
    }

    pub fn identity() -> Self {
        Self::from_word(Word::identity())
    }

    /// Sums repeated words.
    pub fn from_terms<I: IntoIterator<Item = (Word, S)>>(iter: I) -> Self {
        let mut acc: HashMap<Word, S> = HashMap::new();
        for (w, c) in iter {
            accumulate(&mut acc, w, &c);
        }
        Self::from_map(acc)
    }

    pub(crate) fn from_map(map: HashMap<Word, S>) -> Self {
        Vector {
            terms: map.into_iter().filter(|(_, c)| !c.is_negligible()).collect(),
        }
    }

    /// Builds from distinct words; the caller guarantees no repeats.
    pub(crate) fn from_distinct<I: IntoIterator<Item = (Word, S)>>(iter: I) -> Self {
        Vector {
            terms: iter.into_iter().filter(|(_, c)| !c.is_negligible()).collect(),
        }
    }

    pub fn words<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        Self::from_terms(iter.into_iter().map(|w| (w, S::one())))
    }

    pub fn get(&self, w: &Word) -> Option<&S> {
        self.terms.get(w)
    }

    pub fn coeff(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&S::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-S::one(), other);
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_negligible() {
            return Self::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x.mul_ref(c)))
                .filter(|(_, x)| !x.is_negligible())
                .collect(),
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        if c.is_negligible() {
            return;
        }
        let one = c.is_one();
        for (w, x) in &other.terms {
            let t = if one { x.clone() } else { x.mul_ref(c) };
            match self.terms.get_mut(w) {
                Some(y) => {
                    y.add_assign_ref(&t);
                    if y.is_negligible() {
                        self.terms.remove(w);
                    }
                }
                None => {
                    if !t.is_negligible() {
                        self.terms.insert(w.clone(), t);
                    }
                }
            }
        }
    }

    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), f(c)))
                .filter(|(_, c)| !c.is_negligible())
                .collect(),
        }
    }

    /// Coefficient of the identity word.
    pub fn trace(&self) -> S {
        self.coeff(&Word::identity())
    }

    /// `⟨self, other⟩ = Σ_w conj(other_w) · self_w` — linear in the first slot.
    pub fn inner(&self, other: &Self) -> S {
        let (small, large, swap) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = S::zero();
        for (w, a) in &small.terms {
            if let Some(b) = large.terms.get(w) {
                let t = if swap { b.mul_ref(&a.conj()) } else { a.mul_ref(&b.conj()) };
                acc.add_assign_ref(&t);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self)
    }

    /// `q_l`: restriction to words of length `l`.
    pub fn project_length(&self, l: usize) -> Self {
        self.filter(|w| w.len() == l)
    }

    /// Restriction to one coarse word class at length `l`.
    pub fn project_coarse(&self, l: usize, class: WordClass) -> Self {
        self.filter(|w| w.len() == l && w.class() == class)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The single word length of the support, if there is exactly one.
    pub fn homogeneous_length(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn lengths(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.terms.keys().map(Word::len).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Exact linear combination `Σ scalars[i] · vectors[i]`.
pub fn combine<S: Coeff>(scalars: &[S], vectors: &[Vector<S>]) -> Vector<S> {
    assert_eq!(scalars.len(), vectors.len(), "combine: length mismatch");
    let mut acc: HashMap<Word, S> = HashMap::new();
    for (c, v) in scalars.iter().zip(vectors) {
        if c.is_negligible() {
            continue;
        }
        for (w, x) in v.iter() {
            accumulate(&mut acc, w.clone(), &x.mul_ref(c));
        }
    }
    Vector::from_map(acc)
}

pub(crate) fn accumulate<S: Coeff>(acc: &mut HashMap<Word, S>, w: Word, c: &S) {
    match acc.get_mut(&w) {
        Some(x) => x.add_assign_ref(c),
        None => {
            acc.insert(w, c.clone());
        }
    }
}

/// Prints `<scalar> * <word> + ...`, parenthesizing multi-term scalars.
impl<S: Coeff + fmt::Display> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let s = c.to_string();
            if s.contains(' ') && !(s.starts_with('(') && s.ends_with(')') && !s.contains(") / (")) {
                write!(f, "({s}) * {w}")?;
            } else {
                write!(f, "{s} * {w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    word: String,
    coeff: &'a str,
}

/// JSON form: list of `{word, coeff}` in word order.
impl<S: Coeff + fmt::Display> Serialize for Vector<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            let coeff = c.to_string();
            seq.serialize_element(&Entry {
                word: w.to_string(),
                coeff: &coeff,
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::field::Scalar;

    #[test]
    fn cancellation_drops_terms() {
        let u1 = Word::u(1, 1);
        let v = combine(
            &[Scalar::one(), -Scalar::one()],
            &[Vector::from_word(u1.clone()), Vector::from_word(u1)],
        );
        assert!(v.is_zero());
    }

    #[test]
    fn inner_is_sesquilinear() {
        let x = Vector::monomial(Scalar::d(), Word::u(1, 1));
        let y = Vector::monomial(Scalar::d_pow(2), Word::u(1, 1));
        assert_eq!(x.inner(&y), Scalar::d_pow(-1));
        assert_eq!(y.inner(&x), Scalar::d());
    }

    #[test]
    fn display_parenthesizes_sums() {
        let c = Scalar::one() + Scalar::d();
        let v: Vector<Scalar> = Vector::monomial(c, Word::u(1, 2)).add(&Vector::from_word(Word::v(2, 1)));
        assert_eq!(v.to_string(), "1 * v2 + (d + 1) * u1^2");
    }
}
