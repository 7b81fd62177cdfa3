//! Completely reduced words in the free product of two d-deformed tori.
//!
//! Inside one factor the relation is `u v = d v u`. A block is the torus
//! monomial `u^k v^l` written u-before-v; a word alternates factors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::field::Scalar;

/// Torus generator within one factor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Gen {
    U,
    V,
}

/// One letter `u_i^e` or `v_i^e` of an unreduced product.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub factor: u8,
    pub gen: Gen,
    pub exp: i32,
}

impl Letter {
    pub fn u(factor: u8, exp: i32) -> Letter {
        Letter { factor, gen: Gen::U, exp }
    }

    pub fn v(factor: u8, exp: i32) -> Letter {
        Letter { factor, gen: Gen::V, exp }
    }

    fn as_block(self) -> Option<Block> {
        if self.exp == 0 {
            return None;
        }
        Some(match self.gen {
            Gen::U => Block::new(self.factor, self.exp, 0),
            Gen::V => Block::new(self.factor, 0, self.exp),
        })
    }
}

/// Syllable `u_factor^k v_factor^l` with `(k, l) ≠ (0, 0)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Block {
    pub factor: u8,
    pub k: i32,
    pub l: i32,
}

impl Block {
    pub fn new(factor: u8, k: i32, l: i32) -> Block {
        debug_assert!(factor == 1 || factor == 2);
        debug_assert!(k != 0 || l != 0);
        Block { factor, k, l }
    }

    pub fn len(&self) -> usize {
        (self.k.unsigned_abs() + self.l.unsigned_abs()) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0 && self.l == 0
    }
}

/// Coarse grading by the number of blocks carrying a nonzero v-exponent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum WordClass {
    /// The identity word, which sits outside the three classes.
    Scalar,
    Zero,
    One,
    Two,
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WordClass::Scalar => "scalar",
            WordClass::Zero => "0",
            WordClass::One => "1",
            WordClass::Two => "2",
        };
        f.write_str(s)
    }
}

type Blocks = SmallVec<[Block; 6]>;

/// Completely reduced word. The empty word is the identity.
///
/// Ordered by length, then lexicographically on `(factor, k, l)` block tuples.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    blocks: Blocks,
}

/// `d^phase · word`; every product of words has this shape.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScaledWord {
    pub phase: i64,
    pub word: Word,
}

impl ScaledWord {
    pub fn coeff(&self) -> Scalar {
        Scalar::d_pow(self.phase)
    }
}

impl fmt::Display for ScaledWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.coeff(), self.word)
    }
}

/// Appends `b` to a reduced block list, merging across equal factors.
/// Annihilated blocks expose the previous block, which then merges with the
/// next incoming block of the other operand; callers feeding blocks one at a
/// time get the cascade for free.
fn push_block(blocks: &mut Blocks, b: Block, phase: &mut i64) {
    match blocks.last_mut() {
        Some(last) if last.factor == b.factor => {
            // u^k v^l · u^k' v^l' = d^{-l k'} u^{k+k'} v^{l+l'}
            *phase -= last.l as i64 * b.k as i64;
            last.k += b.k;
            last.l += b.l;
            if last.is_empty() {
                blocks.pop();
            }
        }
        _ => blocks.push(b),
    }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a word from blocks that already form a reduced alternating sequence.
    pub fn from_blocks(blocks: impl IntoIterator<Item = Block>) -> Word {
        let blocks: Blocks = blocks.into_iter().collect();
        debug_assert!(blocks.windows(2).all(|w| w[0].factor != w[1].factor));
        debug_assert!(blocks.iter().all(|b| !b.is_empty()));
        Word { blocks }
    }

    pub fn u(factor: u8, k: i32) -> Word {
        Word::from_blocks([Block::new(factor, k, 0)])
    }

    pub fn v(factor: u8, l: i32) -> Word {
        Word::from_blocks([Block::new(factor, 0, l)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Block::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn grade(&self) -> (usize, WordClass) {
        let nv = self.blocks.iter().filter(|b| b.l != 0).count();
        let class = match (self.blocks.is_empty(), nv) {
            (true, _) => WordClass::Scalar,
            (false, 0) => WordClass::Zero,
            (false, 1) => WordClass::One,
            _ => WordClass::Two,
        };
        (self.len(), class)
    }

    pub fn class(&self) -> WordClass {
        self.grade().1
    }

    /// Total u- and v-letter counts `(Σ|k|, Σ|l|)`.
    pub fn uv_exponent_counts(&self) -> (usize, usize) {
        self.blocks.iter().fold((0, 0), |(u, v), b| {
            (u + b.k.unsigned_abs() as usize, v + b.l.unsigned_abs() as usize)
        })
    }

    pub fn multiply(&self, other: &Word) -> ScaledWord {
        let mut blocks = self.blocks.clone();
        let mut phase = 0;
        for b in &other.blocks {
            push_block(&mut blocks, *b, &mut phase);
        }
        ScaledWord {
            phase,
            word: Word { blocks },
        }
    }

    /// `(phase, w*)` with `w* · w = 1`: the adjoint of `w` is `d^phase · w*`.
    pub fn adjoint(&self) -> ScaledWord {
        // (u^k v^l)* = v^{-l} u^{-k} = d^{-kl} u^{-k} v^{-l}
        let phase = self.blocks.iter().map(|b| -(b.k as i64) * b.l as i64).sum();
        let blocks = self
            .blocks
            .iter()
            .rev()
            .map(|b| Block::new(b.factor, -b.k, -b.l))
            .collect();
        ScaledWord {
            phase,
            word: Word { blocks },
        }
    }

    /// Product `u_factor^{sign} · self`, if it is one letter longer.
    /// Left multiplication by a u-letter never produces a phase.
    pub fn left_u_top(&self, factor: u8, sign: i32) -> Option<Word> {
        let mut blocks = Blocks::with_capacity(self.blocks.len() + 1);
        match self.blocks.first() {
            Some(first) if first.factor == factor => {
                if first.k != 0 && first.k.signum() != sign {
                    return None;
                }
                blocks.push(Block::new(factor, first.k + sign, first.l));
                blocks.extend_from_slice(&self.blocks[1..]);
            }
            _ => {
                blocks.push(Block::new(factor, sign, 0));
                blocks.extend_from_slice(&self.blocks);
            }
        }
        Some(Word { blocks })
    }

    /// Product `self · u_factor^{sign}` as `(phase, word)`, if one letter longer.
    pub fn right_u_top(&self, factor: u8, sign: i32) -> Option<(i64, Word)> {
        let mut blocks = self.blocks.clone();
        match blocks.last_mut() {
            Some(last) if last.factor == factor => {
                if last.k != 0 && last.k.signum() != sign {
                    return None;
                }
                last.k += sign;
                Some((-(last.l as i64) * sign as i64, Word { blocks }))
            }
            _ => {
                blocks.push(Block::new(factor, sign, 0));
                Some((0, Word { blocks }))
            }
        }
    }

    /// Letter expansion `u^k v^l` per block, in order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let su = b.k.signum();
            out.extend((0..b.k.abs()).map(|_| Letter::u(b.factor, su)));
            let sv = b.l.signum();
            out.extend((0..b.l.abs()).map(|_| Letter::v(b.factor, sv)));
        }
        out
    }

    pub fn first_block(&self) -> Option<&Block> {
        self.blocks.first()
    }

    pub fn last_block(&self) -> Option<&Block> {
        self.blocks.last()
    }
}

/// Normal form of a product of letters.
pub fn reduce_letters(letters: &[Letter]) -> ScaledWord {
    let mut blocks = Blocks::new();
    let mut phase = 0;
    for letter in letters {
        if let Some(b) = letter.as_block() {
            push_block(&mut blocks, b, &mut phase);
        }
    }
    ScaledWord {
        phase,
        word: Word { blocks },
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.blocks.as_slice().cmp(other.blocks.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, gen: char, factor: u8, e: i32) -> fmt::Result {
    if e == 1 {
        write!(f, "{gen}{factor}")
    } else {
        write!(f, "{gen}{factor}^{e}")
    }
}

/// Word literal grammar: `u1^2 v1^-1 u2`; the identity prints as `<identity>`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("<identity>");
        }
        let mut first = true;
        for b in &self.blocks {
            for (gen, e) in [('u', b.k), ('v', b.l)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                fmt_power(f, gen, b.factor, e)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn blocks_of_len(factor: u8, m: usize) -> impl Iterator<Item = Block> {
    let m = m as i32;
    (-m..=m).flat_map(move |k| {
        let rest = m - k.abs();
        let ls: Vec<i32> = if rest == 0 { vec![0] } else { vec![-rest, rest] };
        ls.into_iter()
            .filter(move |&l| k != 0 || l != 0)
            .map(move |l| Block::new(factor, k, l))
    })
}

fn extend_words(prefix: &mut Blocks, remaining: usize, out: &mut Vec<Word>) {
    if remaining == 0 {
        out.push(Word {
            blocks: prefix.clone(),
        });
        return;
    }
    let factors: &[u8] = match prefix.last() {
        Some(b) if b.factor == 1 => &[2],
        Some(_) => &[1],
        None => &[1, 2],
    };
    for &factor in factors {
        for m in 1..=remaining {
            for b in blocks_of_len(factor, m) {
                prefix.push(b);
                extend_words(prefix, remaining - m, out);
                prefix.pop();
            }
        }
    }
}

/// All completely reduced words of length `n`, sorted.
pub fn words_of_length(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    extend_words(&mut Blocks::new(), n, &mut out);
    out.sort();
    out
}

/// Words of length `n` using only u-letters, sorted.
pub fn u_words(n: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Word::identity()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * 3 + 1);
        for w in &out {
            for (factor, sign) in [(1, 1), (1, -1), (2, 1), (2, -1)] {
                if let Some((0, x)) = w.right_u_top(factor, sign) {
                    next.push(x);
                }
            }
        }
        out = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent letter-level rewriting: repeatedly apply `v u → d^{-1} u v`
    /// (and the inverse-exponent variants) and cancel adjacent inverse pairs.
    fn rewrite_oracle(mut letters: Vec<Letter>) -> (i64, Vec<Letter>) {
        let mut phase = 0;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < letters.len() {
                let (a, b) = (letters[i], letters[i + 1]);
                if a.factor == b.factor && a.gen == b.gen && a.exp == -b.exp {
                    letters.drain(i..i + 2);
                    changed = true;
                    continue;
                }
                if a.factor == b.factor && a.gen == Gen::V && b.gen == Gen::U {
                    // v^a u^b = d^{-ab} u^b v^a
                    phase -= a.exp as i64 * b.exp as i64;
                    letters.swap(i, i + 1);
                    changed = true;
                }
                i += 1;
            }
            if !changed {
                return (phase, letters);
            }
        }
    }

    fn w(spec: &[(u8, i32, i32)]) -> Word {
        Word::from_blocks(spec.iter().map(|&(f, k, l)| Block::new(f, k, l)))
    }

    #[test]
    fn commutation_phase() {
        let r = reduce_letters(&[Letter::v(1, 1), Letter::u(1, 1)]);
        assert_eq!(r.phase, -1);
        assert_eq!(r.word, w(&[(1, 1, 1)]));
    }

    #[test]
    fn letter_reduction_matches_rewriting() {
        let letters = vec![Letter::u(1, 1), Letter::v(1, 1), Letter::u(1, 1), Letter::v(1, -1)];
        let r = reduce_letters(&letters);
        let (phase, rest) = rewrite_oracle(letters);
        assert_eq!(r.phase, phase);
        assert_eq!(r.phase, -1);
        assert_eq!(reduce_letters(&rest).word, r.word);
        assert_eq!(r.word, Word::u(1, 2));
    }

    #[test]
    fn block_product_and_cascade() {
        let x = w(&[(1, 1, 1)]);
        let y = w(&[(1, 1, -1)]);
        let p = x.multiply(&y);
        assert_eq!((p.phase, p.word), (-1, Word::u(1, 2)));

        // u1 u2 · u2^-1 u1^-1 collapses completely
        let a = w(&[(1, 1, 0), (2, 1, 0)]);
        let b = w(&[(2, -1, 0), (1, -1, 0)]);
        assert!(a.multiply(&b).word.is_identity());
    }

    #[test]
    fn adjoint_of_mixed_block() {
        let a = w(&[(1, 1, 1)]).adjoint();
        assert_eq!(a.phase, -1);
        assert_eq!(a.word, w(&[(1, -1, -1)]));
        // The adjoint is a left inverse up to its phase.
        let p = a.word.multiply(&w(&[(1, 1, 1)]));
        assert!(p.word.is_identity());
        assert_eq!(a.phase + p.phase, 0);
    }

    #[test]
    fn word_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| words_of_length(n).len()).collect();
        assert_eq!(counts, vec![8, 48, 280, 1632]);
        for n in 1..=5 {
            assert_eq!(u_words(n).len(), 4 * 3usize.pow(n as u32 - 1));
        }
    }

    #[test]
    fn grades() {
        assert_eq!(w(&[(1, 1, 0), (2, -1, 0)]).grade(), (2, WordClass::Zero));
        assert_eq!(w(&[(1, 1, 2), (2, 1, 0)]).grade(), (4, WordClass::One));
        assert_eq!(w(&[(1, 0, 1), (2, 1, 1)]).grade(), (3, WordClass::Two));
        assert_eq!(Word::identity().grade(), (0, WordClass::Scalar));
    }

    #[test]
    fn exponent_ratio() {
        let x = w(&[(1, 2, 3), (2, 2, 3)]);
        assert_eq!(x.uv_exponent_counts(), (4, 6));
        assert_eq!(w(&[(1, 1, 0), (2, 0, -1)]).uv_exponent_counts(), (1, 1));
    }

    #[test]
    fn display() {
        assert_eq!(w(&[(1, 2, -1), (2, 1, 0)]).to_string(), "u1^2 v1^-1 u2");
        assert_eq!(Word::identity().to_string(), "<identity>");
    }

    #[test]
    fn top_letter_products_agree_with_multiply() {
        for x in words_of_length(3) {
            for (f, s) in [(1u8, 1), (1, -1), (2, 1), (2, -1)] {
                let full = Word::u(f, s).multiply(&x);
                match x.left_u_top(f, s) {
                    Some(top) => assert_eq!((full.phase, full.word), (0, top)),
                    None => assert!(full.word.len() < 4),
                }
                let full = x.multiply(&Word::u(f, s));
                match x.right_u_top(f, s) {
                    Some((ph, top)) => assert_eq!((full.phase, full.word), (ph, top)),
                    None => assert!(full.word.len() < 4),
                }
            }
        }
    }
}
