//! Named vector families: χ_l, the S_l generators, orthogonal complements,
//! ξ_{r,s}, the γ-vectors, the W_l^1 decomposition, ξ^{i,l,k}_{r,s}, the
//! subspace L and Riesz expansions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::algebra::Algebra;
use crate::field::{QSqrt3, Scalar};
use crate::linalg::{self, Matrix};
use crate::vector::Vector;
use crate::word::{reduce_letters, u_words, words_of_length, Block, Letter, Word, WordClass};
use crate::{Coeff, CoreError, ExactVector};

/// Refined grading of a length-`l` word space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum ClassKind {
    Zero,
    One,
    Two,
    OneAlpha,
    OneAlpha1,
    OneAlpha2,
    OneBeta,
    /// The four vectors `v_1^{±l}, v_2^{±l}`.
    OneVPowers,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct GradedClass {
    pub l: usize,
    pub class: ClassKind,
}

impl GradedClass {
    pub fn new(l: usize, class: ClassKind) -> Result<GradedClass, CoreError> {
        let refined = !matches!(class, ClassKind::Zero | ClassKind::One | ClassKind::Two);
        if refined && l == 0 {
            return Err(CoreError::UndefinedClass);
        }
        Ok(GradedClass { l, class })
    }

    pub fn coarse(&self) -> WordClass {
        match self.class {
            ClassKind::Zero => WordClass::Zero,
            ClassKind::Two => WordClass::Two,
            _ => WordClass::One,
        }
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.class {
            ClassKind::Zero => "0",
            ClassKind::One => "1",
            ClassKind::Two => "2",
            ClassKind::OneAlpha => "1,alpha",
            ClassKind::OneAlpha1 => "1,alpha,1",
            ClassKind::OneAlpha2 => "1,alpha,2",
            ClassKind::OneBeta => "1,beta",
            ClassKind::OneVPowers => "1,v",
        };
        write!(f, "W_{}^{{{}}}", self.l, c)
    }
}

/// Ordered family of vectors in one graded piece.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisFamily {
    pub label: GradedClass,
    pub members: Vec<ExactVector>,
}

impl BasisFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Index of a Riesz basis family: a ξ_m member or a ξ^{i,l,k} triple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum FamilyIndex {
    Xi(usize),
    Ilk { i: u8, l: i32, k: i32 },
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyIndex::Xi(m) => write!(f, "xi[{m}]"),
            FamilyIndex::Ilk { i, l, k } => write!(f, "({i},{l},{k})"),
        }
    }
}

/// Sparse table `(family, r, s) ↦ coefficient`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoeffTable<S = Scalar> {
    pub entries: BTreeMap<(FamilyIndex, usize, usize), S>,
}

impl<S: Coeff> CoeffTable<S> {
    pub fn new() -> Self {
        CoeffTable {
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, f: FamilyIndex, r: usize, s: usize) -> S {
        self.entries.get(&(f, r, s)).cloned().unwrap_or_else(S::zero)
    }

    /// Adds to an entry, dropping it if it cancels.
    pub fn add(&mut self, f: FamilyIndex, r: usize, s: usize, c: S) {
        if c.is_negligible() {
            return;
        }
        let key = (f, r, s);
        let v = match self.entries.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_negligible() {
            self.entries.insert(key, v);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Serialize)]
struct TableEntry {
    family: String,
    r: usize,
    s: usize,
    coeff: String,
}

impl<S: Coeff + fmt::Display> Serialize for CoeffTable<S> {
    fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
        let mut seq = z.serialize_seq(Some(self.entries.len()))?;
        for ((f, r, s), c) in &self.entries {
            seq.serialize_element(&TableEntry {
                family: f.to_string(),
                r: *r,
                s: *s,
                coeff: c.to_string(),
            })?;
        }
        seq.end()
    }
}

/// Which γ-vector to build.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GammaKind {
    OnePlus,
    OneMinus,
    Two,
    Three,
    Plain,
    Bar,
}

impl GammaKind {
    pub const PARTS: [GammaKind; 4] = [GammaKind::OnePlus, GammaKind::OneMinus, GammaKind::Two, GammaKind::Three];
}

/// The pieces of `W_l^1 ⊖ S_l^1`.
#[derive(Clone, Debug)]
pub struct W1Decomposition {
    pub alpha1: BasisFamily,
    pub alpha2: BasisFamily,
    pub beta: BasisFamily,
    pub vpowers: Vec<ExactVector>,
}

fn alg() -> Algebra<Scalar> {
    Algebra::default()
}

fn letters_vec(letters: &[Letter]) -> ExactVector {
    let p = reduce_letters(letters);
    Vector::monomial(Scalar::d_pow(p.phase), p.word)
}

/// `3^{e/2}` for an integer `e`, exactly.
pub fn sqrt3_pow(e: i64) -> Scalar {
    let half = e.div_euclid(2);
    let mut c = if half >= 0 {
        QSqrt3::from_int(3i64.pow(half as u32))
    } else {
        QSqrt3::from_ratio(1, 3i64.pow((-half) as u32))
    };
    if e.rem_euclid(2) == 1 {
        c = &c * &QSqrt3::sqrt3();
    }
    Scalar::from_qsqrt3(c)
}

/// Sorted words of length `l` in one coarse class.
pub fn basis_of_w(l: usize, class: WordClass) -> Vec<Word> {
    words_of_length(l).into_iter().filter(|w| w.class() == class).collect()
}

/// `χ_l`.
pub fn chi(l: usize) -> ExactVector {
    alg().chi(l)
}

/// `{q_l(χ_1 w), q_l(w χ_1)}` over words `w` with `|w| ≤ l − 1`. Shorter words
/// have no length-`l` component, so only `|w| = l − 1` contributes.
pub fn s_l_generators(l: usize) -> Vec<ExactVector> {
    s_l_generators_where(l, |_| true)
}

/// The generators whose source word lies in `class` (the identity counts as class 0).
pub fn s_l_generators_class(l: usize, class: WordClass) -> Vec<ExactVector> {
    s_l_generators_where(l, |w| {
        let c = w.class();
        c == class || (c == WordClass::Scalar && class == WordClass::Zero)
    })
}

fn s_l_generators_where(l: usize, keep: impl Fn(&Word) -> bool) -> Vec<ExactVector> {
    assert!(l >= 1, "S_l needs l >= 1");
    let a = alg();
    let mut out = Vec::new();
    for w in words_of_length(l - 1).into_iter().filter(|w| keep(w)) {
        let x = Vector::from_word(w);
        out.push(a.top_left(&x));
        out.push(a.top_right(&x));
    }
    out
}

/// Vectors in `span(words)` orthogonal to every constraint vector.
pub fn orthogonal_complement_in(words: &[Word], constraints: &[ExactVector]) -> Vec<ExactVector> {
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let rows = constraints
        .iter()
        .map(|g| {
            g.iter()
                .filter_map(|(w, c)| index.get(w).map(|&i| (i, c.conj())))
                .collect::<Vec<_>>()
        })
        .filter(|r| !r.is_empty())
        .collect();
    let m = Matrix::from_sparse(words.len(), rows);
    linalg::kernel_basis(&m)
        .into_iter()
        .map(|v| Vector::from_distinct(words.iter().cloned().zip(v)))
        .collect()
}

/// Basis of `W_l^class ⊖ S_l^class` from the kernel of the conjugate pairing matrix.
pub fn complement_basis(l: usize, class: WordClass) -> BasisFamily {
    assert!(l >= 1, "complement needs l >= 1");
    let words = basis_of_w(l, class);
    let members = orthogonal_complement_in(&words, &s_l_generators_class(l, class));
    let kind = match class {
        WordClass::Zero => ClassKind::Zero,
        WordClass::Two => ClassKind::Two,
        _ => ClassKind::One,
    };
    BasisFamily {
        label: GradedClass { l, class: kind },
        members,
    }
}

/// The orthogonal length-1 basis `u1 − u1⁻¹`, `u2 − u2⁻¹`, `u1 + u1⁻¹ − u2 − u2⁻¹`
/// of `W_1^0 ⊖ S_1^0`, each of the form `c1(u1 + εu1⁻¹) + c2(u2 + εu2⁻¹)`.
/// Returns `(ε, vector)` pairs.
pub fn epsilon_family_l1() -> Vec<(i32, ExactVector)> {
    let u = |f: u8, e: i32| Vector::from_word(Word::u(f, e));
    vec![
        (-1, u(1, 1).sub(&u(1, -1))),
        (-1, u(2, 1).sub(&u(2, -1))),
        (1, u(1, 1).add(&u(1, -1)).sub(&u(2, 1)).sub(&u(2, -1))),
    ]
}

/// Exact Gram–Schmidt without normalization; drops dependent vectors.
pub fn gram_schmidt(vs: &[ExactVector]) -> Vec<ExactVector> {
    let mut out: Vec<(ExactVector, Scalar)> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for (e, ee) in &out {
            let c = &w.inner(e) / ee;
            w.add_scaled(&-c, e);
        }
        if !w.is_zero() {
            let n = w.norm_sq();
            out.push((w, n));
        }
    }
    out.into_iter().map(|(v, _)| v).collect()
}

/// Orthogonal projection of `x` onto `span(family)` via the exact Gram system.
pub fn project_onto(x: &ExactVector, family: &[ExactVector]) -> ExactVector {
    if family.is_empty() {
        return Vector::zero();
    }
    let n = family.len();
    let rows: Vec<Vec<(usize, Scalar)>> = (0..n)
        .map(|j| (0..n).map(|k| (k, family[k].inner(&family[j]))).collect())
        .collect();
    let g = Matrix::from_sparse(n, rows);
    let b: Vec<Scalar> = family.iter().map(|f| x.inner(f)).collect();
    let c = linalg::solve(&g, &b)
        .expect("square system")
        .expect("Gram systems are consistent");
    crate::vector::combine(&c, family)
}

/// `ξ_{r,s}` for an exact vector.
pub fn xi_rs(xi: &ExactVector, r: i64, s: i64) -> Result<ExactVector, CoreError> {
    alg().xi_rs(xi, r, s)
}

/// The γ-vectors of a `v_i`-power; `m = l − sgn(l)` is the v-exponent used.
pub fn gamma(i: u8, l: i32, which: GammaKind) -> Result<ExactVector, CoreError> {
    if !(i == 1 || i == 2) {
        return Err(CoreError::OutOfRange(format!("factor {i}")));
    }
    let needs_big = matches!(which, GammaKind::Plain | GammaKind::Bar);
    if l == 0 || (needs_big && l.abs() == 1) {
        return Err(CoreError::OutOfRange(format!("gamma with l = {l}")));
    }
    let m = l - l.signum();
    let j = 3 - i;
    let v = Letter::v(i, m);
    let g1p = letters_vec(&[v, Letter::u(i, 1)]);
    let g1m = letters_vec(&[v, Letter::u(i, -1)]);
    let g2 = letters_vec(&[v, Letter::u(j, 1)]).add(&letters_vec(&[v, Letter::u(j, -1)]));
    let g3 = letters_vec(&[Letter::u(j, 1), v]).add(&letters_vec(&[Letter::u(j, -1), v]));
    let two = Scalar::from_int(2);
    Ok(match which {
        GammaKind::OnePlus => g1p,
        GammaKind::OneMinus => g1m,
        GammaKind::Two => g2,
        GammaKind::Three => g3,
        GammaKind::Plain => {
            let c = &two / &(Scalar::d_pow(-(m as i64)) - Scalar::d_pow(m as i64));
            g1p.sub(&g1m).scale(&c).sub(&g3)
        }
        GammaKind::Bar => {
            let c = &two / &(Scalar::d_pow(m as i64) - Scalar::d_pow(-(m as i64)));
            g1p.scale(&Scalar::d_pow(m as i64))
                .sub(&g1m.scale(&Scalar::d_pow(-(m as i64))))
                .scale(&c)
                .sub(&g2)
        }
    })
}

/// `v_1^{±l}, v_2^{±l}`.
pub fn v_powers(l: usize) -> Vec<ExactVector> {
    let l = l as i32;
    [(1, l), (1, -l), (2, l), (2, -l)]
        .into_iter()
        .map(|(i, e)| Vector::from_word(Word::v(i, e)))
        .collect()
}

/// Class-1 words of length `l` with at least two u-letters; these span `W_l^{1,β}`.
pub fn beta_words(l: usize) -> Vec<Word> {
    basis_of_w(l, WordClass::One)
        .into_iter()
        .filter(|w| w.uv_exponent_counts().0 >= 2)
        .collect()
}

pub fn alpha1_family(l: usize) -> BasisFamily {
    let mut members = Vec::new();
    if l >= 2 {
        for i in [1u8, 2] {
            for sl in [l as i32, -(l as i32)] {
                members.push(gamma(i, sl, GammaKind::Plain).unwrap());
                members.push(gamma(i, sl, GammaKind::Bar).unwrap());
            }
        }
    }
    BasisFamily {
        label: GradedClass { l, class: ClassKind::OneAlpha1 },
        members,
    }
}

pub fn alpha2_family(l: usize) -> BasisFamily {
    let mut members = Vec::new();
    if l >= 2 {
        for i in [1u8, 2] {
            let j = 3 - i;
            for e in [l as i32 - 1, -(l as i32 - 1)] {
                let v = Letter::v(i, e);
                let left = letters_vec(&[Letter::u(j, 1), v]).sub(&letters_vec(&[Letter::u(j, -1), v]));
                let right = letters_vec(&[v, Letter::u(j, 1)]).sub(&letters_vec(&[v, Letter::u(j, -1)]));
                members.push(left);
                members.push(right);
            }
        }
    }
    BasisFamily {
        label: GradedClass { l, class: ClassKind::OneAlpha2 },
        members,
    }
}

/// Basis of `W_l^{1,β} ⊖ S_l^1`.
pub fn beta_family(l: usize) -> BasisFamily {
    let words = beta_words(l);
    let members = if words.is_empty() {
        Vec::new()
    } else {
        orthogonal_complement_in(&words, &s_l_generators_class(l, WordClass::One))
    };
    BasisFamily {
        label: GradedClass { l, class: ClassKind::OneBeta },
        members,
    }
}

/// The decomposition `W_l^1 ⊖ S_l^1 = (W_l^{1,β} ⊖ S_l^1) ⊕ W_l^{1,α,1} ⊕ W_l^{1,α,2} ⊕ C v^{±l}`.
pub fn w1_decomposition(l: usize) -> W1Decomposition {
    assert!(l >= 1);
    W1Decomposition {
        alpha1: alpha1_family(l),
        alpha2: alpha2_family(l),
        beta: beta_family(l),
        vpowers: v_powers(l),
    }
}

/// Members of `W_l^{class}`-refined spaces used as ξ_m seeds at length `l`:
/// classes 0, 2, (1,α,2) and (1,β). At `l = 1` the class-0 piece uses the
/// ε-family.
pub fn seed_families(l: usize) -> Vec<BasisFamily> {
    let zero = if l == 1 {
        BasisFamily {
            label: GradedClass { l, class: ClassKind::Zero },
            members: epsilon_family_l1().into_iter().map(|(_, v)| v).collect(),
        }
    } else {
        complement_basis(l, WordClass::Zero)
    };
    let mut out = vec![zero];
    if l >= 2 {
        out.push(complement_basis(l, WordClass::Two));
    }
    out.push(alpha2_family(l));
    out.push(beta_family(l));
    out.retain(|f| !f.is_empty());
    out
}

/// The prefix/suffix counts `|E_r| = 2·3^{r−1}` (1 for r = 0).
fn flank_count(r: usize) -> i64 {
    if r == 0 {
        1
    } else {
        2 * 3i64.pow(r as u32 - 1)
    }
}

/// Squared norm of `ξ^{i,l,k}_{r,s}`: 4, 6 or 9.
pub fn xi_ilk_norm_sq(r: usize, s: usize) -> Scalar {
    let p = sqrt3_pow(2 - (r + s) as i64);
    let n = flank_count(r) * flank_count(s);
    &(&p * &p) * &Scalar::from_int(n)
}

/// `ξ^{i,l,k}_{r,s} = 3^{1−(r+s)/2} Σ w · v_i^l u_i^k · w'` over u-words `w` of
/// length `r` ending in `u_{3−i}^{±1}` and `w'` of length `s` starting with one.
pub fn xi_ilk(i: u8, l: i32, k: i32, r: usize, s: usize) -> Result<ExactVector, CoreError> {
    alg().xi_ilk(i, l, k, r, s)
}

impl<S: Coeff> Algebra<S> {
    /// `3^{e/2}`.
    pub fn sqrt3_pow(&self, e: i64) -> S {
        let s = if e >= 0 {
            self.sqrt3()
        } else {
            self.sqrt3().inv().expect("sqrt3 is invertible")
        };
        let mut acc = S::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_ref(&s);
        }
        acc
    }

    /// See [`xi_ilk`].
    pub fn xi_ilk(&self, i: u8, l: i32, k: i32, r: usize, s: usize) -> Result<Vector<S>, CoreError> {
        if l == 0 {
            return Err(CoreError::OutOfRange("xi_ilk needs l != 0".into()));
        }
        if !(i == 1 || i == 2) {
            return Err(CoreError::OutOfRange(format!("factor {i}")));
        }
        let j = 3 - i;
        let pre: Vec<Word> = u_words(r)
            .into_iter()
            .filter(|w| w.last_block().is_none_or(|b| b.factor == j))
            .collect();
        let post: Vec<Word> = u_words(s)
            .into_iter()
            .filter(|w| w.first_block().is_none_or(|b| b.factor == j))
            .collect();
        // v^l u^k = d^{-lk} u^k v^l
        let c = self
            .sqrt3_pow(2 - (r + s) as i64)
            .mul_d_pow(&self.ctx, -(l as i64) * k as i64);
        let mid = Block::new(i, k, l);
        let mut terms = Vec::with_capacity(pre.len() * post.len());
        for x in &pre {
            for y in &post {
                let blocks = x.blocks().iter().copied().chain([mid]).chain(y.blocks().iter().copied());
                terms.push((Word::from_blocks(blocks), c.clone()));
            }
        }
        Ok(Vector::from_distinct(terms))
    }

    /// See [`ilk_coefficients`].
    pub fn ilk_coefficients(&self, x: &Vector<S>) -> CoeffTable<S> {
        let mut sums: BTreeMap<(u8, i32, i32, usize, usize), S> = BTreeMap::new();
        for (w, c) in x.iter() {
            if let Some(key) = ilk_key(w) {
                sums.entry(key).or_insert_with(S::zero).add_assign_ref(c);
            }
        }
        let mut table = CoeffTable::new();
        for ((i, l, k, r, s), sum) in sums {
            // β = ⟨x, ξ⟩/‖ξ‖² = d^{lk} Σ x_w / (p·|E_r||F_s|)
            let den = self
                .sqrt3_pow(2 - (r + s) as i64)
                .mul_ref(&S::from_int(flank_count(r) * flank_count(s)));
            let beta = sum
                .mul_ref(&den.inv().expect("nonzero"))
                .mul_d_pow(&self.ctx, l as i64 * k as i64);
            table.add(FamilyIndex::Ilk { i, l, k }, r, s, beta);
        }
        table
    }
}

/// Decomposes a class-1 word as `x · (u_i^k v_i^l) · y` and returns
/// `(i, l, k, |x|, |y|)`.
pub fn ilk_key(w: &Word) -> Option<(u8, i32, i32, usize, usize)> {
    let blocks = w.blocks();
    let mut vs = blocks.iter().enumerate().filter(|(_, b)| b.l != 0);
    let (t, b) = vs.next()?;
    if vs.next().is_some() {
        return None;
    }
    let r: usize = blocks[..t].iter().map(Block::len).sum();
    let s: usize = blocks[t + 1..].iter().map(Block::len).sum();
    Some((b.factor, b.l, b.k, r, s))
}

/// Coefficients of the orthogonal projection of `x` onto every `ξ^{i,l,k}_{r,s}`.
pub fn ilk_coefficients(x: &ExactVector) -> CoeffTable {
    alg().ilk_coefficients(x)
}

/// Truncated spanning family of L: `(ξ')_{r,s}` for `ξ'` in `W^{1,α,1}` or a
/// v-power, with total length at most `truncation`.
pub fn subspace_l_basis(truncation: usize) -> BasisFamily {
    let mut members = Vec::new();
    for l in 1..=truncation {
        let mut seeds = alpha1_family(l).members;
        seeds.extend(v_powers(l));
        for seed in &seeds {
            for r in 0..=(truncation - l) {
                for s in 0..=(truncation - l - r) {
                    members.push(xi_rs(seed, r as i64, s as i64).unwrap());
                }
            }
        }
    }
    BasisFamily {
        label: GradedClass { l: truncation, class: ClassKind::OneAlpha1 },
        members,
    }
}

/// The ξ_m seeds of lengths `1..=truncation` with their `(ξ_m)_{r,s}` family.
#[derive(Clone, Debug)]
pub struct RieszFamily {
    pub truncation: usize,
    pub seeds: Vec<ExactVector>,
    /// `(m, r, s, (ξ_m)_{r,s})`, grouped by total length.
    pub members: BTreeMap<usize, Vec<(usize, usize, usize, ExactVector)>>,
}

impl RieszFamily {
    pub fn build(truncation: usize) -> RieszFamily {
        let mut seeds = Vec::new();
        for l in 1..=truncation {
            for f in seed_families(l) {
                seeds.extend(f.members);
            }
        }
        let a = alg();
        let mut members: BTreeMap<usize, Vec<_>> = BTreeMap::new();
        for (m, seed) in seeds.iter().enumerate() {
            let l = seed.homogeneous_length().expect("seeds are homogeneous");
            let extra = truncation - l;
            let grid = a.xi_grid(seed, extra, extra).expect("homogeneous");
            for (r, row) in grid.into_iter().enumerate() {
                for (s, v) in row.into_iter().enumerate() {
                    if r + s <= extra {
                        members.entry(l + r + s).or_default().push((m, r, s, v));
                    }
                }
            }
        }
        RieszFamily {
            truncation,
            seeds,
            members,
        }
    }
}

fn cached_family(truncation: usize) -> Arc<RieszFamily> {
    static CACHE: Mutex<BTreeMap<usize, Arc<RieszFamily>>> = Mutex::new(BTreeMap::new());
    let mut cache = CACHE.lock().unwrap();
    cache
        .entry(truncation)
        .or_insert_with(|| Arc::new(RieszFamily::build(truncation)))
        .clone()
}

/// How the ξ^{i,l,k} part of a Riesz expansion is chosen. The combined family
/// is linearly dependent (span ξ^{i,l,k} is strictly larger than L), so the
/// split has to be fixed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum IlkSplit {
    /// Orthogonal projection onto span ξ^{i,l,k}.
    #[default]
    IlkSpan,
    /// Orthogonal projection onto L, the decomposition `L ⊕ span{(ξ_m)_{r,s}}`.
    SubspaceL,
}

/// Expansion of `x ⊥ A` over `{(ξ_m)_{r,s}} ∪ {ξ^{i,l,k}_{r,s}}` within the truncation.
///
/// The ξ^{i,l,k} part is the orthogonal projection onto their span; the
/// remainder is orthogonal to L and is solved per word length from the exact
/// Gram system of the `(ξ_m)_{r,s}`, built only when the remainder is nonzero.
pub fn riesz_expand(x: &ExactVector, truncation: usize) -> Result<CoeffTable, CoreError> {
    riesz_expand_inner(x, truncation, IlkSplit::IlkSpan, || cached_family(truncation))
}

/// As [`riesz_expand`] with a chosen split and a prebuilt family.
pub fn riesz_expand_with(x: &ExactVector, family: &Arc<RieszFamily>, split: IlkSplit) -> Result<CoeffTable, CoreError> {
    riesz_expand_inner(x, family.truncation, split, || family.clone())
}

/// As [`riesz_expand`] with a chosen split.
pub fn riesz_expand_split(x: &ExactVector, truncation: usize, split: IlkSplit) -> Result<CoeffTable, CoreError> {
    riesz_expand_inner(x, truncation, split, || cached_family(truncation))
}

/// `⟨x, χ_n⟩` for every length `n` present in `x`.
fn a_components(x: &ExactVector) -> BTreeMap<usize, Scalar> {
    let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (w, c) in x.iter() {
        if matches!(w.class(), WordClass::Zero | WordClass::Scalar) {
            let e = out.entry(w.len()).or_insert_with(Scalar::zero);
            *e = &*e + c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn riesz_expand_inner(
    x: &ExactVector,
    truncation: usize,
    split: IlkSplit,
    family: impl FnOnce() -> Arc<RieszFamily>,
) -> Result<CoeffTable, CoreError> {
    if x.max_length() > truncation {
        return Err(CoreError::OutOfRange(format!(
            "vector has words longer than the truncation {truncation}"
        )));
    }
    if let Some((n, _)) = a_components(x).into_iter().next() {
        return Err(CoreError::NotOrthogonalToA(format!("<x, chi_{n}> != 0")));
    }
    let z = ilk_coefficients(x);
    let exact = ilk_span_exact(x, &z);
    let mut table = match split {
        IlkSplit::IlkSpan => z,
        IlkSplit::SubspaceL => {
            let p = project_onto_l(&z);
            if exact && p == z {
                return Ok(p);
            }
            p
        }
    };
    if split == IlkSplit::IlkSpan && exact {
        return Ok(table);
    }
    let mut rest = x.clone();
    for ((f, r, s), c) in &table.entries {
        if let FamilyIndex::Ilk { i, l, k } = *f {
            rest.add_scaled(&-c.clone(), &xi_ilk(i, l, k, *r, *s)?);
        }
    }
    if rest.is_zero() {
        return Ok(table);
    }
    let family = family();
    for n in rest.lengths() {
        let part = rest.project_length(n);
        let members = family.members.get(&n).map(Vec::as_slice).unwrap_or(&[]);
        let vecs: Vec<ExactVector> = members.iter().map(|(_, _, _, v)| v.clone()).collect();
        let Some(coeffs) = solve_in_span(&part, &vecs) else {
            let resid = part.sub(&project_onto(&part, &vecs)).norm_sq();
            let residual_norm_sq = resid.eval_numeric(crate::default_theta()).map(|z| z.re).unwrap_or(f64::NAN);
            return Err(CoreError::NotInSpan { residual_norm_sq });
        };
        for ((m, r, s, _), c) in members.iter().zip(coeffs) {
            table.add(FamilyIndex::Xi(*m), *r, *s, c);
        }
    }
    Ok(table)
}

/// True when `x` equals `Σ β ξ^{i,l,k}_{r,s}` for the table `z` of its
/// ξ^{i,l,k} coefficients, checked word by word without building the ξ's.
pub fn ilk_span_exact(x: &ExactVector, z: &CoeffTable) -> bool {
    let mut counts: HashMap<(u8, i32, i32, usize, usize), i64> = HashMap::new();
    for (w, c) in x.iter() {
        let Some(key @ (i, l, k, r, s)) = ilk_key(w) else {
            return false;
        };
        let beta = z.get(FamilyIndex::Ilk { i, l, k }, r, s);
        let expected = &(&beta * &sqrt3_pow(2 - (r + s) as i64)) * &Scalar::d_pow(-(l as i64) * k as i64);
        if *c != expected {
            return false;
        }
        *counts.entry(key).or_default() += 1;
    }
    z.entries.keys().all(|(f, r, s)| match *f {
        FamilyIndex::Ilk { i, l, k } => counts.get(&(i, l, k, *r, *s)) == Some(&(flank_count(*r) * flank_count(*s))),
        FamilyIndex::Xi(_) => false,
    })
}

/// Membership in L (within any truncation), decided in ξ^{i,l,k} coordinates.
pub fn in_subspace_l(x: &ExactVector) -> bool {
    let z = ilk_coefficients(x);
    ilk_span_exact(x, &z) && project_onto_l(&z) == z
}

impl<S: Coeff> Algebra<S> {
    /// Top-length part of `χ_1 · x` for `x = Σ β ξ^{i,l,k}_{r,s}`, in the same coordinates:
    /// `ξ_{r,s} ↦ √3 ξ_{r+1,s}`, plus `d^{±l} ξ^{k±1}_{0,s}` at `r = 0` when `|k±1| > |k|`.
    pub fn ilk_top_left(&self, t: &CoeffTable<S>) -> CoeffTable<S> {
        self.ilk_top_shift(t, true)
    }

    /// Top-length part of `x · χ_1`; mirror of [`Algebra::ilk_top_left`] without the d-phases.
    pub fn ilk_top_right(&self, t: &CoeffTable<S>) -> CoeffTable<S> {
        self.ilk_top_shift(t, false)
    }

    fn ilk_top_shift(&self, t: &CoeffTable<S>, left: bool) -> CoeffTable<S> {
        let s3 = self.sqrt3();
        let mut out = CoeffTable::new();
        for ((f, r, s), c) in &t.entries {
            let FamilyIndex::Ilk { i, l, k } = *f else {
                continue;
            };
            let (r, s) = (*r, *s);
            let edge = if left { r == 0 } else { s == 0 };
            let (nr, ns) = if left { (r + 1, s) } else { (r, s + 1) };
            out.add(*f, nr, ns, c.mul_ref(&s3));
            if edge {
                for step in [1i32, -1] {
                    if (k + step).abs() > k.abs() {
                        // u_i^{±1} v^l u^k = d^{±l} v^l u^{k±1}
                        let phase = if left { step as i64 * l as i64 } else { 0 };
                        out.add(FamilyIndex::Ilk { i, l, k: k + step }, r, s, c.mul_d_pow(&self.ctx, phase));
                    }
                }
            }
        }
        out
    }
}

/// ξ^{i,l,k} coordinates of the seeds of L in sector `(i, m)`: `v_i^m` and the
/// two α1 γ-vectors with v-exponent `m`.
fn l_seed_tables(i: u8, m: i32) -> Vec<(usize, CoeffTable)> {
    let mut v = CoeffTable::new();
    v.add(FamilyIndex::Ilk { i, l: m, k: 0 }, 0, 0, Scalar::from_ratio(1, 3));
    let mut out = vec![(m.unsigned_abs() as usize, v)];
    let l = m + m.signum();
    for kind in [GammaKind::Plain, GammaKind::Bar] {
        let g = gamma(i, l, kind).expect("|l| >= 2");
        let t = ilk_coefficients(&g);
        debug_assert!(ilk_span_exact(&g, &t));
        out.push((l.unsigned_abs() as usize, t));
    }
    out
}

/// Tables keyed by sector `(i, m)`.
pub type SectorTables = BTreeMap<(u8, i32), Vec<CoeffTable>>;

/// The spanning family of L at word length `n` in ξ^{i,l,k} coordinates,
/// keyed by sector `(i, m)` with `m` the v-exponent.
pub fn l_members_ilk(n: usize) -> Arc<SectorTables> {
    static CACHE: Mutex<BTreeMap<usize, Arc<SectorTables>>> = Mutex::new(BTreeMap::new());
    if let Some(hit) = CACHE.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let a = alg();
    let mut out: BTreeMap<(u8, i32), Vec<CoeffTable>> = BTreeMap::new();
    for i in [1u8, 2] {
        for am in 1..=n as i32 {
            for m in [am, -am] {
                let members = out.entry((i, m)).or_default();
                for (len, seed) in l_seed_tables(i, m) {
                    if len > n {
                        continue;
                    }
                    let extra = n - len;
                    let mut row = seed;
                    for r in 0..=extra {
                        let mut t = row.clone();
                        for _ in 0..(extra - r) {
                            t = a.ilk_top_right(&t);
                        }
                        members.push(t);
                        if r < extra {
                            row = a.ilk_top_left(&row);
                        }
                    }
                }
            }
        }
    }
    let out = Arc::new(out);
    CACHE.lock().unwrap().insert(n, out.clone());
    out
}

/// Orthogonal projection of `Σ β ξ^{i,l,k}_{r,s}` onto L, in the same coordinates.
/// Entries outside ξ^{i,l,k} are dropped.
pub fn project_onto_l(z: &CoeffTable) -> CoeffTable {
    let mut sectors: BTreeMap<(usize, u8, i32), CoeffTable> = BTreeMap::new();
    for ((f, r, s), c) in &z.entries {
        if let FamilyIndex::Ilk { i, l, k } = *f {
            let n = l.unsigned_abs() as usize + k.unsigned_abs() as usize + r + s;
            sectors.entry((n, i, l)).or_default().add(*f, *r, *s, c.clone());
        }
    }
    let mut out = CoeffTable::new();
    for ((n, i, m), part) in sectors {
        let all = l_members_ilk(n);
        let members = all.get(&(i, m)).map(Vec::as_slice).unwrap_or(&[]);
        let ip = |a: &CoeffTable, b: &CoeffTable| -> Scalar {
            let mut acc = Scalar::zero();
            for (key, x) in &a.entries {
                if let Some(y) = b.entries.get(key) {
                    acc = &acc + &(&(x * &y.conj()) * &xi_ilk_norm_sq(key.1, key.2));
                }
            }
            acc
        };
        let rows: Vec<Vec<(usize, Scalar)>> = members
            .iter()
            .map(|mk| members.iter().enumerate().map(|(j, mj)| (j, ip(mj, mk))).collect())
            .collect();
        let g = Matrix::from_sparse(members.len(), rows);
        let b: Vec<Scalar> = members.iter().map(|mk| ip(&part, mk)).collect();
        let c = linalg::solve(&g, &b)
            .expect("square system")
            .expect("Gram systems are consistent");
        for (cj, mj) in c.iter().zip(members) {
            if cj.is_zero() {
                continue;
            }
            for ((f, r, s), v) in &mj.entries {
                out.add(*f, *r, *s, cj * v);
            }
        }
    }
    out
}

/// The shared family for a truncation.
pub fn riesz_family(truncation: usize) -> Arc<RieszFamily> {
    cached_family(truncation)
}

/// Gram-system solve; `None` if `x` is not in the span.
fn solve_in_span(x: &ExactVector, family: &[ExactVector]) -> Option<Vec<Scalar>> {
    let n = family.len();
    if n == 0 {
        return x.is_zero().then(Vec::new);
    }
    // Sparse Gram via an inverted word index.
    let mut by_word: HashMap<&Word, Vec<(usize, &Scalar)>> = HashMap::new();
    for (j, f) in family.iter().enumerate() {
        for (w, c) in f.iter() {
            by_word.entry(w).or_default().push((j, c));
        }
    }
    let mut gram: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); n];
    for entries in by_word.values() {
        for &(j, cj) in entries {
            let cj_conj = cj.conj();
            for &(k, ck) in entries {
                let e = gram[j].entry(k).or_insert_with(Scalar::zero);
                *e = &*e + &(ck * &cj_conj);
            }
        }
    }
    let rows = gram.into_iter().map(|r| r.into_iter().collect()).collect();
    let g = Matrix::from_sparse(n, rows);
    let b: Vec<Scalar> = family.iter().map(|f| x.inner(f)).collect();
    let c = linalg::solve(&g, &b).ok()??;
    let recon = crate::vector::combine(&c, family);
    (recon == *x).then_some(c)
}

/// Rebuilds a vector from a table.
pub fn reconstruct(table: &CoeffTable, family: &RieszFamily) -> Result<ExactVector, CoreError> {
    let mut out = Vector::zero();
    for ((f, r, s), c) in &table.entries {
        let v = match *f {
            FamilyIndex::Ilk { i, l, k } => xi_ilk(i, l, k, *r, *s)?,
            FamilyIndex::Xi(m) => xi_rs(&family.seeds[m], *r as i64, *s as i64)?,
        };
        out.add_scaled(c, &v);
    }
    Ok(out)
}

/// Orthogonal projection onto a graded class; refined classes project onto
/// their stored spanning family.
pub fn project_class(x: &ExactVector, g: GradedClass) -> Result<ExactVector, CoreError> {
    let l = g.l;
    Ok(match g.class {
        ClassKind::Zero | ClassKind::One | ClassKind::Two => x.project_coarse(l, g.coarse()),
        _ if l == 0 => return Err(CoreError::UndefinedClass),
        ClassKind::OneAlpha => {
            let y = x.project_coarse(l, WordClass::One);
            y.filter(|w| {
                let (u, v) = w.uv_exponent_counts();
                u == 1 && v + 1 == l
            })
        }
        ClassKind::OneBeta => {
            let y = x.project_coarse(l, WordClass::One);
            y.filter(|w| w.uv_exponent_counts().0 >= 2)
        }
        ClassKind::OneVPowers => x.project_coarse(l, WordClass::One).filter(|w| w.uv_exponent_counts().0 == 0),
        ClassKind::OneAlpha1 => project_onto(&x.project_length(l), &alpha1_family(l).members),
        ClassKind::OneAlpha2 => project_onto(&x.project_length(l), &alpha2_family(l).members),
    })
}

/// Checks membership of `target` in `span(family)` per word length; returns
/// the coefficients if it is a member.
pub fn span_membership(target: &ExactVector, family: &[ExactVector]) -> Option<Vec<Scalar>> {
    let mut total = vec![Scalar::zero(); family.len()];
    for n in target.lengths() {
        let part = target.project_length(n);
        let idx: Vec<usize> = (0..family.len())
            .filter(|&j| family[j].homogeneous_length() == Some(n))
            .collect();
        let sub: Vec<ExactVector> = idx.iter().map(|&j| family[j].clone()).collect();
        let words: Vec<Word> = {
            let mut ws: Vec<Word> = part.support().cloned().collect();
            for f in &sub {
                ws.extend(f.support().cloned());
            }
            ws.sort();
            ws.dedup();
            ws
        };
        let windex: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); words.len()];
        for (j, f) in sub.iter().enumerate() {
            for (w, c) in f.iter() {
                rows[windex[w]].push((j, c.clone()));
            }
        }
        let m = Matrix::from_sparse(sub.len(), rows);
        let rhs: Vec<Scalar> = words.iter().map(|w| part.coeff(w)).collect();
        let sol = linalg::solve(&m, &rhs).ok()??;
        for (j, c) in idx.into_iter().zip(sol) {
            total[j] = c;
        }
    }
    Some(total)
}

impl fmt::Display for CoeffTable<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((fam, r, s), c) in &self.entries {
            writeln!(f, "{fam} r={r} s={s}: {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn complement_dimensions_at_length_one() {
        assert_eq!(complement_basis(1, WordClass::Zero).len(), 3);
        assert_eq!(complement_basis(1, WordClass::One).len(), 4);
        let u = Vector::from_word(Word::u(1, 1)).sub(&Vector::from_word(Word::u(1, -1)));
        let c = complement_basis(1, WordClass::Zero);
        assert!(span_membership(&u, &c.members).is_some());
    }

    #[test]
    fn sqrt3_powers() {
        assert_eq!(sqrt3_pow(2), Scalar::from_int(3));
        assert_eq!(sqrt3_pow(-2), Scalar::from_ratio(1, 3));
        assert_eq!(&sqrt3_pow(1) * &sqrt3_pow(1), Scalar::from_int(3));
        assert_eq!(sqrt3_pow(0), Scalar::one());
    }

    #[test]
    fn xi_ilk_base_case() {
        let x = xi_ilk(1, 2, 0, 0, 0).unwrap();
        assert_eq!(x, Vector::monomial(Scalar::from_int(3), Word::v(1, 2)));
        assert_eq!(x.norm_sq(), Scalar::from_int(9));
    }

    #[test]
    fn ilk_keys_roundtrip() {
        let x = xi_ilk(2, -1, 2, 2, 1).unwrap();
        for w in x.support() {
            assert_eq!(ilk_key(w), Some((2, -1, 2, 2, 1)));
        }
        let t = ilk_coefficients(&x);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(FamilyIndex::Ilk { i: 2, l: -1, k: 2 }, 2, 1), Scalar::one());
    }

    #[test]
    fn gamma_plain_coefficients() {
        let g = gamma(1, 2, GammaKind::Plain).unwrap();
        // v1 u1 = d^{-1} u1 v1
        let c = &Scalar::from_int(2) / &(Scalar::d_pow(-1) - Scalar::d());
        let w = Word::from_blocks([Block::new(1, 1, 1)]);
        assert_eq!(g.coeff(&w), c.mul_d_pow(-1));
        let w3 = Word::from_blocks([Block::new(2, 1, 0), Block::new(1, 0, 1)]);
        assert_eq!(g.coeff(&w3), -Scalar::one());
    }

    fn single_entry(t: &CoeffTable, f: FamilyIndex, r: usize, s: usize) -> bool {
        t.len() == 1 && t.get(f, r, s) == Scalar::one()
    }

    #[test]
    fn riesz_expand_named_members() {
        let x = xi_ilk(1, 1, 0, 1, 1).unwrap();
        let t = riesz_expand(&x, 3).unwrap();
        assert!(single_entry(&t, FamilyIndex::Ilk { i: 1, l: 1, k: 0 }, 1, 1));

        let e = Vector::from_word(Word::u(1, 1)).sub(&Vector::from_word(Word::u(1, -1)));
        let fam = riesz_family(2);
        let m = fam.seeds.iter().position(|v| *v == e).expect("ε-family seed");
        let t = riesz_expand(&xi_rs(&e, 1, 0).unwrap(), 2).unwrap();
        assert!(single_entry(&t, FamilyIndex::Xi(m), 1, 0));
    }

    #[test]
    fn riesz_expand_rejects_a_and_long_words() {
        assert!(matches!(riesz_expand(&chi(2), 3), Err(CoreError::NotOrthogonalToA(_))));
        let long = Vector::from_word(Word::v(1, 4));
        assert!(matches!(riesz_expand(&long, 3), Err(CoreError::OutOfRange(_))));
    }

    #[test]
    fn riesz_round_trip_both_splits() {
        let fam = riesz_family(3);
        let x = Vector::from_word(Word::from_blocks([Block::new(1, 1, 1), Block::new(2, 1, 0)]))
            .add(&Vector::from_word(Word::from_blocks([Block::new(2, 0, 1), Block::new(1, 0, -1)])).scale(&Scalar::d_pow(2)))
            .add(&Vector::from_word(Word::u(1, 2)))
            .sub(&Vector::from_word(Word::u(2, 2)));
        for split in [IlkSplit::IlkSpan, IlkSplit::SubspaceL] {
            let t = riesz_expand_with(&x, &fam, split).unwrap();
            assert_eq!(reconstruct(&t, &fam).unwrap(), x);
        }
    }

    #[test]
    fn l_members_match_vector_construction() {
        for n in 1..=3 {
            let mut from_vectors: Vec<String> = subspace_l_basis(n)
                .members
                .iter()
                .filter(|v| v.homogeneous_length() == Some(n))
                .map(|v| ilk_coefficients(v).to_string())
                .collect();
            let mut from_shifts: Vec<String> = l_members_ilk(n).values().flatten().map(|t| t.to_string()).collect();
            from_vectors.sort();
            from_shifts.sort();
            assert_eq!(from_vectors, from_shifts, "length {n}");
        }
    }

    #[test]
    fn ilk_span_is_larger_than_l() {
        assert!(in_subspace_l(&xi_ilk(1, 1, 0, 1, 0).unwrap()));
        assert!(in_subspace_l(&Vector::from_word(Word::v(2, -3))));
        assert!(!in_subspace_l(&xi_ilk(1, 1, 0, 1, 1).unwrap()));
    }
}
