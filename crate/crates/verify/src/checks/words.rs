//! The completely reduced words are orthonormal: `⟨w, w'⟩ = δ_{w,w'}`,
//! cross-validated against `τ(w'* w)` computed by full multiplication.

use nctorus_core::word::words_of_length;
use nctorus_core::{Vector, Word};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::report::{Entry, Mode};
use crate::tally::Tally;
use crate::twin::Twin;
use crate::SuiteConfig;

/// Largest word length in the orthonormality check.
pub const ORTHONORMAL_MAX_LEN: usize = 4;

pub fn word_orthonormality(cfg: &SuiteConfig) -> Entry {
    let words: Vec<Word> = (0..=ORTHONORMAL_MAX_LEN).flat_map(words_of_length).collect();
    let tallies: Vec<Tally> = words
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let mut t = Tally::new(cfg.theta);
            let a = t.alg();
            let x: Vector<Twin> = Vector::from_word(w.clone());
            for (j, w2) in words.iter().enumerate() {
                let y: Vector<Twin> = Vector::from_word(w2.clone());
                let expected = if i == j { Twin::one() } else { Twin::zero() };
                let inner = x.inner(&y);
                t.scalar_eq(&inner, &expected, || json!({"w": w.to_string(), "w'": w2.to_string(), "via": "coefficients"}));
                let tr = a.trace_inner(&x, &y);
                t.scalar_eq(&tr, &expected, || json!({"w": w.to_string(), "w'": w2.to_string(), "via": "trace"}));
            }
            t
        })
        .collect();
    let mut t = Tally::new(cfg.theta);
    for p in tallies {
        t.merge(p);
    }
    t.finish(
        Entry::new("word-orthonormality", Mode::Exact)
            .param("max_length", ORTHONORMAL_MAX_LEN)
            .param("words", words.len()),
    )
}

/// Control: treating `ab` and `ba` as the same basis vector for commuting-up-to-phase
/// letters (dropping the `d`-phase) must be detected.
pub fn word_orthonormality_control(cfg: &SuiteConfig) -> Entry {
    use nctorus_core::word::reduce_letters;
    use nctorus_core::Letter;
    let mut t = Tally::new(cfg.theta);
    let a = t.alg();
    let letters: Vec<Letter> = [1u8, 2]
        .into_iter()
        .flat_map(|f| [Letter::u(f, 1), Letter::u(f, -1), Letter::v(f, 1), Letter::v(f, -1)])
        .collect();
    for x in &letters {
        for y in &letters {
            let xy = reduce_letters(&[*x, *y]);
            let yx = reduce_letters(&[*y, *x]);
            if xy.word != yx.word || xy.word.len() != 2 {
                continue;
            }
            let lhs = a.word_product(&Word::identity(), &xy.word).scale(&a.d_pow(xy.phase));
            let rhs = a.word_product(&Word::identity(), &yx.word).scale(&a.d_pow(yx.phase));
            // Mutated claim: ⟨xy, yx⟩ = 1.
            let ip = lhs.inner(&rhs);
            t.scalar_eq(&ip, &Twin::one(), || json!({"x": format!("{x:?}"), "y": format!("{y:?}")}));
        }
    }
    t.finish_control(
        Entry::new("word-orthonormality/negative-control", Mode::NegativeControl)
            .param("mutation", "commutation phase dropped"),
    )
}
