use nctorus_core::field::{LaurentPoly, QSqrt3, Scalar};
use nctorus_core::linalg::{self, Matrix, PivotStrategy};
use nctorus_core::word::reduce_letters;
use nctorus_core::*;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn qsqrt3() -> impl Strategy<Value = QSqrt3> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(a, den, b)| {
        QSqrt3::new(
            BigRational::new(a.into(), den.into()),
            BigRational::from_integer(b.into()),
        )
    })
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-2i64..=2, qsqrt3()), 1..=3).prop_map(LaurentPoly::from_terms)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (laurent(), prop::option::of(laurent())).prop_filter_map("zero denominator", |(n, d)| match d {
        Some(d) => Scalar::new(n, d).ok(),
        None => Some(Scalar::from_poly(n)),
    })
}

/// Sparse Laurent-monomial entries, the shape of pairing and Gram matrices.
fn entry() -> impl Strategy<Value = Scalar> {
    (-2i64..=2, -1i64..=1, 0u8..3).prop_map(|(c, e, z)| {
        if z == 0 {
            Scalar::zero()
        } else {
            Scalar::from_int(c).mul_d_pow(e)
        }
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    (1u8..=2, any::<bool>(), prop::bool::ANY).prop_map(|(f, is_u, pos)| {
        let e = if pos { 1 } else { -1 };
        if is_u {
            Letter::u(f, e)
        } else {
            Letter::v(f, e)
        }
    })
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(|ls| reduce_letters(&ls).word)
}

fn vector() -> impl Strategy<Value = ExactVector> {
    prop::collection::vec((word(4), -3i64..=3, -2i64..=2), 0..=4).prop_map(|terms| {
        Vector::from_terms(
            terms
                .into_iter()
                .map(|(w, c, e)| (w, Scalar::from_int(c).mul_d_pow(e))),
        )
    })
}

fn theta() -> f64 {
    default_theta()
}

fn close(a: num_complex::Complex64, b: num_complex::Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(&(&b * &a) / &a, b.clone());
        }
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn conj_is_involution(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn eval_is_homomorphism(a in scalar(), b in scalar()) {
        let t = theta();
        let (ea, eb) = (a.eval_numeric(t).unwrap(), b.eval_numeric(t).unwrap());
        prop_assert!(close((&a * &b).eval_numeric(t).unwrap(), ea * eb, 1e-12));
        prop_assert!(close((&a + &b).eval_numeric(t).unwrap(), ea + eb, 1e-12));
        prop_assert!(close(a.conj().eval_numeric(t).unwrap(), ea.conj(), 1e-12));
    }

    #[test]
    fn canonical_form_is_syntactic(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        let round = &(&a * &b) / &b;
        prop_assert_eq!(round.to_string(), a.to_string());
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a.clone());
    }

    #[test]
    fn word_associativity(x in word(6), y in word(6), z in word(6)) {
        let xy = x.multiply(&y);
        let left = xy.word.multiply(&z);
        let yz = y.multiply(&z);
        let right = x.multiply(&yz.word);
        prop_assert_eq!(left.word, right.word);
        prop_assert_eq!(xy.phase + left.phase, yz.phase + right.phase);
    }

    #[test]
    fn words_are_unitary(x in word(6)) {
        let adj = x.adjoint();
        let p = x.multiply(&adj.word);
        prop_assert!(p.word.is_identity());
        prop_assert_eq!(p.phase + adj.phase, 0);
        let back = adj.word.adjoint();
        prop_assert_eq!(back.word, x.clone());
        // (d^p w*)* = x, so (w*)* = d^p x
        prop_assert_eq!(back.phase, adj.phase);
        let re = reduce_letters(&x.letters());
        prop_assert_eq!(re.phase, 0);
        prop_assert_eq!(re.word, x);
    }

    #[test]
    fn length_is_subadditive(x in word(6), y in word(6)) {
        let p = x.multiply(&y).word;
        prop_assert!(p.len() <= x.len() + y.len());
        let disjoint = match (x.last_block(), y.first_block()) {
            (Some(a), Some(b)) => a.factor != b.factor,
            _ => true,
        };
        if disjoint {
            prop_assert_eq!(p.len(), x.len() + y.len());
        }
    }

    #[test]
    fn inner_product_laws(x in vector(), y in vector(), a in word(3)) {
        let alg = ExactAlgebra::exact();
        prop_assert_eq!(x.inner(&y), y.inner(&x).conj());
        prop_assert_eq!(alg.trace_inner(&x, &y), x.inner(&y));
        let av = Vector::from_word(a);
        let lhs = alg.mul_vec(&av, &x).inner(&y);
        let rhs = x.inner(&alg.mul_vec(&alg.adjoint(&av), &y));
        prop_assert_eq!(lhs, rhs);
        let parseval = x.iter().fold(Scalar::zero(), |acc, (_, c)| &acc + &(&c.conj() * c));
        prop_assert_eq!(x.norm_sq(), parseval);
        let n = x.norm_sq().eval_numeric(theta()).unwrap();
        prop_assert!(n.im.abs() < 1e-9 && n.re >= -1e-9);
        prop_assert_eq!(n.re > 1e-9, !x.is_zero());
    }

    #[test]
    fn trace_is_tracial(x in vector(), y in vector()) {
        let alg = ExactAlgebra::exact();
        prop_assert_eq!(alg.mul_vec(&x, &y).trace(), alg.mul_vec(&y, &x).trace());
    }

    #[test]
    fn grading_projections(x in vector()) {
        let mut sum = ExactVector::zero();
        for n in 0..=x.max_length() {
            let p = x.project_length(n);
            prop_assert_eq!(p.project_length(n), p.clone());
            for m in 0..n {
                prop_assert!(p.inner(&x.project_length(m)).is_zero());
            }
            sum = sum.add(&p);
        }
        prop_assert_eq!(sum, x);
    }

    #[test]
    fn vector_text_round_trip(x in vector()) {
        prop_assert_eq!(x.to_string().parse::<ExactVector>().unwrap(), x);
    }

    #[test]
    fn rank_nullity_and_pivots(entries in prop::collection::vec(prop::collection::vec(entry(), 5), 1..=4)) {
        let m = Matrix::from_dense(entries);
        let a = linalg::rref_with(&m, PivotStrategy::LeastComplex);
        let b = linalg::rref_with(&m, PivotStrategy::FirstRow);
        prop_assert_eq!(a.rank(), b.rank());
        let ka = a.kernel();
        prop_assert_eq!(&ka, &b.kernel());
        prop_assert_eq!(a.rank() + ka.len(), m.cols());
        for v in &ka {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_reproduces_rhs(entries in prop::collection::vec(prop::collection::vec(entry(), 3), 1..=4), x in prop::collection::vec(entry(), 3)) {
        let m = Matrix::from_dense(entries);
        let rhs = m.mul_vec(&x).unwrap();
        let sol = linalg::solve(&m, &rhs).unwrap().expect("consistent by construction");
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), rhs);
    }
}

#[test]
fn freeness_null_moments() {
    // Every nonidentity word has trace zero, and products of centered
    // alternating blocks never collapse to a scalar.
    for n in 1..=5 {
        for w in word::words_of_length(n) {
            assert!(Vector::<Scalar>::from_word(w.clone()).trace().is_zero());
            let blocks = w.blocks();
            let mut acc = Word::identity();
            for b in blocks {
                acc = acc.multiply(&Word::from_blocks([*b])).word;
            }
            assert_eq!(acc, w);
        }
    }
}

#[test]
fn products_of_words_are_monomials() {
    let alg = ExactAlgebra::exact();
    let words = word::words_of_length(2);
    for x in &words {
        for y in &words {
            let p = alg.word_product(x, y);
            assert_eq!(p.support_len(), 1);
            let (_, c) = p.iter().next().unwrap();
            assert!(c.as_monomial().is_some());
        }
    }
}

#[test]
fn invalid_denominator_is_an_error() {
    assert!(Scalar::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    assert!(Scalar::one().checked_div(&Scalar::zero()).is_err());
}
