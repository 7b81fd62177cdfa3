//! Property tests for the commutator coefficient map.

use nctorus_core::basis::{CoeffTable, FamilyIndex};
use nctorus_core::{Algebra, ExactVector, Scalar};
use nctorus_verify::commutator::{commutator_coefficients, MapForm};
use proptest::prelude::*;

type Entry = (u8, i32, i32, usize, usize, i64, i64);

fn entry() -> impl Strategy<Value = Entry> {
    (1u8..=2, prop_oneof![-2i32..=-1, 1i32..=2], -2i32..=2, 0usize..=3, 0usize..=3, -3i64..=3, -2i64..=2)
}

fn table(es: &[Entry]) -> CoeffTable {
    let mut t = CoeffTable::new();
    for &(i, l, k, r, s, c, e) in es {
        t.add(FamilyIndex::Ilk { i, l, k }, r, s, Scalar::from_int(c).mul_d_pow(e));
    }
    t
}

fn sum(a: &CoeffTable, b: &CoeffTable) -> CoeffTable {
    let mut t = a.clone();
    for (&(f, r, s), c) in &b.entries {
        t.add(f, r, s, c.clone());
    }
    t
}

fn vector_of(a: &Algebra<Scalar>, t: &CoeffTable) -> ExactVector {
    let mut x = ExactVector::zero();
    for (&(f, r, s), c) in &t.entries {
        if let FamilyIndex::Ilk { i, l, k } = f {
            x.add_scaled(c, &a.xi_ilk(i, l, k, r, s).unwrap());
        }
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn map_is_linear(x in prop::collection::vec(entry(), 1..5), y in prop::collection::vec(entry(), 1..5)) {
        let a = Algebra::<Scalar>::default();
        for form in [MapForm::Derived, MapForm::AsPrinted] {
            let (tx, ty) = (table(&x), table(&y));
            let lhs = commutator_coefficients(&a, &sum(&tx, &ty), form).unwrap();
            let rhs = sum(
                &commutator_coefficients(&a, &tx, form).unwrap(),
                &commutator_coefficients(&a, &ty, form).unwrap(),
            );
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn map_matches_the_commutator(x in prop::collection::vec(entry(), 1..3)) {
        let a = Algebra::<Scalar>::default();
        let t = table(&x);
        let v = vector_of(&a, &t);
        let ct = a.chi_tilde();
        let y = a.mul_vec(&ct, &v).sub(&a.mul_vec(&v, &ct));
        let beta = commutator_coefficients(&a, &t, MapForm::Derived).unwrap();
        prop_assert_eq!(vector_of(&a, &beta), y);
    }
}
