//! The coefficient map `α ↦ β` for `χ̃_1x − xχ̃_1`, where
//! `x = Σ α^{i,l,k}_{r,s} ξ^{i,l,k}_{r,s}`.

use std::collections::BTreeSet;

use nctorus_core::basis::{CoeffTable, FamilyIndex};
use nctorus_core::{Algebra, Coeff};

/// Coefficient of the inner neighbour `α_{1,s}` (resp. `α_{r,1}`) when the
/// output sits on the empty flank `r = 0` (resp. `s = 0`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MapForm {
    /// `2/3`: from `χ̃_1 ξ_{1,s} = ξ_{2,s} + (2/3)ξ_{0,s}`.
    Derived,
    /// `1`, as the piecewise formula is usually displayed.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("the commutator map takes ξ^{{i,l,k}} coefficients only, found {0}")]
    NotIlk(String),
}

/// `β` with `χ̃_1x − xχ̃_1 = Σ β ξ^{i,l,k}_{r,s}`.
pub fn commutator_coefficients<S: Coeff>(
    a: &Algebra<S>,
    alpha: &CoeffTable<S>,
    form: MapForm,
) -> Result<CoeffTable<S>, MapError> {
    commutator_with_phase(a, alpha, form, 1)
}

/// As [`commutator_coefficients`], with `d^{±l}` replaced by `d^{±phase·l}`
/// in the `r = 0` terms.
pub(crate) fn commutator_with_phase<S: Coeff>(
    a: &Algebra<S>,
    alpha: &CoeffTable<S>,
    form: MapForm,
    phase: i64,
) -> Result<CoeffTable<S>, MapError> {
    let mut targets = BTreeSet::new();
    for (f, r, s) in alpha.entries.keys() {
        let FamilyIndex::Ilk { i, l, k } = *f else {
            return Err(MapError::NotIlk(f.to_string()));
        };
        for dk in -1..=1 {
            for (dr, ds) in [(0i64, 0i64), (1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (r2, s2) = (*r as i64 + dr, *s as i64 + ds);
                if r2 >= 0 && s2 >= 0 {
                    targets.insert((i, l, k + dk, r2 as usize, s2 as usize));
                }
            }
        }
    }
    let c1 = match form {
        MapForm::Derived => S::from_ratio(2, 3),
        MapForm::AsPrinted => S::one(),
    };
    let inv = a.sqrt3_pow(-1);
    let mut beta = CoeffTable::new();
    for (i, l, k, r, s) in targets {
        let al = |k: i32, r: usize, s: usize| alpha.get(FamilyIndex::Ilk { i, l, k }, r, s);
        let dl = a.d_pow(phase * l as i64);
        let dml = a.d_pow(-phase * l as i64);
        let b = match (r, s) {
            (0, 0) => {
                // (1/√3)(d^l − 1)(α^{k−1} − d^{−l} α^{k+1})
                let diff = al(k - 1, 0, 0) - dml.clone() * al(k + 1, 0, 0);
                c1.clone() * (al(k, 1, 0) - al(k, 0, 1)) + inv.clone() * (dl - S::one()) * diff
            }
            (0, s) => {
                let side = dl * al(k - 1, 0, s) + dml * al(k + 1, 0, s);
                c1.clone() * al(k, 1, s) - al(k, 0, s - 1) - al(k, 0, s + 1) + inv.clone() * side
            }
            (r, 0) => {
                let side = al(k - 1, r, 0) + al(k + 1, r, 0);
                al(k, r - 1, 0) + al(k, r + 1, 0) - c1.clone() * al(k, r, 1) - inv.clone() * side
            }
            (r, s) => al(k, r + 1, s) + al(k, r - 1, s) - al(k, r, s + 1) - al(k, r, s - 1),
        };
        beta.add(FamilyIndex::Ilk { i, l, k }, r, s, b);
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nctorus_core::Scalar;
    use num_traits::One;

    fn exact() -> Algebra<Scalar> {
        Algebra::default()
    }

    #[test]
    fn interior_entry_spreads_to_four_neighbours() {
        let f = FamilyIndex::Ilk { i: 1, l: 1, k: 0 };
        let mut alpha = CoeffTable::new();
        alpha.add(f, 2, 2, Scalar::one());
        let beta = commutator_coefficients(&exact(), &alpha, MapForm::Derived).unwrap();
        assert_eq!(beta.len(), 4);
        assert_eq!(beta.get(f, 1, 2), Scalar::one());
        assert_eq!(beta.get(f, 3, 2), Scalar::one());
        assert_eq!(beta.get(f, 2, 1), -Scalar::one());
        assert_eq!(beta.get(f, 2, 3), -Scalar::one());
    }

    #[test]
    fn forms_differ_only_next_to_an_empty_flank() {
        let f = FamilyIndex::Ilk { i: 2, l: -1, k: 1 };
        let mut alpha = CoeffTable::new();
        alpha.add(f, 1, 2, Scalar::one());
        let a = exact();
        let d = commutator_coefficients(&a, &alpha, MapForm::Derived).unwrap();
        let p = commutator_coefficients(&a, &alpha, MapForm::AsPrinted).unwrap();
        assert_eq!(d.get(f, 0, 2), Scalar::from_ratio(2, 3));
        assert_eq!(p.get(f, 0, 2), Scalar::one());
        assert_eq!(d.get(f, 2, 2), p.get(f, 2, 2));
    }

    #[test]
    fn rejects_xi_entries() {
        let mut alpha = CoeffTable::new();
        alpha.add(FamilyIndex::Xi(0), 0, 0, Scalar::one());
        assert!(commutator_coefficients(&exact(), &alpha, MapForm::Derived).is_err());
    }
}
