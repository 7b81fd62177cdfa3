//! The registry of checks and the suite runner.

use std::time::Instant;

use rayon::prelude::*;

use crate::checks::*;
use crate::report::{Entry, Report};
use crate::{ConfigError, SuiteConfig};

type CheckFn = fn(&SuiteConfig) -> Entry;

/// Registered checks, by id.
const REGISTRY: &[(&str, CheckFn)] = &[
    ("chi-recursion", chi::chi_recursion),
    ("chi-recursion/negative-control", chi::chi_recursion_control),
    ("word-orthonormality", words::word_orthonormality),
    ("word-orthonormality/negative-control", words::word_orthonormality_control),
    ("xi-recursion", xi::xi_recursion),
    ("xi-recursion/v-border-corrected", xi::xi_recursion_corrected),
    ("xi-recursion/negative-control", xi::xi_recursion_control),
    ("xi-boundary-mixed", xi::xi_boundary_mixed),
    ("xi-boundary-mixed/negative-control", xi::xi_boundary_mixed_control),
    ("xi-boundary-u", xi::xi_boundary_u),
    ("xi-boundary-u/negative-control", xi::xi_boundary_u_control),
    ("xi-products", xi::xi_products),
    ("xi-products/corrected", xi::xi_products_corrected),
    ("xi-products/negative-control", xi::xi_products_control),
    ("xi-inner-products", inner::xi_inner_products),
    ("xi-inner-products/border-weighted", inner::xi_inner_products_weighted),
    ("xi-inner-products/negative-control", inner::xi_inner_products_control),
    ("xi-inner-products-epsilon", inner::xi_inner_products_epsilon),
    ("xi-inner-products-epsilon/sign-corrected", inner::xi_inner_products_epsilon_corrected),
    ("xi-inner-products-epsilon/negative-control", inner::xi_inner_products_epsilon_control),
    ("s-range", structure::s_range),
    ("s-range/v-powers-excluded", structure::s_range_restricted),
    ("s-range/negative-control", structure::s_range_control),
    ("a-bimodule-orthogonality", structure::a_bimodule_orthogonality),
    ("a-bimodule-orthogonality/negative-control", structure::a_bimodule_orthogonality_control),
    ("l-orthogonality", structure::l_orthogonality),
    ("l-orthogonality/negative-control", structure::l_orthogonality_control),
    ("w1-decomposition", structure::w1_decomposition_check),
    ("w1-decomposition/negative-control", structure::w1_decomposition_control),
    ("gamma-span", structure::gamma_span),
    ("gamma-span/negative-control", structure::gamma_span_control),
    ("riesz-completeness", structure::riesz_completeness),
    ("riesz-completeness/negative-control", structure::riesz_completeness_control),
    ("xi-ilk-norms", ilk::xi_ilk_norms),
    ("xi-ilk-norms/negative-control", ilk::xi_ilk_norms_control),
    ("xi-ilk-orthogonality", ilk::xi_ilk_orthogonality),
    ("xi-ilk-orthogonality/negative-control", ilk::xi_ilk_orthogonality_control),
    ("xi-ilk-recursion", ilk::xi_ilk_recursion),
    ("xi-ilk-recursion/corrected", ilk::xi_ilk_recursion_corrected),
    ("xi-ilk-recursion/negative-control", ilk::xi_ilk_recursion_control),
    ("ilk-coefficient-identity", ilk::ilk_coefficient_identity),
    ("ilk-coefficient-identity/negative-control", ilk::ilk_coefficient_identity_control),
    ("commutator-map", commutator::commutator_map),
    ("commutator-map/as-printed", commutator::commutator_map_as_printed),
    ("commutator-map/negative-control", commutator::commutator_map_control),
    ("telescoping-bounds", bounds::telescoping_bounds),
    ("ilk-tail-decay", bounds::ilk_tail_decay),
    ("aop-decay", bounds::aop_decay),
];

/// All check ids, in registry order.
pub const CHECK_IDS: &[&str] = &[
    "chi-recursion",
    "chi-recursion/negative-control",
    "word-orthonormality",
    "word-orthonormality/negative-control",
    "xi-recursion",
    "xi-recursion/v-border-corrected",
    "xi-recursion/negative-control",
    "xi-boundary-mixed",
    "xi-boundary-mixed/negative-control",
    "xi-boundary-u",
    "xi-boundary-u/negative-control",
    "xi-products",
    "xi-products/corrected",
    "xi-products/negative-control",
    "xi-inner-products",
    "xi-inner-products/border-weighted",
    "xi-inner-products/negative-control",
    "xi-inner-products-epsilon",
    "xi-inner-products-epsilon/sign-corrected",
    "xi-inner-products-epsilon/negative-control",
    "s-range",
    "s-range/v-powers-excluded",
    "s-range/negative-control",
    "a-bimodule-orthogonality",
    "a-bimodule-orthogonality/negative-control",
    "l-orthogonality",
    "l-orthogonality/negative-control",
    "w1-decomposition",
    "w1-decomposition/negative-control",
    "gamma-span",
    "gamma-span/negative-control",
    "riesz-completeness",
    "riesz-completeness/negative-control",
    "xi-ilk-norms",
    "xi-ilk-norms/negative-control",
    "xi-ilk-orthogonality",
    "xi-ilk-orthogonality/negative-control",
    "xi-ilk-recursion",
    "xi-ilk-recursion/corrected",
    "xi-ilk-recursion/negative-control",
    "ilk-coefficient-identity",
    "ilk-coefficient-identity/negative-control",
    "commutator-map",
    "commutator-map/as-printed",
    "commutator-map/negative-control",
    "telescoping-bounds",
    "ilk-tail-decay",
    "aop-decay",
];

/// Runs every selected check in parallel; entries are sorted by id.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    let selected: Vec<&(&str, CheckFn)> = REGISTRY.iter().filter(|(id, _)| cfg.selects(id)).collect();
    let entries: Vec<Entry> = selected
        .par_iter()
        .map(|(id, f)| {
            let start = Instant::now();
            let mut e = f(cfg);
            debug_assert_eq!(e.lemma_id, *id);
            e.millis = Some(start.elapsed().as_millis() as u64);
            e
        })
        .collect();
    Ok(Report::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_and_ids_agree() {
        let ids: Vec<&str> = REGISTRY.iter().map(|(id, _)| *id).collect();
        assert_eq!(ids, CHECK_IDS);
    }

    #[test]
    fn filter_selects_single_entry() {
        let cfg = SuiteConfig {
            lemmas: vec!["chi-recursion".into()],
            lmax: 3,
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].lemma_id, "chi-recursion");
        assert!(r.passed());
    }

    #[test]
    fn unknown_id_is_a_config_error() {
        let cfg = SuiteConfig {
            lemmas: vec!["no-such-check".into()],
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(ConfigError::UnknownCheck(_))));
    }
}
