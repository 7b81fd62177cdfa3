//! χ_l χ_1 = χ_1 χ_l = χ_{l+1} + 3χ_{l−1} (l ≥ 2) and χ_1² = χ_2 + 4.

use serde_json::json;

use crate::report::{Entry, Mode};
use crate::tally::Tally;
use crate::twin::Twin;
use crate::SuiteConfig;
use nctorus_core::{Coeff, Vector};

/// Checks the recursion with `c` in place of 3 (and `c + 1` in place of 4).
fn recursion(cfg: &SuiteConfig, c: i64) -> Tally {
    let mut t = Tally::new(cfg.theta);
    let a = t.alg();
    let chis: Vec<_> = (0..=cfg.lmax + 1).map(|l| a.chi(l)).collect();
    let one = Vector::identity().scale(&Twin::from_int(c + 1));
    let sq = a.mul_vec(&chis[1], &chis[1]);
    t.vec_eq(&sq, &chis[2].add(&one), || json!({"l": 1}));
    for l in 2..=cfg.lmax {
        let rhs = chis[l + 1].add(&chis[l - 1].scale(&Twin::from_int(c)));
        let right = a.mul_vec(&chis[l], &chis[1]);
        t.vec_eq(&right, &rhs, || json!({"l": l, "side": "chi_l chi_1"}));
        let left = a.mul_vec(&chis[1], &chis[l]);
        t.vec_eq(&left, &rhs, || json!({"l": l, "side": "chi_1 chi_l"}));
    }
    t
}

pub fn chi_recursion(cfg: &SuiteConfig) -> Entry {
    recursion(cfg, 3).finish(Entry::new("chi-recursion", Mode::Exact).param("lmax", cfg.lmax))
}

pub fn chi_recursion_control(cfg: &SuiteConfig) -> Entry {
    recursion(cfg, 2).finish_control(
        Entry::new("chi-recursion/negative-control", Mode::NegativeControl)
            .param("lmax", cfg.lmax)
            .param("mutation", "coefficient 2 in place of 3"),
    )
}
