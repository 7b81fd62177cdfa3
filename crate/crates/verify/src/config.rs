//! Suite configuration and per-check parameter boxes.

use serde::{Deserialize, Serialize};

/// Parameters of a suite run. Every field has a default, so partial config
/// files are accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Evaluation angle for the float side, `d = e^{2πiθ}`.
    pub theta: f64,
    pub seed: u64,
    /// Check ids to run; empty means all.
    pub lemmas: Vec<String>,
    /// Largest `l` in the χ-recursion check.
    pub lmax: usize,
    /// Largest word length for the structural certificates (complement
    /// decomposition, completeness, bimodule orthogonality).
    pub truncation: usize,
    /// Box for the ξ_{r,s} relations: `l ≤ xi_lmax`, `r, s, n, m ≤ xi_rmax`.
    pub xi_lmax: usize,
    pub xi_rmax: usize,
    /// Box for ξ^{i,l,k}: `|l| ≤ ilk_lmax`, `|k| ≤ ilk_kmax`, `r, s ≤ ilk_rmax`.
    pub ilk_lmax: i32,
    pub ilk_kmax: i32,
    pub ilk_rmax: usize,
    /// Random coefficient tables for the commutator consistency check.
    pub commutator_tables: usize,
    /// Samples for the sampled-numeric checks.
    pub samples: usize,
    /// Seeds per M in the decay experiment.
    pub aop_seeds: usize,
    pub aop_m: Vec<usize>,
    /// Tolerance for float-vs-exact agreement and numeric inequalities.
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            theta: nctorus_core::default_theta(),
            seed: 20240601,
            lemmas: Vec::new(),
            lmax: 6,
            truncation: 4,
            xi_lmax: 3,
            xi_rmax: 3,
            ilk_lmax: 2,
            ilk_kmax: 2,
            ilk_rmax: 3,
            commutator_tables: 50,
            samples: 24,
            aop_seeds: 20,
            aop_m: vec![1, 2],
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if !self.theta.is_finite() {
            return bad("theta must be finite");
        }
        if self.lmax < 2 {
            return bad("lmax must be at least 2");
        }
        if self.truncation < 2 {
            return bad("truncation must be at least 2");
        }
        if self.xi_lmax < 1 || self.ilk_lmax < 1 {
            return bad("l ranges must be nonempty");
        }
        if self.ilk_kmax < 0 {
            return bad("ilk_kmax must be nonnegative");
        }
        if self.aop_m.iter().any(|&m| m == 0 || m > 3) {
            return bad("aop_m entries must be in 1..=3");
        }
        if !(self.tolerance >= 0.0) {
            return bad("tolerance must be nonnegative");
        }
        for id in &self.lemmas {
            if !crate::suite::CHECK_IDS.contains(&id.as_str()) {
                return Err(ConfigError::UnknownCheck(id.clone()));
            }
        }
        Ok(())
    }

    /// Whether a check id is selected by the filter.
    pub fn selects(&self, id: &str) -> bool {
        self.lemmas.is_empty() || self.lemmas.iter().any(|l| l == id)
    }
}
