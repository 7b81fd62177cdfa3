//! Executable verification of the structural identities of the free product
//! of two noncommutative tori: χ-recursions, ξ_{r,s} relations, inner-product
//! tables, the ξ^{i,l,k} system, the commutator coefficient map, and sampled
//! numeric experiments for the quantitative bounds.
//!
//! Every exact check runs over [`twin::Twin`] coefficients, so each exact
//! value is accompanied by an independent float recomputation.

pub mod checks;
pub mod commutator;
pub mod config;
pub mod report;
pub mod suite;
pub mod tally;
pub mod twin;

use nctorus_core::Algebra;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{ConfigError, SuiteConfig};
pub use report::{Entry, Mode, Report, Status};
pub use suite::{run_suite, CHECK_IDS};
pub use twin::Twin;

/// The algebra every check computes in.
pub type Alg = Algebra<Twin>;

/// Independent RNG stream for one check: the suite seed mixed with the check id.
pub fn rng_for(seed: u64, id: &str) -> ChaCha8Rng {
    // FNV-1a keeps the stream stable across platforms and releases.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}
