//! Individual checks. Each returns one report entry.

pub mod bounds;
pub mod chi;
pub mod commutator;
pub mod ilk;
pub mod inner;
pub mod structure;
pub mod words;
pub mod xi;
