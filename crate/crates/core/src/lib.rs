//! Exact decision procedures for 2-term silting complexes over the rings
//! ℤ, ℤ/n, 𝔽_p and their finite products.

pub mod arith;
pub mod base_change;
pub mod error;
pub mod harness;
pub mod hom;
pub mod json;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod report;
pub mod ring;
pub(crate) mod serde_int;
pub mod silting;
