//! Reflection orders on affine Weyl groups, computed exactly.
//!
//! The pipeline: a trimmed Dyck word determines an admissible chain of
//! biclosed sets in a finite crystallographic root system; the chain is
//! realized as a reflection order on the affine positive system, assembled
//! from ascending, descending, and finite pieces; condensation of the order
//! recovers the chain, its signature, and the normalized order type.
//! Brute-force oracles verify every classification claim at desk scale.

pub mod affine;
pub mod biclosed;
pub mod cli;
pub mod condense;
pub mod dyck;
pub mod error;
pub mod json;
pub mod ordertype;
pub mod rootsys;
pub mod synth;

pub use error::{Error, Result};

/// Default audit level for level-bounded biclosedness checks.
pub const DEFAULT_LEVEL_BOUND: u32 = 6;
