//! Exact reconstruction of the objects behind the fake baby monster Lie
//! algebra: binary codes and their enumerators, modular q-series, lattices
//! and discriminant forms, the level 2 character of the orbifold VOA, and
//! the root data and denominator identity of the Lie algebra.

#![allow(clippy::needless_range_loop)]

pub mod characters;
pub mod codes;
pub mod error;
pub mod gkm;
pub mod lattices;
pub mod qseries;

pub use error::{Error, Result};
