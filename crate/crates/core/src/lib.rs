//! Bass suborders and left ideal classes in definite quaternion orders over Q
//! and real quadratic fields.

#![allow(clippy::needless_range_loop, clippy::large_enum_variant)]

pub mod base_ring;
pub mod cli;
pub mod lattice;
pub mod linalg;
pub mod orders;
pub mod ideals;
pub mod quaternion;
pub mod units;
