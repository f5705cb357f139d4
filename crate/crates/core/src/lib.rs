//! Homological invariants of finitely generated `FI^m`-modules over prime
//! fields, computed on finite truncations of the category.

pub mod category;
pub mod linalg;
pub mod module;
pub mod presentation;
pub mod functors;
pub mod homology;
pub mod tree;
pub mod verify;
