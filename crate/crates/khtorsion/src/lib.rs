//! Catalog, file formats, result cache and batch verification on top of
//! `khtorsion-core`.

pub mod cache;
pub mod catalog;
pub mod json;
pub mod render;
pub mod verify;

pub use catalog::{Catalog, CatalogEntry, CatalogError};

/// Bumped whenever a change could alter computed tables; part of the cache key.
pub const ENGINE_VERSION: &str = concat!("khtorsion-", env!("CARGO_PKG_VERSION"), "+1");

/// Diagrams above this many crossings are only computed with `--stretch`.
pub const STRETCH_THRESHOLD: usize = 13;
