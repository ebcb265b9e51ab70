//! Named diagrams with signature and alternating metadata, stored as JSONL.
//!
//! The bundled file holds prime knots up to 9 crossings, prime links up to
//! 7 crossings (one entry per orientation), the Hopf link and small unlinks.
//! It is generated by `scripts/gen_catalog.py` from KnotInfo/LinkInfo data.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use khtorsion_core::diagram::{parse_pd, DiagramError, PlanarDiagram};
use serde::{Deserialize, Serialize};

const BUNDLED: &str = include_str!("../data/catalog.jsonl");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub pd: String,
    /// Link signature in the convention where the positive trefoil has -2.
    pub signature: i32,
    pub components: u32,
    pub alternating: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("catalog line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("catalog entry {name}: {source}")]
    Pd { name: String, source: DiagramError },
    #[error("catalog entry {name}: declares {declared} components, diagram has {actual}")]
    Components {
        name: String,
        declared: u32,
        actual: u32,
    },
    #[error("duplicate catalog entry {0}")]
    Duplicate(String),
    #[error("unknown knot {0:?} (see `khtorsion catalog list`)")]
    Unknown(String),
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<(CatalogEntry, PlanarDiagram)>,
    index: HashMap<String, usize>,
}

impl Catalog {
    /// The bundled catalog, parsed once.
    pub fn bundled() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::parse(BUNDLED).expect("bundled catalog is valid"))
    }

    /// Parses and validates JSONL text. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut cat = Catalog {
            entries: Vec::new(),
            index: HashMap::new(),
        };
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry: CatalogEntry =
                serde_json::from_str(line).map_err(|source| CatalogError::Json { line: k + 1, source })?;
            cat.push(entry)?;
        }
        Ok(cat)
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.to_owned(),
            source,
        })?;
        Catalog::parse(&text)
    }

    fn push(&mut self, entry: CatalogEntry) -> Result<(), CatalogError> {
        let d = parse_pd(&entry.pd).map_err(|source| CatalogError::Pd {
            name: entry.name.clone(),
            source,
        })?;
        if d.n_components() != entry.components {
            return Err(CatalogError::Components {
                name: entry.name,
                declared: entry.components,
                actual: d.n_components(),
            });
        }
        if self.index.contains_key(&entry.name) {
            return Err(CatalogError::Duplicate(entry.name));
        }
        self.index.insert(entry.name.clone(), self.entries.len());
        self.entries.push((entry, d));
        Ok(())
    }

    /// Appends the entries of `other`, rejecting duplicate names.
    pub fn extend(&mut self, other: Catalog) -> Result<(), CatalogError> {
        for (e, _) in other.entries {
            self.push(e)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<(&CatalogEntry, &PlanarDiagram), CatalogError> {
        self.index
            .get(name)
            .map(|&k| (&self.entries[k].0, &self.entries[k].1))
            .ok_or_else(|| CatalogError::Unknown(name.to_owned()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CatalogEntry, &PlanarDiagram)> {
        self.entries.iter().map(|(e, d)| (e, d))
    }

    /// Entries with at most `max_crossings` crossings, in catalog order.
    pub fn up_to(&self, max_crossings: usize) -> impl Iterator<Item = (&CatalogEntry, &PlanarDiagram)> {
        self.iter().filter(move |(_, d)| d.crossing_count() <= max_crossings)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
