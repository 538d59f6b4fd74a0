//! The published catalog of polynomial long knots, stored verbatim, plus an
//! annotated overlay of transcription fixes that is only applied on request.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::sha256_hex;

pub const CATALOG: &str = include_str!("../data/catalog.jsonl");
pub const CATALOG_SHA256: &str = include_str!("../data/catalog.sha256");
pub const OVERLAY: &str = include_str!("../data/catalog_overlay.jsonl");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("checksum mismatch: expected {expected}, found {found}")]
    Checksum { expected: String, found: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// The table of knots up to eight crossings.
    Section5,
    /// The worked `8_17` projection with its hand-built height.
    Section4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub f: String,
    pub g: String,
    pub h: String,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    F,
    G,
    H,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlayFix {
    pub name: String,
    pub field: Field,
    pub text: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub overlay: Vec<OverlayFix>,
}

fn parse_lines<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>, CatalogError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CatalogError::Json {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

fn read(path: &Path) -> Result<String, CatalogError> {
    std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl Catalog {
    /// The shipped catalog, checked against its transcription checksum.
    pub fn builtin() -> Catalog {
        let found = sha256_hex(CATALOG);
        assert_eq!(found, CATALOG_SHA256.trim(), "shipped catalog was edited");
        Catalog::parse(CATALOG, OVERLAY).expect("shipped catalog parses")
    }

    pub fn parse(entries: &str, overlay: &str) -> Result<Catalog, CatalogError> {
        Ok(Catalog {
            entries: parse_lines(entries)?,
            overlay: parse_lines(overlay)?,
        })
    }

    /// Loads a catalog file; the overlay is read from `overlay` when given.
    pub fn load(path: &Path, overlay: Option<&Path>) -> Result<Catalog, CatalogError> {
        let entries = read(path)?;
        let overlay = match overlay {
            Some(p) => read(p)?,
            None => String::new(),
        };
        Catalog::parse(&entries, &overlay)
    }

    pub fn section5(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.source == Source::Section5)
    }

    pub fn get(&self, name: &str, source: Source) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name && e.source == source)
    }

    pub fn fixes_for(&self, name: &str) -> Vec<&OverlayFix> {
        self.overlay.iter().filter(|o| o.name == name).collect()
    }

    /// The entry with its overlay fixes applied (only to the table entries).
    pub fn corrected(&self, e: &CatalogEntry) -> CatalogEntry {
        let mut out = e.clone();
        if e.source != Source::Section5 {
            return out;
        }
        for fix in self.fixes_for(&e.name) {
            let slot = match fix.field {
                Field::F => &mut out.f,
                Field::G => &mut out.g,
                Field::H => &mut out.h,
            };
            *slot = fix.text.clone();
        }
        out
    }
}
