//! Corpus manifests: one line per score, `score <id> <label> <path>`.
//!
//! Relative paths resolve against the manifest's own directory. Each
//! referenced file may be either a score document or a pre-encoded
//! '0'/'1' string; the loader sniffs the format.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::LabeledScore;
use crate::score::{load_encoded, EncodedString};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub label: String,
    pub path: PathBuf,
}

/// Parses manifest text. Lines starting with `#` are comments; blank lines
/// are ignored; score ids must be unique.
pub fn parse_manifest(input: &str) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    let mut seen_ids = BTreeSet::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(4, char::is_whitespace);
        let directive = fields.next().expect("non-empty line");
        if directive != "score" {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unknown directive '{directive}'"),
            });
        }
        let id = fields.next().filter(|s| !s.is_empty()).ok_or(Error::Parse {
            line: line_no,
            message: "missing score id".into(),
        })?;
        let label = fields.next().filter(|s| !s.is_empty()).ok_or(Error::Parse {
            line: line_no,
            message: "missing composer label".into(),
        })?;
        let path = fields
            .next()
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .ok_or(Error::Parse {
                line: line_no,
                message: "missing score path".into(),
            })?;
        if !seen_ids.insert(id.to_string()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate score id '{id}'"),
            });
        }
        entries.push(ManifestEntry {
            id: id.to_string(),
            label: label.to_string(),
            path: PathBuf::from(path),
        });
    }
    if entries.is_empty() {
        return Err(Error::InvalidArgument("manifest lists no scores".into()));
    }
    Ok(entries)
}

/// Reads one score file in either supported format.
pub fn load_encoded_file(path: &Path) -> Result<EncodedString> {
    let content = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    load_encoded(&content)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

/// Loads a manifest and every score it references.
pub fn load_corpus(manifest_path: &Path) -> Result<Vec<LabeledScore>> {
    let content = fs::read_to_string(manifest_path).map_err(|e| {
        Error::InvalidArgument(format!("cannot read {}: {e}", manifest_path.display()))
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    parse_manifest(&content)?
        .into_iter()
        .map(|entry| {
            let path = if entry.path.is_absolute() {
                entry.path.clone()
            } else {
                base.join(&entry.path)
            };
            Ok(LabeledScore {
                id: entry.id,
                label: entry.label,
                encoded: load_encoded_file(&path)?,
            })
        })
        .collect()
}
