//! Corpus manifests and document loading.
//!
//! A corpus is described by a TOML manifest with an ordered `domains`
//! list — the file order is meaningful, it defines the `manifest` ordering
//! policy downstream:
//!
//! ```toml
//! [[domains]]
//! id = "news"
//! label = "Daily news articles"
//! register = "written"          # or "spoken"
//! paths = ["news/*.txt"]        # globs, relative to the manifest file
//! encoding = "utf-8"            # optional; any WHATWG encoding label
//! ```
//!
//! Reading is strict and deterministic: matched files are de-duplicated
//! and read in sorted path order, and undecodable bytes are an error that
//! names the file and byte offset rather than a silent replacement.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use corpusize_core::{segment_units, UnitMode};
use encoding_rs::{DecoderResult, Encoding, UTF_8};
use serde::Deserialize;
use thiserror::Error;

/// An ordered set of domain sub-corpora.
#[derive(Debug, Clone, Deserialize)]
pub struct CorpusManifest {
    pub domains: Vec<DomainSpec>,
    /// Directory the manifest was loaded from; path patterns resolve
    /// against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// One domain's description in the manifest.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub id: String,
    pub label: String,
    pub register: Register,
    /// Glob patterns, resolved relative to the manifest's directory.
    pub paths: Vec<String>,
    /// WHATWG encoding label; UTF-8 when absent.
    #[serde(default)]
    pub encoding: Option<String>,
}

/// Broad mode of the language in a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Register {
    Written,
    Spoken,
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Register::Written => "written",
            Register::Spoken => "spoken",
        })
    }
}

/// One source file, segmented into sampling units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub domain_id: String,
    /// Path the text came from.
    pub source: String,
    /// Trimmed, non-empty segments in reading order.
    pub units: Vec<String>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read manifest {path}: {source}")]
    ManifestRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed manifest {path}: {message}")]
    ManifestParse { path: PathBuf, message: String },
    #[error("manifest {path} declares no domains")]
    NoDomains { path: PathBuf },
    #[error("duplicate domain id {id:?} in manifest")]
    DuplicateDomainId { id: String },
    #[error("domain #{index} ({id:?}): {message}")]
    InvalidDomain {
        index: usize,
        id: String,
        message: String,
    },
    #[error("unknown domain id {id:?}")]
    UnknownDomain { id: String },
    #[error("domain {id:?}: bad glob pattern {pattern:?}: {message}")]
    BadPattern {
        id: String,
        pattern: String,
        message: String,
    },
    #[error("domain {id:?}: no files matched its path patterns")]
    NoFilesMatched { id: String },
    #[error("cannot read {path}: {source}")]
    FileRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: bytes at offset {offset} are not valid {encoding}")]
    Undecodable {
        path: PathBuf,
        offset: usize,
        encoding: String,
    },
}

/// Loads and validates a manifest. Domains keep their file order.
pub fn load_manifest(path: &Path) -> Result<CorpusManifest, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::ManifestRead {
        path: path.to_path_buf(),
        source,
    })?;
    let mut manifest: CorpusManifest =
        toml::from_str(&text).map_err(|e| IngestError::ManifestParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    manifest.base_dir = path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();

    if manifest.domains.is_empty() {
        return Err(IngestError::NoDomains {
            path: path.to_path_buf(),
        });
    }
    let mut seen = BTreeSet::new();
    for (index, domain) in manifest.domains.iter().enumerate() {
        if domain.id.is_empty() {
            return Err(IngestError::InvalidDomain {
                index: index + 1,
                id: domain.id.clone(),
                message: "empty id".into(),
            });
        }
        if !seen.insert(domain.id.as_str()) {
            return Err(IngestError::DuplicateDomainId {
                id: domain.id.clone(),
            });
        }
        if domain.paths.is_empty() {
            return Err(IngestError::InvalidDomain {
                index: index + 1,
                id: domain.id.clone(),
                message: "needs at least one path pattern".into(),
            });
        }
        if resolve_encoding(domain).is_none() {
            return Err(IngestError::InvalidDomain {
                index: index + 1,
                id: domain.id.clone(),
                message: format!(
                    "unknown encoding label {:?}",
                    domain.encoding.as_deref().unwrap_or_default()
                ),
            });
        }
    }
    Ok(manifest)
}

fn resolve_encoding(domain: &DomainSpec) -> Option<&'static Encoding> {
    match &domain.encoding {
        None => Some(UTF_8),
        Some(label) => Encoding::for_label(label.as_bytes()),
    }
}

/// Reads one domain's documents in sorted-path order, decoded strictly and
/// segmented into `unit`-mode units. The same manifest and files always
/// yield the identical document stream.
pub fn read_documents(
    manifest: &CorpusManifest,
    domain_id: &str,
    unit: UnitMode,
) -> Result<Vec<Document>, IngestError> {
    let domain = manifest
        .domains
        .iter()
        .find(|d| d.id == domain_id)
        .ok_or_else(|| IngestError::UnknownDomain {
            id: domain_id.to_string(),
        })?;
    let encoding = resolve_encoding(domain).expect("validated at load");

    let mut paths = BTreeSet::new();
    for pattern in &domain.paths {
        let full = if Path::new(pattern).is_absolute() {
            PathBuf::from(pattern)
        } else {
            manifest.base_dir.join(pattern)
        };
        let as_str = full.to_string_lossy();
        let matches = glob::glob(&as_str).map_err(|e| IngestError::BadPattern {
            id: domain.id.clone(),
            pattern: pattern.clone(),
            message: e.to_string(),
        })?;
        for entry in matches {
            let path = entry.map_err(|e| {
                let path = e.path().to_path_buf();
                IngestError::FileRead {
                    path,
                    source: e.into(),
                }
            })?;
            if path.is_file() {
                paths.insert(path);
            }
        }
    }
    if paths.is_empty() {
        return Err(IngestError::NoFilesMatched {
            id: domain.id.clone(),
        });
    }

    let mut documents = Vec::with_capacity(paths.len());
    for path in paths {
        let bytes = std::fs::read(&path).map_err(|source| IngestError::FileRead {
            path: path.clone(),
            source,
        })?;
        let text = decode(&bytes, encoding, &path)?;
        documents.push(Document {
            domain_id: domain.id.clone(),
            source: path.to_string_lossy().into_owned(),
            units: segment_units(&text, unit),
        });
    }
    Ok(documents)
}

/// Strict decode: any malformed sequence is an error carrying the byte
/// offset where the valid prefix ends.
fn decode(bytes: &[u8], encoding: &'static Encoding, path: &Path) -> Result<String, IngestError> {
    if encoding == UTF_8 {
        return match std::str::from_utf8(bytes) {
            Ok(text) => Ok(text.to_owned()),
            Err(e) => Err(IngestError::Undecodable {
                path: path.to_path_buf(),
                offset: e.valid_up_to(),
                encoding: encoding.name().to_string(),
            }),
        };
    }
    let mut decoder = encoding.new_decoder_without_bom_handling();
    let capacity = decoder
        .max_utf8_buffer_length_without_replacement(bytes.len())
        .unwrap_or(bytes.len() * 4);
    let mut out = String::with_capacity(capacity);
    let (result, read) = decoder.decode_to_string_without_replacement(bytes, &mut out, true);
    match result {
        DecoderResult::InputEmpty => Ok(out),
        DecoderResult::Malformed(bad, extra) => Err(IngestError::Undecodable {
            path: path.to_path_buf(),
            offset: read - bad as usize - extra as usize,
            encoding: encoding.name().to_string(),
        }),
        DecoderResult::OutputFull => unreachable!("output buffer was sized for the whole input"),
    }
}
