//! The bundled diagram corpus and its manifest of expected values.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{name}: {source}")]
    Diagram { name: String, source: DiagramError },
    #[error("no corpus entry `{0}`")]
    Unknown(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Linkoid,
    Graph,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub file: String,
    pub kind: EntryKind,
    /// Where the diagram comes from: `classical`, `constructed`,
    /// `generated` or `reconstructed`.
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub crossings: usize,
    #[serde(default)]
    pub writhe: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_bracket: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_ordered_bracket: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kbsm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kbsm_sphere: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<Entry>,
    /// Two ℝ² diagrams that differ on the plane but agree on the sphere.
    pub sphere_collapse: (String, String),
    /// Reconstructions of the two ordered linkoids distinguished only by the
    /// ordered bracket, with the printed target values.
    pub ordered_pair: OrderedPair,
    /// A θ-curve with a knotted edge under three colourings: the first two
    /// are equivalent, the third is not.
    pub theta_colorings: [String; 3],
    /// A Θ-like graph with a knotted connector; fails the simplicity test.
    pub knotted_connector: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderedPair {
    pub first: String,
    pub second: String,
    pub first_expected: String,
    pub second_expected: String,
    pub status: String,
    pub note: String,
}

pub struct Corpus {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl Corpus {
    pub fn load(dir: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
        let dir = dir.as_ref().to_path_buf();
        let path = dir.join("manifest.json");
        let text = std::fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })?;
        Ok(Corpus { dir, manifest: serde_json::from_str(&text)? })
    }

    /// The corpus shipped with the repository.
    pub fn bundled() -> Result<Corpus, CorpusError> {
        Corpus::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"))
    }

    pub fn entry(&self, name: &str) -> Result<&Entry, CorpusError> {
        self.manifest
            .entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CorpusError::Unknown(name.to_string()))
    }

    pub fn text(&self, e: &Entry) -> Result<String, CorpusError> {
        let path = self.dir.join(&e.file);
        std::fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })
    }

    pub fn diagram(&self, name: &str) -> Result<Diagram, CorpusError> {
        let e = self.entry(name)?;
        Diagram::parse(&self.text(e)?)
            .map_err(|source| CorpusError::Diagram { name: name.to_string(), source })
    }

    pub fn linkoids(&self) -> impl Iterator<Item = &Entry> {
        self.manifest.entries.iter().filter(|e| e.kind == EntryKind::Linkoid)
    }
}
