//! Instance files: one instance together with its start and goal states.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ConstraintGraph, Cover, Hypergraph, MultiAssignment, PartialAssignment, SetSystem};
use crate::sequence::InstanceRef;
use crate::verifier::{Proof, TableVerifier};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Csp {
        graph: ConstraintGraph,
        start: PartialAssignment,
        goal: PartialAssignment,
    },
    Labelcover {
        graph: ConstraintGraph,
        start: MultiAssignment,
        goal: MultiAssignment,
    },
    Setcover {
        system: SetSystem,
        start: Cover,
        goal: Cover,
    },
    Hypergraph {
        hypergraph: Hypergraph,
        start: Cover,
        goal: Cover,
    },
    Verifier {
        verifier: TableVerifier,
        start: Proof,
        goal: Proof,
    },
}

impl InstanceFile {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceFile::Csp { .. } => "csp",
            InstanceFile::Labelcover { .. } => "labelcover",
            InstanceFile::Setcover { .. } => "setcover",
            InstanceFile::Hypergraph { .. } => "hypergraph",
            InstanceFile::Verifier { .. } => "verifier",
        }
    }

    pub fn instance(&self) -> InstanceRef<'_> {
        match self {
            InstanceFile::Csp { graph, .. } => InstanceRef::Csp(graph),
            InstanceFile::Labelcover { graph, .. } => InstanceRef::LabelCover(graph),
            InstanceFile::Setcover { system, .. } => InstanceRef::SetCover(system),
            InstanceFile::Hypergraph { hypergraph, .. } => InstanceRef::Hypergraph(hypergraph),
            InstanceFile::Verifier { verifier, .. } => InstanceRef::Verifier(verifier),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::malformed(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::malformed(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::malformed(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?).map_err(|e| Error::malformed(format!("{}: {e}", path.display())))
}
