//! Tab-separated file formats and model serialization.
//!
//! Everything is UTF-8 text, diff-friendly, and trivially parseable:
//!
//! - nodes:       `id<TAB>timestamp[<TAB>space-joined tokens]`
//! - edges:       `src<TAB>dst`
//! - communities: `community_id<TAB>space-joined node ids`
//! - model files: versioned header, scalars, then matrix rows rendered with
//!   17 significant digits so a round trip is bit-exact
//!
//! Output files are written to a temporary sibling and renamed into place.

mod model_file;
mod network;

pub use model_file::{load_model, save_model, MODEL_FORMAT_HEADER};
pub use network::{
    parse_communities, parse_network, parse_nodes_file, write_communities, write_network,
    LabeledCover, NetworkFileSet,
};

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("unsupported model file header: {0:?}")]
    FormatVersionMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Writes contents to `path` atomically (temp file plus rename).
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match parent {
        Some(dir) => dir.join(format!(
            ".{}.tmp",
            path.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "out".to_string())
        )),
        None => std::path::PathBuf::from(format!(
            ".{}.tmp",
            path.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "out".to_string())
        )),
    };
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
