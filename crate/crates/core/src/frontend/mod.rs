//! Textual frontend: `.dom` model files and the workspace loader.
//!
//! A workspace is a directory of `.dom` files, one model per file, the file
//! stem naming the model. Chain membership is not configured anywhere; it is
//! inferred from the `refines` clauses of the headers. Parsing and
//! serialization are exact inverses on well-formed models, so the files can
//! be rewritten mechanically (the `backprop` command relies on this).

mod parse;
mod serialize;

pub use parse::parse_domain_model;
pub use serialize::serialize_domain_model;

use crate::domain::{resolve_chain, ChainError, RefinementChain};
use serde::Serialize;
use std::path::Path;
use std::{fs, io};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {line}, column {column}: {message}")]
pub struct ModelParseError {
    /// 1-based line in the file.
    pub line: usize,
    /// 1-based character column in the line.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{file}: {error}")]
    Parse { file: String, error: ModelParseError },
    #[error("{file}: the file is named '{stem}.dom' but declares model '{model}'")]
    NameMismatch { file: String, stem: String, model: String },
    #[error("no .dom files found in '{0}'")]
    Empty(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Load every `.dom` file of the directory and order the models into a
/// refinement chain. Files are read in name order, so errors are reported
/// deterministically; the chain order itself comes from the `refines`
/// clauses.
pub fn load_workspace(dir: &Path) -> Result<RefinementChain, WorkspaceError> {
    let dir_error =
        |source: io::Error| WorkspaceError::Io { path: dir.display().to_string(), source };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(dir_error)? {
        let path = entry.map_err(dir_error)?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("dom") {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(WorkspaceError::Empty(dir.display().to_string()));
    }
    let mut models = Vec::new();
    for path in paths {
        let file = path.display().to_string();
        let text = fs::read_to_string(&path)
            .map_err(|source| WorkspaceError::Io { path: file.clone(), source })?;
        let model = parse_domain_model(&text)
            .map_err(|error| WorkspaceError::Parse { file: file.clone(), error })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        if stem != model.name {
            return Err(WorkspaceError::NameMismatch {
                file,
                stem: stem.to_string(),
                model: model.name,
            });
        }
        models.push(model);
    }
    Ok(resolve_chain(models)?)
}

/// Write every model of the chain back as `<name>.dom` files.
pub fn save_workspace(dir: &Path, chain: &RefinementChain) -> Result<(), WorkspaceError> {
    let io_error = |path: &Path| {
        let path = path.display().to_string();
        move |source: io::Error| WorkspaceError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    for model in chain.models() {
        let path = dir.join(format!("{}.dom", model.name));
        fs::write(&path, serialize_domain_model(model)).map_err(io_error(&path))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) {
        fs::write(dir.join(name), text).unwrap();
    }

    #[test]
    fn loads_a_chain_from_dom_files() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "B.dom", "domainmodel B refines A\nconcept SUB subconceptof T\n");
        write(dir.path(), "A.dom", "domainmodel A\nconcept T\n");
        write(dir.path(), "notes.txt", "not a model");
        let chain = load_workspace(dir.path()).unwrap();
        let names: Vec<&str> = chain.models().iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["A", "B"]);
        assert_eq!(chain.models()[1].refinement_level, 1);
    }

    #[test]
    fn save_and_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "A.dom", "domainmodel A\nconcept T\nindividual k of T\n");
        write(dir.path(), "B.dom", "domainmodel B refines A\nformula gluing: k = k\n");
        let chain = load_workspace(dir.path()).unwrap();

        let out = tempfile::tempdir().unwrap();
        save_workspace(out.path(), &chain).unwrap();
        let reloaded = load_workspace(out.path()).unwrap();
        assert_eq!(reloaded, chain);
    }

    #[test]
    fn file_name_must_match_the_model_name() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "Other.dom", "domainmodel A\n");
        match load_workspace(dir.path()).unwrap_err() {
            WorkspaceError::NameMismatch { stem, model, .. } => {
                assert_eq!(stem, "Other");
                assert_eq!(model, "A");
            }
            other => panic!("expected a name mismatch, got {other}"),
        }
    }

    #[test]
    fn parse_errors_carry_the_file_name() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "A.dom", "domainmodel A\nconcpet T\n");
        match load_workspace(dir.path()).unwrap_err() {
            WorkspaceError::Parse { file, error } => {
                assert!(file.ends_with("A.dom"));
                assert_eq!(error.line, 2);
            }
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn missing_and_empty_directories_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_workspace(dir.path()).unwrap_err(), WorkspaceError::Empty(_)));
        let missing = dir.path().join("nowhere");
        assert!(matches!(load_workspace(&missing).unwrap_err(), WorkspaceError::Io { .. }));
    }

    #[test]
    fn unresolvable_chains_are_chain_errors() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "A.dom", "domainmodel A refines B\n");
        write(dir.path(), "B.dom", "domainmodel B refines A\n");
        assert!(matches!(load_workspace(dir.path()).unwrap_err(), WorkspaceError::Chain(_)));
    }
}
