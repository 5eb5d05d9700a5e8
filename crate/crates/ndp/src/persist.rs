//! `.ndp` / `.ndu` save files.
//!
//! Both extensions hold the same JSON document; the extension only decides
//! whether the file opens as an editable proof or as a demonstration.

use std::fs;
use std::path::{Path, PathBuf};

use ndp_core::formula::print_prefix;
use ndp_core::{Mode, ProofDocument, ReplayError, RuleId, Session};
use serde::{Deserialize, Serialize};

use crate::wire::{custom_axioms, parse_formula, parse_rule, system_profile, AxiomDto, EventDto, InputError};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct FileDto {
    format_version: u64,
    settings: SettingsDto,
    premises: Vec<String>,
    conclusion: String,
    events: Vec<EventDto>,
    undo_cursor: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SettingsDto {
    system_name: String,
    palette: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    axioms: Vec<AxiomDto>,
}

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported formatVersion {0} (this build reads version {FORMAT_VERSION})")]
    Version(u64),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("undoCursor {cursor} is beyond the {events} recorded events")]
    Cursor { cursor: usize, events: usize },
    #[error("replay failed at {0}")]
    Replay(#[from] ReplayError),
}

/// Canonical text: fixed key order, two-space indentation, final newline.
pub fn to_string(doc: &ProofDocument) -> String {
    let dto = FileDto {
        format_version: FORMAT_VERSION,
        settings: SettingsDto {
            system_name: doc.system.name.as_str().to_string(),
            palette: doc.palette.iter().map(RuleId::name).collect(),
            axioms: custom_axioms(&doc.system),
        },
        premises: doc.premises.iter().map(print_prefix).collect(),
        conclusion: print_prefix(&doc.conclusion),
        events: doc.events.iter().map(EventDto::from_app).collect(),
        undo_cursor: doc.undo_cursor,
    };
    let mut text = serde_json::to_string_pretty(&dto).expect("documents serialize");
    text.push('\n');
    text
}

pub fn from_str(text: &str) -> Result<ProofDocument, PersistError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("formatVersion").and_then(|v| v.as_u64()) {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(PersistError::Version(v)),
        None => return Err(PersistError::Json(serde::de::Error::missing_field("formatVersion"))),
    }
    let dto: FileDto = serde_json::from_value(value)?;
    let system = system_profile(&dto.settings.system_name, &dto.settings.axioms)?;
    let palette = dto.settings.palette.iter().map(|r| parse_rule(r)).collect::<Result<_, _>>().map_err(InputError::from)?;
    let formula = |what: String, text: &str| parse_formula(text).map_err(|e| InputError::Formula(what, e));
    let premises = dto
        .premises
        .iter()
        .enumerate()
        .map(|(i, p)| formula(format!("premise {}", i + 1), p))
        .collect::<Result<_, _>>()?;
    let conclusion = formula("conclusion".into(), &dto.conclusion)?;
    let events = dto.events.iter().map(EventDto::to_app).collect::<Result<Vec<_>, _>>()?;
    if dto.undo_cursor > events.len() {
        return Err(PersistError::Cursor { cursor: dto.undo_cursor, events: events.len() });
    }
    Ok(ProofDocument { system, palette, premises, conclusion, events, undo_cursor: dto.undo_cursor })
}

/// `.ndu` files open as demonstrations; anything else is editable.
pub fn mode_for_path(path: &Path) -> Mode {
    match path.extension().and_then(|e| e.to_str()) {
        Some("ndu") => Mode::Demo,
        _ => Mode::Editable,
    }
}

pub fn save(session: &Session, path: &Path) -> Result<(), PersistError> {
    fs::write(path, to_string(&session.to_document()))
        .map_err(|source| PersistError::Io { path: path.to_path_buf(), source })
}

pub fn read_document(path: &Path) -> Result<ProofDocument, PersistError> {
    let text = fs::read_to_string(path).map_err(|source| PersistError::Io { path: path.to_path_buf(), source })?;
    from_str(&text)
}

/// Reads and replays a save file, opening it in the mode its extension
/// selects.
pub fn load(path: &Path) -> Result<Session, PersistError> {
    let doc = read_document(path)?;
    Ok(Session::from_document(&doc, mode_for_path(path))?)
}
