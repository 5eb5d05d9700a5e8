use alloc::string::String;
use core::fmt;

use crate::proof::LineNo;
use crate::rules::{Need, RuleId};

/// Errors raised by the proof engine. Each variant has a stable code that
/// the session protocol and the command line report verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    NoSuchLine(LineNo),
    NotAGoal(LineNo),
    NotJustified(LineNo),
    NoGoalSelected,
    OutOfScope(LineNo),
    RuleDisabled(RuleId),
    ShapeMismatch(String),
    MissingArgument(Need),
    EigenvariableViolation(String),
    NoSuchAxiom(String),
    NothingToUndo,
    NothingToRedo,
    /// The session is a demonstration; only playback is allowed.
    ReadOnly,
}

impl EngineError {
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::NoSuchLine(_) => "NoSuchLine",
            EngineError::NotAGoal(_) => "NotAGoal",
            EngineError::NotJustified(_) => "NotJustified",
            EngineError::NoGoalSelected => "NoGoalSelected",
            EngineError::OutOfScope(_) => "OutOfScope",
            EngineError::RuleDisabled(_) => "RuleDisabled",
            EngineError::ShapeMismatch(_) => "ShapeMismatch",
            EngineError::MissingArgument(_) => "MissingArgument",
            EngineError::EigenvariableViolation(_) => "EigenvariableViolation",
            EngineError::NoSuchAxiom(_) => "NoSuchAxiom",
            EngineError::NothingToUndo => "NothingToUndo",
            EngineError::NothingToRedo => "NothingToRedo",
            EngineError::ReadOnly => "ReadOnly",
        }
    }

    /// The line the error is about, when there is one.
    pub fn at(&self) -> Option<LineNo> {
        match self {
            EngineError::NoSuchLine(n)
            | EngineError::NotAGoal(n)
            | EngineError::NotJustified(n)
            | EngineError::OutOfScope(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::NoSuchLine(n) => write!(f, "line {n} does not exist"),
            EngineError::NotAGoal(n) => write!(f, "line {n} is already justified"),
            EngineError::NotJustified(n) => write!(f, "line {n} is not justified and cannot be used"),
            EngineError::NoGoalSelected => f.write_str("select a goal first"),
            EngineError::OutOfScope(n) => write!(f, "line {n} is out of scope of the goal"),
            EngineError::RuleDisabled(r) => write!(f, "rule {r} is not available"),
            EngineError::ShapeMismatch(m) => f.write_str(m),
            EngineError::MissingArgument(need) => write!(f, "missing argument: {need}"),
            EngineError::EigenvariableViolation(m) => f.write_str(m),
            EngineError::NoSuchAxiom(a) => write!(f, "no axiom named {a}"),
            EngineError::NothingToUndo => f.write_str("nothing to undo"),
            EngineError::NothingToRedo => f.write_str("nothing to redo"),
            EngineError::ReadOnly => f.write_str("demonstration proofs have interaction disabled"),
        }
    }
}

impl core::error::Error for EngineError {}
