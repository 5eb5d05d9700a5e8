//! Goal-directed natural deduction with creation-order line numbering.
//!
//! A proof starts as premises plus one unjustified conclusion. Introduction
//! rules applied to the current goal split it into subgoals; elimination
//! rules applied to a current resource deploy it towards the goal. Every
//! new line is numbered in the order it was created, so the finished
//! deduction records how it was built.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and the session server live in the `ndp` crate.
#![no_std]

extern crate alloc;

pub mod checker;
pub mod error;
pub mod export;
pub mod formula;
pub mod proof;
pub mod rules;
pub mod session;

pub use checker::{check_line, check_proof, CheckReport, CheckStatus, DiagCode, Diagnostic};
pub use error::EngineError;
pub use formula::{Formula, ParseError, Term};
pub use proof::{
    new_proof, Justification, LineNo, Node, ProofLine, ProofState, Ref, RenderedProof, Role, Row, Selection, Status,
};
pub use rules::{
    apply_rule, list_applicable, magic, Applicable, ApplyMode, Axiom, Need, RuleApplication, RuleArgs, RuleId, Side,
    SystemName, SystemProfile,
};
pub use session::{replay, Mode, ProofDocument, ReplayError, Session};
