//! Event-sourced editing sessions with undo.
//!
//! Only rule applications are events. Selections and palette changes are
//! part of the visible state but are not replayed: the palette survives
//! undo, and each recorded application names its own goal and resource.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::EngineError;
use crate::formula::Formula;
use crate::proof::{new_proof, LineNo, ProofState};
use crate::rules::{apply_rule, magic, toggle_palette, ApplyMode, RuleApplication, RuleId, SystemProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Editable,
    /// Playback only. Opened from demonstration files.
    Demo,
}

/// Everything needed to rebuild a session: the problem, the settings and
/// the event log with its undo cursor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofDocument {
    pub system: SystemProfile,
    pub palette: BTreeSet<RuleId>,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub events: Vec<RuleApplication>,
    pub undo_cursor: usize,
}

impl ProofDocument {
    pub fn new(premises: Vec<Formula>, conclusion: Formula, system: SystemProfile) -> Self {
        let palette = system.rules.clone();
        ProofDocument { system, palette, premises, conclusion, events: Vec::new(), undo_cursor: 0 }
    }

    fn initial(&self) -> ProofState {
        new_proof(self.premises.clone(), self.conclusion.clone(), self.system.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub event_index: usize,
    pub error: EngineError,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "event {}: {}", self.event_index, self.error)
    }
}

impl core::error::Error for ReplayError {}

/// The state after the first `upto` events, with the document's palette.
/// Events are applied without palette or system checks, so a document
/// describes exactly the proof it records; [`crate::check_proof`] judges it.
pub fn replay(doc: &ProofDocument, upto: usize) -> Result<ProofState, ReplayError> {
    let mut st = doc.initial();
    for (i, app) in doc.events.iter().take(upto).enumerate() {
        st = apply_rule(&st, app, ApplyMode::Replay).map_err(|error| ReplayError { event_index: i, error })?.state;
    }
    st.palette = doc.palette.clone();
    Ok(st)
}

#[derive(Clone, Debug)]
pub struct Session {
    state: ProofState,
    events: Vec<RuleApplication>,
    /// `snapshots[k]` is the state after the first `k` events.
    snapshots: Vec<ProofState>,
    cursor: usize,
    mode: Mode,
}

impl Session {
    pub fn new(premises: Vec<Formula>, conclusion: Formula, system: SystemProfile) -> Self {
        Session::from_state(new_proof(premises, conclusion, system))
    }

    fn from_state(initial: ProofState) -> Self {
        Session { state: initial.clone(), events: Vec::new(), snapshots: alloc::vec![initial], cursor: 0, mode: Mode::Editable }
    }

    /// Rebuilds a session by replaying every event, then moves to the
    /// document's undo cursor.
    pub fn from_document(doc: &ProofDocument, mode: Mode) -> Result<Self, ReplayError> {
        let mut snapshots = alloc::vec![doc.initial()];
        let mut events = Vec::new();
        for (i, app) in doc.events.iter().enumerate() {
            let last = snapshots.last().expect("initial snapshot");
            let applied =
                apply_rule(last, app, ApplyMode::Replay).map_err(|error| ReplayError { event_index: i, error })?;
            snapshots.push(applied.state);
            events.push(applied.record);
        }
        if doc.undo_cursor > events.len() {
            return Err(ReplayError { event_index: doc.undo_cursor, error: EngineError::NothingToRedo });
        }
        let mut state = snapshots[doc.undo_cursor].clone();
        state.palette = doc.palette.clone();
        Ok(Session { state, events, snapshots, cursor: doc.undo_cursor, mode })
    }

    pub fn to_document(&self) -> ProofDocument {
        let initial = &self.snapshots[0];
        let premises = initial.premises().into_iter().map(|l| l.formula.clone()).collect();
        let conclusion = initial.lines().last().expect("conclusion line").formula.clone();
        ProofDocument {
            system: self.state.system.clone(),
            palette: self.state.palette.clone(),
            premises,
            conclusion,
            events: self.events.clone(),
            undo_cursor: self.cursor,
        }
    }

    pub fn state(&self) -> &ProofState {
        &self.state
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The whole log, including undone events that can still be redone.
    pub fn events(&self) -> &[RuleApplication] {
        &self.events
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn can_undo(&self) -> bool {
        self.cursor > 0
    }

    pub fn can_redo(&self) -> bool {
        self.cursor < self.events.len()
    }

    fn editable(&self) -> Result<(), EngineError> {
        match self.mode {
            Mode::Editable => Ok(()),
            Mode::Demo => Err(EngineError::ReadOnly),
        }
    }

    /// Leaves demonstration mode so the user can continue the proof.
    pub fn take_over(&mut self) {
        self.mode = Mode::Editable;
    }

    pub fn select_goal(&mut self, creation: LineNo) -> Result<(), EngineError> {
        self.editable()?;
        self.state.select_goal(creation)
    }

    pub fn select_resource(&mut self, creation: LineNo) -> Result<(), EngineError> {
        self.editable()?;
        self.state.select_resource(creation)
    }

    pub fn clear_resource(&mut self) -> Result<(), EngineError> {
        self.editable()?;
        self.state.clear_resource();
        Ok(())
    }

    pub fn set_palette(&mut self, rule: RuleId, on: bool) -> Result<(), EngineError> {
        self.editable()?;
        self.state = toggle_palette(&self.state, rule, on);
        Ok(())
    }

    fn push(&mut self, state: ProofState, record: RuleApplication) {
        self.events.truncate(self.cursor);
        self.snapshots.truncate(self.cursor + 1);
        self.events.push(record);
        self.snapshots.push(state.clone());
        self.cursor += 1;
        self.state = state;
    }

    /// Applies a rule and records it, discarding any redo tail.
    pub fn apply(&mut self, app: &RuleApplication) -> Result<(), EngineError> {
        self.editable()?;
        let applied = apply_rule(&self.state, app, ApplyMode::Interactive)?;
        self.push(applied.state, applied.record);
        Ok(())
    }

    /// Runs magic mode, recording each application as its own event.
    /// Returns how many rules were applied.
    pub fn magic(&mut self) -> Result<usize, EngineError> {
        self.editable()?;
        let mut st = self.state.clone();
        let outcome = magic(&st);
        for app in &outcome.applications {
            st = apply_rule(&st, app, ApplyMode::Interactive)?.state;
            self.push(st.clone(), app.clone());
        }
        Ok(outcome.applications.len())
    }

    fn show(&mut self, k: usize) {
        let palette = core::mem::take(&mut self.state.palette);
        self.cursor = k;
        self.state = self.snapshots[k].clone();
        self.state.palette = palette;
    }

    pub fn undo(&mut self) -> Result<(), EngineError> {
        if self.cursor == 0 {
            return Err(EngineError::NothingToUndo);
        }
        self.show(self.cursor - 1);
        Ok(())
    }

    pub fn redo(&mut self) -> Result<(), EngineError> {
        if self.cursor == self.events.len() {
            return Err(EngineError::NothingToRedo);
        }
        self.show(self.cursor + 1);
        Ok(())
    }

    /// Jumps to the state after `k` events. Used for playback.
    pub fn goto(&mut self, k: usize) -> Result<(), EngineError> {
        if k > self.events.len() {
            return Err(EngineError::NothingToRedo);
        }
        self.show(k);
        Ok(())
    }
}
