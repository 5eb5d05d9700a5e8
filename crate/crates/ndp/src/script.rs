//! Headless proof scripts: a sequent plus a list of session commands.

use std::collections::BTreeSet;

use ndp_core::formula::Formula;
use ndp_core::{EngineError, LineNo, RuleApplication, RuleId, Session, SystemName, SystemProfile};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::wire::{parse_formula, parse_rule, system_profile, AxiomDto, EventDto, InputError};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Script {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axioms: Vec<AxiomDto>,
    /// Initial palette: a system name or an explicit list of enabled rules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palette: Option<PaletteSpec>,
    #[serde(default)]
    pub premises: Vec<String>,
    pub conclusion: String,
    #[serde(default)]
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PaletteSpec {
    System(String),
    Rules(Vec<String>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Step {
    SelectGoal(LineNo),
    SelectResource(LineNo),
    ClearResource,
    Apply(ApplyStep),
    Magic,
    Undo,
    Redo,
    Palette { rule: String, on: bool },
}

/// Omitted `goal` and `resource` default to the current selection.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ApplyStep {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<LineNo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<LineNo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineNo>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<String, String>,
}

#[derive(Debug, thiserror::Error)]
pub enum StepError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Input(#[from] InputError),
}

impl StepError {
    pub fn code(&self) -> &'static str {
        match self {
            StepError::Engine(e) => e.code(),
            StepError::Input(e) => e.code(),
        }
    }
}

/// Result of running a script: the session as far as it got, and the first
/// rejected step (1-based) if any.
pub struct Run {
    pub session: Session,
    pub failure: Option<(usize, StepError)>,
}

impl ApplyStep {
    pub fn to_app(&self, session: &Session) -> Result<RuleApplication, StepError> {
        let sel = session.state().selection;
        let event = EventDto {
            rule: self.rule.clone(),
            goal: self.goal.or(sel.goal).ok_or(EngineError::NoGoalSelected)?,
            resource: self.resource.or(sel.resource),
            side: self.side.clone(),
            witness: self.witness.clone(),
            line: self.line,
            bindings: self.bindings.clone(),
        };
        Ok(event.to_app()?)
    }
}

impl Script {
    pub fn from_json(text: &str) -> serde_json::Result<Script> {
        serde_json::from_str(text)
    }

    /// The script's own system wins over `default`, which wins over NK.
    pub fn profile(&self, default: Option<&str>) -> Result<SystemProfile, InputError> {
        let name = self.system.as_deref().or(default).unwrap_or(SystemName::NK.as_str());
        system_profile(name, &self.axioms)
    }

    pub fn sequent(&self) -> Result<(Vec<Formula>, Formula), InputError> {
        let premises = self
            .premises
            .iter()
            .enumerate()
            .map(|(i, p)| parse_formula(p).map_err(|e| InputError::Formula(format!("premise {}", i + 1), e)))
            .collect::<Result<_, _>>()?;
        let conclusion = parse_formula(&self.conclusion).map_err(|e| InputError::Formula("conclusion".into(), e))?;
        Ok((premises, conclusion))
    }

    fn initial_palette(&self) -> Result<Option<BTreeSet<RuleId>>, InputError> {
        Ok(match &self.palette {
            None => None,
            Some(PaletteSpec::System(name)) => Some(system_profile(name, &self.axioms)?.rules),
            Some(PaletteSpec::Rules(rules)) => {
                Some(rules.iter().map(|r| parse_rule(r)).collect::<Result<_, _>>()?)
            }
        })
    }

    /// Builds the session and runs every step, stopping at the first
    /// rejected one.
    pub fn run(&self, default_system: Option<&str>) -> Result<Run, InputError> {
        let system = self.profile(default_system)?;
        let (premises, conclusion) = self.sequent()?;
        let palette = self.initial_palette()?;
        let mut session = Session::new(premises, conclusion, system.clone());
        if let Some(enabled) = palette {
            for rule in &system.rules {
                session.set_palette(rule.clone(), enabled.contains(rule)).expect("fresh sessions are editable");
            }
        }
        for (i, step) in self.steps.iter().enumerate() {
            if let Err(e) = run_step(&mut session, step) {
                return Ok(Run { session, failure: Some((i + 1, e)) });
            }
        }
        Ok(Run { session, failure: None })
    }
}

pub fn run_step(session: &mut Session, step: &Step) -> Result<(), StepError> {
    match step {
        Step::SelectGoal(n) => session.select_goal(*n)?,
        Step::SelectResource(n) => session.select_resource(*n)?,
        Step::ClearResource => session.clear_resource()?,
        Step::Apply(a) => {
            let app = a.to_app(session)?;
            session.apply(&app)?
        }
        Step::Magic => {
            session.magic()?;
        }
        Step::Undo => session.undo()?,
        Step::Redo => session.redo()?,
        Step::Palette { rule, on } => session.set_palette(parse_rule(rule).map_err(InputError::from)?, *on)?,
    }
    Ok(())
}
