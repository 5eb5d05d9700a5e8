//! Text and JSON shapes shared by save files, scripts and the server.

use std::collections::BTreeMap;
use std::str::FromStr;

use ndp_core::formula::{parse_infix, parse_prefix, parse_term_infix, parse_term_prefix, term_prefix, Formula, Term};
use ndp_core::proof::{Flags, Row};
use ndp_core::rules::UnknownRule;
use ndp_core::{Applicable, Axiom, ParseError, RuleApplication, RuleArgs, RuleId, Side, Status, SystemName, SystemProfile};
use serde::{Deserialize, Serialize};

/// Text containing a backslash macro anywhere, as in `P(\suc{x})`, is read
/// as prefix storage format, everything else as infix. The infix grammar has
/// no backslash tokens.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    if text.contains('\\') {
        parse_prefix(text)
    } else {
        parse_infix(text)
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    if text.contains('\\') {
        parse_term_prefix(text)
    } else {
        parse_term_infix(text)
    }
}

const ASCII_RULES: [(&str, RuleId); 14] = [
    ("&I", RuleId::AndI),
    ("&E", RuleId::AndE),
    ("|I", RuleId::OrI),
    ("|E", RuleId::OrE),
    ("->I", RuleId::ImpI),
    ("->E", RuleId::ImpE),
    ("~I", RuleId::NotI),
    ("~E", RuleId::NotE),
    ("#fE", RuleId::FalsumE),
    ("~~E", RuleId::DoubleNegE),
    ("faI", RuleId::ForallI),
    ("faE", RuleId::ForallE),
    ("exI", RuleId::ExistsI),
    ("exE", RuleId::ExistsE),
];

/// Rule names as printed (`∨E`, `Ax(S1)`) or their ASCII spellings (`|E`).
pub fn parse_rule(text: &str) -> Result<RuleId, UnknownRule> {
    RuleId::from_str(text).or_else(|e| {
        ASCII_RULES.iter().find(|(alias, _)| *alias == text).map(|(_, r)| r.clone()).ok_or(e)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomDto {
    pub name: String,
    pub formula: String,
}

/// Builds a profile from its name; `Custom` takes the given axioms.
pub fn system_profile(name: &str, axioms: &[AxiomDto]) -> Result<SystemProfile, InputError> {
    let name = SystemName::from_str(name).map_err(|_| InputError::UnknownSystem(name.to_string()))?;
    if name != SystemName::Custom {
        return Ok(SystemProfile::by_name(name));
    }
    let axioms = axioms
        .iter()
        .map(|a| {
            let formula = parse_formula(&a.formula).map_err(|e| InputError::Formula(format!("axiom {}", a.name), e))?;
            Ok(Axiom { name: a.name.clone(), formula })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    Ok(SystemProfile::custom(axioms))
}

pub fn custom_axioms(system: &SystemProfile) -> Vec<AxiomDto> {
    if system.name != SystemName::Custom {
        return Vec::new();
    }
    system
        .axioms
        .iter()
        .map(|a| AxiomDto { name: a.name.clone(), formula: ndp_core::formula::print_prefix(&a.formula) })
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}: {1}")]
    Formula(String, ParseError),
    #[error("{0}")]
    Rule(#[from] UnknownRule),
    #[error("unknown system `{0}` (expected NJ, NK, PA or Custom)")]
    UnknownSystem(String),
    #[error("unknown side `{0}` (expected left or right)")]
    Side(String),
}

impl InputError {
    pub fn code(&self) -> &'static str {
        match self {
            InputError::Formula(_, e) => e.code(),
            InputError::Rule(_) => "UnknownRule",
            InputError::UnknownSystem(_) => "UnknownSystem",
            InputError::Side(_) => "UnknownSide",
        }
    }

    pub fn position(&self) -> Option<usize> {
        match self {
            InputError::Formula(_, e) => e.position(),
            _ => None,
        }
    }
}

/// A rule application as stored in files: terms in prefix form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDto {
    pub rule: String,
    pub goal: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<String, String>,
}

impl EventDto {
    pub fn from_app(app: &RuleApplication) -> Self {
        EventDto {
            rule: app.rule.name(),
            goal: app.goal,
            resource: app.resource,
            side: app.args.side.map(|s| s.as_str().to_string()),
            witness: app.args.witness.as_ref().map(term_prefix),
            line: app.args.line,
            bindings: app.args.bindings.iter().map(|(k, t)| (k.clone(), term_prefix(t))).collect(),
        }
    }

    pub fn to_app(&self) -> Result<RuleApplication, InputError> {
        let term = |what: &str, text: &str| parse_term(text).map_err(|e| InputError::Formula(what.to_string(), e));
        let side = match &self.side {
            None => None,
            Some(s) => Some(Side::from_str(s).map_err(|_| InputError::Side(s.clone()))?),
        };
        let witness = self.witness.as_deref().map(|w| term("witness", w)).transpose()?;
        let bindings = self
            .bindings
            .iter()
            .map(|(k, v)| Ok((k.clone(), term(&format!("binding {k}"), v)?)))
            .collect::<Result<_, InputError>>()?;
        Ok(RuleApplication {
            rule: parse_rule(&self.rule)?,
            goal: self.goal,
            resource: self.resource,
            args: RuleArgs { side, witness, bindings, line: self.line },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlagsDto {
    pub current_goal: bool,
    pub current_resource: bool,
    pub out_of_scope: bool,
}

impl From<Flags> for FlagsDto {
    fn from(f: Flags) -> Self {
        FlagsDto { current_goal: f.current_goal, current_resource: f.current_resource, out_of_scope: f.out_of_scope }
    }
}

/// One rendered row, as served to the UI and written in frame exports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RowDto {
    pub creation: u32,
    pub depth: usize,
    pub formula_unicode: String,
    pub formula_prefix: String,
    pub justification: String,
    pub status: String,
    pub flags: FlagsDto,
    pub box_opens: bool,
    pub box_closes: usize,
}

impl From<&Row> for RowDto {
    fn from(r: &Row) -> Self {
        RowDto {
            creation: r.creation,
            depth: r.depth,
            formula_unicode: r.formula.clone(),
            formula_prefix: r.formula_prefix.clone(),
            justification: r.justification_text(),
            status: match r.status {
                Status::Goal => "goal",
                Status::Justified => "justified",
            }
            .to_string(),
            flags: r.flags.into(),
            box_opens: r.box_opens,
            box_closes: r.box_closes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplicableDto {
    pub rule: String,
    pub needs: Vec<String>,
    /// Button labels, e.g. `∨I-left` and `∨I-right`.
    pub labels: Vec<String>,
}

impl From<&Applicable> for ApplicableDto {
    fn from(a: &Applicable) -> Self {
        ApplicableDto {
            rule: a.rule.name(),
            needs: a.needs.iter().map(|n| n.as_str().to_string()).collect(),
            labels: a.labels(),
        }
    }
}
