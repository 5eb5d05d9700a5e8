//! Rule identifiers, proof systems and the application engine.
//!
//! Introduction rules work backwards from the current goal. Elimination
//! rules work forwards from a current resource. Rules are further split
//! into automatic ones, which need no decision beyond being chosen, and
//! choice rules, which need a side, a witness or similar input and are
//! best postponed.

mod engine;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use engine::{apply_rule, instantiate_axiom, list_applicable, magic, moves, toggle_palette, Applied, MagicOutcome, MAGIC_ROUNDS};

use crate::formula::{parse_prefix, Formula, Term};
use crate::proof::LineNo;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    AndI,
    AndE,
    OrI,
    OrE,
    ImpI,
    ImpE,
    NotI,
    NotE,
    FalsumE,
    DoubleNegE,
    ForallI,
    ForallE,
    ExistsI,
    ExistsE,
    EqI,
    EqE,
    Re,
    Ind,
    Ax(String),
    Prem,
    Ass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    /// Applied to the current goal.
    Backward,
    /// Applied to a current resource.
    Forward,
    /// Premises and assumptions.
    Structural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleClass {
    Automatic,
    Choice,
}

impl RuleId {
    /// All connective rules, in palette order.
    pub const LOGICAL: [RuleId; 18] = [
        RuleId::AndI,
        RuleId::AndE,
        RuleId::OrI,
        RuleId::OrE,
        RuleId::ImpI,
        RuleId::ImpE,
        RuleId::NotI,
        RuleId::NotE,
        RuleId::FalsumE,
        RuleId::DoubleNegE,
        RuleId::ForallI,
        RuleId::ForallE,
        RuleId::ExistsI,
        RuleId::ExistsE,
        RuleId::EqI,
        RuleId::EqE,
        RuleId::Re,
        RuleId::Ind,
    ];

    pub fn name(&self) -> String {
        match self {
            RuleId::Ax(n) => alloc::format!("Ax({n})"),
            other => other.static_name().to_string(),
        }
    }

    fn static_name(&self) -> &'static str {
        match self {
            RuleId::AndI => "∧I",
            RuleId::AndE => "∧E",
            RuleId::OrI => "∨I",
            RuleId::OrE => "∨E",
            RuleId::ImpI => "→I",
            RuleId::ImpE => "→E",
            RuleId::NotI => "¬I",
            RuleId::NotE => "¬E",
            RuleId::FalsumE => "⊥E",
            RuleId::DoubleNegE => "¬¬E",
            RuleId::ForallI => "∀I",
            RuleId::ForallE => "∀E",
            RuleId::ExistsI => "∃I",
            RuleId::ExistsE => "∃E",
            RuleId::EqI => "=I",
            RuleId::EqE => "=E",
            RuleId::Re => "Re",
            RuleId::Ind => "Ind",
            RuleId::Prem => "Prem",
            RuleId::Ass => "Ass",
            RuleId::Ax(_) => "Ax",
        }
    }

    pub fn kind(&self) -> RuleKind {
        use RuleId::*;
        match self {
            AndI | OrI | ImpI | NotI | DoubleNegE | ForallI | ExistsI | EqI | Ind | Re | Ax(_) => RuleKind::Backward,
            AndE | OrE | ImpE | NotE | FalsumE | ForallE | ExistsE | EqE => RuleKind::Forward,
            Prem | Ass => RuleKind::Structural,
        }
    }

    pub fn class(&self) -> RuleClass {
        use RuleId::*;
        match self {
            OrI | DoubleNegE | ExistsI | Ind | Ax(_) | AndE | ForallE | EqE => RuleClass::Choice,
            _ => RuleClass::Automatic,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Ax(n) => write!(f, "Ax({n})"),
            other => f.write_str(other.static_name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownRule(pub String);

impl fmt::Display for UnknownRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown rule `{}`", self.0)
    }
}

impl core::error::Error for UnknownRule {}

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(inner) = s.strip_prefix("Ax(").and_then(|r| r.strip_suffix(')')) {
            if !inner.is_empty() {
                return Ok(RuleId::Ax(inner.to_string()));
            }
        }
        RuleId::LOGICAL
            .iter()
            .chain([RuleId::Prem, RuleId::Ass].iter())
            .find(|r| r.static_name() == s)
            .cloned()
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemName {
    NJ,
    NK,
    PA,
    Custom,
}

impl SystemName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemName::NJ => "NJ",
            SystemName::NK => "NK",
            SystemName::PA => "PA",
            SystemName::Custom => "Custom",
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemName {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NJ" => Ok(SystemName::NJ),
            "NK" => Ok(SystemName::NK),
            "PA" => Ok(SystemName::PA),
            "Custom" => Ok(SystemName::Custom),
            _ => Err(UnknownRule(s.to_string())),
        }
    }
}

/// A named axiom. Free variables of `formula` act as schema variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemProfile {
    pub name: SystemName,
    pub rules: BTreeSet<RuleId>,
    pub axioms: Vec<Axiom>,
}

/// Peano axioms, each stated at its universal closure.
pub const PA_AXIOMS: [(&str, &str); 6] = [
    ("S1", "\\all{x}{\\neg{\\eq{\\suc{x}}{\\zero}}}"),
    ("S2", "\\all{x}{\\all{y}{\\imp{\\eq{\\suc{x}}{\\suc{y}}}{\\eq{x}{y}}}}"),
    ("A1", "\\all{x}{\\eq{\\plus{x}{\\zero}}{x}}"),
    ("A2", "\\all{x}{\\all{y}{\\eq{\\plus{x}{\\suc{y}}}{\\suc{\\plus{x}{y}}}}}"),
    ("M1", "\\all{x}{\\eq{\\times{x}{\\zero}}{\\zero}}"),
    ("M2", "\\all{x}{\\all{y}{\\eq{\\times{x}{\\suc{y}}}{\\plus{\\times{x}{y}}{x}}}}"),
];

impl SystemProfile {
    pub fn nj() -> SystemProfile {
        use RuleId::*;
        let rules = [AndI, AndE, OrI, OrE, ImpI, ImpE, NotI, NotE, FalsumE, ForallI, ForallE, ExistsI, ExistsE, Re];
        SystemProfile { name: SystemName::NJ, rules: rules.into_iter().collect(), axioms: Vec::new() }
    }

    pub fn nk() -> SystemProfile {
        let mut p = SystemProfile::nj();
        p.name = SystemName::NK;
        p.rules.insert(RuleId::DoubleNegE);
        p
    }

    pub fn pa() -> SystemProfile {
        let mut p = SystemProfile::nk();
        p.name = SystemName::PA;
        p.rules.extend([RuleId::EqI, RuleId::EqE, RuleId::Ind]);
        for (name, text) in PA_AXIOMS {
            let formula = parse_prefix(text).expect("built-in axiom parses");
            p.rules.insert(RuleId::Ax(name.to_string()));
            p.axioms.push(Axiom { name: name.to_string(), formula });
        }
        p
    }

    /// Every logical rule plus the given axioms.
    pub fn custom(axioms: Vec<Axiom>) -> SystemProfile {
        let mut rules: BTreeSet<RuleId> = RuleId::LOGICAL.iter().cloned().collect();
        rules.extend(axioms.iter().map(|a| RuleId::Ax(a.name.clone())));
        SystemProfile { name: SystemName::Custom, rules, axioms }
    }

    pub fn by_name(name: SystemName) -> SystemProfile {
        match name {
            SystemName::NJ => SystemProfile::nj(),
            SystemName::NK => SystemProfile::nk(),
            SystemName::PA => SystemProfile::pa(),
            SystemName::Custom => SystemProfile::custom(Vec::new()),
        }
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// Whether a justification may use this rule. Premise and assumption
    /// markers are always allowed.
    pub fn allows(&self, rule: &RuleId) -> bool {
        match rule {
            RuleId::Prem | RuleId::Ass => true,
            RuleId::Ax(n) => self.rules.contains(rule) && self.axiom(n).is_some(),
            _ => self.rules.contains(rule),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl FromStr for Side {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(UnknownRule(s.to_string())),
        }
    }
}

/// An input a rule needs before it can be applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Need {
    Side,
    Witness,
    Resource,
    /// A second cited line (the rewritten formula of `=E`).
    Line,
    Bindings,
}

impl Need {
    pub fn as_str(&self) -> &'static str {
        match self {
            Need::Side => "side",
            Need::Witness => "witness",
            Need::Resource => "resource",
            Need::Line => "line",
            Need::Bindings => "bindings",
        }
    }
}

impl fmt::Display for Need {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleArgs {
    pub side: Option<Side>,
    /// Instance term for `∃I`/`∀E`; for `∀I`/`∃E` the eigenvariable
    /// constant, recorded when the engine picks it.
    pub witness: Option<Term>,
    /// Schema variable instances for `Ax(..)`.
    pub bindings: BTreeMap<String, Term>,
    pub line: Option<LineNo>,
}

/// One rule application: the event that history and save files record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: RuleId,
    pub goal: LineNo,
    pub resource: Option<LineNo>,
    pub args: RuleArgs,
}

impl RuleApplication {
    pub fn new(rule: RuleId, goal: LineNo) -> Self {
        RuleApplication { rule, goal, resource: None, args: RuleArgs::default() }
    }

    pub fn resource(mut self, r: LineNo) -> Self {
        self.resource = Some(r);
        self
    }

    pub fn side(mut self, s: Side) -> Self {
        self.args.side = Some(s);
        self
    }

    pub fn witness(mut self, t: Term) -> Self {
        self.args.witness = Some(t);
        self
    }

    pub fn line(mut self, n: LineNo) -> Self {
        self.args.line = Some(n);
        self
    }

    pub fn binding(mut self, var: impl Into<String>, t: Term) -> Self {
        self.args.bindings.insert(var.into(), t);
        self
    }
}

/// A rule offered for the current selection and the inputs it still needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applicable {
    pub rule: RuleId,
    pub needs: Vec<Need>,
}

impl Applicable {
    /// Expanded labels such as `∨I-left`/`∨I-right` for side choices.
    pub fn labels(&self) -> Vec<String> {
        if self.needs.contains(&Need::Side) {
            alloc::vec![alloc::format!("{}-left", self.rule), alloc::format!("{}-right", self.rule)]
        } else {
            alloc::vec![self.rule.name()]
        }
    }
}

/// Interactive applications respect the palette and the system and check
/// eigenvariable conditions eagerly. Replay trusts the recorded events and
/// only requires that each one still fits the proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApplyMode {
    Interactive,
    Replay,
}
