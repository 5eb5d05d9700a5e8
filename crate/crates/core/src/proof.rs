//! Proof states: lines, boxes, creation numbers and the current selection.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::EngineError;
use crate::formula::{print_latex, print_prefix, print_unicode, Formula};
use crate::rules::{RuleId, SystemProfile};

/// Creation number of a line.
pub type LineNo = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Goal,
    Justified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Premise,
    Assumption,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ref {
    Line(LineNo),
    /// A closed box, from its assumption to its last line.
    Range(LineNo, LineNo),
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ref::Line(n) => write!(f, "{n}"),
            Ref::Range(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub rule: RuleId,
    pub refs: Vec<Ref>,
}

impl Justification {
    pub fn new(rule: RuleId, refs: Vec<Ref>) -> Self {
        Justification { rule, refs }
    }

    /// Comma-separated references, without the rule name.
    pub fn refs_text(&self) -> String {
        let parts: Vec<String> = self.refs.iter().map(|r| r.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for Justification {
    /// `1,5-6,7-8,∨E`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.refs {
            write!(f, "{r},")?;
        }
        write!(f, "{}", self.rule)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub creation: LineNo,
    pub formula: Formula,
    pub status: Status,
    pub justification: Option<Justification>,
    pub role: Role,
}

impl ProofLine {
    pub fn goal(creation: LineNo, formula: Formula) -> Self {
        ProofLine { creation, formula, status: Status::Goal, justification: None, role: Role::Derived }
    }

    pub fn is_goal(&self) -> bool {
        self.status == Status::Goal
    }
}

/// Vertical layout. A box's first node is its assumption line and its last
/// node is its hypothetical conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Line(ProofLine),
    Box(Vec<Node>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Selection {
    pub goal: Option<LineNo>,
    pub resource: Option<LineNo>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofState {
    pub layout: Vec<Node>,
    pub next_creation: LineNo,
    pub selection: Selection,
    pub system: SystemProfile,
    /// Rules currently offered. Availability only: the engine can apply
    /// any rule when replaying.
    pub palette: BTreeSet<RuleId>,
}

/// One line in vertical order together with its box nesting.
#[derive(Clone, Debug)]
pub struct Slot<'a> {
    pub line: &'a ProofLine,
    pub position: usize,
    /// Enclosing boxes, outermost first. A box is identified by the
    /// position of its first row.
    pub boxes: Vec<usize>,
    pub opens_box: bool,
    pub closes_boxes: usize,
}

impl Slot<'_> {
    pub fn depth(&self) -> usize {
        self.boxes.len()
    }

    /// The innermost box holding this line, if any.
    pub fn container(&self) -> Option<usize> {
        self.boxes.last().copied()
    }
}

/// Premises become lines `1..=k` and the conclusion the goal line `k+1`,
/// which starts selected.
pub fn new_proof(premises: Vec<Formula>, conclusion: Formula, system: SystemProfile) -> ProofState {
    let mut layout = Vec::new();
    let mut n = 1;
    for p in premises {
        layout.push(Node::Line(ProofLine {
            creation: n,
            formula: p,
            status: Status::Justified,
            justification: Some(Justification::new(RuleId::Prem, Vec::new())),
            role: Role::Premise,
        }));
        n += 1;
    }
    layout.push(Node::Line(ProofLine::goal(n, conclusion)));
    let palette = system.rules.clone();
    let selection = Selection { goal: Some(n), resource: None };
    ProofState { layout, next_creation: n + 1, selection, system, palette }
}

fn flatten<'a>(nodes: &'a [Node], boxes: &mut Vec<usize>, out: &mut Vec<Slot<'a>>) {
    for node in nodes {
        match node {
            Node::Line(line) => out.push(Slot {
                line,
                position: out.len(),
                boxes: boxes.clone(),
                opens_box: false,
                closes_boxes: 0,
            }),
            Node::Box(inner) => {
                let start = out.len();
                boxes.push(start);
                flatten(inner, boxes, out);
                boxes.pop();
                if out.len() > start {
                    out[start].opens_box = true;
                    let last = out.len() - 1;
                    out[last].closes_boxes += 1;
                }
            }
        }
    }
}

impl ProofState {
    /// Lines in vertical order.
    pub fn slots(&self) -> Vec<Slot<'_>> {
        let mut out = Vec::new();
        flatten(&self.layout, &mut Vec::new(), &mut out);
        out
    }

    pub fn line(&self, creation: LineNo) -> Option<&ProofLine> {
        fn find(nodes: &[Node], n: LineNo) -> Option<&ProofLine> {
            nodes.iter().find_map(|node| match node {
                Node::Line(l) if l.creation == n => Some(l),
                Node::Line(_) => None,
                Node::Box(inner) => find(inner, n),
            })
        }
        find(&self.layout, creation)
    }

    pub fn line_mut(&mut self, creation: LineNo) -> Option<&mut ProofLine> {
        fn find(nodes: &mut [Node], n: LineNo) -> Option<&mut ProofLine> {
            nodes.iter_mut().find_map(|node| match node {
                Node::Line(l) if l.creation == n => Some(l),
                Node::Line(_) => None,
                Node::Box(inner) => find(inner, n),
            })
        }
        find(&mut self.layout, creation)
    }

    /// All lines, in vertical order.
    pub fn lines(&self) -> Vec<&ProofLine> {
        self.slots().into_iter().map(|s| s.line).collect()
    }

    pub fn premises(&self) -> Vec<&ProofLine> {
        self.lines().into_iter().filter(|l| l.role == Role::Premise).collect()
    }

    pub fn goals(&self) -> Vec<LineNo> {
        let mut g: Vec<LineNo> = self.lines().into_iter().filter(|l| l.is_goal()).map(|l| l.creation).collect();
        g.sort_unstable();
        g
    }

    pub fn is_complete(&self) -> bool {
        self.lines().iter().all(|l| !l.is_goal())
    }

    /// Every identifier used anywhere in the proof.
    pub fn used_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        for l in self.lines() {
            l.formula.collect_names(&mut names);
        }
        names
    }

    /// Lines above `creation` whose enclosing boxes are all still open at
    /// its position. A line is never in its own scope.
    pub fn lines_in_scope(&self, creation: LineNo) -> Result<BTreeSet<LineNo>, EngineError> {
        let slots = self.slots();
        let target = slots.iter().find(|s| s.line.creation == creation).ok_or(EngineError::NoSuchLine(creation))?;
        Ok(slots[..target.position]
            .iter()
            .filter(|s| match s.container() {
                None => true,
                Some(b) => target.boxes.contains(&b),
            })
            .map(|s| s.line.creation)
            .collect())
    }

    /// In-scope lines at `creation`, in vertical order.
    pub(crate) fn scope_lines(&self, creation: LineNo) -> Vec<&ProofLine> {
        let scope = self.lines_in_scope(creation).unwrap_or_default();
        self.lines().into_iter().filter(|l| scope.contains(&l.creation)).collect()
    }

    pub fn select_goal(&mut self, creation: LineNo) -> Result<(), EngineError> {
        let line = self.line(creation).ok_or(EngineError::NoSuchLine(creation))?;
        if !line.is_goal() {
            return Err(EngineError::NotAGoal(creation));
        }
        self.selection.goal = Some(creation);
        if let Some(r) = self.selection.resource {
            if !self.lines_in_scope(creation)?.contains(&r) {
                self.selection.resource = None;
            }
        }
        Ok(())
    }

    pub fn select_resource(&mut self, creation: LineNo) -> Result<(), EngineError> {
        let goal = self.selection.goal.ok_or(EngineError::NoGoalSelected)?;
        let line = self.line(creation).ok_or(EngineError::NoSuchLine(creation))?;
        if line.is_goal() {
            return Err(EngineError::NotJustified(creation));
        }
        if !self.lines_in_scope(goal)?.contains(&creation) {
            return Err(EngineError::OutOfScope(creation));
        }
        self.selection.resource = Some(creation);
        Ok(())
    }

    pub fn clear_resource(&mut self) {
        self.selection.resource = None;
    }

    /// Inserts `nodes` directly above line `creation`, inside its box.
    pub(crate) fn insert_above(&mut self, creation: LineNo, nodes: Vec<Node>) -> Result<(), EngineError> {
        fn go(container: &mut Vec<Node>, n: LineNo, nodes: &mut Option<Vec<Node>>) -> bool {
            for i in 0..container.len() {
                match &mut container[i] {
                    Node::Line(l) if l.creation == n => {
                        let new = nodes.take().unwrap_or_default();
                        container.splice(i..i, new);
                        return true;
                    }
                    Node::Line(_) => {}
                    Node::Box(inner) => {
                        if go(inner, n, nodes) {
                            return true;
                        }
                    }
                }
            }
            false
        }
        let mut nodes = Some(nodes);
        if go(&mut self.layout, creation, &mut nodes) {
            Ok(())
        } else {
            Err(EngineError::NoSuchLine(creation))
        }
    }

    /// Rows for display, in vertical order. All exporters and the session
    /// protocol render from this.
    pub fn render(&self) -> RenderedProof {
        let goal_scope = self.selection.goal.and_then(|g| self.lines_in_scope(g).ok());
        let rows = self
            .slots()
            .into_iter()
            .map(|s| {
                let l = s.line;
                let out_of_scope = match (&goal_scope, self.selection.goal) {
                    (Some(scope), Some(g)) => l.creation != g && !scope.contains(&l.creation),
                    _ => false,
                };
                Row {
                    creation: l.creation,
                    depth: s.depth(),
                    formula: print_unicode(&l.formula),
                    formula_prefix: print_prefix(&l.formula),
                    formula_latex: print_latex(&l.formula),
                    status: l.status,
                    justification: l.justification.as_ref().map(|j| RenderedJustification {
                        refs: j.refs_text(),
                        rule: j.rule.name(),
                    }),
                    flags: Flags {
                        current_goal: self.selection.goal == Some(l.creation),
                        current_resource: self.selection.resource == Some(l.creation),
                        out_of_scope,
                    },
                    box_opens: s.opens_box,
                    box_closes: s.closes_boxes,
                }
            })
            .collect();
        RenderedProof { rows }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderedJustification {
    pub refs: String,
    pub rule: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub current_goal: bool,
    pub current_resource: bool,
    pub out_of_scope: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub creation: LineNo,
    pub depth: usize,
    pub formula: String,
    pub formula_prefix: String,
    pub formula_latex: String,
    pub status: Status,
    pub justification: Option<RenderedJustification>,
    pub flags: Flags,
    pub box_opens: bool,
    pub box_closes: usize,
}

impl Row {
    /// `refs,rule`, just `rule` without refs, or empty for goals.
    pub fn justification_text(&self) -> String {
        match &self.justification {
            None => String::new(),
            Some(j) if j.refs.is_empty() => j.rule.clone(),
            Some(j) => alloc::format!("{},{}", j.refs, j.rule),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderedProof {
    pub rows: Vec<Row>,
}

impl RenderedProof {
    pub fn goal_count(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Goal).count()
    }
}
